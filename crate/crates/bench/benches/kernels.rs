use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use horospherical::counting::{count_sl2z, LatticeConfig};
use horospherical::domain::{DomainSpec, Interval, KRegion, PsiBox};
use horospherical::gcd::{shortest_solution_z, shortest_solutions_in_window, PrimitiveVectorZ};
use horospherical::iwasawa::{decompose, GroupSpec};
use horospherical::perturb::random_bounded_element;
use horospherical::quadratic::{for_each_primitive_od, ImagQuadRing};
use horospherical::stats::{shell_sample_z, Quantity, Shell, SignFilter};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn enumeration(c: &mut Criterion) {
    c.bench_function("shortest solution z", |b| {
        b.iter(|| shortest_solution_z(black_box(PrimitiveVectorZ { a: 1_234_567, b: 7_654_321 })))
    });
    c.bench_function("shortest solutions |v| <= 200", |b| b.iter(|| shortest_solutions_in_window(1, black_box(40_000))));
    c.bench_function("z shell (250, 500] ratios", |b| {
        let shell = Shell::new(250.0, 500.0).unwrap();
        b.iter(|| shell_sample_z(black_box(shell), Quantity::Ratio, SignFilter::All))
    });
    let ring = ImagQuadRing::new(1).unwrap();
    c.bench_function("gaussian pairs |v| <= 10", |b| {
        b.iter(|| {
            let mut n = 0u64;
            for_each_primitive_od(&ring, 1, black_box(100), &KRegion::Full, |_, _| n += 1);
            n
        })
    });
}

fn counting(c: &mut Criterion) {
    let cfg = LatticeConfig::sl2z();
    let full = DomainSpec::new(PsiBox(vec![Interval::unit_centered()]), KRegion::Full, 2.0 * 500f64.ln(), 0.0).unwrap();
    c.bench_function("count sl2z radius 500", |b| b.iter(|| count_sl2z(black_box(&full), &cfg)));
    let psi = PsiBox(vec![Interval::parse("0:3/10").unwrap()]);
    let sector = DomainSpec::new(psi, KRegion::arc(0.0, 1.5).unwrap(), full.t, 0.0).unwrap();
    c.bench_function("count sl2z sector radius 500", |b| b.iter(|| count_sl2z(black_box(&sector), &cfg)));
}

fn decomposition(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for spec in [GroupSpec::sl2r(), GroupSpec::sl2c(), GroupSpec::so1n(3).unwrap()] {
        let g = random_bounded_element(spec, &mut rng);
        c.bench_function(&format!("decompose {}", spec.name()), |b| b.iter(|| decompose(black_box(&g))));
    }
}

criterion_group!(benches, enumeration, counting, decomposition);
criterion_main!(benches);
