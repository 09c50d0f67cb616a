//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test --test acceptance` (optimized test profile).

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use horospherical::counting::{count_difference, count_sl2z, horosphere_lift_count, LatticeConfig};
use horospherical::domain::{DomainSpec, Interval, KRegion, PsiBox};
use horospherical::gcd::{for_each_primitive_z2, shortest_solution_z, PrimitiveVectorZ};
use horospherical::iwasawa::{compose, decompose, decompose_so1n_numeric, GroupSpec, KElement};
use horospherical::linalg::{max_abs_entry, max_entry_error};
use horospherical::lorentz::{enumerate_lorentz, reduce_mod_parity, to_f64, LorentzSolution};
use horospherical::perturb::{check_conjugation, contrast_scan, random_bounded_element, t_scan, ScanConfig};
use horospherical::quadratic::{for_each_primitive_od, nu_d_cdf, shortest_solution_od, AlgebraicInt, ImagQuadRing};
use horospherical::stats::{ks_statistic, rate_fit, shell_sample_od, shell_sample_z, Quantity, Shell, SignFilter, Target};
use num_integer::Integer;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn full_domain(t: f64, s: f64) -> DomainSpec {
    DomainSpec::new(PsiBox(vec![Interval::unit_centered()]), KRegion::Full, t, s).unwrap()
}

fn strictly_decreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] < w[0])
}

fn fmt_list(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| format!("{x:.5}")).collect();
    format!("[{}]", parts.join(", "))
}

fn brute_primitive_count(r: i64) -> u64 {
    let mut n = 0;
    for a in -r..=r {
        for b in -r..=r {
            let q = a * a + b * b;
            if q >= 1 && q <= r * r && a.gcd(&b) == 1 {
                n += 1;
            }
        }
    }
    n
}

fn c1_oracle_counts() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    for r in [10i64, 50, 200] {
        let rep = count_sl2z(&full_domain(2.0 * (r as f64).ln(), 0.0), &LatticeConfig::sl2z()).map_err(err)?;
        let brute = brute_primitive_count(r);
        if rep.observed != brute {
            return Err(format!("R={r}: counted {} but brute force gives {brute}", rep.observed));
        }
        parts.push(format!("R={r}:{brute}"));
    }
    let dt = start.elapsed();
    check(dt < Duration::from_secs(5), format!("{} in {dt:.2?}", parts.join(" ")))
}

fn c2_main_term() -> Outcome {
    let domain = full_domain(2.0 * 2000f64.ln(), 0.0);
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().map_err(err)?;
    let start = Instant::now();
    let rep = single.install(|| count_sl2z(&domain, &LatticeConfig::sl2z())).map_err(err)?;
    let t1 = start.elapsed();
    let eight = rayon::ThreadPoolBuilder::new().num_threads(8).build().map_err(err)?;
    let start = Instant::now();
    let again = eight.install(|| count_sl2z(&domain, &LatticeConfig::sl2z())).map_err(err)?;
    let t8 = start.elapsed();
    let ratio = rep.observed as f64 / rep.main_term.ok_or("no main term")?;
    let density = rep.observed as f64 / (PI * 2000.0 * 2000.0);
    check(
        (0.97..=1.03).contains(&ratio)
            && again.observed == rep.observed
            && t1 < Duration::from_secs(120)
            && t8 < Duration::from_secs(30),
        format!(
            "observed {} ratio {ratio:.6} density {density:.6} (1/zeta(2) = {:.6}); 1 thread {t1:.2?}, 8 threads {t8:.2?}",
            rep.observed,
            6.0 / (PI * PI)
        ),
    )
}

fn c3_sector() -> Outcome {
    let t = 2.0 * 2000f64.ln();
    let cfg = LatticeConfig::sl2z();
    let sector = |psi: &str, arc: KRegion| -> Result<_, String> {
        let d = DomainSpec::new(PsiBox::parse(psi).map_err(err)?, arc, t, 0.0).map_err(err)?;
        count_sl2z(&d, &cfg).map_err(err)
    };
    let q1 = sector("-1/2:1/2", KRegion::arc(0.0, FRAC_PI_2).map_err(err)?)?;
    let ratio = q1.observed as f64 / q1.main_term.ok_or("no main term")?;
    let narrow = sector("0:3/10", KRegion::arc(0.0, FRAC_PI_2).map_err(err)?)?;
    let narrow_ratio = narrow.observed as f64 / narrow.main_term.ok_or("no main term")?;
    let quadrants = [0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2, TAU];
    let mut sum = 0;
    for w in quadrants.windows(2) {
        sum += sector("-1/2:1/2", KRegion::arc(w[0], w[1]).map_err(err)?)?.observed;
    }
    let full = count_sl2z(&full_domain(t, 0.0), &cfg).map_err(err)?.observed;
    check(
        (0.95..=1.05).contains(&ratio) && (0.95..=1.05).contains(&narrow_ratio) && sum == full,
        format!("[0,pi/2) ratio {ratio:.5}, with psi [0,3/10) {narrow_ratio:.5}; quadrants sum {sum} = full {full}"),
    )
}

fn c4_identities() -> Outcome {
    let mut z_checked = 0u64;
    let mut failure = None;
    for_each_primitive_z2(1, 500 * 500, |a, b| {
        let s = shortest_solution_z(PrimitiveVectorZ { a, b }).expect("primitive");
        let (x, y, a, b) = (s.x as i128, s.y as i128, a as i128, b as i128);
        let norm = a * a + b * b;
        let pairing = x * a + y * b;
        let n = Ratio::new(pairing, norm);
        let stored = Ratio::new(*s.n_comp.numer() as i128, *s.n_comp.denom() as i128);
        let ok = x * b - y * a == 1
            && n == stored
            && Ratio::new(-1, 2) <= n
            && n < Ratio::new(1, 2)
            && (x * x + y * y) * norm == pairing * pairing + 1;
        if !ok && failure.is_none() {
            failure = Some((a, b));
        }
        z_checked += 1;
    });
    if let Some(v) = failure {
        return Err(format!("Z identity fails at v = {v:?}"));
    }

    let ring = ImagQuadRing::new(1).map_err(err)?;
    let windows: Vec<(i64, i64)> = (0..50).map(|i| (i * 50 + 1, (i + 1) * 50)).collect();
    let results: Vec<Result<u64, String>> = windows
        .par_iter()
        .map(|&(lo, hi)| {
            let mut n = 0u64;
            let mut bad = None;
            for_each_primitive_od(&ring, lo, hi, &KRegion::Full, |a, b| {
                n += 1;
                match shortest_solution_od(&ring, a, b) {
                    Ok(s) => {
                        let ok = s.determinant(&ring) == AlgebraicInt::new(1, 0)
                            && s.n_coords.in_fundamental_rectangle()
                            && s.w_norm_sq(&ring) as i128 * s.norm_sq as i128 == ring.norm(s.pairing) as i128 + 1;
                        if !ok {
                            bad.get_or_insert(format!("O_1 identity fails at ({a:?}, {b:?})"));
                        }
                    }
                    Err(e) => {
                        bad.get_or_insert(err(e));
                    }
                }
            });
            bad.map_or(Ok(n), Err)
        })
        .collect();
    let mut od_checked = 0;
    for r in results {
        od_checked += r?;
    }
    Ok(format!("{z_checked} primitive vectors of Z^2 (|v| <= 500), {od_checked} coprime pairs of O_1 (|v| <= 50)"))
}

fn c5_ratio_equidistribution() -> Outcome {
    let shells: Vec<Shell> = [125.0, 250.0, 500.0, 1000.0].iter().map(|&r| Shell::new(r, 2.0 * r).unwrap()).collect();
    let target = Target::Uniform01Half;
    let mut lines = Vec::new();
    let mut ok = true;
    for filter in [SignFilter::All, SignFilter::Positive, SignFilter::Negative] {
        let ks: Vec<f64> = shells
            .par_iter()
            .map(|&s| ks_statistic(&shell_sample_z(s, Quantity::Ratio, filter).values, |x| target.cdf(x)))
            .collect::<Result<_, _>>()
            .map_err(err)?;
        let pts: Vec<(f64, f64)> = shells.iter().map(|s| s.lo).zip(ks.iter().copied()).collect();
        let fit = rate_fit(&pts).map_err(err)?;
        ok &= strictly_decreasing(&ks) && fit.slope <= -0.2;
        lines.push(format!("{filter:?}: ks {} slope {:.3}", fmt_list(&ks), fit.slope));
    }
    check(ok, lines.join("; "))
}

fn c6_nu_d() -> Outcome {
    let cap = KRegion::cap([1.0, 0.3, 0.2, 0.5], 0.1).map_err(err)?;
    let mut lines = Vec::new();
    let mut ok = true;
    for d in [1i64, 3] {
        let ring = ImagQuadRing::new(d).map_err(err)?;
        let target = Target::NuD(d);
        let ks: Vec<f64> = [25.0, 50.0, 100.0]
            .par_iter()
            .map(|&r| {
                let s = shell_sample_od(&ring, Shell::new(r, 2.0 * r)?, &cap)?;
                ks_statistic(&s.values, |x| target.cdf(x))
            })
            .collect::<Result<_, _>>()
            .map_err(err)?;

        let n = 10_000_000usize;
        let parts = 16;
        let mut radii: Vec<f64> = (0..parts as u64)
            .into_par_iter()
            .flat_map_iter(|stream| {
                let mut rng = ChaCha8Rng::seed_from_u64(2024);
                rng.set_stream(stream);
                let h = ring.half_height;
                (0..n / parts)
                    .map(move |_| {
                        let x: f64 = rng.random_range(-0.5..0.5);
                        let y: f64 = rng.random_range(-h..h);
                        x.hypot(y)
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        radii.sort_by(f64::total_cmp);
        let sup = ks_statistic(&radii, |r| nu_d_cdf(&ring, r)).map_err(err)?;
        ok &= strictly_decreasing(&ks) && sup <= 1e-3;
        lines.push(format!("d={d}: ks {} monte carlo sup {sup:.2e}", fmt_list(&ks)));
    }
    check(ok, lines.join("; "))
}

fn c7_round_trip() -> Outcome {
    let specs = [GroupSpec::sl2r(), GroupSpec::sl2c(), GroupSpec::so1n(2).unwrap(), GroupSpec::so1n(3).unwrap()];
    let mut lines = Vec::new();
    let mut ok = true;
    for spec in specs {
        let per: Vec<Result<(f64, f64), String>> = (0..8u64)
            .into_par_iter()
            .map(|stream| {
                let mut rng = ChaCha8Rng::seed_from_u64(7);
                rng.set_stream(stream);
                let (mut worst, mut worst_cf) = (0.0f64, 0.0f64);
                for _ in 0..10_000 / 8 {
                    let g = random_bounded_element(spec, &mut rng);
                    let c = decompose(&g).map_err(err)?;
                    let back = compose(&c, spec).map_err(err)?;
                    let scale = max_abs_entry(g.entries()).max(1.0);
                    worst = worst.max(max_entry_error(back.entries(), g.entries()) / scale);
                    if spec.name().starts_with("so") {
                        let (v, t) = decompose_so1n_numeric(&g).map_err(err)?;
                        let dv = v.iter().zip(&c.v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                        worst_cf = worst_cf.max(dv).max((t - c.t).abs());
                    }
                }
                Ok((worst, worst_cf))
            })
            .collect();
        let (mut worst, mut worst_cf) = (0.0f64, 0.0f64);
        for p in per {
            let (w, c) = p?;
            worst = worst.max(w);
            worst_cf = worst_cf.max(c);
        }
        ok &= worst <= 1e-10 && worst_cf <= 1e-10;
        if spec.name().starts_with("so") {
            lines.push(format!("{}: {worst:.1e} (closed form vs numeric {worst_cf:.1e})", spec.name()));
        } else {
            lines.push(format!("{}: {worst:.1e}", spec.name()));
        }
    }
    check(ok, format!("max residual over 10^4 elements each: {}", lines.join(", ")))
}

fn c8_lorentz() -> Outcome {
    let listed: Vec<Vec<i64>> = enumerate_lorentz(2, 50).map_err(err)?.map(|s| s.x).collect();
    let mut brute = Vec::new();
    for x0 in 1i64..=50 {
        for x1 in -50i64..=50 {
            for x2 in -50i64..=50 {
                if x0 * x0 - x1 * x1 - x2 * x2 == 1 {
                    brute.push(vec![x0, x1, x2]);
                }
            }
        }
    }
    if listed != brute {
        return Err(format!("enumeration to 50 lists {} solutions, brute force {}", listed.len(), brute.len()));
    }

    let x0_max = 5000;
    let sols: Vec<LorentzSolution> = enumerate_lorentz(2, x0_max).map_err(err)?.collect();
    let mut reps: Vec<(i64, f64)> = Vec::new();
    for s in &sols {
        let (_, v) = s.height_and_v().map_err(err)?;
        let r = to_f64(&reduce_mod_parity(&v, 2).map_err(err)?)[0];
        if !(-1.0..=1.0).contains(&r) {
            return Err(format!("reduced v = {r} outside [-1, 1] for {:?}", s.x));
        }
        let v = to_f64(&v)[0];
        if (-1.0..1.0).contains(&v) {
            reps.push((s.height_denominator(), v));
        }
    }
    let target = Target::UniformInterval(-1.0, 1.0);
    let mut ks = Vec::new();
    let mut counts = Vec::new();
    for lo in [312.5, 625.0, 1250.0, 2500.0] {
        let mut vals: Vec<f64> = reps.iter().filter(|(d, _)| (*d as f64) > lo && (*d as f64) <= 2.0 * lo).map(|p| p.1).collect();
        vals.sort_by(f64::total_cmp);
        counts.push(vals.len());
        ks.push(ks_statistic(&vals, |x| target.cdf(x)).map_err(err)?);
    }
    check(
        strictly_decreasing(&ks),
        format!(
            "{} solutions to x0 = {x0_max}; windows x0 - x2 in (R, 2R], R = 312.5..2500: sizes {counts:?}, ks {}",
            sols.len(),
            fmt_list(&ks)
        ),
    )
}

fn c9_difference() -> Outcome {
    let t = 2.0 * 1000f64.ln();
    let cfg = LatticeConfig::sl2z();
    let ann = count_difference(&full_domain(t, t / 2.0), &cfg).map_err(err)?;
    let outer = count_sl2z(&full_domain(t, 0.0), &cfg).map_err(err)?;
    let inner = count_sl2z(&full_domain(t / 2.0, 0.0), &cfg).map_err(err)?;
    let ratio = ann.observed as f64 / ann.main_term.ok_or("no main term")?;
    check(
        (0.95..=1.05).contains(&ratio) && ann.observed == outer.observed - inner.observed,
        format!("annulus {} ratio {ratio:.5}; {} - {} = {}", ann.observed, outer.observed, inner.observed, ann.observed),
    )
}

fn c10_perturbation() -> Outcome {
    let cfg = ScanConfig {
        spec: GroupSpec::sl2r(),
        v: vec![0.3],
        k: KElement::angle(PI / 7.0),
        epsilon: 1e-4,
        samples: 10_000,
        seed: 0,
        partitions: 8,
    };
    let grid: Vec<f64> = (0..=10).map(|i| -2.0 * i as f64).collect();
    let scan = t_scan(&cfg, &grid).map_err(err)?;
    let contrast = contrast_scan(&cfg, &[0.0, 1.0, 2.0, 3.0, 4.0, 5.0]).map_err(err)?;
    let c0 = contrast.points[0].constants.c_n;
    let c5 = contrast.points[5].constants.c_n;
    let conj = check_conjugation(GroupSpec::sl2r(), 1e-3, 1000, 0).map_err(err)?;
    check(
        scan.ratio_n <= 5.0 && scan.ratio_a <= 5.0 && scan.ratio_k <= 5.0 && c5 >= 3.0 * c0 && conj.passed,
        format!(
            "t <= 0 spreads n {:.3} a {:.3} k {:.3}; c_n(5)/c_n(0) = {:.1}; conjugation worst {:.6} over {}",
            scan.ratio_n,
            scan.ratio_a,
            scan.ratio_k,
            c5 / c0,
            conj.worst_ratio,
            conj.checked
        ),
    )
}

fn c11_horosphere() -> Outcome {
    let t = 2.0 * 100f64.ln();
    let cfg = LatticeConfig::sl2z();
    let lift = horosphere_lift_count(t, 0.0, &cfg).map_err(err)?;
    let direct = count_sl2z(&full_domain(t, 0.0), &cfg).map_err(err)?;
    check(lift.observed == direct.observed, format!("lifts {} = count {}", lift.observed, direct.observed))
}

fn c12_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(err)?;
    let scan = dir.path().join("scan.csv");
    let runs: Vec<Vec<String>> = vec![
        vec!["gcd-scan".into(), "--rmax".into(), "150".into()],
        vec!["gcd-scan".into(), "--ring".into(), "o3".into(), "--rmax".into(), "8".into()],
        vec!["count".into(), "--T".into(), "0:12:0.5".into()],
        vec!["count".into(), "--lattice".into(), "sl2o2".into(), "--kappa".into(), "0.95".into(), "--T".into(), "1:5:1".into(), "--json".into()],
        vec!["lorentz".into(), "--n".into(), "3".into(), "--x0-max".into(), "60".into()],
        vec!["perturb".into(), "--samples".into(), "2000".into(), "--seed".into(), "11".into(), "--json".into()],
        vec!["perturb".into(), "--group".into(), "so1n:3".into(), "--v".into(), "0.1,0.2".into(), "--t-grid".into(), "0,-3".into(), "--samples".into(), "500".into(), "--seed".into(), "5".into()],
        vec!["stats".into(), "--in".into(), scan.to_string_lossy().into(), "--shells".into(), "geometric:10".into(), "--json".into()],
        vec!["decompose".into(), "--group".into(), "so1n:2".into(), "--json".into(), "3 2 2 2 2 1 2 1 2".into()],
    ];
    let bin = env!("CARGO_BIN_EXE_horospherical");
    let status = Command::new(bin).args(["gcd-scan", "--rmax", "120", "--out"]).arg(&scan).status().map_err(err)?;
    if !status.success() {
        return Err("could not produce the stats input".into());
    }
    let run = |threads: &str, args: &[String], out: &Path| -> Result<Vec<u8>, String> {
        let mut cmd = Command::new(bin);
        cmd.args(["--threads", threads, &args[0]]);
        // decompose reports on standard output
        if args[0] != "decompose" {
            cmd.arg("--out").arg(out);
        }
        let o = cmd.args(&args[1..]).output().map_err(err)?;
        if !o.status.success() {
            return Err(format!("{args:?}: {}", String::from_utf8_lossy(&o.stderr)));
        }
        if args[0] == "decompose" {
            return Ok(o.stdout);
        }
        std::fs::read(out).map_err(err)
    };
    let mut bytes = 0;
    for (i, args) in runs.iter().enumerate() {
        let (a, b) = (dir.path().join(format!("{i}a")), dir.path().join(format!("{i}b")));
        let first = run("1", args, &a)?;
        let second = run("4", args, &b)?;
        if first != second || first.is_empty() {
            return Err(format!("{args:?} differs between runs"));
        }
        bytes += first.len();
    }
    Ok(format!("{} commands byte-identical across repeated runs at 1 and 4 threads ({bytes} bytes)", runs.len()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("oracle count equivalence", c1_oracle_counts),
        ("main-term constant", c2_main_term),
        ("sector counting", c3_sector),
        ("exact identities", c4_identities),
        ("ratio equidistribution", c5_ratio_equidistribution),
        ("nu_d comparison", c6_nu_d),
        ("decomposition round-trip", c7_round_trip),
        ("Lorentz pipeline", c8_lorentz),
        ("difference domains", c9_difference),
        ("t-uniformity of Iwasawa constants", c10_perturbation),
        ("horosphere lift count", c11_horosphere),
        ("determinism", c12_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let dt = start.elapsed();
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {tag} {name}: {detail} [{dt:.1?}]", i + 1);
    }
    println!("acceptance: {} of 12 passed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
