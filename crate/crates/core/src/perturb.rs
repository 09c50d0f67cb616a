//! Two-sided perturbations `u g w` with `u, w in exp(B_eps)` and the resulting
//! displacements of Iwasawa coordinates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::iwasawa::{ad_operator_norm, lie_element};
use crate::iwasawa::{compose, decompose, GroupElement, GroupSpec, IwasawaCoords, KElement};
use crate::linalg;

/// Largest admissible `eps` for a probe.
pub const MAX_EPSILON: f64 = 0.1;
/// Default `eps` for scans.
pub const DEFAULT_EPSILON: f64 = 1e-4;
/// Default number of RNG streams a sample loop is split into.
pub const DEFAULT_PARTITIONS: u64 = 8;

/// Coefficients of a uniform point of the unit ball of `R^dim`, by rejection
/// from the cube.
pub fn sample_unit_ball(dim: usize, rng: &mut impl Rng) -> Vec<f64> {
    loop {
        let x: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect();
        if x.iter().map(|c| c * c).sum::<f64>() <= 1.0 {
            return x;
        }
    }
}

/// `exp(X)` for `X` uniform in the `eps`-ball of the Lie algebra.
pub fn sample_ball(spec: GroupSpec, epsilon: f64, rng: &mut impl Rng) -> GroupElement {
    let x = sample_unit_ball(spec.lie_dim(), rng);
    exp_lie(spec, &x, epsilon)
}

fn exp_lie(spec: GroupSpec, unit: &[f64], epsilon: f64) -> GroupElement {
    if epsilon <= 0.0 {
        return GroupElement::identity(spec);
    }
    let scaled: Vec<f64> = unit.iter().map(|c| c * epsilon).collect();
    let x = lie_element(spec, &scaled).expect("coefficient count matches the basis");
    GroupElement::new_unchecked(spec, linalg::expm(&x))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationProbe {
    pub spec: GroupSpec,
    pub base: IwasawaCoords,
    pub epsilon: f64,
    pub samples: usize,
    pub seed: u64,
    pub partitions: u64,
}

impl PerturbationProbe {
    pub fn new(spec: GroupSpec, base: IwasawaCoords, epsilon: f64, samples: usize, seed: u64) -> Result<Self> {
        if base.t > 0.0 {
            return Err(Error::InvalidInput(format!("probe base needs t <= 0, got {}", base.t)));
        }
        Self::contrast(spec, base, epsilon, samples, seed)
    }

    /// A probe that allows `t > 0`, outside the range where the constants are
    /// uniform.
    pub fn contrast(spec: GroupSpec, base: IwasawaCoords, epsilon: f64, samples: usize, seed: u64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= MAX_EPSILON) {
            return Err(Error::InvalidInput(format!("epsilon must lie in (0, {MAX_EPSILON}], got {epsilon}")));
        }
        if samples == 0 {
            return Err(Error::EmptySample);
        }
        compose(&base, spec)?;
        Ok(PerturbationProbe { spec, base, epsilon, samples, seed, partitions: DEFAULT_PARTITIONS })
    }
}

/// Maxima over the sample of `|dv| / eps`, `|dt| / eps` and `d_K / eps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantsEstimate {
    pub c_n: f64,
    pub c_a: f64,
    pub c_k: f64,
}

impl ConstantsEstimate {
    const ZERO: ConstantsEstimate = ConstantsEstimate { c_n: 0.0, c_a: 0.0, c_k: 0.0 };

    fn max(self, o: ConstantsEstimate) -> ConstantsEstimate {
        ConstantsEstimate { c_n: self.c_n.max(o.c_n), c_a: self.c_a.max(o.c_a), c_k: self.c_k.max(o.c_k) }
    }
}

fn displacement(base: &IwasawaCoords, moved: &IwasawaCoords) -> Result<(f64, f64, f64)> {
    let dv = base
        .v
        .iter()
        .zip(&moved.v)
        .chain(base.z.iter().zip(&moved.z))
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok((dv, (base.t - moved.t).abs(), base.k.distance(&moved.k)?))
}

/// Partition `i` of `samples` gets its own ChaCha stream, so the result does
/// not depend on scheduling.
fn partition_ranges(samples: usize, partitions: u64) -> Vec<(u64, usize)> {
    let p = partitions.max(1) as usize;
    (0..p)
        .map(|i| (i as u64, samples / p + usize::from(i < samples % p)))
        .filter(|&(_, n)| n > 0)
        .collect()
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn probe_constants(probe: &PerturbationProbe) -> Result<ConstantsEstimate> {
    let spec = probe.spec;
    let g = compose(&probe.base, spec)?;
    let base = decompose(&g)?;
    let eps = probe.epsilon;
    let dim = spec.lie_dim();
    let parts: Vec<Result<ConstantsEstimate>> = partition_ranges(probe.samples, probe.partitions)
        .into_par_iter()
        .map(|(stream, n)| {
            let mut rng = stream_rng(probe.seed, stream);
            let mut acc = ConstantsEstimate::ZERO;
            for _ in 0..n {
                let u = exp_lie(spec, &sample_unit_ball(dim, &mut rng), eps);
                let w = exp_lie(spec, &sample_unit_ball(dim, &mut rng), eps);
                let moved = decompose(&(&(&u * &g) * &w))?;
                let (dv, dt, dk) = displacement(&base, &moved)?;
                acc = acc.max(ConstantsEstimate { c_n: dv / eps, c_a: dt / eps, c_k: dk / eps });
            }
            Ok(acc)
        })
        .collect();
    parts.into_iter().try_fold(ConstantsEstimate::ZERO, |a, p| Ok(a.max(p?)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub t: f64,
    pub constants: ConstantsEstimate,
}

/// Per-`t` estimates and the max/min ratio of each constant over the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TScan {
    pub points: Vec<ScanPoint>,
    pub ratio_n: f64,
    pub ratio_a: f64,
    pub ratio_k: f64,
}

fn spread(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = xs.clone().fold(f64::NEG_INFINITY, f64::max);
    let min = xs.fold(f64::INFINITY, f64::min);
    if max == min {
        1.0
    } else {
        max / min
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub spec: GroupSpec,
    pub v: Vec<f64>,
    pub k: KElement,
    pub epsilon: f64,
    pub samples: usize,
    pub seed: u64,
    pub partitions: u64,
}

fn scan(cfg: &ScanConfig, t_grid: &[f64], contrast: bool) -> Result<TScan> {
    if t_grid.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut points = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let base = IwasawaCoords::new(cfg.v.clone(), t, cfg.k.clone());
        let mut probe = if contrast {
            PerturbationProbe::contrast(cfg.spec, base, cfg.epsilon, cfg.samples, cfg.seed)?
        } else {
            PerturbationProbe::new(cfg.spec, base, cfg.epsilon, cfg.samples, cfg.seed)?
        };
        probe.partitions = cfg.partitions;
        points.push(ScanPoint { t, constants: probe_constants(&probe)? });
    }
    Ok(TScan {
        ratio_n: spread(points.iter().map(|p| p.constants.c_n)),
        ratio_a: spread(points.iter().map(|p| p.constants.c_a)),
        ratio_k: spread(points.iter().map(|p| p.constants.c_k)),
        points,
    })
}

/// Constants at every `t` of a grid in `t <= 0`, all with the same seed.
pub fn t_scan(cfg: &ScanConfig, t_grid: &[f64]) -> Result<TScan> {
    if let Some(t) = t_grid.iter().find(|&&t| t > 0.0) {
        return Err(Error::InvalidInput(format!("t_scan grid must lie in t <= 0, got {t}")));
    }
    scan(cfg, t_grid, false)
}

/// The same scan over an arbitrary grid, typically `t >= 0`, where the
/// N-constant is expected to grow like `e^t`.
pub fn contrast_scan(cfg: &ScanConfig, t_grid: &[f64]) -> Result<TScan> {
    scan(cfg, t_grid, true)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConjugationCheck {
    pub checked: usize,
    /// Largest `|log(g^{-1} u g)| / (eps |Ad g|)` seen.
    pub worst_ratio: f64,
    pub passed: bool,
}

/// Random `g`: product of three exponentials of Lie-algebra elements with
/// coefficients in `[-1, 1]`.
pub fn random_bounded_element(spec: GroupSpec, rng: &mut impl Rng) -> GroupElement {
    let dim = spec.lie_dim();
    let mut g = GroupElement::identity(spec);
    for _ in 0..3 {
        let c: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect();
        g = &g * &exp_lie(spec, &c, 1.0);
    }
    g
}

/// Checks `g^{-1} O_eps g` inside `O_{eps |Ad g|}`, one `u` per `g`, with
/// relative slack `1e-6`.
pub fn check_conjugation(spec: GroupSpec, epsilon: f64, count: usize, seed: u64) -> Result<ConjugationCheck> {
    if !(epsilon > 0.0 && epsilon <= MAX_EPSILON) {
        return Err(Error::InvalidInput(format!("epsilon must lie in (0, {MAX_EPSILON}], got {epsilon}")));
    }
    let mut rng = stream_rng(seed, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let g = random_bounded_element(spec, &mut rng);
        let u = sample_ball(spec, epsilon, &mut rng);
        let conj = &(&g.inverse() * &u) * &g;
        let size = linalg::frobenius_norm(&linalg::logm(conj.entries())?);
        worst = worst.max(size / (epsilon * ad_operator_norm(&g)));
    }
    Ok(ConjugationCheck { checked: count, worst_ratio: worst, passed: worst <= 1.0 + 1e-6 })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearRegime {
    pub grid: Vec<(f64, ConstantsEstimate)>,
    /// Largest `eps` whose constants stay within `tolerance` of those at the
    /// smallest `eps`; `None` if even the second grid point leaves the band.
    pub epsilon_1: Option<f64>,
    pub tolerance: f64,
}

/// Scans `eps` over `grid` (ascending) with a shared seed, so every `eps`
/// sees the same unit directions.
pub fn linear_regime_epsilon(spec: GroupSpec, base: &IwasawaCoords, grid: &[f64], samples: usize, seed: u64, tolerance: f64) -> Result<LinearRegime> {
    if grid.len() < 2 || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("epsilon grid needs at least two ascending values".into()));
    }
    let mut out = Vec::with_capacity(grid.len());
    for &eps in grid {
        let probe = PerturbationProbe::contrast(spec, base.clone(), eps, samples, seed)?;
        out.push((eps, probe_constants(&probe)?));
    }
    let reference = out[0].1;
    let close = |a: f64, b: f64| (a - b).abs() <= tolerance * b.max(f64::MIN_POSITIVE);
    let mut epsilon_1 = None;
    for &(eps, c) in &out[1..] {
        if close(c.c_n, reference.c_n) && close(c.c_a, reference.c_a) && close(c.c_k, reference.c_k) {
            epsilon_1 = Some(eps);
        } else {
            break;
        }
    }
    Ok(LinearRegime { grid: out, epsilon_1, tolerance })
}
