//! Empirical distributions of enumeration streams: Kolmogorov-Smirnov and
//! dyadic discrepancies against target laws, Lipschitz test sums, and
//! log-log decay fits over geometric shells.

use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::domain::{q_to_f64, KRegion, PsiBox};
use crate::error::{Error, Result};
use crate::gcd::{for_each_primitive_z2, shortest_solution_z, PrimitiveVectorZ, Sign};
use crate::quadratic::{for_each_primitive_od, nu_d_cdf, shortest_solution_od, ImagQuadRing};

/// Depth of the dyadic grids.
pub const DYADIC_DEPTH: u32 = 10;

/// Radial shell `(lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Shell {
    pub lo: f64,
    pub hi: f64,
}

impl Shell {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::InvalidInput(format!("bad shell ({lo}, {hi}]")));
        }
        Ok(Shell { lo, hi })
    }

    /// Integer squared-norm window `[lo, hi]` equivalent to `lo < |v| <= hi`.
    pub fn norm_sq_window(&self) -> (i64, i64) {
        (snap_floor(self.lo * self.lo) + 1, snap_floor(self.hi * self.hi))
    }
}

fn snap_floor(x: f64) -> i64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.max(1.0) {
        r as i64
    } else {
        x.floor() as i64
    }
}

/// Shells `(R, 2R], (2R, 4R], ...` covering radii up to `r_max`.
pub fn geometric_shells(r0: f64, r_max: f64) -> Result<Vec<Shell>> {
    if !(r0 > 0.0 && r_max > r0) {
        return Err(Error::InvalidInput(format!("geometric shells need 0 < r0 < r_max, got {r0}, {r_max}")));
    }
    let mut out = Vec::new();
    let mut lo = r0;
    while lo < r_max {
        out.push(Shell::new(lo, 2.0 * lo)?);
        lo *= 2.0;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShellSample {
    pub shell: Shell,
    pub values: Vec<f64>,
}

impl ShellSample {
    pub fn new(shell: Shell, values: Vec<f64>) -> Self {
        ShellSample { shell, values }
    }

    pub fn count(&self) -> usize {
        self.values.len()
    }

    /// Concatenates and sorts, so the merged sample does not depend on the
    /// order of the parts.
    pub fn merge(mut self, other: ShellSample) -> ShellSample {
        self.values.extend(other.values);
        self.values.sort_by(f64::total_cmp);
        self
    }
}

/// Target law of a one-dimensional sample, or of a box sample for
/// [`star_discrepancy_2d`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Target {
    /// Uniform on `[0, 1/2]`.
    Uniform01Half,
    UniformInterval(f64, f64),
    /// Push-forward of the uniform law on the fundamental rectangle of `O_d`
    /// under `z -> |z|`.
    NuD(i64),
    /// Uniform direction on the full circle `[0, 2 pi)`.
    UniformArc,
    /// Geodesic distance to the center of a uniform point of a cap of radius
    /// `r` in `S^3`.
    UniformCapS3(f64),
    /// Uniform on the unit square, coordinates already normalized.
    UniformBox,
}

impl Target {
    pub fn cdf(&self, x: f64) -> f64 {
        let clamp = |u: f64| u.clamp(0.0, 1.0);
        match *self {
            Target::Uniform01Half => clamp(2.0 * x),
            Target::UniformInterval(a, b) => clamp((x - a) / (b - a)),
            Target::NuD(d) => match ImagQuadRing::new(d) {
                Ok(ring) => clamp(nu_d_cdf(&ring, x)),
                Err(_) => f64::NAN,
            },
            Target::UniformArc => clamp(x / TAU),
            Target::UniformCapS3(r) => {
                let m = |s: f64| 2.0 * s - (2.0 * s).sin();
                clamp(m(x.clamp(0.0, r)) / m(r))
            }
            Target::UniformBox => clamp(x),
        }
    }

    /// `uniform:a:b`, `half`, `nu:d`, `arc`, `cap:r` or `box`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("bad target `{s}`"));
        let parts: Vec<&str> = s.split(':').collect();
        let num = |x: &str| x.trim().parse::<f64>().map_err(|_| bad());
        let t = match parts.as_slice() {
            ["half"] => Target::Uniform01Half,
            ["uniform", a, b] => {
                let (a, b) = (num(a)?, num(b)?);
                if !(a < b) {
                    return Err(bad());
                }
                Target::UniformInterval(a, b)
            }
            ["nu", d] => {
                let d = d.trim().parse::<i64>().map_err(|_| bad())?;
                ImagQuadRing::new(d)?;
                Target::NuD(d)
            }
            ["arc"] => Target::UniformArc,
            ["cap", r] => {
                let r = num(r)?;
                if !(r > 0.0 && r <= PI) {
                    return Err(bad());
                }
                Target::UniformCapS3(r)
            }
            ["box"] => Target::UniformBox,
            _ => return Err(bad()),
        };
        Ok(t)
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Uniform01Half => write!(f, "half"),
            Target::UniformInterval(a, b) => write!(f, "uniform:{a}:{b}"),
            Target::NuD(d) => write!(f, "nu:{d}"),
            Target::UniformArc => write!(f, "arc"),
            Target::UniformCapS3(r) => write!(f, "cap:{r}"),
            Target::UniformBox => write!(f, "box"),
        }
    }
}

fn sorted(values: &[f64]) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    if values.iter().any(|x| x.is_nan()) {
        return Err(Error::InvalidInput("NaN in sample".into()));
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Sup-distance between the empirical CDF of `values` and `cdf`, checking
/// both one-sided gaps at every sample point.
pub fn ks_statistic(values: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    let v = sorted(values)?;
    let n = v.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in v.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    Ok(d.clamp(0.0, 1.0))
}

/// Star discrepancy over the anchored dyadic grid `[0, k / 2^depth)` after
/// mapping the sample through the target CDF.
pub fn star_discrepancy(values: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    let bins = 1usize << DYADIC_DEPTH;
    let mut hist = vec![0u64; bins];
    for &x in values {
        let u = cdf(x);
        hist[((u * bins as f64) as usize).min(bins - 1)] += 1;
    }
    let n = values.len() as f64;
    let mut acc = 0u64;
    let mut d: f64 = 0.0;
    for (k, h) in hist.iter().enumerate() {
        acc += h;
        d = d.max((acc as f64 / n - (k + 1) as f64 / bins as f64).abs());
    }
    Ok(d.min(1.0))
}

/// Star discrepancy of points in `[0, 1)^2` over anchored dyadic boxes.
pub fn star_discrepancy_2d(points: &[[f64; 2]]) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::EmptySample);
    }
    let bins = 1usize << DYADIC_DEPTH;
    let idx = |u: f64| ((u.clamp(0.0, 1.0) * bins as f64) as usize).min(bins - 1);
    let mut grid = vec![0u64; bins * bins];
    for p in points {
        grid[idx(p[0]) * bins + idx(p[1])] += 1;
    }
    // in-place 2-D prefix sums
    for i in 0..bins {
        for j in 1..bins {
            grid[i * bins + j] += grid[i * bins + j - 1];
        }
    }
    for i in 1..bins {
        for j in 0..bins {
            grid[i * bins + j] += grid[(i - 1) * bins + j];
        }
    }
    let n = points.len() as f64;
    let mut d: f64 = 0.0;
    for i in 0..bins {
        for j in 0..bins {
            let area = ((i + 1) * (j + 1)) as f64 / (bins * bins) as f64;
            d = d.max((grid[i * bins + j] as f64 / n - area).abs());
        }
    }
    Ok(d.min(1.0))
}

/// Largest deviation `|fraction in arc - |arc| / |theta||` over all dyadic
/// sub-arcs of `theta` down to depth 10.
pub fn angular_discrepancy(angles: &[f64], theta: &KRegion) -> Result<f64> {
    if angles.is_empty() {
        return Err(Error::EmptySample);
    }
    let (start, len) = match *theta {
        KRegion::Full => (0.0, TAU),
        KRegion::Arc { start, .. } => (start, theta.measure(1)),
        KRegion::Cap { .. } => return Err(Error::ConfigMismatch("angular discrepancy needs an arc".into())),
    };
    let bins = 1usize << DYADIC_DEPTH;
    let mut hist = vec![0u64; bins];
    for &a in angles {
        if !(0.0..TAU).contains(&a) || !theta.contains_angle(a) {
            return Err(Error::InvalidInput(format!("angle {a} outside the arc")));
        }
        let u = (a - start).rem_euclid(TAU) / len;
        hist[((u * bins as f64) as usize).min(bins - 1)] += 1;
    }
    let n = angles.len() as f64;
    let mut d: f64 = 0.0;
    let mut level = hist;
    loop {
        let width = 1.0 / level.len() as f64;
        for &c in &level {
            d = d.max((c as f64 / n - width).abs());
        }
        if level.len() == 1 {
            break;
        }
        level = level.chunks(2).map(|p| p[0] + p[1]).collect();
    }
    Ok(d)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub shell: Shell,
    pub count: usize,
    pub ks: f64,
    pub star_disc: f64,
    pub target: Target,
}

pub fn discrepancy_report(sample: &ShellSample, target: Target) -> Result<DiscrepancyReport> {
    if target == Target::UniformBox {
        return Err(Error::ConfigMismatch("box targets take two-dimensional samples".into()));
    }
    let cdf = |x| target.cdf(x);
    Ok(DiscrepancyReport {
        shell: sample.shell,
        count: sample.count(),
        ks: ks_statistic(&sample.values, cdf)?,
        star_disc: star_discrepancy(&sample.values, cdf)?,
        target,
    })
}

/// Least-squares line through `(ln scale, ln deviation)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

pub fn rate_fit(points: &[(f64, f64)]) -> Result<RateFit> {
    if points.len() < 3 {
        return Err(Error::InvalidInput(format!("rate fit needs at least 3 points, got {}", points.len())));
    }
    if points.iter().any(|&(s, d)| !(s > 0.0 && d > 0.0)) {
        return Err(Error::InvalidInput("rate fit needs positive scales and deviations".into()));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= 1e-24 * mx.abs().max(1.0) {
        return Err(Error::DegenerateFit("all scales coincide".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let r2 = if ss_tot <= 1e-30 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(RateFit { slope, intercept, r2 })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LipschitzReport {
    pub count: usize,
    pub lipschitz: f64,
    pub weighted_mean: f64,
    pub reference_integral: f64,
    pub deviation: f64,
}

/// Compares `(1 / #points) sum f(p)` with the normalized integral of `f` over
/// `psi`. `lipschitz` is the stated constant of `f`, carried into the report.
pub fn lipschitz_sum(points: &[Vec<f64>], f: impl Fn(&[f64]) -> f64, lipschitz: f64, psi: &PsiBox) -> Result<LipschitzReport> {
    if points.is_empty() {
        return Err(Error::EmptySample);
    }
    let dim = psi.dim();
    if let Some(p) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, got: p.len() });
    }
    let lo: Vec<f64> = psi.0.iter().map(|i| q_to_f64(&i.lo)).collect();
    let len: Vec<f64> = psi.0.iter().map(|i| q_to_f64(&i.length())).collect();
    // integrate over the unit cube so the normalization is exact
    let g = |u: &[f64]| {
        let x: Vec<f64> = u.iter().zip(&lo).zip(&len).map(|((u, l), w)| l + u * w).collect();
        f(&x)
    };
    let reference_integral = integrate_cube(&g, dim, 1e-8)?;
    let weighted_mean = points.iter().map(|p| f(p)).sum::<f64>() / points.len() as f64;
    Ok(LipschitzReport {
        count: points.len(),
        lipschitz,
        weighted_mean,
        reference_integral,
        deviation: (weighted_mean - reference_integral).abs(),
    })
}

fn integrate_cube(f: &dyn Fn(&[f64]) -> f64, dim: usize, tol: f64) -> Result<f64> {
    let mut prefix = Vec::with_capacity(dim);
    nested(f, dim, tol, &mut prefix)
}

fn nested(f: &dyn Fn(&[f64]) -> f64, dim: usize, tol: f64, prefix: &mut Vec<f64>) -> Result<f64> {
    if prefix.len() == dim {
        return Ok(f(prefix));
    }
    let mut err = None;
    let mut h = |x: f64| -> f64 {
        prefix.push(x);
        let r = nested(f, dim, tol, prefix);
        prefix.pop();
        match r {
            Ok(v) => v,
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        }
    };
    let v = adaptive_simpson(&mut h, 0.0, 1.0, tol)?;
    match err {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

/// Adaptive Simpson quadrature with Richardson correction.
pub fn adaptive_simpson(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (fa + 4.0 * fm + fb) * (b - a) / 6.0;
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> Result<f64> {
    let m = 0.5 * (a + b);
    let (flm, frm) = (f(0.5 * (a + m)), f(0.5 * (m + b)));
    let left = (fa + 4.0 * flm + fm) * (m - a) / 6.0;
    let right = (fm + 4.0 * frm + fb) * (b - m) / 6.0;
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 || !delta.is_finite() {
        return Err(Error::QuadratureFailure { lo: a, hi: b });
    }
    Ok(simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
}

/// Quantity recorded per primitive vector of the SL(2,Z) pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quantity {
    /// `|w_v| / |v|`.
    Ratio,
    /// Direction of `v` in `[0, 2 pi)`.
    Angle,
    /// `<w_v, v> / |v|^2`.
    NComp,
    /// Signed angle from `v` to `w_v`, wrapped into `(-pi, pi]`.
    AngleGap,
}

impl Quantity {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "ratio" => Ok(Quantity::Ratio),
            "angle" => Ok(Quantity::Angle),
            "ncomp" => Ok(Quantity::NComp),
            "angle-gap" => Ok(Quantity::AngleGap),
            _ => Err(Error::InvalidInput(format!("unknown quantity `{s}`"))),
        }
    }
}

/// Which sign classes to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignFilter {
    All,
    Positive,
    Negative,
}

impl SignFilter {
    fn keeps(&self, s: Sign) -> bool {
        match self {
            SignFilter::All => true,
            SignFilter::Positive => s == Sign::Positive,
            SignFilter::Negative => s == Sign::Negative,
        }
    }
}

/// SL(2,Z) shell sample. Each value comes from the exact shortest solution
/// and is rounded once; the values are sorted.
pub fn shell_sample_z(shell: Shell, quantity: Quantity, filter: SignFilter) -> ShellSample {
    let (lo, hi) = shell.norm_sq_window();
    let mut values = Vec::new();
    if hi >= lo {
        for_each_primitive_z2(lo, hi, |a, b| {
            let s = shortest_solution_z(PrimitiveVectorZ { a, b }).expect("primitive by construction");
            if !filter.keeps(s.tag()) {
                return;
            }
            values.push(match quantity {
                Quantity::Ratio => s.ratio,
                Quantity::Angle => s.v.angle(),
                Quantity::NComp => *s.n_comp.numer() as f64 / *s.n_comp.denom() as f64,
                Quantity::AngleGap => {
                    let g = (s.w_angle() - s.v.angle()).rem_euclid(TAU);
                    if g > PI {
                        g - TAU
                    } else {
                        g
                    }
                }
            });
        });
    }
    values.sort_by(f64::total_cmp);
    ShellSample::new(shell, values)
}

/// Ratios `|w_v| / |v|` over coprime pairs of `O_d` in a shell, restricted to
/// directions in `cap`.
pub fn shell_sample_od(ring: &ImagQuadRing, shell: Shell, cap: &KRegion) -> Result<ShellSample> {
    let (lo, hi) = shell.norm_sq_window();
    let mut values = Vec::new();
    if hi >= lo {
        let mut failure = None;
        for_each_primitive_od(ring, lo, hi, cap, |a, b| match shortest_solution_od(ring, a, b) {
            Ok(s) => values.push(s.ratio),
            Err(e) => {
                failure.get_or_insert(e);
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
    }
    values.sort_by(f64::total_cmp);
    Ok(ShellSample::new(shell, values))
}
