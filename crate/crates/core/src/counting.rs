//! Lattice-point counts in `Psi A_[-T,-S] Phi` for SL(2,Z) and SL(2,O_d),
//! compared with the Haar-volume main term.

use std::f64::consts::PI;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::domain::{snapped_floor_exp, DomainSpec, Interval, KRegion, PsiBox, Q};
use crate::error::{Error, Result};
use crate::gcd::{shortest_solution_z, sum_over_primitive_z2, PrimitiveVectorZ};
use crate::quadratic::{for_each_primitive_od, shortest_solution_od, ImagQuadRing, RectCoords};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Lattice {
    Sl2Z,
    Sl2Od(i64),
    So1nZ(usize),
}

impl Lattice {
    pub fn two_rho(&self) -> f64 {
        match self {
            Lattice::Sl2Z => 1.0,
            Lattice::Sl2Od(_) => 2.0,
            Lattice::So1nZ(n) => (*n - 1) as f64,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Lattice::Sl2Z => "sl2z".into(),
            Lattice::Sl2Od(d) => format!("sl2o{d}"),
            Lattice::So1nZ(n) => format!("so1{n}z"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeConfig {
    pub lattice: Lattice,
    pub kappa: f64,
    /// `mu(G / Gamma)` in the fixed Haar normalization; `None` runs in density mode.
    pub covolume: Option<f64>,
    /// Constant `C` of the shape-only error bound `C T e^{2 rho kappa T}`.
    pub error_constant: f64,
}

impl LatticeConfig {
    pub fn new(lattice: Lattice, kappa: f64, covolume: Option<f64>) -> Result<Self> {
        if !(kappa > 0.0 && kappa < 1.0) {
            return Err(Error::InvalidInput(format!("kappa must lie in (0, 1), got {kappa}")));
        }
        if let Some(c) = covolume {
            if !(c > 0.0) {
                return Err(Error::InvalidInput(format!("covolume must be positive, got {c}")));
            }
        }
        if let Lattice::Sl2Od(d) = lattice {
            ImagQuadRing::new(d)?;
        }
        Ok(LatticeConfig { lattice, kappa, covolume, error_constant: 1.0 })
    }

    /// `kappa = 7/8`, covolume `pi^2 / 3`.
    pub fn sl2z() -> Self {
        LatticeConfig { lattice: Lattice::Sl2Z, kappa: 7.0 / 8.0, covolume: Some(PI * PI / 3.0), error_constant: 1.0 }
    }

    /// Total K-mass: `2 pi` for SO(2), `2 pi^2` for SU(2).
    pub fn mu_k_total(&self) -> f64 {
        match self.lattice {
            Lattice::Sl2Z => KRegion::Full.measure(1),
            _ => KRegion::Full.measure(3),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub lattice: String,
    pub psi: String,
    pub phi: String,
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "S")]
    pub s: f64,
    pub observed: u64,
    /// `None` in density mode (no covolume configured).
    pub main_term: Option<f64>,
    /// `observed / main_term - 1`; `None` when the main term vanishes or is absent.
    pub relative_dev: Option<f64>,
    pub kappa: f64,
    /// `C T e^{2 rho kappa T}`; shape only, the true constant is not explicit.
    pub error_bound_shape: f64,
    /// `observed / (e^{2 rho T} - e^{2 rho S})`.
    pub density: f64,
}

impl CountReport {
    fn build(config: &LatticeConfig, domain: &DomainSpec, observed: u64, volume: f64) -> Self {
        let r = config.lattice.two_rho();
        let main_term = config.covolume.map(|c| volume / c);
        let relative_dev = main_term.filter(|m| *m > 0.0).map(|m| observed as f64 / m - 1.0);
        let growth = (r * domain.t).exp() - (r * domain.s).exp();
        CountReport {
            lattice: config.lattice.name(),
            psi: domain.psi.to_string(),
            phi: domain.phi.to_string(),
            t: domain.t,
            s: domain.s,
            observed,
            main_term,
            relative_dev,
            kappa: config.kappa,
            error_bound_shape: config.error_constant * domain.t * (r * config.kappa * domain.t).exp(),
            density: if growth > 0.0 { observed as f64 / growth } else { 0.0 },
        }
    }

    /// True when `S = T`, so the main term vanishes.
    pub fn is_degenerate(&self) -> bool {
        self.t == self.s
    }
}

fn haar(two_rho: f64, mu_n: f64, mu_k: f64, t: f64, s: f64) -> f64 {
    mu_n * mu_k * ((two_rho * t).exp() - (two_rho * s).exp()) / two_rho
}

fn q64(r: &Ratio<i64>) -> Q {
    Q::new(*r.numer() as i128, *r.denom() as i128)
}

/// Count of `gamma in SL(2,Z)` with `pi_N in psi`, direction of the bottom row
/// in `phi`, and `|v|^2 in (e^S, e^T]` (closed at 1 when `S = 0`).
pub fn count_sl2z(domain: &DomainSpec, config: &LatticeConfig) -> Result<CountReport> {
    if config.lattice != Lattice::Sl2Z {
        return Err(Error::ConfigMismatch(format!("count_sl2z called with {}", config.lattice.name())));
    }
    if domain.psi.dim() != 1 {
        return Err(Error::ConfigMismatch("SL(2,Z) needs a one-dimensional psi".into()));
    }
    if matches!(domain.phi, KRegion::Cap { .. }) {
        return Err(Error::ConfigMismatch("caps live in SU(2); use an arc".into()));
    }
    let interval = &domain.psi.0[0];
    let (lo, hi) = domain.norm_sq_window();
    let observed = if hi < lo { 0 } else { count_z_window(interval, &domain.phi, lo, hi) };
    let mu_n = crate::domain::q_to_f64(&interval.length());
    let volume = haar(1.0, mu_n, domain.phi.measure(1), domain.t, domain.s);
    Ok(CountReport::build(config, domain, observed, volume))
}

fn count_z_window(interval: &Interval, phi: &KRegion, lo: i64, hi: i64) -> u64 {
    let len = interval.length();
    // an interval of integer length L holds exactly L translates of any point
    let fixed = if len.is_integer() { Some(len.to_integer() as i64) } else { None };
    let full = matches!(phi, KRegion::Full);
    let total = sum_over_primitive_z2(lo, hi, |a, b| {
        if !full && !phi.contains_angle(crate::domain::direction_angle(a, b)) {
            return 0;
        }
        match fixed {
            Some(l) => l,
            None => {
                let s = shortest_solution_z(PrimitiveVectorZ { a, b }).expect("primitive by construction");
                interval.translates(&q64(&s.n_comp))
            }
        }
    });
    total as u64
}

/// Translates of `n` by `O_d` landing in a box given in `(Re, Im / Im omega)`
/// coordinates.
pub fn od_translates(ring: &ImagQuadRing, psi: &PsiBox, n: &RectCoords) -> i64 {
    let (ix, iy) = (&psi.0[0], &psi.0[1]);
    let (x, y) = (q64(&n.re), q64(&n.im));
    let m2_lo = (iy.lo - y).ceil().to_integer();
    let m2_hi = (iy.hi - y).ceil().to_integer();
    let half_tr = Q::new(ring.trace as i128, 2);
    (m2_lo..m2_hi).map(|m2| ix.translates(&(x + half_tr * Q::from_integer(m2)))).sum()
}

/// SL(2, O_d) analogue of [`count_sl2z`]: `psi` is a box in
/// `(Re, Im / Im omega)` coordinates and `phi` a cap of `S^3`.
pub fn count_sl2od(ring: &ImagQuadRing, domain: &DomainSpec, config: &LatticeConfig) -> Result<CountReport> {
    if config.lattice != Lattice::Sl2Od(ring.d) {
        return Err(Error::ConfigMismatch(format!("count_sl2od(d={}) called with {}", ring.d, config.lattice.name())));
    }
    if domain.psi.dim() != 2 {
        return Err(Error::ConfigMismatch("SL(2,O_d) needs a two-dimensional psi".into()));
    }
    if matches!(domain.phi, KRegion::Arc { .. }) {
        return Err(Error::ConfigMismatch("arcs live in SO(2); use a cap".into()));
    }
    let (lo, hi) = domain.norm_sq_window();
    let mut observed = 0i64;
    if hi >= lo {
        for_each_primitive_od(ring, lo, hi, &domain.phi, |a, b| {
            let s = shortest_solution_od(ring, a, b).expect("primitive by construction");
            observed += od_translates(ring, &domain.psi, &s.n_coords);
        });
    }
    let mu_n = crate::domain::q_to_f64(&domain.psi.coordinate_volume()) * ring.omega.im;
    let volume = haar(2.0, mu_n, domain.phi.measure(3), domain.t, domain.s);
    Ok(CountReport::build(config, domain, observed as u64, volume))
}

/// Difference domain `Psi A_[-T,-S] Phi` with `0 < S <= T`.
pub fn count_difference(domain: &DomainSpec, config: &LatticeConfig) -> Result<CountReport> {
    if !(domain.s > 0.0 && domain.s <= domain.t) {
        return Err(Error::InvalidInterval { s: domain.s, t: domain.t });
    }
    match config.lattice {
        Lattice::Sl2Z => count_sl2z(domain, config),
        Lattice::Sl2Od(d) => count_sl2od(&ImagQuadRing::new(d)?, domain, config),
        Lattice::So1nZ(_) => Err(Error::ConfigMismatch("SO(1,n)(Z) counts go through the Lorentz tools".into())),
    }
}

fn snapped_ceil_exp(x: f64) -> i64 {
    let e = x.exp();
    let r = e.round();
    if (e - r).abs() <= 1e-9 * e.max(1.0) {
        r as i64
    } else {
        e.ceil() as i64
    }
}

/// Number of translates `gamma H` of the horosphere `H = N a_y i` meeting the
/// ball of radius `T` about `i`. Through the KAN coordinates of `gamma` (the
/// NAK coordinates of `gamma^{-1}`) this counts primitive bottom rows `v` of
/// `gamma^{-1}` with `e^{-T-y} <= |v|^2 <= e^{T-y}`.
pub fn horosphere_lift_count(t: f64, y: f64, config: &LatticeConfig) -> Result<CountReport> {
    if config.lattice != Lattice::Sl2Z {
        return Err(Error::ConfigMismatch("horosphere lifts are implemented for SL(2,Z)".into()));
    }
    if !(t >= 0.0 && t.is_finite() && y.is_finite()) {
        return Err(Error::InvalidInterval { s: -t, t });
    }
    let lo = snapped_ceil_exp(-t - y).max(1);
    let hi = snapped_floor_exp(t - y);
    let observed = if hi < lo { 0 } else { sum_over_primitive_z2(lo, hi, |_, _| 1) as u64 };
    let domain = DomainSpec { psi: PsiBox(vec![Interval::unit_centered()]), phi: KRegion::Full, t, s: 0.0 };
    let volume = (-y).exp() * haar(1.0, 1.0, config.mu_k_total(), t, f64::NEG_INFINITY);
    Ok(CountReport::build(config, &domain, observed, volume))
}

/// `kappa = 1 - 1 / (2 m (1 + dim G))`.
pub fn error_exponent(m_gamma: u32, dim_g: u32) -> Result<f64> {
    if m_gamma < 1 || dim_g < 3 {
        return Err(Error::InvalidInput(format!("need m >= 1 and dim >= 3, got m = {m_gamma}, dim = {dim_g}")));
    }
    Ok(1.0 - 1.0 / (2.0 * m_gamma as f64 * (1.0 + dim_g as f64)))
}
