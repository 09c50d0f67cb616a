//! NAK (Iwasawa) coordinates on SL(2,R), SL(2,C) and SO0(1,n).
//!
//! Conventions:
//! * `N = { n_v }` with `v` in `R^p`; for SL(2,C) the complex upper-right
//!   entry `v0 + i v1` is stored as the pair `(v0, v1)`. `q = 0` throughout,
//!   so the `z` part of `N` is always empty.
//! * `A = { a_t }` parametrized so that `d(a_t o, a_s o) = |t - s|`:
//!   `diag(e^{t/2}, e^{-t/2})` for SL(2) and the hyperbolic rotation in the
//!   `(0, n)` plane for SO0(1,n).
//! * `K` is SO(2) (stored as an angle), SU(2), or SO(n) embedded as the
//!   stabilizer of `e_0`.
//!
//! All matrices are stored as complex; the real groups carry zero imaginary
//! parts.

mod lie;

pub use lie::{ad_matrix, ad_operator_norm, lie_basis, lie_element, lie_coefficients};

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::Mul;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Absolute tolerance for matrix identities, scaled by the squared entry size
/// of the matrix being checked.
pub const MATRIX_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupFamily {
    Sl2R,
    Sl2C,
    So1n,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub family: GroupFamily,
    /// Dimension of the hyperbolic space.
    pub n: usize,
    pub p: usize,
    pub q: usize,
    /// Exponent `2 rho = p + 2q` of the Haar density `dt / e^{2 rho t}`.
    pub two_rho: f64,
}

impl GroupSpec {
    pub fn sl2r() -> Self {
        GroupSpec { family: GroupFamily::Sl2R, n: 2, p: 1, q: 0, two_rho: 1.0 }
    }

    pub fn sl2c() -> Self {
        GroupSpec { family: GroupFamily::Sl2C, n: 3, p: 2, q: 0, two_rho: 2.0 }
    }

    pub fn so1n(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::UnsupportedDimension(n));
        }
        Ok(GroupSpec { family: GroupFamily::So1n, n, p: n - 1, q: 0, two_rho: (n - 1) as f64 })
    }

    pub fn matrix_size(&self) -> usize {
        match self.family {
            GroupFamily::Sl2R | GroupFamily::Sl2C => 2,
            GroupFamily::So1n => self.n + 1,
        }
    }

    /// Real dimension of the Lie algebra.
    pub fn lie_dim(&self) -> usize {
        match self.family {
            GroupFamily::Sl2R => 3,
            GroupFamily::Sl2C => 6,
            GroupFamily::So1n => self.n * (self.n + 1) / 2,
        }
    }

    pub fn name(&self) -> String {
        match self.family {
            GroupFamily::Sl2R => "sl2r".to_string(),
            GroupFamily::Sl2C => "sl2c".to_string(),
            GroupFamily::So1n => format!("so1n:{}", self.n),
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "sl2r" => Ok(Self::sl2r()),
            "sl2c" => Ok(Self::sl2c()),
            other => {
                let n = other
                    .strip_prefix("so1n:")
                    .and_then(|s| s.parse::<usize>().ok())
                    .ok_or_else(|| Error::InvalidInput(format!("unknown group `{other}`")))?;
                Self::so1n(n)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    spec: GroupSpec,
    entries: CMatrix,
}

impl GroupElement {
    /// Validates the determinant / Lorentz-form invariants before wrapping.
    pub fn new(spec: GroupSpec, entries: CMatrix) -> Result<Self> {
        let size = spec.matrix_size();
        if entries.nrows() != size || entries.ncols() != size {
            return Err(Error::DimensionMismatch { expected: size, got: entries.nrows() });
        }
        let g = GroupElement { spec, entries };
        g.check_invariants()?;
        Ok(g)
    }

    pub fn from_real(spec: GroupSpec, row_major: &[f64]) -> Result<Self> {
        let size = spec.matrix_size();
        if row_major.len() != size * size {
            return Err(Error::DimensionMismatch { expected: size * size, got: row_major.len() });
        }
        Self::new(spec, linalg::from_real(size, size, row_major))
    }

    pub(crate) fn new_unchecked(spec: GroupSpec, entries: CMatrix) -> Self {
        GroupElement { spec, entries }
    }

    pub fn identity(spec: GroupSpec) -> Self {
        Self::new_unchecked(spec, linalg::identity(spec.matrix_size()))
    }

    pub fn spec(&self) -> GroupSpec {
        self.spec
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    fn re(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)].re
    }

    /// Residual of the defining identity, relative to `max(1, |g|_max)^2`.
    pub fn invariant_residual(&self) -> f64 {
        let scale = linalg::max_abs_entry(&self.entries).max(1.0).powi(2);
        let imag = match self.spec.family {
            GroupFamily::Sl2C => 0.0,
            _ => self.entries.iter().map(|c| c.im.abs()).fold(0.0, f64::max),
        };
        let defect = match self.spec.family {
            GroupFamily::Sl2R | GroupFamily::Sl2C => {
                let e = &self.entries;
                (e[(0, 0)] * e[(1, 1)] - e[(0, 1)] * e[(1, 0)] - Complex64::new(1.0, 0.0)).norm()
            }
            GroupFamily::So1n => {
                let j = lorentz_form(self.spec.n);
                let gt = self.entries.transpose();
                linalg::max_entry_error(&(&gt * &j * &self.entries), &j)
            }
        };
        defect.max(imag) / scale
    }

    pub fn check_invariants(&self) -> Result<()> {
        let residual = self.invariant_residual();
        if !(residual <= MATRIX_TOL) {
            return Err(Error::InvariantViolation(format!(
                "{} defect {residual:.3e} exceeds {MATRIX_TOL:e}",
                self.spec.name()
            )));
        }
        if self.spec.family == GroupFamily::So1n && self.re(0, 0) <= 0.0 {
            return Err(Error::InvariantViolation("g00 <= 0: not in the identity component".into()));
        }
        Ok(())
    }

    /// Exact inverse: adjugate for SL(2), `J g^T J` for SO0(1,n).
    pub fn inverse(&self) -> GroupElement {
        let e = &self.entries;
        let inv = match self.spec.family {
            GroupFamily::Sl2R | GroupFamily::Sl2C => {
                CMatrix::from_row_slice(2, 2, &[e[(1, 1)], -e[(0, 1)], -e[(1, 0)], e[(0, 0)]])
            }
            GroupFamily::So1n => {
                let j = lorentz_form(self.spec.n);
                &j * e.transpose() * &j
            }
        };
        Self::new_unchecked(self.spec, inv)
    }
}

impl Mul for &GroupElement {
    type Output = GroupElement;

    fn mul(self, rhs: &GroupElement) -> GroupElement {
        assert_eq!(self.spec, rhs.spec, "multiplying elements of different groups");
        GroupElement::new_unchecked(self.spec, &self.entries * &rhs.entries)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.spec.name(), self.entries)
    }
}

fn lorentz_form(n: usize) -> CMatrix {
    let mut j = linalg::identity(n + 1).scale(-1.0);
    j[(0, 0)] = Complex64::new(1.0, 0.0);
    j
}

#[derive(Debug, Clone, PartialEq)]
pub enum KElement {
    /// SO(2) rotation `[[cos, -sin], [sin, cos]]`, angle in `[0, 2 pi)`.
    Angle(f64),
    /// SU(2) matrix `[[conj b, -conj a], [a, b]]`.
    Unitary(CMatrix),
    /// SO(n), acting on coordinates `1..=n`.
    Orthogonal(DMatrix<f64>),
}

impl KElement {
    pub fn identity(spec: GroupSpec) -> Self {
        match spec.family {
            GroupFamily::Sl2R => KElement::Angle(0.0),
            GroupFamily::Sl2C => KElement::Unitary(linalg::identity(2)),
            GroupFamily::So1n => KElement::Orthogonal(DMatrix::identity(spec.n, spec.n)),
        }
    }

    pub fn angle(theta: f64) -> Self {
        KElement::Angle(reduce_angle(theta))
    }

    /// Full-size group matrix of this element.
    pub fn to_matrix(&self) -> CMatrix {
        match self {
            KElement::Angle(theta) => {
                let (s, c) = theta.sin_cos();
                linalg::from_real(2, 2, &[c, -s, s, c])
            }
            KElement::Unitary(u) => u.clone(),
            KElement::Orthogonal(r) => {
                let n = r.nrows();
                let mut m = linalg::identity(n + 1);
                for i in 0..n {
                    for j in 0..n {
                        m[(i + 1, j + 1)] = Complex64::new(r[(i, j)], 0.0);
                    }
                }
                m
            }
        }
    }

    fn matches(&self, spec: GroupSpec) -> bool {
        match (self, spec.family) {
            (KElement::Angle(_), GroupFamily::Sl2R) => true,
            (KElement::Unitary(u), GroupFamily::Sl2C) => u.nrows() == 2 && u.ncols() == 2,
            (KElement::Orthogonal(r), GroupFamily::So1n) => r.nrows() == spec.n && r.ncols() == spec.n,
            _ => false,
        }
    }

    /// Riemannian distance for the Frobenius metric: `|log(k^{-1} k')|_F`.
    pub fn distance(&self, other: &KElement) -> Result<f64> {
        if let (KElement::Angle(a), KElement::Angle(b)) = (self, other) {
            let mut d = (b - a).rem_euclid(TAU);
            if d > PI {
                d = TAU - d;
            }
            return Ok(std::f64::consts::SQRT_2 * d);
        }
        let a = self.to_matrix();
        let b = other.to_matrix();
        let rel = a.adjoint() * b;
        Ok(linalg::frobenius_norm(&linalg::logm(&rel)?))
    }
}

pub fn reduce_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IwasawaCoords {
    pub v: Vec<f64>,
    pub z: Vec<f64>,
    pub t: f64,
    pub k: KElement,
}

impl IwasawaCoords {
    pub fn identity(spec: GroupSpec) -> Self {
        IwasawaCoords { v: vec![0.0; spec.p], z: Vec::new(), t: 0.0, k: KElement::identity(spec) }
    }

    pub fn new(v: Vec<f64>, t: f64, k: KElement) -> Self {
        IwasawaCoords { v, z: Vec::new(), t, k }
    }
}

/// The unipotent element `n_v`.
pub fn n_matrix(spec: GroupSpec, v: &[f64]) -> CMatrix {
    match spec.family {
        GroupFamily::Sl2R => linalg::from_real(2, 2, &[1.0, v[0], 0.0, 1.0]),
        GroupFamily::Sl2C => {
            let one = Complex64::new(1.0, 0.0);
            let zero = Complex64::new(0.0, 0.0);
            CMatrix::from_row_slice(2, 2, &[one, Complex64::new(v[0], v[1]), zero, one])
        }
        GroupFamily::So1n => {
            let n = spec.n;
            let half_sq = 0.5 * v.iter().map(|x| x * x).sum::<f64>();
            let mut m = linalg::identity(n + 1);
            let set = |m: &mut CMatrix, i: usize, j: usize, x: f64| m[(i, j)] = Complex64::new(x, 0.0);
            set(&mut m, 0, 0, 1.0 + half_sq);
            set(&mut m, 0, n, -half_sq);
            set(&mut m, n, 0, half_sq);
            set(&mut m, n, n, 1.0 - half_sq);
            for (i, &vi) in v.iter().enumerate() {
                set(&mut m, 0, i + 1, vi);
                set(&mut m, n, i + 1, vi);
                set(&mut m, i + 1, 0, vi);
                set(&mut m, i + 1, n, -vi);
            }
            m
        }
    }
}

/// The geodesic element `a_t`.
pub fn a_matrix(spec: GroupSpec, t: f64) -> CMatrix {
    match spec.family {
        GroupFamily::Sl2R | GroupFamily::Sl2C => {
            linalg::from_real(2, 2, &[(t / 2.0).exp(), 0.0, 0.0, (-t / 2.0).exp()])
        }
        GroupFamily::So1n => {
            let n = spec.n;
            let mut m = linalg::identity(n + 1);
            let (ch, sh) = (t.cosh(), t.sinh());
            m[(0, 0)] = Complex64::new(ch, 0.0);
            m[(0, n)] = Complex64::new(sh, 0.0);
            m[(n, 0)] = Complex64::new(sh, 0.0);
            m[(n, n)] = Complex64::new(ch, 0.0);
            m
        }
    }
}

/// `n_v a_t k` as a group element.
pub fn compose(coords: &IwasawaCoords, spec: GroupSpec) -> Result<GroupElement> {
    if coords.v.len() != spec.p {
        return Err(Error::DimensionMismatch { expected: spec.p, got: coords.v.len() });
    }
    if coords.z.len() != spec.q {
        return Err(Error::DimensionMismatch { expected: spec.q, got: coords.z.len() });
    }
    if !coords.k.matches(spec) {
        return Err(Error::ConfigMismatch(format!("K element does not belong to {}", spec.name())));
    }
    let m = n_matrix(spec, &coords.v) * a_matrix(spec, coords.t) * coords.k.to_matrix();
    Ok(GroupElement::new_unchecked(spec, m))
}

/// Closed-form NAK decomposition.
///
/// For SL(2) with bottom row `v` and top row `w`: `t = -2 ln |v|`, the N-part is
/// `<w, v> / |v|^2` (Hermitian pairing over C) and the K-part is
/// `[[conj b, -conj a], [a, b]] / |v|`. For SO0(1,n) the N and A parts depend
/// only on the first column: `e^t = 1 / (g00 - gn0)`, `v = (g10..g(n-1)0) e^t`,
/// and `k = (n_v a_t)^{-1} g`.
pub fn decompose(g: &GroupElement) -> Result<IwasawaCoords> {
    let spec = g.spec;
    let e = &g.entries;
    match spec.family {
        GroupFamily::Sl2R => {
            let (x, y, a, b) = (e[(0, 0)].re, e[(0, 1)].re, e[(1, 0)].re, e[(1, 1)].re);
            let r2 = a * a + b * b;
            if !(r2 > 0.0) {
                return Err(Error::DegenerateDecomposition("zero bottom row".into()));
            }
            Ok(IwasawaCoords::new(vec![(x * a + y * b) / r2], -r2.ln(), KElement::angle(a.atan2(b))))
        }
        GroupFamily::Sl2C => {
            let (xi, eta, alpha, beta) = (e[(0, 0)], e[(0, 1)], e[(1, 0)], e[(1, 1)]);
            let r2 = alpha.norm_sqr() + beta.norm_sqr();
            if !(r2 > 0.0) {
                return Err(Error::DegenerateDecomposition("zero bottom row".into()));
            }
            let z = (xi * alpha.conj() + eta * beta.conj()) / r2;
            let r = r2.sqrt();
            let k = CMatrix::from_row_slice(
                2,
                2,
                &[beta.conj() / r, -alpha.conj() / r, alpha / r, beta / r],
            );
            Ok(IwasawaCoords::new(vec![z.re, z.im], -r2.ln(), KElement::Unitary(k)))
        }
        GroupFamily::So1n => {
            let n = spec.n;
            let diff = e[(0, 0)].re - e[(n, 0)].re;
            if !(diff > 0.0) {
                return Err(Error::DegenerateDecomposition(format!("g00 - gn0 = {diff} <= 0")));
            }
            let v: Vec<f64> = (1..n).map(|i| e[(i, 0)].re / diff).collect();
            let t = -diff.ln();
            let k = orthogonal_part(spec, &v, t, e);
            Ok(IwasawaCoords::new(v, t, KElement::Orthogonal(k)))
        }
    }
}

fn orthogonal_part(spec: GroupSpec, v: &[f64], t: f64, g: &CMatrix) -> DMatrix<f64> {
    let neg_v: Vec<f64> = v.iter().map(|x| -x).collect();
    let full = a_matrix(spec, -t) * n_matrix(spec, &neg_v) * g;
    let n = spec.n;
    DMatrix::from_fn(n, n, |i, j| full[(i + 1, j + 1)].re)
}

/// KAN coordinates: the NAK coordinates of `g^{-1}`.
pub fn kan_coords(g: &GroupElement) -> Result<IwasawaCoords> {
    decompose(&g.inverse())
}

/// Haar volume of `Psi A_[-T,-S] Phi`: `mu_N mu_K (e^{2 rho T} - e^{2 rho S}) / (2 rho)`.
pub fn haar_volume(spec: GroupSpec, mu_n_psi: f64, mu_k_phi: f64, t: f64, s: f64) -> Result<f64> {
    if !(s >= 0.0 && s <= t) {
        return Err(Error::InvalidInterval { s, t });
    }
    if !(mu_n_psi > 0.0 && mu_k_phi > 0.0) {
        return Err(Error::InvalidInput("N- and K-measures must be positive".into()));
    }
    let r = spec.two_rho;
    Ok(mu_n_psi * mu_k_phi * ((r * t).exp() - (r * s).exp()) / r)
}

/// Independent numerical route to the N and A parts of an SO0(1,n) element:
/// damped Gauss-Newton on `n_v a_t e_0 = g e_0` using products of the
/// generator matrices only. Reference for the closed form in [`decompose`].
pub fn decompose_so1n_numeric(g: &GroupElement) -> Result<(Vec<f64>, f64)> {
    let spec = g.spec;
    if spec.family != GroupFamily::So1n {
        return Err(Error::ConfigMismatch("numeric route implemented for SO0(1,n) only".into()));
    }
    let n = spec.n;
    let target: Vec<f64> = (0..=n).map(|i| g.entries[(i, 0)].re).collect();
    let scale = target.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let orbit = |params: &[f64]| -> Vec<f64> {
        let m = n_matrix(spec, &params[..n - 1]) * a_matrix(spec, params[n - 1]);
        (0..=n).map(|i| m[(i, 0)].re).collect()
    };
    let residual = |params: &[f64]| -> Vec<f64> {
        orbit(params).iter().zip(&target).map(|(a, b)| (a - b) / scale).collect()
    };
    let sq = |r: &[f64]| r.iter().map(|x| x * x).sum::<f64>();

    let mut params = vec![0.0; n];
    let mut r = residual(&params);
    for _ in 0..500 {
        let cost = sq(&r);
        if cost.sqrt() < 1e-16 {
            break;
        }
        let mut jac = DMatrix::<f64>::zeros(n + 1, n);
        for j in 0..n {
            let h = 1e-6 * params[j].abs().max(1.0);
            let mut up = params.clone();
            let mut dn = params.clone();
            up[j] += h;
            dn[j] -= h;
            let (ru, rd) = (residual(&up), residual(&dn));
            for i in 0..=n {
                jac[(i, j)] = (ru[i] - rd[i]) / (2.0 * h);
            }
        }
        let rhs = nalgebra::DVector::from_iterator(n + 1, r.iter().map(|x| -x));
        let step = jac
            .clone()
            .svd(true, true)
            .solve(&rhs, 1e-14)
            .map_err(|e| Error::DegenerateDecomposition(e.to_string()))?;
        let mut lambda = 1.0;
        let mut accepted = false;
        while lambda > 1e-8 {
            let trial: Vec<f64> = params.iter().zip(step.iter()).map(|(p, s)| p + lambda * s).collect();
            let rt = residual(&trial);
            if sq(&rt) < cost {
                params = trial;
                r = rt;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    let t = params[n - 1];
    params.truncate(n - 1);
    Ok((params, t))
}
