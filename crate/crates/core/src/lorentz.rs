//! Integral points on the hyperboloid `x0^2 - x1^2 - ... - xn^2 = 1` and their
//! horospherical coordinates, with reduction modulo the parity lattice
//! `{ x in Z^{n-1} : sum x_i even }`.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::domain::{q_to_f64, Q};
use crate::error::{Error, Result};
use crate::gcd::isqrt;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LorentzSolution {
    /// `(x0, ..., xn)`.
    pub x: Vec<i64>,
}

impl LorentzSolution {
    pub fn new(x: Vec<i64>) -> Result<Self> {
        if x.len() < 3 {
            return Err(Error::UnsupportedDimension(x.len().saturating_sub(1)));
        }
        let s = LorentzSolution { x };
        if s.form() != 1 || s.x[0] < 1 {
            return Err(Error::InvalidInput(format!("{:?} is not on the upper sheet", s.x)));
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.x.len() - 1
    }

    /// `x0^2 - x1^2 - ... - xn^2`, in 128-bit.
    pub fn form(&self) -> i128 {
        let sq = |v: i64| (v as i128) * (v as i128);
        sq(self.x[0]) - self.x[1..].iter().map(|&v| sq(v)).sum::<i128>()
    }

    /// `x0 - xn`; positive on the upper sheet since `x0^2 > xn^2`.
    pub fn height_denominator(&self) -> i64 {
        self.x[0] - self.x[self.n()]
    }

    /// `h = ln(1 / (x0 - xn))` and `v = (x1, ..., x_{n-1}) / (x0 - xn)`.
    pub fn height_and_v(&self) -> Result<(f64, Vec<Q>)> {
        extract_hv(self)
    }

    /// The `z` expression of the closed-form extraction, evaluated in floating
    /// point. It vanishes identically on the hyperboloid.
    pub fn z_comp(&self) -> Result<f64> {
        let d = self.height_denominator();
        if d <= 0 {
            return Err(Error::HeightUndefined(d));
        }
        let (d, p) = (d as f64, (self.x[0] + self.x[self.n()]) as f64);
        let mid: f64 = self.x[1..self.n()].iter().map(|&v| (v as f64) * (v as f64)).sum();
        Ok(0.5 * (p / d - (1.0 + mid) / (d * d)))
    }
}

pub fn extract_hv(sol: &LorentzSolution) -> Result<(f64, Vec<Q>)> {
    let d = sol.height_denominator();
    if d <= 0 {
        return Err(Error::HeightUndefined(d));
    }
    let v = sol.x[1..sol.n()].iter().map(|&xi| Q::new(xi as i128, d as i128)).collect();
    // `0.0 - ln d` keeps h = +0 at d = 1
    Ok((0.0 - (d as f64).ln(), v))
}

/// Solutions with the given `x0`, in lexicographic order of `(x1, ..., xn)`.
pub fn solutions_with_x0(n: usize, x0: i64) -> Vec<LorentzSolution> {
    let mut out = Vec::new();
    let mut prefix = vec![x0];
    sum_of_squares(n, x0 * x0 - 1, &mut prefix, &mut out);
    out
}

fn sum_of_squares(k: usize, target: i64, prefix: &mut Vec<i64>, out: &mut Vec<LorentzSolution>) {
    if k == 1 {
        let r = isqrt(target);
        if r * r == target {
            for last in if r == 0 { vec![0] } else { vec![-r, r] } {
                let mut x = prefix.clone();
                x.push(last);
                out.push(LorentzSolution { x });
            }
        }
        return;
    }
    let r = isqrt(target);
    for xi in -r..=r {
        prefix.push(xi);
        sum_of_squares(k - 1, target - xi * xi, prefix, out);
        prefix.pop();
    }
}

/// All solutions with `1 <= x0 <= x0_max`, ordered by `x0` then
/// lexicographically.
pub fn enumerate_lorentz(n: usize, x0_max: i64) -> Result<impl Iterator<Item = LorentzSolution>> {
    if !(2..=4).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    if x0_max < 1 {
        return Err(Error::InvalidInput(format!("x0_max must be >= 1, got {x0_max}")));
    }
    Ok((1..=x0_max).flat_map(move |x0| solutions_with_x0(n, x0)))
}

/// `Lambda = { x in Z^m : sum x_i even }`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityLattice {
    /// Hyperbolic dimension; the lattice lives in `Z^{n-1}`.
    pub n: usize,
}

impl ParityLattice {
    pub fn contains(&self, x: &[Q]) -> bool {
        x.len() == self.n - 1
            && x.iter().all(|q| q.is_integer())
            && x.iter().map(|q| q.to_integer()).sum::<i128>().rem_euclid(2) == 0
    }
}

/// `sum |x_i| <= 1`.
pub fn in_psi0(v: &[Q]) -> bool {
    v.iter().fold(Q::zero(), |acc, q| acc + q.abs()) <= Q::from_integer(1)
}

fn norm_sq(v: &[Q]) -> Q {
    v.iter().fold(Q::zero(), |acc, q| acc + q * q)
}

/// The shortest representative of `v + Lambda` (ties broken towards the
/// lexicographically smallest vector). For `n <= 3` it lies in the unit
/// `l1` ball; for `n = 4` the Voronoi cell of `Lambda` is the rhombic
/// dodecahedron `|x_i| + |x_j| <= 1` and the representative can leave it.
pub fn reduce_mod_parity(v: &[Q], n: usize) -> Result<Vec<Q>> {
    if !(2..=5).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    if v.len() != n - 1 {
        return Err(Error::DimensionMismatch { expected: n - 1, got: v.len() });
    }
    let m = v.len();
    let base: Vec<i128> = v.iter().map(|q| q.round().to_integer()).collect();
    let mut best: Option<(Q, Vec<Q>)> = None;
    for code in 0..3usize.pow(m as u32) {
        let mut c = code;
        let lambda: Vec<i128> = base
            .iter()
            .map(|&b| {
                let delta = (c % 3) as i128 - 1;
                c /= 3;
                b + delta
            })
            .collect();
        if lambda.iter().sum::<i128>().rem_euclid(2) != 0 {
            continue;
        }
        let rep: Vec<Q> = v.iter().zip(&lambda).map(|(q, &l)| q - Q::from_integer(l)).collect();
        let len = norm_sq(&rep);
        let better = match &best {
            None => true,
            Some((bl, br)) => len < *bl || (len == *bl && rep < *br),
        };
        if better {
            best = Some((len, rep));
        }
    }
    Ok(best.expect("some parity class is always present").1)
}

/// Floating-point view of a rational vector.
pub fn to_f64(v: &[Q]) -> Vec<f64> {
    v.iter().map(q_to_f64).collect()
}
