//! Primitive vectors of Z^2 and the shortest solutions of their gcd equation.

use num_integer::Integer;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{direction_angle, KRegion};
use crate::error::{Error, Result};
use crate::iwasawa::{GroupElement, GroupSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimitiveVectorZ {
    pub a: i64,
    pub b: i64,
}

impl PrimitiveVectorZ {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        if a.gcd(&b) != 1 {
            return Err(Error::NotPrimitive(format!("{a}, {b}")));
        }
        Ok(PrimitiveVectorZ { a, b })
    }

    pub fn norm_sq(&self) -> i64 {
        self.a * self.a + self.b * self.b
    }

    pub fn norm(&self) -> f64 {
        (self.norm_sq() as f64).sqrt()
    }

    /// Direction of `(a, b)` in `[0, 2 pi)`.
    pub fn angle(&self) -> f64 {
        direction_angle(self.a, self.b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
    Boundary,
}

impl Sign {
    pub fn as_str(&self) -> &'static str {
        match self {
            Sign::Positive => "positive",
            Sign::Negative => "negative",
            Sign::Boundary => "boundary",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShortestSolutionZ {
    pub v: PrimitiveVectorZ,
    pub x: i64,
    pub y: i64,
    /// `<w, v> / |v|^2`, reduced, in `[-1/2, 1/2)`.
    pub n_comp: Ratio<i64>,
    pub ratio: f64,
    /// Angle from `w` to `v`, anticlockwise, in `(0, pi)`.
    pub theta_v: f64,
    /// `Positive` iff `n_comp >= 0`.
    pub sign: Sign,
}

impl ShortestSolutionZ {
    /// `<w, v>` as an integer.
    pub fn pairing(&self) -> i64 {
        self.x * self.v.a + self.y * self.v.b
    }

    pub fn w_norm_sq(&self) -> i64 {
        self.x * self.x + self.y * self.y
    }

    /// Like `sign`, but reports `Boundary` for `n_comp = 0`.
    pub fn tag(&self) -> Sign {
        if *self.n_comp.numer() == 0 {
            Sign::Boundary
        } else {
            self.sign
        }
    }

    /// Angle of `w` measured in `[0, 2 pi)`.
    pub fn w_angle(&self) -> f64 {
        direction_angle(self.x, self.y)
    }
}

/// `(g, s, t)` with `a s + b t = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// The solution of `b x - a y = 1` whose N-component lies in `[-1/2, 1/2)`.
pub fn shortest_solution_z(v: PrimitiveVectorZ) -> Result<ShortestSolutionZ> {
    let (g, s, t) = ext_gcd(v.a, v.b);
    if g != 1 {
        return Err(Error::NotPrimitive(format!("{}, {}", v.a, v.b)));
    }
    // a s + b t = 1  =>  (x, y) = (t, -s) solves b x - a y = 1
    let (x0, y0) = (t as i128, -s as i128);
    let (a, b) = (v.a as i128, v.b as i128);
    let den = a * a + b * b;
    let num = x0 * a + y0 * b;
    // shift by m (a, b) so that num/den + m lands in [-1/2, 1/2)
    let m = -(2 * num + den).div_euclid(2 * den);
    let (x, y) = (x0 + m * a, y0 + m * b);
    let pairing = num + m * den;
    let n_comp = Ratio::new(i64::try_from(pairing).map_err(|_| Error::Overflow)?, den as i64);
    let w_sq = (x * x + y * y) as f64;
    let ratio = (w_sq / den as f64).sqrt();
    let theta_v = 1f64.atan2(pairing as f64);
    let sign = if pairing >= 0 { Sign::Positive } else { Sign::Negative };
    Ok(ShortestSolutionZ { v, x: x as i64, y: y as i64, n_comp, ratio, theta_v, sign })
}

/// `gamma_v = [[x, y], [a, b]]` in SL(2, R).
pub fn gamma_of(sol: &ShortestSolutionZ) -> GroupElement {
    let entries = [sol.x as f64, sol.y as f64, sol.v.a as f64, sol.v.b as f64];
    GroupElement::from_real(GroupSpec::sl2r(), &entries).expect("det = 1 by construction")
}

pub(crate) fn isqrt(n: i64) -> i64 {
    if n <= 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Calls `f(a, b)` for every primitive `(a, b)` with `lo <= a^2 + b^2 <= hi`,
/// row by row in `a`.
pub fn for_each_primitive_z2(lo: i64, hi: i64, mut f: impl FnMut(i64, i64)) {
    let r = isqrt(hi);
    for a in -r..=r {
        visit_row(a, lo, hi, &mut f);
    }
}

#[inline]
fn visit_row(a: i64, lo: i64, hi: i64, f: &mut impl FnMut(i64, i64)) {
    let bmax = isqrt(hi - a * a);
    let inner = lo - a * a;
    let bmin = if inner <= 0 { 0 } else { isqrt(inner - 1) + 1 };
    let abs_a = a.abs();
    for b in bmin..=bmax {
        let candidates: &[i64] = if b == 0 { &[0] } else { &[b, -b] };
        if abs_a.gcd(&b) != 1 {
            continue;
        }
        for &bb in candidates {
            f(a, bb);
        }
    }
}

/// Parallel reduction over primitive vectors in a squared-norm window. Rows
/// are independent, results are summed, so the value is partition-independent.
pub fn sum_over_primitive_z2<F>(lo: i64, hi: i64, f: F) -> i64
where
    F: Fn(i64, i64) -> i64 + Sync,
{
    let r = isqrt(hi);
    (-r..=r)
        .into_par_iter()
        .map(|a| {
            let mut acc = 0i64;
            visit_row(a, lo, hi, &mut |x, y| acc += f(x, y));
            acc
        })
        .sum()
}

/// All primitive vectors with `1 <= |v| <= r_max` and direction in `sector`,
/// ordered by squared norm and then direction angle.
pub fn enumerate_primitive_z2(r_max: f64, sector: &KRegion) -> Result<Vec<PrimitiveVectorZ>> {
    if !(r_max >= 1.0) {
        return Err(Error::InvalidInput(format!("r_max must be >= 1, got {r_max}")));
    }
    let hi = (r_max * r_max + 1e-9 * r_max * r_max).floor() as i64;
    let mut out = Vec::new();
    for_each_primitive_z2(1, hi, |a, b| {
        if sector.contains_angle(direction_angle(a, b)) {
            out.push(PrimitiveVectorZ { a, b });
        }
    });
    out.sort_by(|p, q| p.norm_sq().cmp(&q.norm_sq()).then(p.angle().total_cmp(&q.angle())));
    Ok(out)
}

/// Primitive vectors with squared norm in `[lo, hi]`, as shortest solutions.
pub fn shortest_solutions_in_window(lo: i64, hi: i64) -> Vec<ShortestSolutionZ> {
    let mut out = Vec::new();
    for_each_primitive_z2(lo, hi, |a, b| {
        out.push(shortest_solution_z(PrimitiveVectorZ { a, b }).expect("primitive by construction"));
    });
    out
}
