//! Euclidean imaginary quadratic rings `O_d`, primitive pairs in `O_d^2`, and
//! shortest solutions of their gcd equation.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::domain::KRegion;
use crate::error::{Error, Result};

pub const EUCLIDEAN_D: [i64; 5] = [1, 2, 3, 7, 11];

/// `u + w omega`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AlgebraicInt {
    pub u: i64,
    pub w: i64,
}

impl AlgebraicInt {
    pub const ZERO: AlgebraicInt = AlgebraicInt { u: 0, w: 0 };
    pub const ONE: AlgebraicInt = AlgebraicInt { u: 1, w: 0 };

    pub fn new(u: i64, w: i64) -> Self {
        AlgebraicInt { u, w }
    }

    pub fn is_zero(&self) -> bool {
        self.u == 0 && self.w == 0
    }
}

impl Add for AlgebraicInt {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        AlgebraicInt::new(self.u + o.u, self.w + o.w)
    }
}

impl Sub for AlgebraicInt {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        AlgebraicInt::new(self.u - o.u, self.w - o.w)
    }
}

impl Neg for AlgebraicInt {
    type Output = Self;
    fn neg(self) -> Self {
        AlgebraicInt::new(-self.u, -self.w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImagQuadRing {
    pub d: i64,
    pub disc: i64,
    /// `tr(omega)`: 0 or 1.
    pub trace: i64,
    /// `N(omega)`.
    pub omega_norm: i64,
    pub omega: Complex64,
    pub half_height: f64,
    pub rho_d: f64,
}

impl ImagQuadRing {
    pub fn new(d: i64) -> Result<Self> {
        if !EUCLIDEAN_D.contains(&d) {
            return Err(Error::UnsupportedRing(d));
        }
        let sd = (d as f64).sqrt();
        let (disc, trace, omega_norm, omega) = if d % 4 == 3 {
            (-d, 1, (1 + d) / 4, Complex64::new(0.5, sd / 2.0))
        } else {
            (-4 * d, 0, d, Complex64::new(0.0, sd))
        };
        let half_height = (disc.abs() as f64).sqrt() / 4.0;
        Ok(ImagQuadRing { d, disc, trace, omega_norm, omega, half_height, rho_d: (0.25 + half_height * half_height).sqrt() })
    }

    pub fn mul(&self, a: AlgebraicInt, b: AlgebraicInt) -> AlgebraicInt {
        // omega^2 = tr omega - N(omega)
        let ww = a.w * b.w;
        AlgebraicInt::new(a.u * b.u - self.omega_norm * ww, a.u * b.w + a.w * b.u + self.trace * ww)
    }

    pub fn conj(&self, a: AlgebraicInt) -> AlgebraicInt {
        AlgebraicInt::new(a.u + self.trace * a.w, -a.w)
    }

    pub fn norm(&self, a: AlgebraicInt) -> i64 {
        a.u * a.u + self.trace * a.u * a.w + self.omega_norm * a.w * a.w
    }

    pub fn to_complex(&self, a: AlgebraicInt) -> Complex64 {
        Complex64::new(a.u as f64, 0.0) + self.omega * a.w as f64
    }

    /// `(Re, Im)` exactly as `(re, omega coefficient)`; `Im = coeff * Im omega`.
    pub fn real_part(&self, a: AlgebraicInt) -> Ratio<i64> {
        Ratio::new(2 * a.u + self.trace * a.w, 2)
    }

    pub fn units(&self) -> Vec<AlgebraicInt> {
        let mut out = Vec::new();
        for u in -1..=1 {
            for w in -1..=1 {
                let x = AlgebraicInt::new(u, w);
                if self.norm(x) == 1 {
                    out.push(x);
                }
            }
        }
        out
    }

    /// The element `m` with `p / den - m` in the fundamental rectangle,
    /// i.e. both coordinates in `[-1/2, 1/2)`.
    pub fn round_quotient(&self, p: AlgebraicInt, den: i64) -> AlgebraicInt {
        let den = den as i128;
        let (pu, pw) = (p.u as i128, p.w as i128);
        let w = (2 * pw + den).div_euclid(2 * den);
        // Re(p/den - w omega) = (pu + tr (pw - w den)/2) / den
        let re2 = 2 * pu + self.trace as i128 * (pw - w * den);
        let u = (re2 + den).div_euclid(2 * den);
        AlgebraicInt::new(u as i64, w as i64)
    }

    /// Euclidean division: `a = q b + r` with `N(r) < N(b)`.
    pub fn div_rem(&self, a: AlgebraicInt, b: AlgebraicInt) -> (AlgebraicInt, AlgebraicInt) {
        let q = self.round_quotient(self.mul(a, self.conj(b)), self.norm(b));
        (q, a - self.mul(q, b))
    }

    /// `(g, s, t)` with `s a + t b = g`, `g` a gcd.
    pub fn ext_gcd(&self, a: AlgebraicInt, b: AlgebraicInt) -> (AlgebraicInt, AlgebraicInt, AlgebraicInt) {
        let (mut r0, mut r1) = (a, b);
        let (mut s0, mut s1) = (AlgebraicInt::ONE, AlgebraicInt::ZERO);
        let (mut t0, mut t1) = (AlgebraicInt::ZERO, AlgebraicInt::ONE);
        while !r1.is_zero() {
            let (q, r) = self.div_rem(r0, r1);
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s0 - self.mul(q, s1));
            (t0, t1) = (t1, t0 - self.mul(q, t1));
        }
        (r0, s0, t0)
    }

    pub fn is_coprime(&self, a: AlgebraicInt, b: AlgebraicInt) -> bool {
        let (g, _, _) = self.ext_gcd(a, b);
        self.norm(g) == 1
    }

    /// All elements with `N(x) <= bound`, sorted.
    pub fn elements_up_to(&self, bound: i64) -> Vec<AlgebraicInt> {
        let mut out = Vec::new();
        self.for_each_element(bound, |x| out.push(x));
        out.sort();
        out
    }

    fn for_each_element(&self, bound: i64, mut f: impl FnMut(AlgebraicInt)) {
        // N(u + w omega) = (u + tr w / 2)^2 + (d/4 or d) w^2 restricted by Im part
        let im_sq = self.omega.im * self.omega.im;
        let wmax = ((bound as f64) / im_sq).sqrt().floor() as i64 + 1;
        for w in -wmax..=wmax {
            let rest = bound as f64 - im_sq * (w * w) as f64;
            if rest < -1e-9 {
                continue;
            }
            let half = self.trace as f64 * w as f64 / 2.0;
            let r = rest.max(0.0).sqrt();
            let ulo = (-r - half).floor() as i64 - 1;
            let uhi = (r - half).ceil() as i64 + 1;
            for u in ulo..=uhi {
                let x = AlgebraicInt::new(u, w);
                if self.norm(x) <= bound {
                    f(x);
                }
            }
        }
    }

    pub fn name(&self) -> String {
        format!("o{}", self.d)
    }
}

/// Coordinates of a point of `C` in the frame `(1, omega)` with the real axis
/// kept: `(Re z, Im z / Im omega)`, exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RectCoords {
    pub re: Ratio<i64>,
    pub im: Ratio<i64>,
}

impl RectCoords {
    pub fn in_fundamental_rectangle(&self) -> bool {
        let half = Ratio::new(1, 2);
        -half <= self.re && self.re < half && -half <= self.im && self.im < half
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShortestSolutionOd {
    pub alpha: AlgebraicInt,
    pub beta: AlgebraicInt,
    pub xi: AlgebraicInt,
    pub eta: AlgebraicInt,
    /// `<w, v> = xi conj(alpha) + eta conj(beta)`.
    pub pairing: AlgebraicInt,
    /// `|v|^2 = N(alpha) + N(beta)`.
    pub norm_sq: i64,
    pub n_coords: RectCoords,
    pub n_comp: Complex64,
    pub ratio: f64,
    pub s_v: f64,
    pub c_v: Complex64,
}

impl ShortestSolutionOd {
    pub fn w_norm_sq(&self, ring: &ImagQuadRing) -> i64 {
        ring.norm(self.xi) + ring.norm(self.eta)
    }

    pub fn determinant(&self, ring: &ImagQuadRing) -> AlgebraicInt {
        ring.mul(self.xi, self.beta) - ring.mul(self.eta, self.alpha)
    }

    /// `v` as a point of `R^4 = C^2`.
    pub fn v_point(&self, ring: &ImagQuadRing) -> [f64; 4] {
        let (a, b) = (ring.to_complex(self.alpha), ring.to_complex(self.beta));
        [a.re, a.im, b.re, b.im]
    }
}

fn pairing(ring: &ImagQuadRing, xi: AlgebraicInt, eta: AlgebraicInt, alpha: AlgebraicInt, beta: AlgebraicInt) -> AlgebraicInt {
    ring.mul(xi, ring.conj(alpha)) + ring.mul(eta, ring.conj(beta))
}

fn coords_of(ring: &ImagQuadRing, p: AlgebraicInt, den: i64) -> RectCoords {
    RectCoords { re: ring.real_part(p) / den, im: Ratio::new(p.w, den) }
}

fn finish(ring: &ImagQuadRing, alpha: AlgebraicInt, beta: AlgebraicInt, xi: AlgebraicInt, eta: AlgebraicInt) -> ShortestSolutionOd {
    let p = pairing(ring, xi, eta, alpha, beta);
    let den = ring.norm(alpha) + ring.norm(beta);
    let n_coords = coords_of(ring, p, den);
    let pc = ring.to_complex(p);
    let w_sq = (ring.norm(xi) + ring.norm(eta)) as f64;
    let wv = (w_sq * den as f64).sqrt();
    ShortestSolutionOd {
        alpha,
        beta,
        xi,
        eta,
        pairing: p,
        norm_sq: den,
        n_coords,
        n_comp: pc / den as f64,
        ratio: (w_sq / den as f64).sqrt(),
        s_v: 1.0 / wv,
        c_v: pc / wv,
    }
}

/// Solution of `xi beta - eta alpha = 1` whose N-component `<w, v> / |v|^2`
/// lies in the half-open fundamental rectangle.
pub fn shortest_solution_od(ring: &ImagQuadRing, alpha: AlgebraicInt, beta: AlgebraicInt) -> Result<ShortestSolutionOd> {
    let (g, s, t) = ring.ext_gcd(beta, alpha);
    if ring.norm(g) != 1 {
        return Err(Error::NotPrimitive(format!("{alpha:?}, {beta:?}")));
    }
    // s beta + t alpha = g  =>  (s g^-1) beta - (-t g^-1) alpha = 1
    let g_inv = ring.conj(g);
    let (xi0, eta0) = (ring.mul(s, g_inv), -ring.mul(t, g_inv));
    let den = ring.norm(alpha) + ring.norm(beta);
    let m = ring.round_quotient(pairing(ring, xi0, eta0, alpha, beta), den);
    let xi = xi0 - ring.mul(m, alpha);
    let eta = eta0 - ring.mul(m, beta);
    Ok(finish(ring, alpha, beta, xi, eta))
}

/// The Euclidean-shortest solution. Agrees with [`shortest_solution_od`] for
/// `d = 1, 2`; for `d = 3 (mod 4)` the fundamental rectangle is not the
/// Voronoi cell of `O_d` and the two can differ near its corners.
pub fn minimal_solution_od(ring: &ImagQuadRing, alpha: AlgebraicInt, beta: AlgebraicInt) -> Result<ShortestSolutionOd> {
    let base = shortest_solution_od(ring, alpha, beta)?;
    let mut best = base.clone();
    let mut best_norm = base.w_norm_sq(ring);
    for mu in -2..=2 {
        for mw in -2..=2 {
            let m = AlgebraicInt::new(mu, mw);
            let (xi, eta) = (base.xi + ring.mul(m, alpha), base.eta + ring.mul(m, beta));
            let n = ring.norm(xi) + ring.norm(eta);
            if n < best_norm {
                best_norm = n;
                best = finish(ring, alpha, beta, xi, eta);
            }
        }
    }
    Ok(best)
}

/// Primitive pairs with `1 <= N(alpha) + N(beta) <= r_max^2` and direction
/// in `cap`, sorted by squared norm then coefficients.
pub fn enumerate_primitive_od(ring: &ImagQuadRing, r_max: f64, cap: &KRegion) -> Result<Vec<(AlgebraicInt, AlgebraicInt)>> {
    if !(r_max >= 1.0) {
        return Err(Error::InvalidInput(format!("r_max must be >= 1, got {r_max}")));
    }
    let bound = (r_max * r_max * (1.0 + 1e-12)).floor() as i64;
    let mut out = Vec::new();
    for_each_primitive_od(ring, 1, bound, cap, |a, b| out.push((a, b)));
    out.sort_by(|p, q| {
        let np = ring.norm(p.0) + ring.norm(p.1);
        let nq = ring.norm(q.0) + ring.norm(q.1);
        np.cmp(&nq).then_with(|| p.cmp(q))
    });
    Ok(out)
}

/// Per-axis range of `R^4` coordinates of the vectors of norm `<= r` whose
/// direction lies in `region`.
fn coordinate_box(region: &KRegion, r: f64) -> [(f64, f64); 4] {
    match region {
        KRegion::Cap { center, radius } if *radius < PI => {
            let mut out = [(0.0, 0.0); 4];
            for (i, c) in center.iter().enumerate() {
                let phi = c.clamp(-1.0, 1.0).acos();
                let hi = (phi - radius).max(0.0).cos();
                let lo = (phi + radius).min(PI).cos();
                out[i] = (r * lo.min(0.0), r * hi.max(0.0));
            }
            out
        }
        _ => [(-r, r); 4],
    }
}

/// Visits primitive pairs with `lo <= |v|^2 <= hi` in `region`. Not ordered.
pub fn for_each_primitive_od(
    ring: &ImagQuadRing,
    lo: i64,
    hi: i64,
    region: &KRegion,
    mut f: impl FnMut(AlgebraicInt, AlgebraicInt),
) {
    let r = (hi as f64).sqrt();
    let bx = coordinate_box(region, r);
    let slack = 1e-9 * r.max(1.0);
    let inside = |x: f64, (a, b): (f64, f64)| x >= a - slack && x <= b + slack;
    let elems = ring.elements_up_to(hi);
    let pick = |i: usize, j: usize| -> Vec<(AlgebraicInt, Complex64, i64)> {
        elems
            .iter()
            .map(|&x| (x, ring.to_complex(x), ring.norm(x)))
            .filter(|(_, z, _)| inside(z.re, bx[i]) && inside(z.im, bx[j]))
            .collect()
    };
    let alphas = pick(0, 1);
    let mut betas = pick(2, 3);
    betas.sort_by_key(|b| b.2);
    for &(a, za, na) in &alphas {
        let room = hi - na;
        let end = betas.partition_point(|b| b.2 <= room);
        for &(b, zb, nb) in &betas[..end] {
            let n = na + nb;
            if n < lo {
                continue;
            }
            if !region.contains_point([za.re, za.im, zb.re, zb.im], n as f64) {
                continue;
            }
            if ring.is_coprime(a, b) {
                f(a, b);
            }
        }
    }
}

/// `P(|z| <= r)` for `z` uniform in the fundamental rectangle.
pub fn nu_d_cdf(ring: &ImagQuadRing, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    if r >= ring.rho_d {
        return 1.0;
    }
    let (a, h) = (0.5, ring.half_height);
    let r2 = r * r;
    let x0 = (r2 - h * h).max(0.0).sqrt().min(a);
    let x1 = a.min(r);
    let prim = |x: f64| 0.5 * (x * (r2 - x * x).max(0.0).sqrt() + r2 * (x / r).clamp(-1.0, 1.0).asin());
    let quarter = h * x0 + if x1 > x0 { prim(x1) - prim(x0) } else { 0.0 };
    (quarter / (a * h)).clamp(0.0, 1.0)
}

/// Partial order helper used by sorting of mixed pairs.
pub fn cmp_pairs(ring: &ImagQuadRing, p: &(AlgebraicInt, AlgebraicInt), q: &(AlgebraicInt, AlgebraicInt)) -> Ordering {
    (ring.norm(p.0) + ring.norm(p.1)).cmp(&(ring.norm(q.0) + ring.norm(q.1))).then_with(|| p.cmp(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rings() -> Vec<ImagQuadRing> {
        EUCLIDEAN_D.iter().map(|&d| ImagQuadRing::new(d).unwrap()).collect()
    }

    #[test]
    fn ring_constants() {
        let r1 = ImagQuadRing::new(1).unwrap();
        assert_eq!((r1.disc, r1.trace, r1.omega_norm), (-4, 0, 1));
        assert!((r1.rho_d - 0.5f64.sqrt()).abs() < 1e-15);
        let r3 = ImagQuadRing::new(3).unwrap();
        assert_eq!((r3.disc, r3.trace, r3.omega_norm), (-3, 1, 1));
        assert!(ImagQuadRing::new(5).is_err());
        for ring in rings() {
            // rho_d is the norm of a vertex of the rectangle
            let vertex = Complex64::new(0.5, ring.half_height);
            assert!((vertex.norm() - ring.rho_d).abs() < 1e-15);
            assert!((ring.omega.im / 2.0 - ring.half_height).abs() < 1e-15);
        }
    }

    #[test]
    fn unit_groups() {
        assert_eq!(ImagQuadRing::new(1).unwrap().units().len(), 4);
        assert_eq!(ImagQuadRing::new(2).unwrap().units().len(), 2);
        assert_eq!(ImagQuadRing::new(3).unwrap().units().len(), 6);
    }

    #[test]
    fn unit_pairs_d1() {
        let ring = ImagQuadRing::new(1).unwrap();
        assert_eq!(enumerate_primitive_od(&ring, 1.01, &KRegion::Full).unwrap().len(), 8);
    }

    /// Coprimality by exhaustive search for a Bezout pair with small coefficients.
    fn brute_coprime(ring: &ImagQuadRing, a: AlgebraicInt, b: AlgebraicInt) -> bool {
        let small = ring.elements_up_to(16);
        small.iter().any(|&s| small.iter().any(|&t| ring.norm(ring.mul(s, a) + ring.mul(t, b)) == 1))
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for d in [1, 3] {
            let ring = ImagQuadRing::new(d).unwrap();
            let elems: Vec<AlgebraicInt> = (-2..=2).flat_map(|u| (-2..=2).map(move |w| AlgebraicInt::new(u, w))).collect();
            let mut brute = Vec::new();
            for &a in &elems {
                for &b in &elems {
                    let n = ring.norm(a) + ring.norm(b);
                    if (1..=4).contains(&n) && brute_coprime(&ring, a, b) {
                        brute.push((a, b));
                    }
                }
            }
            brute.sort_by(|p, q| cmp_pairs(&ring, p, q));
            assert_eq!(enumerate_primitive_od(&ring, 2.0, &KRegion::Full).unwrap(), brute, "d = {d}");
        }
    }

    #[test]
    fn trivial_solution() {
        for ring in rings() {
            let s = shortest_solution_od(&ring, AlgebraicInt::ZERO, AlgebraicInt::ONE).unwrap();
            assert_eq!((s.xi, s.eta), (AlgebraicInt::ONE, AlgebraicInt::ZERO));
            assert_eq!(s.pairing, AlgebraicInt::ZERO);
        }
    }

    #[test]
    fn gaussian_example_is_minimal() {
        let ring = ImagQuadRing::new(1).unwrap();
        let (alpha, beta) = (AlgebraicInt::new(1, 1), AlgebraicInt::ONE);
        let s = shortest_solution_od(&ring, alpha, beta).unwrap();
        assert_eq!(s.determinant(&ring), AlgebraicInt::ONE);
        assert!(s.n_coords.in_fundamental_rectangle());
        let mut best = i64::MAX;
        for u in -3..=3 {
            for w in -3..=3 {
                let m = AlgebraicInt::new(u, w);
                let (xi, eta) = (s.xi + ring.mul(m, alpha), s.eta + ring.mul(m, beta));
                best = best.min(ring.norm(xi) + ring.norm(eta));
            }
        }
        assert_eq!(s.w_norm_sq(&ring), best);
    }

    #[test]
    fn rectangle_representative_is_not_always_shortest_for_d3() {
        let ring = ImagQuadRing::new(3).unwrap();
        let pairs = enumerate_primitive_od(&ring, 12.0, &KRegion::Full).unwrap();
        let mut differ = 0;
        for (a, b) in pairs {
            let rect = shortest_solution_od(&ring, a, b).unwrap();
            let min = minimal_solution_od(&ring, a, b).unwrap();
            assert!(min.w_norm_sq(&ring) <= rect.w_norm_sq(&ring));
            if min.w_norm_sq(&ring) < rect.w_norm_sq(&ring) {
                differ += 1;
            }
        }
        assert!(differ > 0);
    }

    #[test]
    fn nu_d_cdf_endpoints_and_quarter_disc() {
        for ring in rings() {
            assert_eq!(nu_d_cdf(&ring, 0.0), 0.0);
            assert_eq!(nu_d_cdf(&ring, ring.rho_d), 1.0);
            assert!((nu_d_cdf(&ring, ring.rho_d * (1.0 - 1e-12)) - 1.0).abs() < 1e-5);
        }
        let ring = ImagQuadRing::new(1).unwrap();
        assert!((nu_d_cdf(&ring, 0.5) - PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn nu_d_cdf_is_monotone_and_continuous() {
        for ring in rings() {
            let mut prev = 0.0;
            let mut r = 0.0;
            while r <= ring.rho_d + 1e-3 {
                let c = nu_d_cdf(&ring, r);
                assert!(c >= prev && c - prev < 5e-3, "d={} r={r}", ring.d);
                prev = c;
                r += 1e-3;
            }
        }
    }

    #[test]
    fn nu_d_cdf_against_monte_carlo() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in [1, 3, 7] {
            let ring = ImagQuadRing::new(d).unwrap();
            let n = 200_000;
            let mut norms: Vec<f64> = (0..n)
                .map(|_| {
                    let x: f64 = rng.random_range(-0.5..0.5);
                    let y: f64 = rng.random_range(-ring.half_height..ring.half_height);
                    x.hypot(y)
                })
                .collect();
            norms.sort_by(f64::total_cmp);
            let ks = norms
                .iter()
                .enumerate()
                .map(|(i, &r)| {
                    let c = nu_d_cdf(&ring, r);
                    (c - i as f64 / n as f64).abs().max((c - (i + 1) as f64 / n as f64).abs())
                })
                .fold(0.0, f64::max);
            assert!(ks < 5e-3, "d={d} ks={ks}");
        }
    }

    proptest! {
        #[test]
        fn ring_arithmetic(d in prop::sample::select(EUCLIDEAN_D.to_vec()), u1 in -50i64..50, w1 in -50i64..50, u2 in -50i64..50, w2 in -50i64..50) {
            let ring = ImagQuadRing::new(d).unwrap();
            let (a, b) = (AlgebraicInt::new(u1, w1), AlgebraicInt::new(u2, w2));
            let prod = ring.mul(a, b);
            prop_assert_eq!(ring.norm(prod), ring.norm(a) * ring.norm(b));
            let zc = ring.to_complex(a) * ring.to_complex(b);
            prop_assert!((ring.to_complex(prod) - zc).norm() < 1e-9);
            prop_assert!((ring.to_complex(ring.conj(a)) - ring.to_complex(a).conj()).norm() < 1e-9);
            prop_assert_eq!(ring.mul(a, ring.conj(a)), AlgebraicInt::new(ring.norm(a), 0));
            if !b.is_zero() {
                let (q, r) = ring.div_rem(a, b);
                prop_assert_eq!(ring.mul(q, b) + r, a);
                prop_assert!(ring.norm(r) < ring.norm(b));
            }
        }

        #[test]
        fn solution_identities(d in prop::sample::select(EUCLIDEAN_D.to_vec()), u1 in -30i64..30, w1 in -30i64..30, u2 in -30i64..30, w2 in -30i64..30) {
            let ring = ImagQuadRing::new(d).unwrap();
            let (a, b) = (AlgebraicInt::new(u1, w1), AlgebraicInt::new(u2, w2));
            prop_assume!(!(a.is_zero() && b.is_zero()) && ring.is_coprime(a, b));
            let s = shortest_solution_od(&ring, a, b).unwrap();
            prop_assert_eq!(s.determinant(&ring), AlgebraicInt::ONE);
            prop_assert!(s.n_coords.in_fundamental_rectangle());
            prop_assert_eq!(s.w_norm_sq(&ring) * s.norm_sq, ring.norm(s.pairing) + 1);
            prop_assert!((s.s_v * s.s_v + s.c_v.norm_sqr() - 1.0).abs() < 1e-12);
            // uniqueness of the rectangle representative within the coset
            for mu in -3..=3 {
                for mw in -3..=3 {
                    if mu == 0 && mw == 0 { continue; }
                    let m = AlgebraicInt::new(mu, mw);
                    let shifted = s.pairing + ring.mul(m, AlgebraicInt::new(s.norm_sq, 0));
                    prop_assert!(!coords_of(&ring, shifted, s.norm_sq).in_fundamental_rectangle());
                }
            }
            if d <= 2 {
                let min = minimal_solution_od(&ring, a, b).unwrap();
                prop_assert_eq!(min.w_norm_sq(&ring), s.w_norm_sq(&ring));
            }
        }
    }
}
