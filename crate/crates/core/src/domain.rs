//! Counting domains `Psi A_[-T,-S] Phi`: exact rational boxes in N and
//! arcs / caps / all of K.

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational used for N-coordinates and interval endpoints.
pub type Q = Ratio<i128>;

/// Parse a decimal (`-0.5`, `3`, `1e-3`) or fraction (`1/3`) exactly.
pub fn parse_rational(s: &str) -> Result<Q> {
    let bad = || Error::InvalidInput(format!("not a rational number: `{s}`"));
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: i128 = n.trim().parse().map_err(|_| bad())?;
        let d: i128 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let joined = format!("{int_part}{frac_part}");
    let numer: i128 = if joined.is_empty() { 0 } else { joined.parse().map_err(|_| bad())? };
    let scale = exp - frac_part.len() as i32;
    if scale.abs() > 30 {
        return Err(bad());
    }
    let p = 10i128.pow(scale.unsigned_abs());
    let q = if scale >= 0 { Q::from_integer(numer * p) } else { Q::new(numer, p) };
    Ok(if neg { -q } else { q })
}

pub fn q_to_f64(q: &Q) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

/// Half-open interval `[lo, hi)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "ratio_str")]
    pub lo: Q,
    #[serde(with = "ratio_str")]
    pub hi: Q,
}

impl Interval {
    pub fn new(lo: Q, hi: Q) -> Result<Self> {
        if lo >= hi {
            return Err(Error::InvalidInput(format!("empty interval [{lo}, {hi})")));
        }
        Ok(Interval { lo, hi })
    }

    /// `[-1/2, 1/2)`.
    pub fn unit_centered() -> Self {
        Interval { lo: Q::new(-1, 2), hi: Q::new(1, 2) }
    }

    /// Parses `lo:hi`.
    pub fn parse(s: &str) -> Result<Self> {
        let (lo, hi) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidInput(format!("interval must be `lo:hi`, got `{s}`")))?;
        Self::new(parse_rational(lo)?, parse_rational(hi)?)
    }

    pub fn length(&self) -> Q {
        self.hi - self.lo
    }

    pub fn contains(&self, x: &Q) -> bool {
        self.lo <= *x && *x < self.hi
    }

    /// Number of integers `m` with `x + m` in the interval: `ceil(hi - x) - ceil(lo - x)`.
    pub fn translates(&self, x: &Q) -> i64 {
        ((self.hi - x).ceil().to_integer() - (self.lo - x).ceil().to_integer()) as i64
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.lo, self.hi)
    }
}

/// Box in N-coordinates: one half-open interval per real dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiBox(pub Vec<Interval>);

impl PsiBox {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Product of side lengths in the box's own coordinates.
    pub fn coordinate_volume(&self) -> Q {
        self.0.iter().fold(Q::from_integer(1), |acc, i| acc * i.length())
    }

    /// `lo:hi` per axis, comma separated.
    pub fn parse(s: &str) -> Result<Self> {
        let parts = s.split(',').map(Interval::parse).collect::<Result<Vec<_>>>()?;
        Ok(PsiBox(parts))
    }
}

impl fmt::Display for PsiBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| format!("{}:{}", i.lo, i.hi)).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Region of K.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum KRegion {
    Full,
    /// Arc `[start, end)` of directions, read anticlockwise; wraps through 0
    /// when `end <= start`. Endpoints in `[0, 2 pi]`.
    Arc { start: f64, end: f64 },
    /// Geodesic ball in the unit sphere `S^3` of `C^2 = R^4`.
    Cap { center: [f64; 4], radius: f64 },
}

impl KRegion {
    pub fn arc(start: f64, end: f64) -> Result<Self> {
        if !(start.is_finite() && end.is_finite()) {
            return Err(Error::InvalidInput("arc endpoints must be finite".into()));
        }
        let reduce = |x: f64| if (0.0..=TAU).contains(&x) { x } else { x.rem_euclid(TAU) };
        let (start, end) = (reduce(start), reduce(end));
        if start == end || (start == 0.0 && end == TAU) || (start == TAU && end == 0.0) {
            return Err(Error::InvalidInput("degenerate arc; use `full`".into()));
        }
        Ok(KRegion::Arc { start: if start == TAU { 0.0 } else { start }, end })
    }

    pub fn cap(center: [f64; 4], radius: f64) -> Result<Self> {
        let norm = center.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm > 0.0 && radius > 0.0 && radius <= PI) {
            return Err(Error::InvalidInput("cap needs a nonzero center and radius in (0, pi]".into()));
        }
        Ok(KRegion::Cap { center: center.map(|x| x / norm), radius })
    }

    /// `full`, `arc:a:b` or `cap:c0:c1:c2:c3:r`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("bad K-region `{s}`"));
        let parts: Vec<&str> = s.split(':').collect();
        let nums = |xs: &[&str]| -> Result<Vec<f64>> {
            xs.iter().map(|x| x.trim().parse::<f64>().map_err(|_| bad())).collect()
        };
        match parts.as_slice() {
            ["full"] => Ok(KRegion::Full),
            ["arc", rest @ ..] if rest.len() == 2 => {
                let v = nums(rest)?;
                Self::arc(v[0], v[1])
            }
            ["cap", rest @ ..] if rest.len() == 5 => {
                let v = nums(rest)?;
                Self::cap([v[0], v[1], v[2], v[3]], v[4])
            }
            _ => Err(bad()),
        }
    }

    /// Membership of a direction angle in `[0, 2 pi)`. Comparisons only, so
    /// arcs sharing an endpoint partition exactly.
    pub fn contains_angle(&self, theta: f64) -> bool {
        match *self {
            KRegion::Full => true,
            KRegion::Arc { start, end } => {
                if start < end {
                    start <= theta && theta < end
                } else {
                    theta >= start || theta < end
                }
            }
            KRegion::Cap { .. } => false,
        }
    }

    /// Membership of `p / |p|` for `p` in `R^4`, `|p|^2 = norm_sq`.
    pub fn contains_point(&self, p: [f64; 4], norm_sq: f64) -> bool {
        match self {
            KRegion::Full => true,
            KRegion::Cap { center, radius } => {
                let dot: f64 = p.iter().zip(center).map(|(a, b)| a * b).sum();
                dot >= radius.cos() * norm_sq.sqrt()
            }
            KRegion::Arc { .. } => false,
        }
    }

    /// Mass in SO(2) (total `2 pi`) or SU(2) (total `2 pi^2`).
    pub fn measure(&self, sphere_dim: usize) -> f64 {
        match *self {
            KRegion::Full => {
                if sphere_dim == 1 {
                    TAU
                } else {
                    2.0 * PI * PI
                }
            }
            KRegion::Arc { start, end } => {
                if start < end {
                    end - start
                } else {
                    TAU - start + end
                }
            }
            KRegion::Cap { radius, .. } => PI * (2.0 * radius - (2.0 * radius).sin()),
        }
    }
}

impl fmt::Display for KRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KRegion::Full => write!(f, "full"),
            KRegion::Arc { start, end } => write!(f, "arc:{start}:{end}"),
            KRegion::Cap { center, radius } => {
                write!(f, "cap:{}:{}:{}:{}:{radius}", center[0], center[1], center[2], center[3])
            }
        }
    }
}

/// Direction angle of `(a, b)` in `[0, 2 pi)`, with axis directions exact.
pub fn direction_angle(a: i64, b: i64) -> f64 {
    match (a.signum(), b.signum()) {
        (1, 0) => 0.0,
        (0, 1) => PI / 2.0,
        (-1, 0) => PI,
        (0, -1) => 3.0 * PI / 2.0,
        _ => {
            let th = (b as f64).atan2(a as f64);
            if th < 0.0 {
                th + TAU
            } else {
                th
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub psi: PsiBox,
    pub phi: KRegion,
    pub t: f64,
    pub s: f64,
}

impl DomainSpec {
    pub fn new(psi: PsiBox, phi: KRegion, t: f64, s: f64) -> Result<Self> {
        if !(s >= 0.0 && s <= t && t.is_finite()) {
            return Err(Error::InvalidInterval { s, t });
        }
        if psi.dim() == 0 {
            return Err(Error::InvalidInput("empty psi box".into()));
        }
        Ok(DomainSpec { psi, phi, t, s })
    }

    /// Squared-norm window `[lo, hi]` of bottom rows: `|v|^2 in (e^S, e^T]`,
    /// closed at 1 when `S = 0`.
    pub fn norm_sq_window(&self) -> (i64, i64) {
        let hi = snapped_floor_exp(self.t);
        let lo = if self.s == 0.0 { 1 } else { snapped_floor_exp(self.s) + 1 };
        (lo, hi)
    }
}

/// `floor(e^x)`, snapping to the nearest integer when within `1e-9` relative,
/// so that `T = 2 ln R` includes the shell `|v| = R`.
pub fn snapped_floor_exp(x: f64) -> i64 {
    let e = x.exp();
    let r = e.round();
    if (e - r).abs() <= 1e-9 * e.max(1.0) {
        r as i64
    } else {
        e.floor() as i64
    }
}

mod ratio_str {
    use super::{parse_rational, Q};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_rational("-0.5").unwrap(), Q::new(-1, 2));
        assert_eq!(parse_rational("0.1").unwrap(), Q::new(1, 10));
        assert_eq!(parse_rational("3").unwrap(), Q::from_integer(3));
        assert_eq!(parse_rational("2/6").unwrap(), Q::new(1, 3));
        assert_eq!(parse_rational("1.5e-1").unwrap(), Q::new(3, 20));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn translate_counts() {
        let unit = Interval::unit_centered();
        for x in [Q::new(2, 5), Q::new(-1, 2), Q::new(7, 3), Q::new(-13, 4)] {
            assert_eq!(unit.translates(&x), 1);
        }
        let long = Interval::parse("-1:1.5").unwrap();
        assert_eq!(long.translates(&Q::new(1, 4)), 3);
        assert_eq!(long.translates(&Q::new(-1, 4)), 2);
    }

    #[test]
    fn quadrant_arcs_partition_axes() {
        let q = PI / 2.0;
        let arcs = [
            KRegion::arc(0.0, q).unwrap(),
            KRegion::arc(q, PI).unwrap(),
            KRegion::arc(PI, 3.0 * q).unwrap(),
            KRegion::arc(3.0 * q, TAU).unwrap(),
        ];
        for (a, b) in [(1, 0), (0, 1), (-1, 0), (0, -1), (3, 4), (-2, 7), (-5, -1), (4, -9)] {
            let th = direction_angle(a, b);
            assert_eq!(arcs.iter().filter(|r| r.contains_angle(th)).count(), 1);
        }
        assert!(arcs[0].contains_angle(0.0) && !arcs[0].contains_angle(q));
    }

    #[test]
    fn wrapping_arc() {
        let arc = KRegion::arc(3.0 * PI / 2.0, PI / 2.0).unwrap();
        assert!(arc.contains_angle(0.0));
        assert!(arc.contains_angle(3.0 * PI / 2.0));
        assert!(!arc.contains_angle(PI));
        assert!((arc.measure(1) - PI).abs() < 1e-15);
    }

    #[test]
    fn cap_measure_limits() {
        let full = KRegion::cap([1.0, 0.0, 0.0, 0.0], PI).unwrap();
        assert!((full.measure(3) - 2.0 * PI * PI).abs() < 1e-12);
        assert!((KRegion::Full.measure(3) - 2.0 * PI * PI).abs() < 1e-15);
    }

    #[test]
    fn norm_window_conventions() {
        let d = DomainSpec::new(PsiBox(vec![Interval::unit_centered()]), KRegion::Full, 2.0 * 10f64.ln(), 0.0).unwrap();
        assert_eq!(d.norm_sq_window(), (1, 100));
        let d = DomainSpec::new(d.psi.clone(), KRegion::Full, 2.0 * 10f64.ln(), 10f64.ln()).unwrap();
        assert_eq!(d.norm_sq_window(), (11, 100));
        assert!(DomainSpec::new(d.psi.clone(), KRegion::Full, 1.0, 2.0).is_err());
    }

    proptest! {
        #[test]
        fn translates_match_brute_force(num in -200i128..200, den in 1i128..30, lo in -40i128..40, len in 1i128..60) {
            let x = Q::new(num, den);
            let iv = Interval::new(Q::new(lo, 8), Q::new(lo + len, 8)).unwrap();
            let brute = (-400..400).filter(|m| iv.contains(&(x + Q::from_integer(*m)))).count() as i64;
            prop_assert_eq!(iv.translates(&x), brute);
        }

        #[test]
        fn arcs_split_additively(split in 0.01f64..6.2, a in -50i64..50, b in -50i64..50) {
            prop_assume!(a != 0 || b != 0);
            let th = direction_angle(a, b);
            let left = KRegion::arc(0.0, split).unwrap();
            let right = KRegion::arc(split, TAU).unwrap();
            prop_assert!(left.contains_angle(th) ^ right.contains_angle(th));
        }
    }
}
