//! Small dense complex-matrix helpers: exponential, principal logarithm,
//! square root and the real Frobenius inner product.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> CMatrix {
    CMatrix::from_row_iterator(rows, cols, entries.iter().map(|&x| Complex64::new(x, 0.0)))
}

/// Real part of `trace(X^* Y)`; restricted to real matrices this is `trace(X^T Y)`.
pub fn frobenius_inner(x: &CMatrix, y: &CMatrix) -> f64 {
    x.iter().zip(y.iter()).map(|(a, b)| (a.conj() * b).re).sum()
}

pub fn frobenius_norm(x: &CMatrix) -> f64 {
    x.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs_entry(x: &CMatrix) -> f64 {
    x.iter().map(|a| a.norm()).fold(0.0, f64::max)
}

pub fn max_entry_error(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Matrix exponential (Pade scaling and squaring, via nalgebra).
pub fn expm(x: &CMatrix) -> CMatrix {
    x.clone().exp()
}

/// Principal square root by the product form of the Denman-Beavers iteration.
pub fn sqrtm(a: &CMatrix) -> Result<CMatrix> {
    let n = a.nrows();
    let id = identity(n);
    let mut m = a.clone();
    let mut y = a.clone();
    for _ in 0..100 {
        let m_inv = m
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidInput("singular iterate in sqrtm".into()))?;
        let y_next = &y * (&id + &m_inv).scale(0.5);
        let m_next = (&id + (&m + &m_inv).scale(0.5)).scale(0.5);
        let delta = frobenius_norm(&(&y_next - &y));
        y = y_next;
        m = m_next;
        if delta <= 1e-15 * frobenius_norm(&y).max(1.0) {
            return Ok(y);
        }
    }
    Err(Error::InvalidInput("sqrtm did not converge".into()))
}

/// Principal logarithm by inverse scaling and squaring: repeated square roots
/// until the argument is within 0.05 of the identity, then the Mercator series.
pub fn logm(a: &CMatrix) -> Result<CMatrix> {
    let n = a.nrows();
    let id = identity(n);
    let mut x = a.clone();
    let mut roots = 0u32;
    while frobenius_norm(&(&x - &id)) > 0.05 {
        x = sqrtm(&x)?;
        roots += 1;
        if roots > 64 {
            return Err(Error::InvalidInput("logm: argument too far from identity".into()));
        }
    }
    let e = &x - &id;
    let mut power = e.clone();
    let mut sum = e.clone();
    for j in 2..200 {
        power = &power * &e;
        let term = power.scale(1.0 / j as f64);
        let size = frobenius_norm(&term);
        if j % 2 == 0 {
            sum -= term;
        } else {
            sum += term;
        }
        if size < 1e-19 {
            break;
        }
    }
    Ok(sum.scale(2f64.powi(roots as i32)))
}
