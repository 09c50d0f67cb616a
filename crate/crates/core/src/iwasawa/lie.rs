//! Orthonormal bases of the Lie algebras and the adjoint action.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{GroupElement, GroupFamily, GroupSpec};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Basis orthonormal for `<X, Y> = Re tr(X^* Y)`.
pub fn lie_basis(spec: GroupSpec) -> Vec<CMatrix> {
    let real = |rows: usize, entries: &[(usize, usize, f64)]| {
        let mut m = CMatrix::zeros(rows, rows);
        for &(i, j, x) in entries {
            m[(i, j)] = Complex64::new(x, 0.0);
        }
        m
    };
    let sl2 = || {
        vec![
            real(2, &[(0, 0, FRAC_1_SQRT_2), (1, 1, -FRAC_1_SQRT_2)]),
            real(2, &[(0, 1, 1.0)]),
            real(2, &[(1, 0, 1.0)]),
        ]
    };
    match spec.family {
        GroupFamily::Sl2R => sl2(),
        GroupFamily::Sl2C => {
            let base = sl2();
            let imag: Vec<CMatrix> = base.iter().map(|b| b.map(|z| z * Complex64::i())).collect();
            base.into_iter().chain(imag).collect()
        }
        GroupFamily::So1n => {
            let n = spec.n;
            let mut basis = Vec::with_capacity(spec.lie_dim());
            for i in 1..=n {
                basis.push(real(n + 1, &[(0, i, FRAC_1_SQRT_2), (i, 0, FRAC_1_SQRT_2)]));
            }
            for i in 1..=n {
                for j in i + 1..=n {
                    basis.push(real(n + 1, &[(i, j, FRAC_1_SQRT_2), (j, i, -FRAC_1_SQRT_2)]));
                }
            }
            basis
        }
    }
}

pub fn lie_element(spec: GroupSpec, coeffs: &[f64]) -> Result<CMatrix> {
    let basis = lie_basis(spec);
    if coeffs.len() != basis.len() {
        return Err(Error::DimensionMismatch { expected: basis.len(), got: coeffs.len() });
    }
    let size = spec.matrix_size();
    Ok(basis.iter().zip(coeffs).fold(CMatrix::zeros(size, size), |acc, (b, &c)| acc + b.scale(c)))
}

pub fn lie_coefficients(spec: GroupSpec, x: &CMatrix) -> Vec<f64> {
    lie_basis(spec).iter().map(|b| linalg::frobenius_inner(b, x)).collect()
}

/// Matrix of `X -> g^{-1} X g` in the orthonormal basis.
pub fn ad_matrix(g: &GroupElement) -> DMatrix<f64> {
    let spec = g.spec();
    let basis = lie_basis(spec);
    let inv = g.inverse();
    let images: Vec<CMatrix> = basis.iter().map(|b| inv.entries() * b * g.entries()).collect();
    DMatrix::from_fn(basis.len(), basis.len(), |i, j| linalg::frobenius_inner(&basis[i], &images[j]))
}

/// Operator norm of the adjoint action with respect to the Frobenius norm.
pub fn ad_operator_norm(g: &GroupElement) -> f64 {
    ad_matrix(g).singular_values().max()
}
