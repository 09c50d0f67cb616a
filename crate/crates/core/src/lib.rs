//! Counting lattice points in horospherical sectors of SL(2,R), SL(2,C) and
//! SO0(1,n), with the exact arithmetic (shortest gcd solutions, Lorentz
//! lattice reduction) needed to check the asymptotics numerically.

// `!(x > 0.0)` style checks are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod counting;
pub mod domain;
pub mod error;
pub mod gcd;
pub mod iwasawa;
pub mod linalg;
pub mod perturb;
pub mod lorentz;
pub mod quadratic;
pub mod stats;

pub use error::{Error, Result};
pub use iwasawa::{
    compose, decompose, haar_volume, kan_coords, GroupElement, GroupFamily, GroupSpec, IwasawaCoords, KElement,
};
