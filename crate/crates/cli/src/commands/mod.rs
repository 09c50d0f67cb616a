pub mod count;
pub mod decompose;
pub mod gcd_scan;
pub mod lorentz;
pub mod perturb;
pub mod stats;
