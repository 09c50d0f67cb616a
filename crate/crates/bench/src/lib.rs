//! Criterion benches for the enumeration, counting and decomposition kernels.
