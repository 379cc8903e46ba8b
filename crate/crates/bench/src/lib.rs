//! Fixtures shared by the benchmarks.

use specflow_core::families::{dirac_interval_family, fuglede_family, random_hermitian_path};
use specflow_core::OperatorPath;

/// Dense random path of the given dimension, fixed seed.
pub fn dense_path(dim: usize, samples: usize) -> OperatorPath {
    random_hermitian_path(dim, samples, 0xbe7c, false).expect("valid dimensions")
}

pub fn fuglede_path(samples: usize) -> OperatorPath {
    fuglede_family(64, 1, samples).expect("n within horizon").path
}

pub fn dirac_path(m: i64, samples: usize) -> OperatorPath {
    dirac_interval_family(8, m, samples, 0).expect("k_range at least 2")
}
