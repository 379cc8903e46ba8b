//! Numerical spectral flow for paths of self-adjoint operators.
//!
//! Operators come in two representations: dense Hermitian matrices and
//! diagonal operators on `ℓ²(ℤ)` (or a half-line) with affine tails. On top
//! of these sit the distances between operators, the Cayley transform, and
//! three independent ways of counting spectral flow.

pub mod cayley;
pub mod diagonal;
pub mod error;
pub mod families;
pub mod flow;
pub mod linalg;
pub mod metrics;
pub mod operator;
pub mod projection;
pub mod riesz;

pub use cayley::{
    cayley, cayley_diagonal, connect_to_ii, eigenphases, inverse_cayley, EigenphaseSet, PhaseSequence,
    UnitaryOperator,
};
pub use diagonal::{bounded_truncation, DiagonalOperator, Side, SpectralImage, Tail};
pub use error::{Result, SpecflowError};
pub use families::FamilySpec;
pub use flow::{
    choose_partition, homotopy_check, path_concat, path_reverse, sf_cayley, sf_oracle, sf_phillips,
    spectral_flow, wind, OperatorPath, PartitionOptions, PathPartition, SfMethod, UnitaryPath,
};
pub use linalg::CMatrix;
pub use metrics::{delta_one, delta_tilde, gamma, gap_delta, metric_report, riesz_distance, MetricReport};
pub use operator::{
    resolvent, spectral_decompose, HermitianOperator, Operator, OperatorKind, Resolvent, SpectralDecomposition,
};
pub use projection::{
    graph_projection, invertible_pair_inverse, spectral_projection_contour, spectral_projection_interval,
    OrthogonalProjection,
};
pub use riesz::{riesz_inverse, riesz_map};
