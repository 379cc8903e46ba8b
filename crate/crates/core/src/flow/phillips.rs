use super::partition::{certify, telescoped_flow, Barrier, BarrierSpectrum, PartitionOptions, PathPartition};
use super::path::OperatorPath;
use crate::error::Result;
use crate::linalg::CLUSTER_TOL;
use crate::operator::Operator;

impl BarrierSpectrum for Operator {
    fn offsets_within(&self, reach: f64) -> Result<Vec<f64>> {
        self.eigenvalues_within(reach)
    }

    fn is_finite(&self) -> bool {
        matches!(self, Operator::Hermitian(_))
    }

    fn radius_limit(&self) -> f64 {
        f64::INFINITY
    }

    fn scale(&self) -> f64 {
        Operator::scale(self)
    }

    fn crosses(&self, next: &Self, level: f64) -> Result<bool> {
        match (self, next) {
            (Operator::Hermitian(a), Operator::Hermitian(b)) => {
                let above = |v: &[f64]| v.iter().filter(|&&l| l > level).count();
                Ok(above(a.eigenvalues()) != above(b.eigenvalues()))
            }
            (Operator::Diagonal(a), Operator::Diagonal(b)) => a.changes_side(b, level),
            _ => self.check_compatible(next).map(|_| true),
        }
    }

    fn zero_tol(&self) -> f64 {
        CLUSTER_TOL * Operator::scale(self)
    }
}

/// Greedy certified partition of `[0, 1]` into windows `[−a_j, a_j]`.
pub fn choose_partition(path: &OperatorPath, opts: &PartitionOptions) -> Result<PathPartition> {
    certify(path.samples(), path.params(), opts, Barrier::Line)
}

/// `Σ_j dim E_j^≥(t_j) − dim E_j^≥(t_{j−1})`, where `E_j^≥(t)` counts the
/// eigenvalues of `f(t)` in `[0, a_j]`.
pub fn sf_phillips(path: &OperatorPath, partition: &PathPartition) -> Result<i64> {
    if partition.barrier != Barrier::Line {
        return Err(crate::error::SpecflowError::UncertifiedPartition(
            "partition uses circle barriers".into(),
        ));
    }
    telescoped_flow(path.samples(), path.params(), partition)
}
