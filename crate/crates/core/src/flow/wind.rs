use std::f64::consts::PI;

use super::partition::{certify, telescoped_flow, Barrier, BarrierSpectrum, PartitionOptions, PathPartition};
use super::path::OperatorPath;
use crate::cayley::{cayley, cayley_diagonal, PhaseSequence, UnitaryOperator};
use crate::error::{Result, SpecflowError};
use crate::linalg::CLUSTER_TOL;
use crate::operator::Operator;

/// One sample of a unitary path.
#[derive(Debug, Clone, PartialEq)]
pub enum UnitarySample {
    Dense(UnitaryOperator),
    /// Pointwise Cayley image of a diagonal operator.
    Phases(PhaseSequence),
}

/// Largest arc half-width a phase sequence is queried with; it reaches out
/// to eigenvalues of modulus 10⁶.
fn max_arc() -> f64 {
    2.0 * 1e6f64.atan()
}

impl BarrierSpectrum for UnitarySample {
    fn offsets_within(&self, reach: f64) -> Result<Vec<f64>> {
        match self {
            UnitarySample::Dense(u) => {
                let mut out: Vec<f64> =
                    u.phases()?.into_iter().map(|p| p - PI).filter(|o| o.abs() <= reach).collect();
                out.sort_by(f64::total_cmp);
                Ok(out)
            }
            UnitarySample::Phases(s) => {
                Ok(s.phases_near_minus_one(reach.min(max_arc()))?.into_iter().map(|p| p - PI).collect())
            }
        }
    }

    fn is_finite(&self) -> bool {
        matches!(self, UnitarySample::Dense(_))
    }

    fn radius_limit(&self) -> f64 {
        match self {
            UnitarySample::Dense(_) => PI,
            UnitarySample::Phases(_) => max_arc(),
        }
    }

    fn scale(&self) -> f64 {
        match self {
            UnitarySample::Dense(_) => PI,
            UnitarySample::Phases(_) => 0.5 * PI,
        }
    }

    fn crosses(&self, next: &Self, level: f64) -> Result<bool> {
        match (self, next) {
            (UnitarySample::Phases(a), UnitarySample::Phases(b)) => {
                // offset o sits over λ = tan(o/2), monotonically
                a.source().changes_side(b.source(), (0.5 * level).tan())
            }
            _ => {
                let above = |s: &UnitarySample| -> Result<usize> {
                    Ok(s.offsets_within(PI)?.iter().filter(|&&o| o > level).count())
                };
                Ok(above(self)? != above(next)?)
            }
        }
    }

    fn zero_tol(&self) -> f64 {
        2.0 * CLUSTER_TOL
    }
}

/// Sampled path of unitaries of one kind and dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryPath {
    params: Vec<f64>,
    samples: Vec<UnitarySample>,
}

impl UnitaryPath {
    pub fn new(params: Vec<f64>, samples: Vec<UnitarySample>) -> Result<Self> {
        if samples.len() < 2 || params.len() != samples.len() {
            return Err(SpecflowError::InvalidPath("need matching params and at least two samples".into()));
        }
        if params.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(SpecflowError::InvalidPath("parameters must be strictly increasing".into()));
        }
        for s in &samples[1..] {
            let ok = match (&samples[0], s) {
                (UnitarySample::Dense(a), UnitarySample::Dense(b)) => a.dim() == b.dim(),
                (UnitarySample::Phases(a), UnitarySample::Phases(b)) => {
                    a.source().check_same_structure(b.source()).is_ok()
                }
                _ => false,
            };
            if !ok {
                return Err(SpecflowError::InvalidPath("unitary samples differ in kind or shape".into()));
            }
        }
        Ok(Self { params, samples })
    }

    pub fn from_unitaries(params: Vec<f64>, samples: Vec<UnitaryOperator>) -> Result<Self> {
        Self::new(params, samples.into_iter().map(UnitarySample::Dense).collect())
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn samples(&self) -> &[UnitarySample] {
        &self.samples
    }
}

/// `t ↦ Κ(f(t))`.
pub fn cayley_path(path: &OperatorPath) -> UnitaryPath {
    let samples = path
        .samples()
        .iter()
        .map(|s| match s {
            Operator::Hermitian(h) => UnitarySample::Dense(cayley(h)),
            Operator::Diagonal(d) => UnitarySample::Phases(cayley_diagonal(d)),
        })
        .collect();
    UnitaryPath { params: path.params().to_vec(), samples }
}

/// Arcs `[π − ε_j, π + ε_j]` free of eigenphases on each segment.
pub fn choose_circle_partition(path: &UnitaryPath, opts: &PartitionOptions) -> Result<PathPartition> {
    certify(&path.samples, &path.params, opts, Barrier::Circle)
}

/// Winding number through −1, with `k(t, ε)` counting eigenphases in
/// `[π, π + ε)`.
pub fn wind(path: &UnitaryPath, opts: &PartitionOptions) -> Result<i64> {
    let partition = choose_circle_partition(path, opts)?;
    wind_with_partition(path, &partition)
}

pub fn wind_with_partition(path: &UnitaryPath, partition: &PathPartition) -> Result<i64> {
    if partition.barrier != Barrier::Circle {
        return Err(SpecflowError::UncertifiedPartition("partition uses line windows".into()));
    }
    telescoped_flow(&path.samples, &path.params, partition)
}

/// `SF(f) = wind(Κ ∘ f)`.
pub fn sf_cayley(path: &OperatorPath, opts: &PartitionOptions) -> Result<i64> {
    wind(&cayley_path(path), opts)
}
