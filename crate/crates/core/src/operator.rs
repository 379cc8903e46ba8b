//! Finite-dimensional self-adjoint operators and their spectral data.

use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::diagonal::{DiagonalOperator, SpectralImage};
use crate::error::{Result, SpecflowError};
use crate::linalg::{self, CMatrix, HERMITIAN_TOL, I};

/// Dense Hermitian matrix, the bounded model of a self-adjoint Fredholm
/// operator.
///
/// The spectral decomposition is computed lazily and cached, so repeated
/// spectral queries on the same sample are cheap.
#[derive(Clone)]
pub struct HermitianOperator {
    entries: CMatrix,
    spectrum: OnceLock<SpectralDecomposition>,
}

impl fmt::Debug for HermitianOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HermitianOperator")
            .field("dim", &self.dim())
            .field("entries", &self.entries)
            .finish()
    }
}

impl PartialEq for HermitianOperator {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl HermitianOperator {
    /// Validates `‖A − A†‖ ≤ 1e−12 · max(1, ‖A‖)` and stores the exact
    /// Hermitian part.
    pub fn new(entries: CMatrix) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return Err(SpecflowError::ShapeMismatch(format!(
                "expected a non-empty square matrix, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(SpecflowError::InvalidArgument("non-finite matrix entry".into()));
        }
        let defect = linalg::hermitian_defect(&entries);
        let scale = 1f64.max(linalg::norm(&entries));
        if defect > HERMITIAN_TOL * scale {
            return Err(SpecflowError::NonHermitianInput { defect });
        }
        Ok(Self::from_hermitian_unchecked(linalg::hermitian_part(&entries)))
    }

    pub(crate) fn from_hermitian_unchecked(entries: CMatrix) -> Self {
        Self { entries, spectrum: OnceLock::new() }
    }

    pub fn from_real_diagonal(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(SpecflowError::ShapeMismatch("empty diagonal".into()));
        }
        let n = values.len();
        Self::new(CMatrix::from_fn(n, n, |r, c| {
            if r == c {
                Complex64::new(values[r], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    pub fn scalar(value: f64) -> Self {
        Self::from_real_diagonal(&[value]).expect("finite scalar")
    }

    /// Real symmetric matrix given by rows.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(SpecflowError::ShapeMismatch("rows must form a square matrix".into()));
        }
        Self::new(CMatrix::from_fn(n, n, |r, c| Complex64::new(rows[r][c], 0.0)))
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        self.spectrum.get_or_init(|| {
            let (eigenvalues, eigenvectors) = linalg::hermitian_eigen(&self.entries);
            SpectralDecomposition { eigenvalues, eigenvectors }
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectrum().eigenvalues
    }

    pub fn norm(&self) -> f64 {
        self.eigenvalues().iter().map(|l| l.abs()).fold(0.0, f64::max)
    }

    /// `max(1, ‖A‖)`, the scale used by hybrid tolerances.
    pub fn scale(&self) -> f64 {
        1f64.max(self.norm())
    }

    /// `(1 − t)·self + t·other`.
    pub fn lerp(&self, other: &Self, t: f64) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(SpecflowError::ShapeMismatch(format!(
                "dimensions {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(Self::from_hermitian_unchecked(
            self.entries.scale(1.0 - t) + other.entries.scale(t),
        ))
    }

    /// Apply a real spectral function through the eigen-decomposition.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> Self {
        let s = self.spectrum();
        let m = linalg::spectral_apply(&s.eigenvalues, &s.eigenvectors, |l| Complex64::new(f(l), 0.0));
        Self::from_hermitian_unchecked(linalg::hermitian_part(&m))
    }
}

/// Eigenvalues ascending with a unitary matrix of eigenvectors (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn reconstruct(&self) -> CMatrix {
        linalg::spectral_apply(&self.eigenvalues, &self.eigenvectors, |l| Complex64::new(l, 0.0))
    }
}

pub fn spectral_decompose(a: &HermitianOperator) -> SpectralDecomposition {
    a.spectrum().clone()
}

/// Validating entry point for raw matrices.
pub fn spectral_decompose_matrix(m: &CMatrix) -> Result<SpectralDecomposition> {
    HermitianOperator::new(m.clone()).map(|a| spectral_decompose(&a))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorKind {
    Hermitian,
    Diagonal,
}

/// Either representation of a self-adjoint operator.
#[derive(Debug, Clone, PartialEq)]
pub enum Operator {
    Hermitian(HermitianOperator),
    Diagonal(DiagonalOperator),
}

impl From<HermitianOperator> for Operator {
    fn from(op: HermitianOperator) -> Self {
        Operator::Hermitian(op)
    }
}

impl From<DiagonalOperator> for Operator {
    fn from(op: DiagonalOperator) -> Self {
        Operator::Diagonal(op)
    }
}

impl Operator {
    pub fn kind(&self) -> OperatorKind {
        match self {
            Operator::Hermitian(_) => OperatorKind::Hermitian,
            Operator::Diagonal(_) => OperatorKind::Diagonal,
        }
    }

    pub fn as_hermitian(&self) -> Option<&HermitianOperator> {
        match self {
            Operator::Hermitian(h) => Some(h),
            Operator::Diagonal(_) => None,
        }
    }

    pub fn as_diagonal(&self) -> Option<&DiagonalOperator> {
        match self {
            Operator::Diagonal(d) => Some(d),
            Operator::Hermitian(_) => None,
        }
    }

    /// `max(1, ‖T‖)` for dense operators, `max(1, max |explicit λ|)` for
    /// diagonal ones.
    pub fn scale(&self) -> f64 {
        match self {
            Operator::Hermitian(h) => h.scale(),
            Operator::Diagonal(d) => d.scale(),
        }
    }

    /// Eigenvalues with `|λ| ≤ radius`, ascending, with multiplicity.
    pub fn eigenvalues_within(&self, radius: f64) -> Result<Vec<f64>> {
        match self {
            Operator::Hermitian(h) => Ok(h
                .eigenvalues()
                .iter()
                .copied()
                .filter(|l| l.abs() <= radius)
                .collect()),
            Operator::Diagonal(d) => d.eigenvalues_within(radius),
        }
    }

    pub fn check_compatible(&self, other: &Operator) -> Result<()> {
        match (self, other) {
            (Operator::Hermitian(a), Operator::Hermitian(b)) if a.dim() == b.dim() => Ok(()),
            (Operator::Hermitian(a), Operator::Hermitian(b)) => Err(SpecflowError::ShapeMismatch(
                format!("dimensions {} and {}", a.dim(), b.dim()),
            )),
            (Operator::Diagonal(a), Operator::Diagonal(b)) => a.check_same_structure(b),
            _ => Err(SpecflowError::ShapeMismatch(
                "mixed Hermitian and diagonal operators".into(),
            )),
        }
    }

    pub fn lerp(&self, other: &Operator, t: f64) -> Result<Operator> {
        match (self, other) {
            (Operator::Hermitian(a), Operator::Hermitian(b)) => Ok(a.lerp(b, t)?.into()),
            (Operator::Diagonal(a), Operator::Diagonal(b)) => Ok(a.lerp(b, t)?.into()),
            _ => Err(SpecflowError::ShapeMismatch(
                "mixed Hermitian and diagonal operators".into(),
            )),
        }
    }

    /// Largest pointwise discrepancy: max entry modulus for dense operators,
    /// max eigenvalue difference over the evaluation range for diagonal ones.
    pub fn distance_sup(&self, other: &Operator) -> Result<f64> {
        self.check_compatible(other)?;
        match (self, other) {
            (Operator::Hermitian(a), Operator::Hermitian(b)) => {
                Ok(linalg::max_abs_entry(&(a.entries() - b.entries())))
            }
            (Operator::Diagonal(a), Operator::Diagonal(b)) => a.max_eigenvalue_gap(b),
            _ => unreachable!(),
        }
    }
}

/// `(T − z)⁻¹` in the representation of the input.
#[derive(Debug, Clone, PartialEq)]
pub enum Resolvent {
    Dense(CMatrix),
    Diagonal(SpectralImage<Complex64>),
}

pub fn resolvent(t: &Operator, z: Complex64) -> Result<Resolvent> {
    let scale = t.scale();
    let distance = match t {
        Operator::Hermitian(h) => h
            .eigenvalues()
            .iter()
            .map(|&l| (Complex64::new(l, 0.0) - z).norm())
            .fold(f64::INFINITY, f64::min),
        Operator::Diagonal(d) => d.distance_to_spectrum(z),
    };
    if distance <= 1e-10 * scale {
        return Err(SpecflowError::SingularShift { re: z.re, im: z.im, distance });
    }
    match t {
        Operator::Hermitian(h) => {
            let shifted = h.entries() - linalg::identity(h.dim()).scale_complex(z);
            let inv = linalg::inverse(&shifted).ok_or(SpecflowError::SingularShift {
                re: z.re,
                im: z.im,
                distance,
            })?;
            Ok(Resolvent::Dense(inv))
        }
        Operator::Diagonal(d) => Ok(Resolvent::Diagonal(d.image(|l| {
            if l.is_infinite() {
                Complex64::new(0.0, 0.0)
            } else {
                (Complex64::new(l, 0.0) - z).inv()
            }
        }))),
    }
}

/// `(T + i)⁻¹` for a dense operator; always well defined.
pub(crate) fn resolvent_at_minus_i(t: &HermitianOperator) -> CMatrix {
    let shifted = t.entries() + linalg::identity(t.dim()).scale_complex(I);
    linalg::inverse(&shifted).expect("T + i is invertible for Hermitian T")
}

trait ScaleComplex {
    fn scale_complex(self, z: Complex64) -> Self;
}

impl ScaleComplex for CMatrix {
    fn scale_complex(self, z: Complex64) -> Self {
        self.map(|w| w * z)
    }
}
