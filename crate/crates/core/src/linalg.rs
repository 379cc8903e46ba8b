//! Dense complex linear algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Result, SpecflowError};

pub type CMatrix = DMatrix<Complex64>;

/// Hermitian invariant, relative to `max(1, ‖A‖)`.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Structural checks: projections, unitarity, reconstructions.
pub const STRUCTURAL_TOL: f64 = 1e-10;
/// Decision-making tolerance: spectral boundaries, unit eigenvalues.
pub const DECISION_TOL: f64 = 1e-8;
/// Eigenvalue clustering threshold used for kernel dimensions.
pub const CLUSTER_TOL: f64 = 1e-9;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn adjoint(m: &CMatrix) -> CMatrix {
    m.adjoint()
}

/// `(A + A†) / 2`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub fn max_abs_entry(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&j| eig.eigenvalues[j]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = hermitian_part(m).symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// `V · diag(f(λ)) · V†` for a real spectral function.
pub fn spectral_apply(values: &[f64], vectors: &CMatrix, f: impl Fn(f64) -> Complex64) -> CMatrix {
    let n = values.len();
    let mut scaled = vectors.clone();
    for (j, &lambda) in values.iter().enumerate() {
        let w = f(lambda);
        for r in 0..n {
            scaled[(r, j)] *= w;
        }
    }
    scaled * vectors.adjoint()
}

pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    hermitian_defect(m) <= tol * 1f64.max(max_abs_entry(m) * m.nrows() as f64)
}

pub fn hermitian_defect(m: &CMatrix) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    norm(&(m - m.adjoint()))
}

/// Operator (spectral) norm.
///
/// Hermitian matrices use the largest absolute eigenvalue; anything else the
/// square root of the largest eigenvalue of `A†A`.
pub fn norm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    let scale = max_abs_entry(m);
    if scale == 0.0 {
        return 0.0;
    }
    let exact_hermitian = m.iter().zip(m.adjoint().iter()).all(|(a, b)| a == b);
    if exact_hermitian {
        return hermitian_eigenvalues(m)
            .into_iter()
            .map(f64::abs)
            .fold(0.0, f64::max);
    }
    let unit = m.unscale(scale);
    let gram = unit.adjoint() * &unit;
    let top = hermitian_eigenvalues(&gram).last().copied().unwrap_or(0.0);
    scale * top.max(0.0).sqrt()
}

pub fn hermitian_norm(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(m)
        .into_iter()
        .map(f64::abs)
        .fold(0.0, f64::max)
}

pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn condition_number(m: &CMatrix) -> f64 {
    let s = singular_values(m);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        (Some(_), Some(_)) => f64::INFINITY,
        _ => 1.0,
    }
}

pub fn inverse(m: &CMatrix) -> Option<CMatrix> {
    m.clone().lu().try_inverse()
}

/// Solve `A X = B` by LU.
pub fn solve(a: &CMatrix, b: &CMatrix) -> Option<CMatrix> {
    a.clone().lu().solve(b)
}

/// Complex Schur form `A = Q T Q†`, returning `(Q, diag(T))`.
pub fn schur(m: &CMatrix) -> Result<(CMatrix, Vec<Complex64>)> {
    let n = m.nrows();
    let schur = nalgebra::Schur::try_new(m.clone(), f64::EPSILON, 10_000 * n.max(1))
        .ok_or(SpecflowError::NoConvergence("complex Schur decomposition"))?;
    let (q, t) = schur.unpack();
    let diag = (0..n).map(|i| t[(i, i)]).collect();
    Ok((q, diag))
}
