//! Brute-force crossing counter, kept free of the window machinery.

use super::path::OperatorPath;
use crate::error::{Result, SpecflowError};
use crate::linalg::CLUSTER_TOL;
use crate::operator::Operator;

fn nonnegative(v: f64, tol: f64) -> bool {
    v >= -tol
}

/// Signed count of zero crossings of the eigenvalue curves of the path,
/// resampled `refine` times finer by linear interpolation.
///
/// Curves are matched by sorted position (dense kind) or by index
/// (diagonal kind). A curve contributes `+1` when it steps from negative to
/// nonnegative and `−1` for the reverse step, so a value exactly at zero
/// counts as nonnegative.
pub fn sf_oracle(path: &OperatorPath, refine: usize) -> Result<i64> {
    let fine = path.refined(refine)?;
    match path.start() {
        Operator::Hermitian(_) => Ok(dense_crossings(&fine)),
        Operator::Diagonal(_) => diagonal_crossings(path, &fine),
    }
}

fn dense_crossings(fine: &OperatorPath) -> i64 {
    let curves: Vec<(Vec<f64>, f64)> = fine
        .samples()
        .iter()
        .map(|s| {
            let h = s.as_hermitian().expect("homogeneous path");
            (h.eigenvalues().to_vec(), CLUSTER_TOL * h.scale())
        })
        .collect();
    let mut total = 0;
    for pair in curves.windows(2) {
        let ((prev, tp), (next, tn)) = (&pair[0], &pair[1]);
        for (&a, &b) in prev.iter().zip(next) {
            total += step_sign(a, b, *tp, *tn);
        }
    }
    total
}

fn step_sign(a: f64, b: f64, ta: f64, tb: f64) -> i64 {
    match (nonnegative(a, ta), nonnegative(b, tb)) {
        (false, true) => 1,
        (true, false) => -1,
        _ => 0,
    }
}

fn diagonal_crossings(coarse: &OperatorPath, fine: &OperatorPath) -> Result<i64> {
    let diag: Vec<_> = coarse.samples().iter().map(|s| s.as_diagonal().expect("homogeneous path")).collect();
    // a curve that changes sign between two samples starts within one step
    // of zero, so the largest per-step move bounds the indices to follow
    let mut reach = 1.0f64;
    for w in diag.windows(2) {
        reach = reach.max(w[0].max_eigenvalue_gap(w[1])? + 1.0);
    }
    if !reach.is_finite() {
        return Err(SpecflowError::CannotCertify { sample: 0, param: coarse.params()[0] });
    }
    let mut indices: Vec<i64> = Vec::new();
    for (j, d) in diag.iter().enumerate() {
        let hits = d
            .indices_within(reach)
            .map_err(|_| SpecflowError::CannotCertify { sample: j, param: coarse.params()[j] })?;
        indices.extend(hits.into_iter().map(|(k, _)| k));
    }
    indices.sort_unstable();
    indices.dedup();

    let fine_diag: Vec<_> = fine.samples().iter().map(|s| s.as_diagonal().expect("homogeneous path")).collect();
    let mut total = 0;
    for &k in &indices {
        let curve: Vec<(f64, f64)> = fine_diag
            .iter()
            .map(|d| {
                let v = d.eigenvalue(k).ok_or_else(|| {
                    SpecflowError::InvalidPath(format!("index {k} is not defined along the path"))
                })?;
                Ok((v, CLUSTER_TOL * d.scale()))
            })
            .collect::<Result<_>>()?;
        for w in curve.windows(2) {
            total += step_sign(w[0].0, w[1].0, w[0].1, w[1].1);
        }
    }
    Ok(total)
}
