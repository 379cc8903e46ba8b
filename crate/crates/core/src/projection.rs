//! Orthogonal projections: graph projections, spectral windows, and the
//! inverse attached to an invertible pair of projections.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Result, SpecflowError};
use crate::linalg::{self, CMatrix, DECISION_TOL, STRUCTURAL_TOL};
use crate::operator::HermitianOperator;

#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalProjection {
    entries: CMatrix,
    rank: usize,
}

impl OrthogonalProjection {
    /// Checks `P = P†`, `P² = P` within 1e−10 and that the trace is an
    /// integer within 1e−8.
    pub fn new(entries: CMatrix) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(SpecflowError::ShapeMismatch("projection must be square".into()));
        }
        let hermitian_defect = linalg::hermitian_defect(&entries);
        let idempotent_defect = linalg::norm(&(&entries * &entries - &entries));
        let defect = hermitian_defect.max(idempotent_defect);
        if defect > STRUCTURAL_TOL {
            return Err(SpecflowError::NotAProjection { defect });
        }
        let trace = entries.trace().re;
        let rank = trace.round();
        if (trace - rank).abs() > DECISION_TOL {
            return Err(SpecflowError::NotAProjection { defect: (trace - rank).abs() });
        }
        Ok(Self { entries, rank: rank as usize })
    }

    /// Projection onto the span of the given orthonormal columns.
    pub fn onto_columns(columns: &CMatrix) -> Result<Self> {
        Self::new(columns * columns.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn complement(&self) -> Self {
        Self {
            entries: linalg::identity(self.dim()) - &self.entries,
            rank: self.dim() - self.rank,
        }
    }
}

/// Blocks of the graph projection: `R = (I + T²)⁻¹`, `T·R`, `T²·R`.
#[derive(Debug, Clone)]
pub struct GraphBlocks {
    pub r: CMatrix,
    pub tr: CMatrix,
    pub ttr: CMatrix,
}

pub fn graph_blocks(t: &HermitianOperator) -> GraphBlocks {
    let n = t.dim();
    let a = t.entries();
    let shifted = linalg::identity(n) + a * a;
    let r = linalg::hermitian_part(&linalg::inverse(&shifted).expect("I + T² is invertible"));
    let tr = linalg::hermitian_part(&(a * &r));
    let ttr = linalg::hermitian_part(&(a * &tr));
    GraphBlocks { r, tr, ttr }
}

/// Orthogonal projection of `H ⊕ H` onto the graph of `T`:
/// `[[R, TR], [TR, T²R]]` with `R = (I + T²)⁻¹`.
pub fn graph_projection(t: &HermitianOperator) -> OrthogonalProjection {
    let n = t.dim();
    let GraphBlocks { r, tr, ttr } = graph_blocks(t);
    let mut p = CMatrix::zeros(2 * n, 2 * n);
    p.view_mut((0, 0), (n, n)).copy_from(&r);
    p.view_mut((0, n), (n, n)).copy_from(&tr);
    p.view_mut((n, 0), (n, n)).copy_from(&tr);
    p.view_mut((n, n), (n, n)).copy_from(&ttr);
    OrthogonalProjection { entries: p, rank: n }
}

fn check_window(t: &HermitianOperator, a: f64, b: f64) -> Result<()> {
    if !(a < b) {
        return Err(SpecflowError::InvalidArgument(format!("empty window [{a}, {b}]")));
    }
    let tol = STRUCTURAL_TOL * t.scale();
    for endpoint in [a, b] {
        let distance = t
            .eigenvalues()
            .iter()
            .map(|l| (l - endpoint).abs())
            .fold(f64::INFINITY, f64::min);
        if distance <= tol {
            return Err(SpecflowError::BoundaryOnSpectrum { endpoint, distance });
        }
    }
    Ok(())
}

/// `1_{[a,b]}(T)` from the eigen-decomposition.
pub fn spectral_projection_interval(t: &HermitianOperator, a: f64, b: f64) -> Result<OrthogonalProjection> {
    check_window(t, a, b)?;
    let s = t.spectrum();
    let selected: Vec<usize> = (0..t.dim())
        .filter(|&j| (a..=b).contains(&s.eigenvalues[j]))
        .collect();
    let columns = s.eigenvectors.select_columns(&selected);
    let entries = linalg::hermitian_part(&(&columns * columns.adjoint()));
    Ok(OrthogonalProjection { entries, rank: selected.len() })
}

/// `E^≥` of the window `1_{[−a,a]}(T)`: the projection onto eigenvectors
/// with eigenvalue in `[0, a]`. Only `±a` must avoid the spectrum; an
/// eigenvalue at exactly 0 is included.
pub fn nonnegative_window_projection(t: &HermitianOperator, a: f64) -> Result<OrthogonalProjection> {
    check_window(t, -a, a)?;
    let s = t.spectrum();
    let selected: Vec<usize> = (0..t.dim())
        .filter(|&j| (0.0..=a).contains(&s.eigenvalues[j]))
        .collect();
    let columns = s.eigenvectors.select_columns(&selected);
    let entries = linalg::hermitian_part(&(&columns * columns.adjoint()));
    Ok(OrthogonalProjection { entries, rank: selected.len() })
}

/// `(1/2πi) ∮ (λ − T)⁻¹ dλ` over the circle through `a` and `b`, by the
/// trapezoidal rule with `nodes` equispaced nodes.
///
/// The resolvent is obtained by LU solves, independently of any
/// eigen-decomposition; the error decays geometrically in `nodes`.
pub fn spectral_projection_contour(
    t: &HermitianOperator,
    a: f64,
    b: f64,
    nodes: usize,
) -> Result<CMatrix> {
    check_window(t, a, b)?;
    if nodes < 8 {
        return Err(SpecflowError::InvalidArgument(format!("need at least 8 nodes, got {nodes}")));
    }
    let n = t.dim();
    let centre = 0.5 * (a + b);
    let radius = 0.5 * (b - a);
    let eye = linalg::identity(n);
    let mut sum = CMatrix::zeros(n, n);
    for j in 0..nodes {
        let w = Complex64::from_polar(radius, 2.0 * PI * j as f64 / nodes as f64);
        let lambda = Complex64::new(centre, 0.0) + w;
        let shifted = eye.map(|z| z * lambda) - t.entries();
        let res = linalg::solve(&shifted, &eye).ok_or(SpecflowError::BoundaryOnSpectrum {
            endpoint: lambda.re,
            distance: 0.0,
        })?;
        // dλ = i·w·dφ, and the 1/(2πi) prefactor leaves w/nodes per node
        sum += res.map(|z| z * w);
    }
    Ok(sum.unscale(nodes as f64))
}

/// `Q(P, R) = T(P, R)⁻¹·P` with `T(P, R) = PR + (I − P)(I − R)`.
///
/// Restricted to `range P`, `Q` inverts `PR: range R → range P`.
pub fn invertible_pair_inverse(p: &OrthogonalProjection, r: &OrthogonalProjection) -> Result<CMatrix> {
    if p.dim() != r.dim() {
        return Err(SpecflowError::ShapeMismatch(format!(
            "projection dimensions {} and {}",
            p.dim(),
            r.dim()
        )));
    }
    let eye = linalg::identity(p.dim());
    let (pm, rm) = (p.entries(), r.entries());
    let t = pm * rm + (&eye - pm) * (&eye - rm);
    let condition = linalg::condition_number(&t);
    if !(condition <= 1e8) {
        return Err(SpecflowError::NonInvertiblePair { condition });
    }
    linalg::solve(&t, pm).ok_or(SpecflowError::NonInvertiblePair { condition })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::random_hermitian;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn real(rows: &[&[f64]]) -> CMatrix {
        let n = rows.len();
        CMatrix::from_fn(n, rows[0].len(), |r, c| Complex64::new(rows[r][c], 0.0))
    }

    fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
        linalg::norm(&(a - b)) <= tol
    }

    #[test]
    fn graph_of_zero() {
        let p = graph_projection(&HermitianOperator::scalar(0.0));
        assert!(close(p.entries(), &real(&[&[1.0, 0.0], &[0.0, 0.0]]), 1e-15));
        assert_eq!(p.rank(), 1);
    }

    #[test]
    fn graph_of_one() {
        let p = graph_projection(&HermitianOperator::scalar(1.0));
        assert!(close(p.entries(), &real(&[&[0.5, 0.5], &[0.5, 0.5]]), 1e-15));
    }

    #[test]
    fn random_graph_is_projection() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let t = random_hermitian(5, &mut rng);
        let p = graph_projection(&t);
        let checked = OrthogonalProjection::new(p.entries().clone()).unwrap();
        assert_eq!(checked.rank(), 5);
        let GraphBlocks { r, ttr, .. } = graph_blocks(&t);
        assert!(close(&ttr, &(linalg::identity(5) - r), 1e-10));
    }

    #[test]
    fn interval_counts() {
        let t = HermitianOperator::from_real_diagonal(&[-0.3, 0.0, 0.2, 5.0]).unwrap();
        assert_eq!(spectral_projection_interval(&t, -1.0, 1.0).unwrap().rank(), 3);
        assert_eq!(spectral_projection_interval(&t, 0.0 - 1e-3, 1.0).unwrap().rank(), 2);
        let s = HermitianOperator::from_real_diagonal(&[-1.0, 1.0]).unwrap();
        let p = spectral_projection_interval(&s, 0.0, 2.0).unwrap();
        assert!(close(p.entries(), &real(&[&[0.0, 0.0], &[0.0, 1.0]]), 1e-15));
    }

    #[test]
    fn nonnegative_half_includes_zero() {
        let t = HermitianOperator::from_real_diagonal(&[-0.3, 0.0, 0.2, 5.0]).unwrap();
        assert_eq!(nonnegative_window_projection(&t, 1.0).unwrap().rank(), 2);
        assert!(nonnegative_window_projection(&t, 0.2).is_err());
    }

    #[test]
    fn interval_endpoint_on_spectrum() {
        let t = HermitianOperator::from_real_diagonal(&[-0.3, 0.0, 0.2, 5.0]).unwrap();
        assert!(matches!(
            spectral_projection_interval(&t, 0.0, 1.0),
            Err(SpecflowError::BoundaryOnSpectrum { .. })
        ));
        assert!(matches!(
            spectral_projection_contour(&t, 0.2, 1.0, 64),
            Err(SpecflowError::BoundaryOnSpectrum { .. })
        ));
    }

    #[test]
    fn contour_selects_one_eigenvector() {
        let t = HermitianOperator::from_real_diagonal(&[-1.0, 1.0]).unwrap();
        let p = spectral_projection_contour(&t, 0.0, 2.0, 64).unwrap();
        assert!(close(&p, &real(&[&[0.0, 0.0], &[0.0, 1.0]]), 1e-10));
    }

    #[test]
    fn contour_outside_spectrum_is_zero() {
        let t = HermitianOperator::scalar(5.0);
        let p = spectral_projection_contour(&t, 0.0, 1.0, 32).unwrap();
        assert!(linalg::norm(&p) <= 1e-10);
    }

    #[test]
    fn contour_rejects_few_nodes() {
        let t = HermitianOperator::scalar(5.0);
        assert!(spectral_projection_contour(&t, 0.0, 1.0, 4).is_err());
    }

    #[test]
    fn pair_inverse_identity_pair() {
        let p = OrthogonalProjection::new(real(&[&[1.0, 0.0], &[0.0, 0.0]])).unwrap();
        let q = invertible_pair_inverse(&p, &p).unwrap();
        assert!(close(&q, p.entries(), 1e-15));
    }

    #[test]
    fn pair_inverse_rotated_line() {
        let p = OrthogonalProjection::new(real(&[&[1.0, 0.0], &[0.0, 0.0]])).unwrap();
        let r = OrthogonalProjection::new(real(&[&[0.5, 0.5], &[0.5, 0.5]])).unwrap();
        let q = invertible_pair_inverse(&p, &r).unwrap();
        assert!(close(&q, &real(&[&[1.0, 0.0], &[1.0, 0.0]]), 1e-14));
    }

    #[test]
    fn pair_inverse_orthogonal_lines_fail() {
        let p = OrthogonalProjection::new(real(&[&[1.0, 0.0], &[0.0, 0.0]])).unwrap();
        let r = p.complement();
        assert!(matches!(
            invertible_pair_inverse(&p, &r),
            Err(SpecflowError::NonInvertiblePair { .. })
        ));
    }

    #[test]
    fn rejects_non_projection() {
        assert!(OrthogonalProjection::new(real(&[&[2.0, 0.0], &[0.0, 0.0]])).is_err());
    }
}
