//! The Cayley transform `Κ(T) = (T − i)(T + i)⁻¹ = I − 2i(T + i)⁻¹`, its
//! inverse, eigenphases, and a unitary path deforming any `U` with
//! `1 ∉ spec U` to `i·I`.
//!
//! Phases live in `(0, 2π]`. Under `Κ` an eigenvalue `λ` becomes the phase
//! `π + 2·arctan λ`, so `λ = 0` sits at `π` (the point `−1`) and `λ → ±∞`
//! approaches the excluded point `1` from either side.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::diagonal::{DiagonalOperator, Side};
use crate::error::{Result, SpecflowError};
use crate::linalg::{self, CMatrix, DECISION_TOL, I, STRUCTURAL_TOL};
use crate::operator::{resolvent_at_minus_i, HermitianOperator};

/// `κ(λ) = (λ − i)/(λ + i)`, with `±∞ ↦ 1`.
pub fn cayley_scalar(lambda: f64) -> Complex64 {
    if lambda.is_infinite() {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::new(lambda, -1.0) / Complex64::new(lambda, 1.0)
    }
}

/// Phase of a unit complex number in `(0, 2π]`.
pub fn phase_of(z: Complex64) -> f64 {
    let arg = z.arg();
    if arg <= 0.0 {
        arg + TAU
    } else {
        arg
    }
}

/// Distance of a phase in `(0, 2π]` from the point `1` (phase `0 ≡ 2π`).
pub fn distance_from_one(phase: f64) -> f64 {
    phase.min(TAU - phase)
}

#[derive(Clone)]
pub struct UnitaryOperator {
    entries: CMatrix,
    schur: OnceLock<std::result::Result<(CMatrix, Vec<f64>), SpecflowError>>,
}

impl fmt::Debug for UnitaryOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UnitaryOperator").field("entries", &self.entries).finish()
    }
}

impl PartialEq for UnitaryOperator {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl UnitaryOperator {
    /// Checks `‖U†U − I‖ ≤ 1e−10`.
    pub fn new(entries: CMatrix) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return Err(SpecflowError::ShapeMismatch("unitary must be square and non-empty".into()));
        }
        let defect = unitarity_defect(&entries);
        if !(defect <= STRUCTURAL_TOL) {
            return Err(SpecflowError::NonUnitaryInput { defect });
        }
        Ok(Self::from_unitary_unchecked(entries))
    }

    fn from_unitary_unchecked(entries: CMatrix) -> Self {
        Self { entries, schur: OnceLock::new() }
    }

    /// `diag(e^{iθ_j})`.
    pub fn from_phases(phases: &[f64]) -> Result<Self> {
        let n = phases.len();
        Self::new(CMatrix::from_fn(n, n, |r, c| {
            if r == c {
                Complex64::from_polar(1.0, phases[r])
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    /// `z·I` for a unit scalar `z`.
    pub fn scalar_multiple(dim: usize, z: Complex64) -> Result<Self> {
        Self::new(linalg::identity(dim).map(|w| w * z))
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn unitarity_defect(&self) -> f64 {
        unitarity_defect(&self.entries)
    }

    /// Unitary eigenvectors and eigenphases in `(0, 2π]`.
    fn schur(&self) -> Result<&(CMatrix, Vec<f64>)> {
        self.schur
            .get_or_init(|| {
                // a unitary is normal, so a generic Hermitian pencil
                // diagonalizes it; shifted QR is the fallback and can
                // stall on tight phase clusters
                let (q, diag) = normal_eigen(&self.entries).or_else(|_| linalg::schur(&self.entries))?;
                Ok((q, diag.into_iter().map(phase_of).collect()))
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Eigenphases ascending.
    pub fn phases(&self) -> Result<Vec<f64>> {
        let mut p = self.schur()?.1.clone();
        p.sort_by(f64::total_cmp);
        Ok(p)
    }
}

/// Eigenvectors of a normal matrix from those of `Re M + c·Im M`.
fn normal_eigen(m: &CMatrix) -> Result<(CMatrix, Vec<Complex64>)> {
    let half = Complex64::new(0.5, 0.0);
    let re = (m + m.adjoint()) * half;
    let im = (m - m.adjoint()) * Complex64::new(0.0, -0.5);
    let pencil = re + im * Complex64::new(0.618_033_988_749_894_9, 0.0);
    let (_, v) = linalg::hermitian_eigen(&pencil);
    let d = v.adjoint() * m * &v;
    let off = (0..d.nrows())
        .flat_map(|r| (0..d.ncols()).filter(move |&c| c != r).map(move |c| (r, c)))
        .map(|(r, c)| d[(r, c)].norm())
        .fold(0.0, f64::max);
    if off > linalg::STRUCTURAL_TOL {
        return Err(SpecflowError::NoConvergence("unitary eigendecomposition"));
    }
    let diag = (0..d.nrows()).map(|j| d[(j, j)]).collect();
    Ok((v, diag))
}

fn unitarity_defect(m: &CMatrix) -> f64 {
    linalg::norm(&(m.adjoint() * m - linalg::identity(m.nrows())))
}

/// Eigenphases of a unitary, ascending in `(0, 2π]`, with multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenphaseSet {
    pub phases: Vec<f64>,
}

impl EigenphaseSet {
    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    /// Smallest distance of any phase from the point `1`.
    pub fn min_distance_from_one(&self) -> f64 {
        self.phases.iter().map(|&p| distance_from_one(p)).fold(f64::INFINITY, f64::min)
    }

    /// Distinct phases with multiplicities, clustering within `tol`.
    pub fn multiplicities(&self, tol: f64) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize)> = Vec::new();
        for &p in &self.phases {
            match out.last_mut() {
                Some((q, m)) if (p - *q).abs() <= tol => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }
}

pub fn eigenphases(u: &UnitaryOperator, require_injective: bool) -> Result<EigenphaseSet> {
    let set = EigenphaseSet { phases: u.phases()? };
    if require_injective {
        let distance = set.min_distance_from_one();
        if distance < DECISION_TOL {
            return Err(SpecflowError::UnitEigenvalue { distance });
        }
    }
    Ok(set)
}

pub fn cayley(t: &HermitianOperator) -> UnitaryOperator {
    let n = t.dim();
    let r = resolvent_at_minus_i(t);
    UnitaryOperator::from_unitary_unchecked(linalg::identity(n) - r.map(|z| z * I * 2.0))
}

/// `T = i(I + U)(I − U)⁻¹`, requiring every eigenphase at least 1e−8 from 0.
pub fn inverse_cayley(u: &UnitaryOperator) -> Result<HermitianOperator> {
    eigenphases(u, true)?;
    let n = u.dim();
    let eye = linalg::identity(n);
    let minus = &eye - u.entries();
    let plus = (&eye + u.entries()).map(|z| z * I);
    let inv = linalg::inverse(&minus).ok_or(SpecflowError::UnitEigenvalue { distance: 0.0 })?;
    let t = plus * inv;
    Ok(HermitianOperator::from_hermitian_unchecked(linalg::hermitian_part(&t)))
}

/// Pointwise Cayley image of a diagonal operator.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSequence {
    source: DiagonalOperator,
}

pub fn cayley_diagonal(t: &DiagonalOperator) -> PhaseSequence {
    PhaseSequence { source: t.clone() }
}

impl PhaseSequence {
    pub fn source(&self) -> &DiagonalOperator {
        &self.source
    }

    pub fn phase(&self, k: i64) -> Option<f64> {
        self.source.eigenvalue(k).map(|l| phase_of(cayley_scalar(l)))
    }

    /// Phase of the limit point; `2π` (the point 1) for affine tails.
    pub fn limit_phase(&self, side: Side) -> Option<f64> {
        self.source.limit(side).map(|l| phase_of(cayley_scalar(l)))
    }

    /// Eigenphases `θ` with `|θ − π| ≤ width`, ascending.
    pub fn phases_near_minus_one(&self, width: f64) -> Result<Vec<f64>> {
        if !(width < PI) {
            return Err(SpecflowError::InvalidArgument(format!("phase width {width} must be below π")));
        }
        // |θ − π| ≤ w  ⇔  |λ| ≤ tan(w/2); widen slightly and filter on phases
        let reach = (0.5 * width).tan() * (1.0 + 1e-9) + 1e-300;
        let mut phases: Vec<f64> = self
            .source
            .indices_within(reach)?
            .into_iter()
            .map(|(_, l)| phase_of(cayley_scalar(l)))
            .filter(|p| (p - PI).abs() <= width)
            .collect();
        phases.sort_by(f64::total_cmp);
        Ok(phases)
    }
}

/// Discrete unitary path from `U` to `i·I` avoiding the eigenvalue 1.
///
/// In the Schur basis of `U`, phases in `(0, π)` move affinely to `π/2`
/// and phases in `[π, 2π)` to `3π/2` over the first half of the path; over
/// the second half the `3π/2` block rotates through `π` down to `π/2`.
/// The first sample is `U` itself and the last is exactly `i·I`.
pub fn connect_to_ii(u: &UnitaryOperator, steps: usize) -> Result<Vec<UnitaryOperator>> {
    if steps < 2 {
        return Err(SpecflowError::InvalidArgument(format!("need at least 2 steps, got {steps}")));
    }
    eigenphases(u, true)?;
    let (q, phases) = u.schur()?.clone();
    let upper_arc: Vec<bool> = phases.iter().map(|&p| p < PI).collect();
    let squeeze_steps = steps.div_ceil(2);
    let rotate_steps = steps - squeeze_steps;
    let rebuild = |current: &[f64]| -> CMatrix {
        let mut scaled = q.clone();
        for (j, &p) in current.iter().enumerate() {
            let w = Complex64::from_polar(1.0, p);
            for r in 0..q.nrows() {
                scaled[(r, j)] *= w;
            }
        }
        scaled * q.adjoint()
    };

    let mut out = Vec::with_capacity(steps + 1);
    out.push(u.clone());
    for step in 1..=steps {
        let current: Vec<f64> = if step <= squeeze_steps {
            let s = step as f64 / squeeze_steps as f64;
            phases
                .iter()
                .zip(&upper_arc)
                .map(|(&p, &upper)| {
                    let target = if upper { FRAC_PI_2 } else { 3.0 * FRAC_PI_2 };
                    (1.0 - s) * p + s * target
                })
                .collect()
        } else {
            let s = (step - squeeze_steps) as f64 / rotate_steps as f64;
            upper_arc
                .iter()
                .map(|&upper| if upper { FRAC_PI_2 } else { 3.0 * FRAC_PI_2 - PI * s })
                .collect()
        };
        if step == steps {
            out.push(UnitaryOperator::scalar_multiple(u.dim(), I)?);
        } else {
            out.push(UnitaryOperator::from_unitary_unchecked(rebuild(&current)));
        }
    }
    Ok(out)
}
