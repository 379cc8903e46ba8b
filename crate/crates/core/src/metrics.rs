//! Distances on self-adjoint operators: the gap `δ`, its block form `δ₁`,
//! the resolvent distance `γ`, the Cayley distance `δ̃` and the Riesz
//! distance `φ`.
//!
//! Dense pairs use operator norms. Diagonal pairs on a shared basis reduce
//! every distance to a supremum of scalar distances over the index set,
//! including the `k → ±∞` limits. Mixed pairs are rejected.

use num_complex::Complex64;
use serde::Serialize;

use crate::cayley::{cayley, cayley_scalar};
use crate::diagonal::{pair_sup, DiagonalOperator};
use crate::error::{Result, SpecflowError};
use crate::linalg;
use crate::operator::{resolvent_at_minus_i, HermitianOperator, Operator};
use crate::projection::{graph_blocks, graph_projection};
use crate::riesz::{riesz_map, riesz_scalar};

fn pair<'a>(
    t1: &'a Operator,
    t2: &'a Operator,
) -> Result<Pair<'a>> {
    t1.check_compatible(t2)?;
    match (t1, t2) {
        (Operator::Hermitian(a), Operator::Hermitian(b)) => Ok(Pair::Dense(a, b)),
        (Operator::Diagonal(a), Operator::Diagonal(b)) => Ok(Pair::Diagonal(a, b)),
        _ => Err(SpecflowError::ShapeMismatch("mixed operator kinds".into())),
    }
}

enum Pair<'a> {
    Dense(&'a HermitianOperator, &'a HermitianOperator),
    Diagonal(&'a DiagonalOperator, &'a DiagonalOperator),
}

/// `(T + i)⁻¹` on a scalar, with `±∞ ↦ 0`.
fn resolvent_scalar(lambda: f64) -> Complex64 {
    if lambda.is_infinite() {
        Complex64::new(0.0, 0.0)
    } else {
        Complex64::new(lambda, 1.0).inv()
    }
}

/// Angle of the graph line `{(x, λx)}` in `ℂ²`.
fn graph_angle(lambda: f64) -> f64 {
    lambda.atan()
}

fn complex_gap(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm()
}

fn real_gap(a: f64, b: f64) -> f64 {
    (a - b).abs()
}

/// `δ(T₁, T₂) = ‖P₁ − P₂‖` with `P_j` the graph projections.
pub fn gap_delta(t1: &Operator, t2: &Operator) -> Result<f64> {
    match pair(t1, t2)? {
        Pair::Dense(a, b) => {
            let d = graph_projection(a).entries() - graph_projection(b).entries();
            Ok(linalg::hermitian_norm(&d))
        }
        // two lines in ℂ² at angles θ₁, θ₂: ‖P₁ − P₂‖ = |sin(θ₁ − θ₂)|
        Pair::Diagonal(a, b) => pair_sup(a, b, graph_angle, |x, y| (x - y).sin().abs()),
    }
}

/// `δ₁ = ‖R₁ − R₂‖ + ‖T₁R₁ − T₂R₂‖` with `R = (I + T²)⁻¹`.
pub fn delta_one(t1: &Operator, t2: &Operator) -> Result<f64> {
    match pair(t1, t2)? {
        Pair::Dense(a, b) => {
            let (ga, gb) = (graph_blocks(a), graph_blocks(b));
            Ok(linalg::hermitian_norm(&(ga.r - gb.r)) + linalg::hermitian_norm(&(ga.tr - gb.tr)))
        }
        Pair::Diagonal(a, b) => {
            let r = |l: f64| if l.is_infinite() { 0.0 } else { 1.0 / (1.0 + l * l) };
            let tr = |l: f64| if l.is_infinite() { 0.0 } else { l / (1.0 + l * l) };
            Ok(pair_sup(a, b, r, real_gap)? + pair_sup(a, b, tr, real_gap)?)
        }
    }
}

/// `γ(T₁, T₂) = ‖(T₁ + i)⁻¹ − (T₂ + i)⁻¹‖`.
pub fn gamma(t1: &Operator, t2: &Operator) -> Result<f64> {
    match pair(t1, t2)? {
        Pair::Dense(a, b) => Ok(linalg::norm(&(resolvent_at_minus_i(a) - resolvent_at_minus_i(b)))),
        Pair::Diagonal(a, b) => pair_sup(a, b, resolvent_scalar, complex_gap),
    }
}

/// `δ̃(T₁, T₂) = ‖Κ(T₁) − Κ(T₂)‖` with `Κ` the Cayley transform.
pub fn delta_tilde(t1: &Operator, t2: &Operator) -> Result<f64> {
    match pair(t1, t2)? {
        Pair::Dense(a, b) => {
            let d = cayley(a).entries() - cayley(b).entries();
            Ok(linalg::norm(&d))
        }
        Pair::Diagonal(a, b) => pair_sup(a, b, cayley_scalar, complex_gap),
    }
}

/// `φ(T₁, T₂) = ‖F₁ − F₂‖` with `F_T = T(I + T²)^{-1/2}`.
pub fn riesz_distance(t1: &Operator, t2: &Operator) -> Result<f64> {
    match pair(t1, t2)? {
        Pair::Dense(a, b) => {
            Ok(linalg::hermitian_norm(&(riesz_map(a).entries() - riesz_map(b).entries())))
        }
        Pair::Diagonal(a, b) => pair_sup(a, b, riesz_scalar, real_gap),
    }
}

/// Ratios between the distances; `None` when the denominator vanishes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioTable {
    pub delta1_over_delta: Option<f64>,
    pub delta1_over_gamma: Option<f64>,
    pub delta_tilde_over_gamma: Option<f64>,
    pub riesz_over_gamma: Option<f64>,
    pub gamma_over_delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport {
    pub delta: f64,
    pub delta1: f64,
    pub gamma: f64,
    pub delta_tilde: f64,
    pub riesz: f64,
    pub ratios: RatioTable,
}

pub fn metric_report(t1: &Operator, t2: &Operator) -> Result<MetricReport> {
    let delta = gap_delta(t1, t2)?;
    let delta1 = delta_one(t1, t2)?;
    let gamma = gamma(t1, t2)?;
    let delta_tilde = delta_tilde(t1, t2)?;
    let riesz = riesz_distance(t1, t2)?;
    let ratio = |num: f64, den: f64| (den > 0.0).then(|| num / den);
    Ok(MetricReport {
        delta,
        delta1,
        gamma,
        delta_tilde,
        riesz,
        ratios: RatioTable {
            delta1_over_delta: ratio(delta1, delta),
            delta1_over_gamma: ratio(delta1, gamma),
            delta_tilde_over_gamma: ratio(delta_tilde, gamma),
            riesz_over_gamma: ratio(riesz, gamma),
            gamma_over_delta: ratio(gamma, delta),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{fuglede_operator, random_hermitian};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    fn scalar(v: f64) -> Operator {
        HermitianOperator::scalar(v).into()
    }

    #[test]
    fn scalar_zero_one() {
        let (a, b) = (scalar(0.0), scalar(1.0));
        assert!((gap_delta(&a, &b).unwrap() - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((delta_one(&a, &b).unwrap() - 1.0).abs() < 1e-15);
        assert!((gamma(&a, &b).unwrap() - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((delta_tilde(&a, &b).unwrap() - SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn distances_vanish_on_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t: Operator = random_hermitian(4, &mut rng).into();
        let r = metric_report(&t, &t).unwrap();
        for v in [r.delta, r.delta1, r.gamma, r.delta_tilde, r.riesz] {
            assert!(v < 1e-14, "{v}");
        }
        assert_eq!(r.ratios.delta1_over_delta, if r.delta > 0.0 { r.ratios.delta1_over_delta } else { None });
    }

    #[test]
    fn symmetric_in_arguments() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let n = rng.random_range(1..6);
            let a: Operator = random_hermitian(n, &mut rng).into();
            let b: Operator = random_hermitian(n, &mut rng).into();
            let ab = metric_report(&a, &b).unwrap();
            let ba = metric_report(&b, &a).unwrap();
            for (x, y) in [
                (ab.delta, ba.delta),
                (ab.delta1, ba.delta1),
                (ab.gamma, ba.gamma),
                (ab.delta_tilde, ba.delta_tilde),
                (ab.riesz, ba.riesz),
            ] {
                assert!((x - y).abs() <= 1e-12 * x.max(1.0));
            }
        }
    }

    #[test]
    fn mixed_kinds_rejected() {
        let d: Operator = fuglede_operator(0, 4).unwrap().into();
        assert!(matches!(gamma(&scalar(0.0), &d), Err(SpecflowError::ShapeMismatch(_))));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let a: Operator = HermitianOperator::from_real_diagonal(&[1.0, 2.0]).unwrap().into();
        assert!(gap_delta(&a, &scalar(1.0)).is_err());
    }

    #[test]
    fn fuglede_values() {
        let t0: Operator = fuglede_operator(0, 20).unwrap().into();
        let t1: Operator = fuglede_operator(1, 20).unwrap().into();
        assert!((gamma(&t1, &t0).unwrap() - 1.0).abs() < 1e-15);
        assert!((riesz_distance(&t1, &t0).unwrap() - SQRT_2).abs() < 1e-15);
        let t5: Operator = fuglede_operator(5, 20).unwrap().into();
        assert!((gamma(&t5, &t0).unwrap() - 10.0 / 26.0).abs() < 1e-15);
    }

    #[test]
    fn diagonal_gap_matches_dense_on_finite_blocks() {
        let a = DiagonalOperator::finite(0, vec![-1.0, 0.3, 2.0]).unwrap();
        let b = DiagonalOperator::finite(0, vec![0.5, 0.3, -4.0]).unwrap();
        let da = HermitianOperator::from_real_diagonal(a.explicit()).unwrap();
        let db = HermitianOperator::from_real_diagonal(b.explicit()).unwrap();
        let diag = metric_report(&a.into(), &b.into()).unwrap();
        let dense = metric_report(&da.into(), &db.into()).unwrap();
        for (x, y) in [
            (diag.delta, dense.delta),
            (diag.delta1, dense.delta1),
            (diag.gamma, dense.gamma),
            (diag.delta_tilde, dense.delta_tilde),
            (diag.riesz, dense.riesz),
        ] {
            assert!((x - y).abs() < 1e-12, "{x} vs {y}");
        }
    }
}
