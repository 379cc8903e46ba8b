//! The bounded transform `F_T = T(I + T²)^{-1/2}` and its inverse.

use crate::diagonal::{DiagonalOperator, SpectralImage};
use crate::error::{Result, SpecflowError};
use crate::linalg::DECISION_TOL;
use crate::operator::HermitianOperator;

/// `λ ↦ λ/√(1+λ²)`, extended by `±∞ ↦ ±1`.
pub fn riesz_scalar(lambda: f64) -> f64 {
    if lambda.is_infinite() {
        lambda.signum()
    } else {
        lambda / (1.0 + lambda * lambda).sqrt()
    }
}

pub fn riesz_map(t: &HermitianOperator) -> HermitianOperator {
    t.apply(riesz_scalar)
}

/// Riesz image of a diagonal operator; affine tails converge to `±1`.
pub fn riesz_map_diagonal(t: &DiagonalOperator) -> SpectralImage<f64> {
    t.image(riesz_scalar)
}

/// `S(I − S²)^{-1/2}`, defined when every eigenvalue of `S` stays at least
/// 1e−8 away from `±1`.
pub fn riesz_inverse(s: &HermitianOperator) -> Result<HermitianOperator> {
    let distance = s
        .eigenvalues()
        .iter()
        .map(|v| 1.0 - v.abs())
        .fold(f64::INFINITY, f64::min);
    if distance < DECISION_TOL {
        return Err(SpecflowError::NearUnitEigenvalue { distance });
    }
    Ok(s.apply(|v| v / (1.0 - v * v).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::random_hermitian;
    use crate::linalg;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn scalar_values() {
        assert_eq!(riesz_map(&HermitianOperator::scalar(0.0)).entries()[(0, 0)].re, 0.0);
        let one = riesz_map(&HermitianOperator::scalar(1.0)).entries()[(0, 0)].re;
        assert!((one - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(riesz_scalar(f64::NEG_INFINITY), -1.0);
    }

    #[test]
    fn inverse_of_scalars() {
        let s = HermitianOperator::scalar(std::f64::consts::FRAC_1_SQRT_2);
        assert!((riesz_inverse(&s).unwrap().entries()[(0, 0)].re - 1.0).abs() < 1e-14);
        assert_eq!(riesz_inverse(&HermitianOperator::scalar(0.0)).unwrap().entries()[(0, 0)].re, 0.0);
    }

    #[test]
    fn inverse_rejects_unit_eigenvalue() {
        let s = HermitianOperator::from_real_diagonal(&[0.2, 1.0 - 1e-10]).unwrap();
        assert!(matches!(riesz_inverse(&s), Err(SpecflowError::NearUnitEigenvalue { .. })));
    }

    #[test]
    fn round_trip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let t = random_hermitian(6, &mut rng);
        let back = riesz_inverse(&riesz_map(&t)).unwrap();
        assert!(linalg::norm(&(back.entries() - t.entries())) <= 1e-9);
        assert!(riesz_map(&t).norm() <= 1.0);
    }

    #[test]
    fn fuglede_index_difference() {
        // T₀ and Tₙ differ only at index n, where n becomes −n
        let n = 5.0f64;
        let diff = riesz_scalar(n) - riesz_scalar(-n);
        assert!((diff - 2.0 * n / (1.0 + n * n).sqrt()).abs() < 1e-15);
        assert!((diff - 1.961_161_351_381_840_3).abs() < 1e-12);
    }
}
