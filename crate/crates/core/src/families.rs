//! Named operator families and seeded generators.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::diagonal::{DiagonalOperator, Tail};
use crate::error::{Result, SpecflowError};
use crate::flow::{uniform_grid, OperatorPath};
use crate::linalg::CMatrix;
use crate::operator::{HermitianOperator, Operator};

pub const DEFAULT_SAMPLES: usize = 201;
pub const DEFAULT_FUGLEDE_HORIZON: usize = 64;

/// `(G + G†)/2` with independent standard complex Gaussian entries.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HermitianOperator {
    let g = CMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    HermitianOperator::from_hermitian_unchecked((&g + g.adjoint()).scale(0.5))
}

/// Diagonal operator with an affine upper tail and, half the time, an
/// affine lower tail; explicit values are uniform in `[−20, 20]`.
pub fn random_diagonal_with_tail<R: Rng + ?Sized>(rng: &mut R) -> DiagonalOperator {
    let slope = |rng: &mut R| {
        let s: f64 = rng.random_range(0.5..3.0);
        if rng.random_bool(0.5) { s } else { -s }
    };
    let first: i64 = rng.random_range(-5..=5);
    let len: usize = rng.random_range(2..=12);
    let last = first + len as i64 - 1;
    let mut explicit: Vec<f64> = (0..len).map(|_| rng.random_range(-20.0..20.0)).collect();
    let upper = Tail::new(slope(rng), rng.random_range(-5.0..5.0));
    explicit[len - 1] = upper.at(last);
    let lower = rng.random_bool(0.5).then(|| Tail::new(slope(rng), rng.random_range(-5.0..5.0)));
    if let Some(lower) = lower {
        explicit[0] = lower.at(first);
    }
    DiagonalOperator::new(first, explicit, lower, Some(upper), crate::diagonal::DEFAULT_EVAL_HORIZON)
        .expect("tails match the explicit block by construction")
}

/// `T₀ = diag(1, 2, 3, …)` on `k ≥ 1`, or `Tₙ` with `λₙ = −n` for `n ≥ 1`.
pub fn fuglede_operator(n: usize, horizon: usize) -> Result<DiagonalOperator> {
    if horizon == 0 || n > horizon {
        return Err(SpecflowError::BadIndex { index: n, horizon });
    }
    // the explicit block runs one past the horizon so λ_horizon may flip sign
    let mut explicit: Vec<f64> = (1..=horizon as i64 + 1).map(|k| k as f64).collect();
    if n >= 1 {
        explicit[n - 1] = -(n as f64);
    }
    let horizon_eval = horizon.max(crate::diagonal::DEFAULT_EVAL_HORIZON);
    DiagonalOperator::new(1, explicit, None, Some(Tail::new(1.0, 0.0)), horizon_eval)
}

/// `½(Tₙ + Tₙ₊₁)`.
pub fn fuglede_midpoint(n: usize, horizon: usize) -> Result<DiagonalOperator> {
    if n == 0 || n + 1 > horizon {
        return Err(SpecflowError::BadIndex { index: n + 1, horizon });
    }
    fuglede_operator(n, horizon)?.lerp(&fuglede_operator(n + 1, horizon)?, 0.5)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FugledeFamily {
    pub t0: DiagonalOperator,
    pub tn: DiagonalOperator,
    /// `(1 − t)T₀ + t·Tₙ`, uniformly sampled.
    pub path: OperatorPath,
}

pub fn fuglede_family(horizon: usize, n: usize, samples: usize) -> Result<FugledeFamily> {
    if n == 0 {
        return Err(SpecflowError::BadIndex { index: n, horizon });
    }
    let t0 = fuglede_operator(0, horizon)?;
    let tn = fuglede_operator(n, horizon)?;
    let path = linear_path(&t0.clone().into(), &tn.clone().into(), samples)?;
    let path = OperatorPath::new(path.params().to_vec(), path.samples().to_vec(), format!("fuglede(n={n})"))?;
    Ok(FugledeFamily { t0, tn, path })
}

/// Uniform samples of `(1 − t)A + tB`.
pub fn linear_path(a: &Operator, b: &Operator, samples: usize) -> Result<OperatorPath> {
    a.check_compatible(b)?;
    check_samples(samples)?;
    let grid = uniform_grid(samples);
    let ops = grid
        .iter()
        .enumerate()
        .map(|(j, &t)| match j {
            0 => Ok(a.clone()),
            _ if j == samples - 1 => Ok(b.clone()),
            _ => a.lerp(b, t),
        })
        .collect::<Result<Vec<_>>>()?;
    OperatorPath::new(grid, ops, "linear")
}

/// Eigenvalue lattice `λ_k(t) = 2π(k + offset + m·t)`, explicit for
/// `|k| ≤ k_range` and affine beyond.
///
/// At `t = 1` the lattice coincides with the `t = 0` lattice shifted by
/// `m` indices, which is how a run of the family closes into a loop; the
/// run starting at `offset = m` continues it exactly.
pub fn dirac_interval_family(k_range: usize, m: i64, samples: usize, offset: i64) -> Result<OperatorPath> {
    if k_range < 2 {
        return Err(SpecflowError::InvalidArgument(format!("k_range must be at least 2, got {k_range}")));
    }
    check_samples(samples)?;
    let k = k_range as i64;
    let grid = uniform_grid(samples);
    let ops = grid
        .iter()
        .map(|&t| {
            let tail = Tail::new(2.0 * PI, 2.0 * PI * (offset as f64 + m as f64 * t));
            let explicit = (-k..=k).map(|j| tail.at(j)).collect();
            DiagonalOperator::new(-k, explicit, Some(tail), Some(tail), crate::diagonal::DEFAULT_EVAL_HORIZON)
                .map(Operator::from)
        })
        .collect::<Result<Vec<_>>>()?;
    OperatorPath::new(grid, ops, format!("dirac1d(m={m},offset={offset})"))
}

/// A dirac run read as a loop in the quotient by index shift; its flow is `m`.
pub fn flow_loop(k_range: usize, m: i64, samples: usize) -> Result<OperatorPath> {
    let path = dirac_interval_family(k_range, m, samples, 0)?;
    OperatorPath::new(path.params().to_vec(), path.samples().to_vec(), format!("flow_loop(m={m})"))
}

/// `A(t) = A₀ + t·A₁ + sin(πt)·A₂` with Gaussian Hermitian draws; the
/// closed variant drops `A₁` and pins the last sample to the first.
pub fn random_hermitian_path(dim: usize, samples: usize, seed: u64, closed: bool) -> Result<OperatorPath> {
    if dim == 0 {
        return Err(SpecflowError::InvalidArgument("dimension must be at least 1".into()));
    }
    check_samples(samples)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a0 = random_hermitian(dim, &mut rng);
    let a1 = random_hermitian(dim, &mut rng);
    let a2 = random_hermitian(dim, &mut rng);
    let grid = uniform_grid(samples);
    let mut ops: Vec<Operator> = grid
        .iter()
        .map(|&t| {
            let drift = if closed { 0.0 } else { t };
            let m = a0.entries() + a1.entries().scale(drift) + a2.entries().scale((PI * t).sin());
            HermitianOperator::from_hermitian_unchecked(m).into()
        })
        .collect();
    if closed {
        ops[samples - 1] = ops[0].clone();
    }
    let tag = format!("random(dim={dim},seed={seed}{})", if closed { ",closed" } else { "" });
    OperatorPath::new(grid, ops, tag)
}

/// `A(t) = (1 − t)·start + t·end + sin(πt)·B` with a Gaussian `B`; the
/// endpoints are reproduced exactly.
pub fn random_bridge(start: &HermitianOperator, end: &HermitianOperator, samples: usize, seed: u64) -> Result<OperatorPath> {
    if start.dim() != end.dim() {
        return Err(SpecflowError::ShapeMismatch(format!("dimensions {} and {}", start.dim(), end.dim())));
    }
    check_samples(samples)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = random_hermitian(start.dim(), &mut rng);
    let grid = uniform_grid(samples);
    let ops = grid
        .iter()
        .enumerate()
        .map(|(j, &t)| -> Operator {
            if j == 0 {
                start.clone().into()
            } else if j == samples - 1 {
                end.clone().into()
            } else {
                let m = start.entries().scale(1.0 - t) + end.entries().scale(t) + b.entries().scale((PI * t).sin());
                HermitianOperator::from_hermitian_unchecked(m).into()
            }
        })
        .collect();
    OperatorPath::new(grid, ops, format!("bridge(seed={seed})"))
}

fn check_samples(samples: usize) -> Result<()> {
    if samples < 2 {
        return Err(SpecflowError::InvalidArgument(format!("need at least 2 samples, got {samples}")));
    }
    Ok(())
}

fn default_samples() -> usize {
    DEFAULT_SAMPLES
}

fn default_horizon() -> usize {
    DEFAULT_FUGLEDE_HORIZON
}

/// Declarative description of a path family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    Fuglede {
        #[serde(default = "default_horizon")]
        horizon: usize,
        n: usize,
        #[serde(default = "default_samples")]
        samples: usize,
    },
    /// Segment between two real symmetric matrices given by rows.
    Linear {
        a: Vec<Vec<f64>>,
        b: Vec<Vec<f64>>,
        #[serde(default = "default_samples")]
        samples: usize,
    },
    Dirac1d {
        k_range: usize,
        m: i64,
        #[serde(default)]
        offset: i64,
        #[serde(default = "default_samples")]
        samples: usize,
    },
    Random {
        dim: usize,
        seed: u64,
        #[serde(default)]
        closed: bool,
        #[serde(default = "default_samples")]
        samples: usize,
    },
    FlowLoop {
        k_range: usize,
        m: i64,
        #[serde(default = "default_samples")]
        samples: usize,
    },
}

impl FamilySpec {
    pub fn kind(&self) -> &'static str {
        match self {
            FamilySpec::Fuglede { .. } => "fuglede",
            FamilySpec::Linear { .. } => "linear",
            FamilySpec::Dirac1d { .. } => "dirac1d",
            FamilySpec::Random { .. } => "random",
            FamilySpec::FlowLoop { .. } => "flow_loop",
        }
    }

    pub fn samples(&self) -> usize {
        match *self {
            FamilySpec::Fuglede { samples, .. }
            | FamilySpec::Linear { samples, .. }
            | FamilySpec::Dirac1d { samples, .. }
            | FamilySpec::Random { samples, .. }
            | FamilySpec::FlowLoop { samples, .. } => samples,
        }
    }

    pub fn build(&self) -> Result<OperatorPath> {
        match self {
            &FamilySpec::Fuglede { horizon, n, samples } => Ok(fuglede_family(horizon, n, samples)?.path),
            FamilySpec::Linear { a, b, samples } => {
                let a = HermitianOperator::from_real_rows(a)?;
                let b = HermitianOperator::from_real_rows(b)?;
                linear_path(&a.into(), &b.into(), *samples)
            }
            &FamilySpec::Dirac1d { k_range, m, offset, samples } => {
                dirac_interval_family(k_range, m, samples, offset)
            }
            &FamilySpec::Random { dim, seed, closed, samples } => {
                random_hermitian_path(dim, samples, seed, closed)
            }
            &FamilySpec::FlowLoop { k_range, m, samples } => flow_loop(k_range, m, samples),
        }
    }
}
