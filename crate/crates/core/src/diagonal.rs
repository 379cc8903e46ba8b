//! Diagonal operators with affine eigenvalue tails.
//!
//! A [`DiagonalOperator`] is a real eigenvalue sequence `λ_k` over a fixed
//! orthonormal basis `{e_k}`. A finite explicit block is followed on either
//! side by an optional affine tail `λ_k = slope·k + intercept`, which is how
//! genuinely unbounded operators (`λ_k = k`) are represented exactly.
//!
//! Suprema over the index set are evaluated over the explicit block,
//! `eval_horizon` tail indices beyond it, and the analytic limit `k → ±∞`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpecflowError};

/// Tail eigenvalues beyond the explicit block, `λ_k = slope·k + intercept`.
///
/// `slope == 0` is a constant tail; it only arises from bounded truncation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tail {
    pub slope: f64,
    pub intercept: f64,
}

impl Tail {
    pub fn new(slope: f64, intercept: f64) -> Self {
        Self { slope, intercept }
    }

    pub fn constant(value: f64) -> Self {
        Self { slope: 0.0, intercept: value }
    }

    pub fn at(&self, k: i64) -> f64 {
        self.slope * k as f64 + self.intercept
    }

    /// Limit as `k → +∞`.
    fn upper_limit(&self) -> f64 {
        if self.slope > 0.0 {
            f64::INFINITY
        } else if self.slope < 0.0 {
            f64::NEG_INFINITY
        } else {
            self.intercept
        }
    }

    /// Limit as `k → −∞`.
    fn lower_limit(&self) -> f64 {
        -Tail { slope: self.slope, intercept: -self.intercept }.upper_limit()
    }

    fn lerp(&self, other: &Tail, t: f64) -> Tail {
        Tail {
            slope: (1.0 - t) * self.slope + t * other.slope,
            intercept: (1.0 - t) * self.intercept + t * other.intercept,
        }
    }

    /// Indices `k` with `|slope·k + intercept| ≤ radius`, as a real interval.
    fn index_interval(&self, radius: f64) -> Option<(f64, f64)> {
        if self.slope == 0.0 {
            return None;
        }
        let a = (-radius - self.intercept) / self.slope;
        let b = (radius - self.intercept) / self.slope;
        Some((a.min(b), a.max(b)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lower,
    Upper,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalOperator {
    first_index: i64,
    explicit: Vec<f64>,
    lower_tail: Option<Tail>,
    upper_tail: Option<Tail>,
    eval_horizon: usize,
}

pub const DEFAULT_EVAL_HORIZON: usize = 64;

/// Guard against runaway tail enumeration.
const MAX_TAIL_ENUMERATION: i64 = 10_000_000;

impl DiagonalOperator {
    pub fn new(
        first_index: i64,
        explicit: Vec<f64>,
        lower_tail: Option<Tail>,
        upper_tail: Option<Tail>,
        eval_horizon: usize,
    ) -> Result<Self> {
        if explicit.is_empty() {
            return Err(SpecflowError::InvalidDiagonal("explicit block is empty".into()));
        }
        if eval_horizon == 0 {
            return Err(SpecflowError::InvalidDiagonal("eval_horizon must be positive".into()));
        }
        if explicit.iter().any(|v| !v.is_finite()) {
            return Err(SpecflowError::InvalidDiagonal("non-finite eigenvalue".into()));
        }
        let op = Self { first_index, explicit, lower_tail, upper_tail, eval_horizon };
        for (side, tail) in [(Side::Lower, lower_tail), (Side::Upper, upper_tail)] {
            let Some(tail) = tail else { continue };
            if !tail.slope.is_finite() || !tail.intercept.is_finite() {
                return Err(SpecflowError::InvalidDiagonal("non-finite tail".into()));
            }
            let k = match side {
                Side::Lower => op.first_index,
                Side::Upper => op.last_index(),
            };
            let explicit = op.explicit[(k - op.first_index) as usize];
            let expected = tail.at(k);
            if (explicit - expected).abs() > 1e-12 * 1f64.max(expected.abs()) {
                return Err(SpecflowError::InvalidDiagonal(format!(
                    "tail gives {expected} at handoff index {k}, explicit block has {explicit}"
                )));
            }
        }
        Ok(op)
    }

    /// Finite diagonal matrix indexed from `first_index`.
    pub fn finite(first_index: i64, explicit: Vec<f64>) -> Result<Self> {
        Self::new(first_index, explicit, None, None, DEFAULT_EVAL_HORIZON)
    }

    pub fn first_index(&self) -> i64 {
        self.first_index
    }

    pub fn last_index(&self) -> i64 {
        self.first_index + self.explicit.len() as i64 - 1
    }

    pub fn explicit(&self) -> &[f64] {
        &self.explicit
    }

    pub fn lower_tail(&self) -> Option<Tail> {
        self.lower_tail
    }

    pub fn upper_tail(&self) -> Option<Tail> {
        self.upper_tail
    }

    pub fn eval_horizon(&self) -> usize {
        self.eval_horizon
    }

    pub fn with_eval_horizon(mut self, eval_horizon: usize) -> Result<Self> {
        if eval_horizon == 0 {
            return Err(SpecflowError::InvalidDiagonal("eval_horizon must be positive".into()));
        }
        self.eval_horizon = eval_horizon;
        Ok(self)
    }

    pub fn is_finite_rank(&self) -> bool {
        self.lower_tail.is_none() && self.upper_tail.is_none()
    }

    /// `λ_k`, or `None` when `k` is outside the index set.
    pub fn eigenvalue(&self, k: i64) -> Option<f64> {
        if k < self.first_index {
            self.lower_tail.map(|t| t.at(k))
        } else if k > self.last_index() {
            self.upper_tail.map(|t| t.at(k))
        } else {
            Some(self.explicit[(k - self.first_index) as usize])
        }
    }

    /// `lim λ_k` on the given side (possibly infinite); `None` without a tail.
    pub fn limit(&self, side: Side) -> Option<f64> {
        match side {
            Side::Lower => self.lower_tail.map(|t| t.lower_limit()),
            Side::Upper => self.upper_tail.map(|t| t.upper_limit()),
        }
    }

    pub fn scale(&self) -> f64 {
        self.explicit.iter().map(|v| v.abs()).fold(1.0, f64::max)
    }

    pub fn check_same_structure(&self, other: &Self) -> Result<()> {
        let same = self.lower_tail.is_some() == other.lower_tail.is_some()
            && (self.lower_tail.is_some() || self.first_index == other.first_index)
            && self.upper_tail.is_some() == other.upper_tail.is_some()
            && (self.upper_tail.is_some() || self.last_index() == other.last_index());
        if same {
            Ok(())
        } else {
            Err(SpecflowError::ShapeMismatch(
                "diagonal operators have different index structures".into(),
            ))
        }
    }

    /// Indices covered by the explicit blocks of both operators, extended by
    /// the evaluation horizon on every side that carries a tail.
    pub(crate) fn eval_range(&self, other: &Self) -> (i64, i64) {
        let horizon = self.eval_horizon.max(other.eval_horizon) as i64;
        let lo = self.first_index.min(other.first_index)
            - if self.lower_tail.is_some() { horizon } else { 0 };
        let hi = self.last_index().max(other.last_index())
            + if self.upper_tail.is_some() { horizon } else { 0 };
        (lo, hi)
    }

    /// Image of the eigenvalue sequence under a scalar function that also
    /// accepts `±∞`.
    pub fn image<V>(&self, f: impl Fn(f64) -> V) -> SpectralImage<V> {
        let (lo, hi) = self.eval_range(self);
        SpectralImage {
            first_index: lo,
            values: (lo..=hi).map(|k| f(self.eigenvalue(k).expect("in range"))).collect(),
            lower_limit: self.limit(Side::Lower).map(&f),
            upper_limit: self.limit(Side::Upper).map(&f),
        }
    }

    /// Eigenvalues with `|λ| ≤ radius`, ascending, with multiplicity.
    pub fn eigenvalues_within(&self, radius: f64) -> Result<Vec<f64>> {
        let mut out: Vec<f64> = self.indices_within(radius)?.into_iter().map(|(_, v)| v).collect();
        out.sort_by(f64::total_cmp);
        Ok(out)
    }

    /// `(k, λ_k)` for every index with `|λ_k| ≤ radius`, ascending in `k`.
    pub fn indices_within(&self, radius: f64) -> Result<Vec<(i64, f64)>> {
        let mut out = Vec::new();
        if let Some(tail) = self.lower_tail {
            out.extend(tail_indices(tail, radius, i64::MIN, self.first_index - 1)?);
        }
        for (j, &v) in self.explicit.iter().enumerate() {
            if v.abs() <= radius {
                out.push((self.first_index + j as i64, v));
            }
        }
        if let Some(tail) = self.upper_tail {
            out.extend(tail_indices(tail, radius, self.last_index() + 1, i64::MAX)?);
        }
        Ok(out)
    }

    pub fn distance_to_spectrum(&self, z: Complex64) -> f64 {
        let dist = |v: f64| (Complex64::new(v, 0.0) - z).norm();
        let mut best = self.explicit.iter().map(|&v| dist(v)).fold(f64::INFINITY, f64::min);
        let tails = [
            (self.lower_tail, i64::MIN, self.first_index - 1),
            (self.upper_tail, self.last_index() + 1, i64::MAX),
        ];
        for (tail, lo, hi) in tails {
            let Some(tail) = tail else { continue };
            if tail.slope == 0.0 {
                best = best.min(dist(tail.intercept));
                continue;
            }
            let nearest = ((z.re - tail.intercept) / tail.slope).round();
            let nearest = nearest.clamp(lo as f64, hi as f64) as i64;
            for k in [nearest.saturating_sub(1), nearest, nearest.saturating_add(1)] {
                if (lo..=hi).contains(&k) {
                    best = best.min(dist(tail.at(k)));
                }
            }
        }
        best
    }

    /// `(1 − t)·self + t·other` on a shared index structure.
    pub fn lerp(&self, other: &Self, t: f64) -> Result<Self> {
        self.check_same_structure(other)?;
        let first = self.first_index.min(other.first_index);
        let last = self.last_index().max(other.last_index());
        let explicit = (first..=last)
            .map(|k| {
                let a = self.eigenvalue(k).expect("shared structure");
                let b = other.eigenvalue(k).expect("shared structure");
                (1.0 - t) * a + t * b
            })
            .collect();
        let tail = |a: Option<Tail>, b: Option<Tail>| match (a, b) {
            (Some(a), Some(b)) => Some(a.lerp(&b, t)),
            _ => None,
        };
        Self::new(
            first,
            explicit,
            tail(self.lower_tail, other.lower_tail),
            tail(self.upper_tail, other.upper_tail),
            self.eval_horizon.max(other.eval_horizon),
        )
    }

    /// Same operator with a different value at one index.
    pub fn with_eigenvalue(&self, k: i64, value: f64) -> Result<Self> {
        if k < self.first_index || k > self.last_index() {
            return Err(SpecflowError::InvalidArgument(format!(
                "index {k} is outside the explicit block"
            )));
        }
        let mut explicit = self.explicit.clone();
        explicit[(k - self.first_index) as usize] = value;
        Self::new(self.first_index, explicit, self.lower_tail, self.upper_tail, self.eval_horizon)
    }

    /// `sup_k |λ_k − μ_k|`, infinite when the tails diverge from each other.
    pub fn max_eigenvalue_gap(&self, other: &Self) -> Result<f64> {
        self.check_same_structure(other)?;
        let (lo, hi) = self.eval_range(other);
        let mut gap = (lo..=hi)
            .map(|k| (self.eigenvalue(k).unwrap() - other.eigenvalue(k).unwrap()).abs())
            .fold(0.0, f64::max);
        for (a, b) in [(self.lower_tail, other.lower_tail), (self.upper_tail, other.upper_tail)] {
            if let (Some(a), Some(b)) = (a, b) {
                if a.slope != b.slope {
                    return Ok(f64::INFINITY);
                }
                gap = gap.max((a.intercept - b.intercept).abs());
            }
        }
        Ok(gap)
    }

    /// Whether any eigenvalue lies strictly on different sides of `level` in
    /// `self` and `next`, index by index (exact for linear interpolation).
    pub(crate) fn changes_side(&self, next: &Self, level: f64) -> Result<bool> {
        self.check_same_structure(next)?;
        let (mut lo, mut hi) = self.eval_range(next);
        for op in [self, next] {
            for (side, tail) in [(Side::Lower, op.lower_tail), (Side::Upper, op.upper_tail)] {
                let Some(tail) = tail else { continue };
                // the index where this tail meets the level bounds the search
                if tail.slope != 0.0 {
                    let k = ((level - tail.intercept) / tail.slope).round();
                    if k.abs() > MAX_TAIL_ENUMERATION as f64 {
                        return Err(SpecflowError::InvalidDiagonal(
                            "tail crosses the barrier too far out".into(),
                        ));
                    }
                    let k = k as i64;
                    match side {
                        Side::Lower => lo = lo.min(k - 1),
                        Side::Upper => hi = hi.max(k + 1),
                    }
                }
            }
        }
        for k in lo..=hi {
            let a = self.eigenvalue(k).unwrap() > level;
            let b = next.eigenvalue(k).unwrap() > level;
            if a != b {
                return Ok(true);
            }
        }
        for side in [Side::Lower, Side::Upper] {
            if let (Some(a), Some(b)) = (self.limit(side), next.limit(side)) {
                if (a > level) != (b > level) {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
}

fn tail_indices(tail: Tail, radius: f64, lo: i64, hi: i64) -> Result<Vec<(i64, f64)>> {
    if tail.slope == 0.0 {
        if tail.intercept.abs() <= radius {
            return Err(SpecflowError::InfiniteMultiplicity { value: tail.intercept });
        }
        return Ok(Vec::new());
    }
    let Some((a, b)) = tail.index_interval(radius) else {
        return Ok(Vec::new());
    };
    let start = (a.floor() - 1.0).max(lo as f64);
    let end = (b.ceil() + 1.0).min(hi as f64);
    if start > end {
        return Ok(Vec::new());
    }
    if end - start > MAX_TAIL_ENUMERATION as f64 {
        return Err(SpecflowError::InvalidDiagonal("tail window is too wide to enumerate".into()));
    }
    Ok((start as i64..=end as i64)
        .map(|k| (k, tail.at(k)))
        .filter(|(_, v)| v.abs() <= radius)
        .collect())
}

/// Scalar sequence `f(λ_k)` over an index range, plus the tail limits.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralImage<V> {
    pub first_index: i64,
    pub values: Vec<V>,
    pub lower_limit: Option<V>,
    pub upper_limit: Option<V>,
}

impl<V: Copy> SpectralImage<V> {
    pub fn at(&self, k: i64) -> Option<V> {
        let j = k.checked_sub(self.first_index)?;
        usize::try_from(j).ok().and_then(|j| self.values.get(j).copied())
    }
}

/// `sup_k dist(f(λ_k), f(μ_k))` over the shared evaluation range and the
/// tail limits.
pub(crate) fn pair_sup<V>(
    a: &DiagonalOperator,
    b: &DiagonalOperator,
    f: impl Fn(f64) -> V,
    dist: impl Fn(V, V) -> f64,
) -> Result<f64> {
    a.check_same_structure(b)?;
    let (lo, hi) = a.eval_range(b);
    let mut sup = 0.0f64;
    for k in lo..=hi {
        let d = dist(f(a.eigenvalue(k).unwrap()), f(b.eigenvalue(k).unwrap()));
        sup = sup.max(d);
    }
    for side in [Side::Lower, Side::Upper] {
        if let (Some(x), Some(y)) = (a.limit(side), b.limit(side)) {
            sup = sup.max(dist(f(x), f(y)));
        }
    }
    Ok(sup)
}

/// Clamp every eigenvalue to `[−n, n]`; the tails become constant `±n`.
pub fn bounded_truncation(t: &DiagonalOperator, n: f64) -> Result<DiagonalOperator> {
    if !(n > 0.0) || !n.is_finite() {
        return Err(SpecflowError::InvalidArgument(format!("truncation level {n} must be positive")));
    }
    let clamp = |v: f64| v.clamp(-n, n);
    let mut upper: Vec<f64> = Vec::new();
    let mut upper_tail = None;
    if let Some(tail) = t.upper_tail {
        let limit = tail.upper_limit();
        if tail.slope != 0.0 {
            let dir = limit.signum();
            let mut k = t.last_index() + 1;
            loop {
                let v = tail.at(k);
                upper.push(clamp(v));
                if v * dir > n {
                    break;
                }
                k += 1;
                if k - t.last_index() > MAX_TAIL_ENUMERATION {
                    return Err(SpecflowError::InvalidDiagonal("tail too flat to truncate".into()));
                }
            }
        }
        upper_tail = Some(Tail::constant(clamp(limit)));
    }
    let mut lower: Vec<f64> = Vec::new();
    let mut lower_tail = None;
    if let Some(tail) = t.lower_tail {
        let limit = tail.lower_limit();
        if tail.slope != 0.0 {
            let dir = limit.signum();
            let mut k = t.first_index - 1;
            loop {
                let v = tail.at(k);
                lower.push(clamp(v));
                if v * dir > n {
                    break;
                }
                k -= 1;
                if t.first_index - k > MAX_TAIL_ENUMERATION {
                    return Err(SpecflowError::InvalidDiagonal("tail too flat to truncate".into()));
                }
            }
        }
        lower_tail = Some(Tail::constant(clamp(limit)));
    }
    let first_index = t.first_index - lower.len() as i64;
    let explicit: Vec<f64> = lower
        .into_iter()
        .rev()
        .chain(t.explicit.iter().map(|&v| clamp(v)))
        .chain(upper)
        .collect();
    DiagonalOperator::new(first_index, explicit, lower_tail, upper_tail, t.eval_horizon)
}
