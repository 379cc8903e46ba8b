//! Greedy window certification along a sampled path.
//!
//! The same scan serves the line (windows `[−a, a]` around 0) and the
//! circle (arcs `π ± ε` around −1); the two differ only in how a sample
//! reports its spectrum as signed offsets from the reference point.

use serde::Serialize;

use crate::error::{Result, SpecflowError};

/// Which reference point the windows surround.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Barrier {
    /// Real windows `[−a, a]`.
    Line,
    /// Eigenphase arcs `[π − ε, π + ε]`.
    Circle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RadiusStrategy {
    /// Radius that certifies the most samples; ties go to larger clearance.
    LongestReach,
    /// Smallest radius that certifies at least one step.
    SmallestRadius,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionOptions {
    /// Minimum barrier clearance, relative to the sample's spectral scale.
    pub guard: f64,
    /// Number of gap candidates tried at each segment start.
    pub max_refine: usize,
    /// Optional bound on eigenvalue speed per unit parameter.
    pub lipschitz: Option<f64>,
    pub strategy: RadiusStrategy,
    /// Cap on samples per segment, in steps.
    pub max_segment_steps: Option<usize>,
}

impl Default for PartitionOptions {
    fn default() -> Self {
        Self {
            guard: 1e-6,
            max_refine: 16,
            lipschitz: None,
            strategy: RadiusStrategy::LongestReach,
            max_segment_steps: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Segment {
    pub start: usize,
    pub end: usize,
    pub t_start: f64,
    pub t_end: f64,
    /// `a_j` on the line, `ε_j` on the circle.
    pub radius: f64,
    /// Smallest distance of the spectrum to the barrier over the segment.
    pub clearance: f64,
    /// Guard band the clearance was checked against.
    pub guard: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathPartition {
    pub barrier: Barrier,
    pub sample_count: usize,
    pub segments: Vec<Segment>,
    #[serde(skip)]
    options: PartitionOptions,
}

impl PathPartition {
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.segments.iter().map(|s| s.t_start).collect();
        if let Some(last) = self.segments.last() {
            out.push(last.t_end);
        }
        out
    }

    pub fn window_radii(&self) -> Vec<f64> {
        self.segments.iter().map(|s| s.radius).collect()
    }

    pub fn options(&self) -> &PartitionOptions {
        &self.options
    }
}

/// A sample seen as signed offsets from the reference point.
pub(crate) trait BarrierSpectrum {
    /// Offsets `o` with `|o| ≤ reach`, ascending.
    fn offsets_within(&self, reach: f64) -> Result<Vec<f64>>;
    /// Whether `offsets_within(reach)` is the full spectrum for every reach.
    fn is_finite(&self) -> bool;
    /// Largest meaningful radius: `∞` on the line, `π` on the circle.
    fn radius_limit(&self) -> f64;
    /// Magnitude of offsets seen on a first look.
    fn scale(&self) -> f64;
    /// Some eigenvalue lies on different sides of `level` here and in `next`.
    fn crosses(&self, next: &Self, level: f64) -> Result<bool>;
    /// Offsets `≥ −zero_tol()` count as nonnegative.
    fn zero_tol(&self) -> f64;
}

struct Candidate {
    radius: f64,
    width: f64,
}

fn candidates<S: BarrierSpectrum>(s: &S, guard: f64, max_refine: usize) -> Result<Vec<Candidate>> {
    let limit = s.radius_limit();
    let mut reach = s.scale().min(limit);
    let mut offsets = s.offsets_within(reach)?;
    if !s.is_finite() {
        while distinct_magnitudes(&offsets).len() <= max_refine && room(reach, limit) {
            reach = grow(reach, limit);
            offsets = s.offsets_within(reach)?;
        }
    }
    let mags = distinct_magnitudes(&offsets);
    let mut out = Vec::new();
    let mut lo = 0.0;
    for &m in &mags {
        if m - lo > 2.0 * guard {
            out.push(Candidate { radius: 0.5 * (lo + m), width: m - lo });
        }
        lo = m;
    }
    if s.is_finite() {
        // nothing beyond the last magnitude: climb a ladder
        if limit.is_finite() {
            for frac in [0.5, 0.25] {
                let r = lo + frac * (limit - lo);
                if limit - r > 2.0 * guard && r - lo > 2.0 * guard {
                    out.push(Candidate { radius: r, width: limit - lo });
                }
            }
        } else {
            let mut rung = 1.0f64;
            while rung <= lo + 2.0 * guard {
                rung *= 2.0;
            }
            for _ in 0..3 {
                out.push(Candidate { radius: rung, width: rung - lo });
                rung *= 2.0;
            }
        }
    } else if reach - lo > 2.0 * guard {
        out.push(Candidate { radius: 0.5 * (lo + reach), width: reach - lo });
    }
    out.sort_by(|a, b| b.width.total_cmp(&a.width).then(a.radius.total_cmp(&b.radius)));
    out.truncate(max_refine.max(1));
    Ok(out)
}

/// Next search reach: doubling on the line, halving the distance to the
/// limit on the circle.
fn grow(reach: f64, limit: f64) -> f64 {
    if limit.is_finite() {
        limit - 0.5 * (limit - reach)
    } else {
        2.0 * reach
    }
}

fn room(reach: f64, limit: f64) -> bool {
    if limit.is_finite() {
        limit - reach > 1e-6 * limit
    } else {
        reach < 1e7
    }
}

fn distinct_magnitudes(offsets: &[f64]) -> Vec<f64> {
    let mut mags: Vec<f64> = offsets.iter().map(|o| o.abs()).collect();
    mags.sort_by(f64::total_cmp);
    mags.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.max(1.0));
    mags
}

/// Distance from the spectrum to `±radius`, capped where the search ends.
fn clearance<S: BarrierSpectrum>(s: &S, radius: f64) -> Result<f64> {
    let reach = if s.is_finite() && s.radius_limit().is_infinite() {
        f64::INFINITY
    } else {
        (2.0 * radius).min(radius + 0.5 * (s.radius_limit() - radius))
    };
    let cap = if reach.is_infinite() { radius } else { reach - radius };
    let offsets = s.offsets_within(reach)?;
    Ok(offsets.iter().map(|o| (o.abs() - radius).abs()).fold(cap, f64::min))
}

fn guard_for<S: BarrierSpectrum>(s: &S, guard: f64) -> f64 {
    if s.radius_limit().is_finite() {
        guard
    } else {
        guard * s.scale().max(1.0)
    }
}

/// Clearance over `start..=end` at a fixed radius, or `None` when some step
/// violates the guard band or moves an eigenvalue across a barrier.
fn segment_clearance<S: BarrierSpectrum>(
    samples: &[S],
    params: &[f64],
    start: usize,
    radius: f64,
    opts: &PartitionOptions,
    stop_at: usize,
) -> Result<(usize, f64)> {
    let check = |j: usize, extra: f64| -> Option<f64> {
        let c = clearance(&samples[j], radius).ok()?;
        (c > guard_for(&samples[j], opts.guard) + extra).then_some(c)
    };
    let Some(mut worst) = check(start, 0.0) else {
        return Ok((start, 0.0));
    };
    let mut end = start;
    for j in start + 1..=stop_at {
        let slack = opts.lipschitz.map_or(0.0, |l| 0.5 * l * (params[j] - params[j - 1]));
        let (Some(prev), Some(c)) = (check(j - 1, slack), check(j, slack)) else { break };
        let crossed = samples[j - 1].crosses(&samples[j], radius).unwrap_or(true)
            || samples[j - 1].crosses(&samples[j], -radius).unwrap_or(true);
        if crossed {
            break;
        }
        worst = worst.min(prev).min(c);
        end = j;
    }
    Ok((end, worst))
}

pub(crate) fn certify<S: BarrierSpectrum>(
    samples: &[S],
    params: &[f64],
    opts: &PartitionOptions,
    barrier: Barrier,
) -> Result<PathPartition> {
    if !(opts.guard > 0.0) {
        return Err(SpecflowError::InvalidArgument("guard must be positive".into()));
    }
    let last = samples.len() - 1;
    let mut segments = Vec::new();
    let mut start = 0;
    while start < last {
        let stop_at = opts.max_segment_steps.map_or(last, |m| (start + m.max(1)).min(last));
        let guard = guard_for(&samples[start], opts.guard);
        let cannot = SpecflowError::CannotCertify { sample: start, param: params[start] };
        let best = match opts.strategy {
            RadiusStrategy::LongestReach => {
                longest_reach(samples, params, start, opts, stop_at, guard).map_err(|_| cannot.clone())?
            }
            RadiusStrategy::SmallestRadius => {
                smallest_radius(samples, params, start, opts, stop_at, guard).map_err(|_| cannot.clone())?
            }
        };
        let Some((end, clear, radius)) = best else { return Err(cannot) };
        segments.push(Segment {
            start,
            end,
            t_start: params[start],
            t_end: params[end],
            radius,
            clearance: clear,
            guard,
        });
        start = end;
    }
    Ok(PathPartition { barrier, sample_count: samples.len(), segments, options: opts.clone() })
}

fn longest_reach<S: BarrierSpectrum>(
    samples: &[S],
    params: &[f64],
    start: usize,
    opts: &PartitionOptions,
    stop_at: usize,
    guard: f64,
) -> Result<Option<(usize, f64, f64)>> {
    let mut best: Option<(usize, f64, f64)> = None;
    for cand in candidates(&samples[start], guard, opts.max_refine)? {
        let (end, clear) = segment_clearance(samples, params, start, cand.radius, opts, stop_at)?;
        let better = match best {
            None => end > start,
            Some((e, c, _)) => end > e || (end == e && clear > c),
        };
        if better {
            best = Some((end, clear, cand.radius));
        }
    }
    Ok(best)
}

fn smallest_radius<S: BarrierSpectrum>(
    samples: &[S],
    params: &[f64],
    start: usize,
    opts: &PartitionOptions,
    stop_at: usize,
    guard: f64,
) -> Result<Option<(usize, f64, f64)>> {
    let mut cands = candidates(&samples[start], guard, opts.max_refine)?;
    cands.sort_by(|a, b| a.radius.total_cmp(&b.radius));
    for cand in cands {
        let (end, clear) = segment_clearance(samples, params, start, cand.radius, opts, stop_at)?;
        if end > start {
            return Ok(Some((end, clear, cand.radius)));
        }
    }
    Ok(None)
}

/// Re-check a partition against the samples it claims to certify.
pub(crate) fn verify<S: BarrierSpectrum>(samples: &[S], params: &[f64], partition: &PathPartition) -> Result<()> {
    let fail = |msg: String| Err(SpecflowError::UncertifiedPartition(msg));
    if partition.sample_count != samples.len() {
        return fail(format!(
            "partition covers {} samples, path has {}",
            partition.sample_count,
            samples.len()
        ));
    }
    let mut next = 0;
    for seg in &partition.segments {
        if seg.start != next || seg.end <= seg.start || seg.end >= samples.len() {
            return fail(format!("segment {}..{} breaks the chain", seg.start, seg.end));
        }
        let opts = &partition.options;
        let (end, _) = segment_clearance(samples, params, seg.start, seg.radius, opts, seg.end)?;
        if end != seg.end {
            return fail(format!(
                "radius {} fails at sample {} (t = {})",
                seg.radius,
                end + 1,
                params[end + 1]
            ));
        }
        next = seg.end;
    }
    if next != samples.len() - 1 {
        return fail("segments do not reach the end of the path".into());
    }
    Ok(())
}

/// Eigenvalues (or phase offsets) in `[0, radius]`, with the zero tolerance.
pub(crate) fn nonnegative_count<S: BarrierSpectrum>(s: &S, radius: f64) -> Result<i64> {
    let tol = s.zero_tol();
    Ok(s.offsets_within(radius)?.iter().filter(|&&o| o >= -tol).count() as i64)
}

/// `Σ_j count(t_j) − count(t_{j−1})` over a verified partition.
pub(crate) fn telescoped_flow<S: BarrierSpectrum>(
    samples: &[S],
    params: &[f64],
    partition: &PathPartition,
) -> Result<i64> {
    verify(samples, params, partition)?;
    let mut total = 0;
    for seg in &partition.segments {
        total += nonnegative_count(&samples[seg.end], seg.radius)?
            - nonnegative_count(&samples[seg.start], seg.radius)?;
    }
    Ok(total)
}
