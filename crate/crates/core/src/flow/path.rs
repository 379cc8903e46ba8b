use crate::error::{Result, SpecflowError};
use crate::operator::{Operator, OperatorKind};

/// Sampled path `t ↦ f(t)` of self-adjoint operators of one kind.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorPath {
    params: Vec<f64>,
    samples: Vec<Operator>,
    family_tag: String,
}

/// Endpoints of concatenated paths must agree to this accuracy.
pub const ENDPOINT_TOL: f64 = 1e-12;

impl OperatorPath {
    pub fn new(params: Vec<f64>, samples: Vec<Operator>, family_tag: impl Into<String>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(SpecflowError::InvalidPath("need at least two samples".into()));
        }
        if params.len() != samples.len() {
            return Err(SpecflowError::InvalidPath(format!(
                "{} parameters for {} samples",
                params.len(),
                samples.len()
            )));
        }
        if params.iter().any(|t| !t.is_finite()) || params.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(SpecflowError::InvalidPath("parameters must be strictly increasing".into()));
        }
        if params[0] < 0.0 || params[params.len() - 1] > 1.0 {
            return Err(SpecflowError::InvalidPath("parameters must lie in [0, 1]".into()));
        }
        for s in &samples[1..] {
            samples[0]
                .check_compatible(s)
                .map_err(|e| SpecflowError::InvalidPath(e.to_string()))?;
        }
        Ok(Self { params, samples, family_tag: family_tag.into() })
    }

    /// Samples at `t_j = j/(N−1)`.
    pub fn uniform(samples: Vec<Operator>, family_tag: impl Into<String>) -> Result<Self> {
        let params = uniform_grid(samples.len());
        Self::new(params, samples, family_tag)
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn samples(&self) -> &[Operator] {
        &self.samples
    }

    pub fn family_tag(&self) -> &str {
        &self.family_tag
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn kind(&self) -> OperatorKind {
        self.samples[0].kind()
    }

    pub fn start(&self) -> &Operator {
        &self.samples[0]
    }

    pub fn end(&self) -> &Operator {
        &self.samples[self.samples.len() - 1]
    }

    /// Whether the path returns to its starting operator.
    pub fn is_closed(&self) -> bool {
        self.start()
            .distance_sup(self.end())
            .map(|d| d <= ENDPOINT_TOL * self.start().scale())
            .unwrap_or(false)
    }

    /// Linear resampling: `refine` sub-steps per original step.
    pub fn refined(&self, refine: usize) -> Result<Self> {
        if refine == 0 {
            return Err(SpecflowError::InvalidArgument("refine must be positive".into()));
        }
        let mut params = Vec::with_capacity((self.len() - 1) * refine + 1);
        let mut samples = Vec::with_capacity(params.capacity());
        for j in 0..self.len() - 1 {
            let (t0, t1) = (self.params[j], self.params[j + 1]);
            for r in 0..refine {
                let s = r as f64 / refine as f64;
                params.push(t0 + s * (t1 - t0));
                samples.push(if r == 0 {
                    self.samples[j].clone()
                } else {
                    self.samples[j].lerp(&self.samples[j + 1], s)?
                });
            }
        }
        params.push(*self.params.last().unwrap());
        samples.push(self.end().clone());
        Ok(Self { params, samples, family_tag: self.family_tag.clone() })
    }
}

pub fn uniform_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|j| j as f64 / (n - 1) as f64).collect(),
    }
}

/// `f₁ * f₂`: `f₁` on `[0, ½]`, `f₂` on `[½, 1]`, sharing the joint sample.
pub fn path_concat(f1: &OperatorPath, f2: &OperatorPath) -> Result<OperatorPath> {
    let defect = f1.end().distance_sup(f2.start())?;
    if !(defect <= ENDPOINT_TOL * f1.end().scale()) {
        return Err(SpecflowError::EndpointMismatch { defect });
    }
    let rescale = |p: &[f64], lo: f64| -> Vec<f64> {
        let (a, b) = (p[0], p[p.len() - 1]);
        p.iter().map(|t| lo + 0.5 * (t - a) / (b - a)).collect()
    };
    let mut params = rescale(&f1.params, 0.0);
    params.extend(rescale(&f2.params, 0.5).into_iter().skip(1));
    *params.last_mut().unwrap() = 1.0;
    let mut samples = f1.samples.clone();
    samples.extend(f2.samples.iter().skip(1).cloned());
    let tag = format!("{}*{}", f1.family_tag, f2.family_tag);
    OperatorPath::new(params, samples, tag)
}

/// `t ↦ f(1 − t)`.
pub fn path_reverse(f: &OperatorPath) -> OperatorPath {
    let (a, b) = (f.params[0], f.params[f.len() - 1]);
    let grid = uniform_grid(f.len());
    // a uniform grid is its own mirror image; keep it bit-exact
    let params = if f.params == grid { grid } else { f.params.iter().rev().map(|t| a + b - t).collect() };
    let samples = f.samples.iter().rev().cloned().collect();
    let tag = if let Some(inner) = f.family_tag.strip_prefix("reverse(").and_then(|s| s.strip_suffix(')')) {
        inner.to_string()
    } else {
        format!("reverse({})", f.family_tag)
    };
    OperatorPath { params, samples, family_tag: tag }
}
