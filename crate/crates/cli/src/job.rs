//! Job file schema, version 1.

use serde::{Deserialize, Serialize};
use specflow_core::flow::SfMethod;
use specflow_core::FamilySpec;

use crate::error::CliError;

pub const JOB_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Sf,
    Metrics,
    Trajectory,
    Connect,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Sf => "sf",
            Task::Metrics => "metrics",
            Task::Trajectory => "trajectory",
            Task::Connect => "connect",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobFile {
    pub version: u32,
    pub task: Task,
    pub family: FamilySpec,
    #[serde(default)]
    pub options: JobOptions,
}

fn all_methods() -> Vec<SfMethod> {
    SfMethod::ALL.to_vec()
}

fn default_guard() -> f64 {
    1e-6
}

fn default_refine() -> usize {
    20
}

fn default_max_refine() -> usize {
    16
}

fn default_steps() -> usize {
    64
}

fn default_report() -> String {
    "report.json".into()
}

fn default_trajectory() -> String {
    "trajectory.csv".into()
}

fn default_connect() -> String {
    "connect.csv".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobOptions {
    #[serde(default = "all_methods")]
    pub methods: Vec<SfMethod>,
    /// Barrier guard band, relative to the spectral scale.
    #[serde(default = "default_guard")]
    pub guard: f64,
    /// Oracle resampling factor.
    #[serde(default = "default_refine")]
    pub refine: usize,
    /// Gap candidates tried per segment.
    #[serde(default = "default_max_refine")]
    pub max_refine: usize,
    /// Overrides the seed of a random family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Trajectory window radius; chosen by certification when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<f64>,
    /// Steps of the path to `iI` for the connect task.
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default = "default_report")]
    pub report: String,
    #[serde(default = "default_trajectory")]
    pub trajectory: String,
    #[serde(default = "default_connect")]
    pub connect: String,
}

impl Default for JobOptions {
    fn default() -> Self {
        Self {
            methods: all_methods(),
            guard: default_guard(),
            refine: default_refine(),
            max_refine: default_max_refine(),
            seed: None,
            window: None,
            steps: default_steps(),
            report: default_report(),
            trajectory: default_trajectory(),
            connect: default_connect(),
        }
    }
}

pub fn parse_job(text: &str) -> Result<JobFile, CliError> {
    let job: JobFile = toml::from_str(text).map_err(|e| CliError::InvalidJob(e.to_string()))?;
    job.validate()?;
    Ok(job)
}

impl JobFile {
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::InvalidJob(msg));
        if self.version != JOB_VERSION {
            return bad(format!("unsupported job version {}, expected {JOB_VERSION}", self.version));
        }
        let o = &self.options;
        if self.task == Task::Sf && o.methods.is_empty() {
            return bad("sf task needs at least one method".into());
        }
        if !(o.guard > 0.0 && o.guard.is_finite()) {
            return bad(format!("guard must be positive, got {}", o.guard));
        }
        if o.refine == 0 || o.max_refine == 0 {
            return bad("refine and max_refine must be positive".into());
        }
        if o.steps < 2 {
            return bad(format!("steps must be at least 2, got {}", o.steps));
        }
        if let Some(w) = o.window {
            if !(w > 0.0 && w.is_finite()) {
                return bad(format!("window must be positive, got {w}"));
            }
        }
        for name in [&o.report, &o.trajectory, &o.connect] {
            if name.is_empty() || name.contains(['/', '\\']) || name == "." || name == ".." {
                return bad(format!("output name {name:?} must be a plain file name"));
            }
        }
        if self.family.samples() < 2 {
            return bad("families need at least two samples".into());
        }
        Ok(())
    }

    /// Family with the optional seed override applied.
    pub fn effective_family(&self) -> FamilySpec {
        match (&self.family, self.options.seed) {
            (FamilySpec::Random { dim, closed, samples, .. }, Some(seed)) => {
                FamilySpec::Random { dim: *dim, seed, closed: *closed, samples: *samples }
            }
            (f, _) => f.clone(),
        }
    }

    /// Requested methods, first occurrence kept.
    pub fn methods(&self) -> Vec<SfMethod> {
        let mut out: Vec<SfMethod> = Vec::new();
        for m in &self.options.methods {
            if !out.contains(m) {
                out.push(*m);
            }
        }
        out
    }
}
