use serde::Serialize;
use sha2::{Digest, Sha256};

use specflow_core::cayley::distance_from_one;
use specflow_core::flow::{choose_partition, spectral_flow, PathPartition, SfMethod};
use specflow_core::linalg::{self, I};
use specflow_core::{
    cayley, connect_to_ii, eigenphases, metric_report, FamilySpec, MetricReport, Operator, OperatorPath,
    PartitionOptions,
};

use crate::error::CliError;
use crate::job::{JobFile, Task};
use crate::output::{fmt17, render_table};

pub const TOOL_NAME: &str = "specflow";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub job_hash: String,
    pub task: &'static str,
    pub family: FamilySpec,
    pub samples: usize,
    pub result: TaskResult,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum TaskResult {
    Sf(SfResult),
    Metrics(MetricsResult),
    Trajectory(TrajectoryResult),
    Connect(ConnectResult),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SfResult {
    pub methods: Vec<MethodResult>,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodResult {
    pub method: SfMethod,
    pub sf: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<PartitionSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionSummary {
    pub barrier: specflow_core::flow::Barrier,
    pub breakpoints: Vec<f64>,
    pub radii: Vec<f64>,
    pub certificates: Vec<Certificate>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub clearance: f64,
    pub guard: f64,
}

impl From<&PathPartition> for PartitionSummary {
    fn from(p: &PathPartition) -> Self {
        Self {
            barrier: p.barrier,
            breakpoints: p.breakpoints(),
            radii: p.window_radii(),
            certificates: p
                .segments
                .iter()
                .map(|s| Certificate { clearance: s.clearance, guard: s.guard })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsResult {
    /// The pair compared: first and last sample of the family path.
    pub pair: &'static str,
    #[serde(flatten)]
    pub metrics: MetricReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryResult {
    pub window: f64,
    pub rows: usize,
    pub max_curves: usize,
    pub file: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConnectResult {
    pub steps: usize,
    pub dim: usize,
    pub max_unitarity_defect: f64,
    pub min_phase_distance_from_one: f64,
    pub endpoint_defect: f64,
    pub file: String,
}

/// Report plus any side files, keyed by file name.
#[derive(Debug, Clone, PartialEq)]
pub struct JobOutput {
    pub report: Report,
    pub files: Vec<(String, String)>,
}

pub fn job_hash(raw: &str) -> String {
    hex::encode(Sha256::digest(raw.as_bytes()))
}

pub fn render_report(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

fn partition_options(job: &JobFile) -> PartitionOptions {
    PartitionOptions { guard: job.options.guard, max_refine: job.options.max_refine, ..Default::default() }
}

/// Build the family and run the job's task.
pub fn run_job(job: &JobFile, raw: &str) -> Result<JobOutput, CliError> {
    job.validate()?;
    let family = job.effective_family();
    let path = family.build()?;
    let mut files = Vec::new();
    let result = match job.task {
        Task::Sf => TaskResult::Sf(run_sf(job, &path)?),
        Task::Metrics => TaskResult::Metrics(MetricsResult {
            pair: "start,end",
            metrics: metric_report(path.start(), path.end())?,
        }),
        Task::Trajectory => {
            let (result, table) = run_trajectory(job, &path)?;
            files.push((result.file.clone(), table));
            TaskResult::Trajectory(result)
        }
        Task::Connect => {
            let (result, table) = run_connect(job, &path)?;
            files.push((result.file.clone(), table));
            TaskResult::Connect(result)
        }
    };
    let report = Report {
        tool: TOOL_NAME,
        version: TOOL_VERSION,
        job_hash: job_hash(raw),
        task: job.task.name(),
        family,
        samples: path.len(),
        result,
    };
    Ok(JobOutput { report, files })
}

fn run_sf(job: &JobFile, path: &OperatorPath) -> Result<SfResult, CliError> {
    let opts = partition_options(job);
    let methods = job
        .methods()
        .into_iter()
        .map(|method| {
            let (sf, partition) = spectral_flow(path, method, &opts, job.options.refine)?;
            Ok(MethodResult { method, sf, partition: partition.as_ref().map(PartitionSummary::from) })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let agree = methods.windows(2).all(|w| w[0].sf == w[1].sf);
    Ok(SfResult { methods, agree })
}

/// Smallest distance from `±a` to the spectrum, over every sample.
fn window_clearance(path: &OperatorPath, a: f64) -> Result<f64, CliError> {
    let mut worst = f64::INFINITY;
    for s in path.samples() {
        let near = s.eigenvalues_within(2.0 * a)?;
        let c = near.iter().map(|l| (l.abs() - a).abs()).fold(a, f64::min);
        worst = worst.min(c / s.scale());
    }
    Ok(worst)
}

fn pick_window(job: &JobFile, path: &OperatorPath) -> Result<f64, CliError> {
    let guard = job.options.guard;
    if let Some(a) = job.options.window {
        if window_clearance(path, a)? > guard {
            return Ok(a);
        }
        return Err(CliError::Certification(format!("window {a} is not clear of the spectrum along the path")));
    }
    let partition = choose_partition(path, &partition_options(job))?;
    let mut radii = partition.window_radii();
    radii.sort_by(|a, b| b.total_cmp(a));
    for a in radii {
        if window_clearance(path, a)? > guard {
            return Ok(a);
        }
    }
    Err(CliError::Certification("no single window certifies the whole path; set options.window".into()))
}

fn run_trajectory(job: &JobFile, path: &OperatorPath) -> Result<(TrajectoryResult, String), CliError> {
    let window = pick_window(job, path)?;
    let mut rows = Vec::with_capacity(path.len());
    let mut max_curves = 0;
    for (t, s) in path.params().iter().zip(path.samples()) {
        let values = s.eigenvalues_within(window)?;
        max_curves = max_curves.max(values.len());
        let mut row = vec![fmt17(*t)];
        row.extend(values.into_iter().map(fmt17));
        rows.push(row);
    }
    let mut header = vec!["t".to_string()];
    header.extend((1..=max_curves).map(|j| format!("lambda_{j}")));
    let table = render_table(&header, &rows);
    let result = TrajectoryResult { window, rows: rows.len(), max_curves, file: job.options.trajectory.clone() };
    Ok((result, table))
}

fn run_connect(job: &JobFile, path: &OperatorPath) -> Result<(ConnectResult, String), CliError> {
    let Operator::Hermitian(t) = path.start() else {
        return Err(CliError::InvalidJob("connect needs a finite Hermitian family".into()));
    };
    let u = cayley(t);
    let steps = job.options.steps;
    let unitaries = connect_to_ii(&u, steps)?;
    let mut rows = Vec::with_capacity(unitaries.len());
    let (mut max_defect, mut min_dist) = (0.0f64, f64::INFINITY);
    for (j, v) in unitaries.iter().enumerate() {
        let phases = eigenphases(v, true)?.phases;
        max_defect = max_defect.max(v.unitarity_defect());
        min_dist = phases.iter().map(|&p| distance_from_one(p)).fold(min_dist, f64::min);
        let mut row = vec![j.to_string(), fmt17(j as f64 / steps as f64)];
        row.extend(phases.into_iter().map(fmt17));
        rows.push(row);
    }
    let dim = u.dim();
    let end = unitaries.last().expect("at least two samples");
    let endpoint_defect = linalg::norm(&(end.entries() - linalg::identity(dim).map(|z| z * I)));
    let mut header = vec!["step".to_string(), "s".to_string()];
    header.extend((1..=dim).map(|j| format!("phase_{j}")));
    let table = render_table(&header, &rows);
    let result = ConnectResult {
        steps,
        dim,
        max_unitarity_defect: max_defect,
        min_phase_distance_from_one: min_dist,
        endpoint_defect,
        file: job.options.connect.clone(),
    };
    Ok((result, table))
}
