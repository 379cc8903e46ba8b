//! Batch front end: reads a job file, runs it, writes a report.

pub mod error;
pub mod job;
pub mod output;
pub mod run;

use std::path::{Path, PathBuf};

use clap::Parser;

pub use error::CliError;
pub use job::{parse_job, JobFile, JobOptions, Task};
pub use run::{job_hash, render_report, run_job, JobOutput, Report, TaskResult};

#[derive(Debug, Parser)]
#[command(name = "specflow", version, about = "Spectral flow and operator metrics from job files")]
pub struct Args {
    /// Task to run; must match the job file.
    pub task: Task,
    /// Job file (TOML, schema version 1).
    #[arg(long)]
    pub job: PathBuf,
    /// Directory for the report and any tables; the report also goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Load, run and write one job.
pub fn execute(task: Task, job_path: &Path, out: Option<&Path>) -> Result<JobOutput, CliError> {
    let raw = std::fs::read_to_string(job_path)
        .map_err(|e| CliError::InvalidJob(format!("cannot read {}: {e}", job_path.display())))?;
    let job = parse_job(&raw)?;
    if job.task != task {
        return Err(CliError::InvalidJob(format!(
            "command asks for {} but the job file declares {}",
            task.name(),
            job.task.name()
        )));
    }
    let output = run_job(&job, &raw)?;
    let dir = out.unwrap_or(Path::new("."));
    for (name, contents) in &output.files {
        output::write_atomic(dir, name, contents)?;
    }
    if out.is_some() {
        output::write_atomic(dir, &job.options.report, &render_report(&output.report))?;
    }
    Ok(output)
}

/// Entry point shared by the binary and the tests; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let started = std::time::Instant::now();
    match execute(args.task, &args.job, args.out.as_deref()) {
        Ok(output) => {
            print!("{}", render_report(&output.report));
            eprintln!("done in {:.3}s", started.elapsed().as_secs_f64());
            0
        }
        Err(e) => {
            eprintln!("specflow: {e}");
            e.exit_code()
        }
    }
}
