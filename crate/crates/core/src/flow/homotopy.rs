use serde::Serialize;

use super::partition::PartitionOptions;
use super::path::{OperatorPath, ENDPOINT_TOL};
use super::phillips::{choose_partition, sf_phillips};
use crate::error::{Result, SpecflowError};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomotopyReport {
    /// Homotopy parameters `s_i`.
    pub s: Vec<f64>,
    /// Phillips spectral flow of `H(s_i, ·)`.
    pub sf: Vec<i64>,
    pub constant: bool,
}

/// Spectral flow along the straight-line homotopy `(1 − s)f₀ + s f₁`,
/// evaluated at `steps` evenly spaced values of `s` including both ends.
pub fn homotopy_check(
    f0: &OperatorPath,
    f1: &OperatorPath,
    steps: usize,
    opts: &PartitionOptions,
) -> Result<HomotopyReport> {
    if steps < 2 {
        return Err(SpecflowError::InvalidArgument("homotopy needs at least two steps".into()));
    }
    if f0.params() != f1.params() {
        return Err(SpecflowError::InvalidPath("homotopy ends must share their parameter grid".into()));
    }
    for (a, b) in [(f0.start(), f1.start()), (f0.end(), f1.end())] {
        let defect = a.distance_sup(b)?;
        if !(defect <= ENDPOINT_TOL * a.scale()) {
            return Err(SpecflowError::EndpointMismatch { defect });
        }
    }
    let mut s_values = Vec::with_capacity(steps);
    let mut sf = Vec::with_capacity(steps);
    for i in 0..steps {
        let s = i as f64 / (steps - 1) as f64;
        let samples = f0
            .samples()
            .iter()
            .zip(f1.samples())
            .map(|(a, b)| a.lerp(b, s))
            .collect::<Result<Vec<_>>>()?;
        let path = OperatorPath::new(f0.params().to_vec(), samples, format!("homotopy({s})"))?;
        let partition = choose_partition(&path, opts)?;
        s_values.push(s);
        sf.push(sf_phillips(&path, &partition)?);
    }
    let constant = sf.windows(2).all(|w| w[0] == w[1]);
    Ok(HomotopyReport { s: s_values, sf, constant })
}
