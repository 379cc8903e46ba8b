//! Spectral flow of sampled operator paths.
//!
//! Three independent counters: Phillips windows on the line, the winding
//! number of the Cayley transform around −1, and a brute-force crossing
//! oracle on linearly refined eigenvalue curves.

mod homotopy;
mod oracle;
mod partition;
mod path;
mod phillips;
mod wind;

use serde::{Deserialize, Serialize};

pub use homotopy::{homotopy_check, HomotopyReport};
pub use oracle::sf_oracle;
pub use partition::{Barrier, PartitionOptions, PathPartition, RadiusStrategy, Segment};
pub use path::{path_concat, path_reverse, uniform_grid, OperatorPath, ENDPOINT_TOL};
pub use phillips::{choose_partition, sf_phillips};
pub use wind::{cayley_path, choose_circle_partition, sf_cayley, wind, wind_with_partition, UnitaryPath, UnitarySample};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SfMethod {
    Phillips,
    Cayley,
    Oracle,
}

impl SfMethod {
    pub const ALL: [SfMethod; 3] = [SfMethod::Phillips, SfMethod::Cayley, SfMethod::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            SfMethod::Phillips => "phillips",
            SfMethod::Cayley => "cayley",
            SfMethod::Oracle => "oracle",
        }
    }
}

/// Spectral flow by one method; Phillips also returns its partition.
pub fn spectral_flow(
    path: &OperatorPath,
    method: SfMethod,
    opts: &PartitionOptions,
    refine: usize,
) -> Result<(i64, Option<PathPartition>)> {
    match method {
        SfMethod::Phillips => {
            let partition = choose_partition(path, opts)?;
            Ok((sf_phillips(path, &partition)?, Some(partition)))
        }
        SfMethod::Cayley => {
            let upath = cayley_path(path);
            let partition = choose_circle_partition(&upath, opts)?;
            Ok((wind_with_partition(&upath, &partition)?, Some(partition)))
        }
        SfMethod::Oracle => Ok((sf_oracle(path, refine)?, None)),
    }
}
