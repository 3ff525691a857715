//! Algorithm dispatch and instance construction shared by the CLI and FFI.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use crate::baselines::{hyperband, random_search, successive_halving, BaselineParams};
use crate::domain::{Configuration, SearchOutcome, ValueOracle};
use crate::error::{Result, UvpError};
use crate::instances::{
    gen_hard, load_tabular, mesh_grid, sample_uniform, HardInstanceSpec, LandscapeKind, LandscapeOracle,
    LandscapeSpec, LoadOptions,
};
use crate::solvers::{ada_cent, e_ada_cent, e_full_cent, full_cent, SolverParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    FullCent,
    EFullCent,
    AdaCent,
    EAdaCent,
    Random,
    Sha,
    Hyperband,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::FullCent,
        Algorithm::EFullCent,
        Algorithm::AdaCent,
        Algorithm::EAdaCent,
        Algorithm::Random,
        Algorithm::Sha,
        Algorithm::Hyperband,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::FullCent => "full-cent",
            Algorithm::EFullCent => "e-full-cent",
            Algorithm::AdaCent => "ada-cent",
            Algorithm::EAdaCent => "e-ada-cent",
            Algorithm::Random => "random",
            Algorithm::Sha => "sha",
            Algorithm::Hyperband => "hyperband",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = UvpError;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| UvpError::InvalidParams(format!("unknown algorithm '{s}'")))
    }
}

/// Runs `algo` with budget and horizon taken from `params`.
pub fn run_algorithm(
    algo: Algorithm,
    params: &SolverParams,
    baseline: &BaselineParams,
    points: &[Configuration],
    oracle: &dyn ValueOracle,
) -> Result<SearchOutcome> {
    let (b, t) = (params.budget, params.horizon);
    match algo {
        Algorithm::FullCent => full_cent(params, points, oracle),
        Algorithm::EFullCent => e_full_cent(params, points, oracle),
        Algorithm::AdaCent => ada_cent(params, points, oracle),
        Algorithm::EAdaCent => e_ada_cent(params, points, oracle),
        Algorithm::Random => {
            baseline.validate()?;
            random_search(b, t, points, baseline.seed, oracle)
        }
        Algorithm::Sha => successive_halving(b, t, points, baseline, oracle),
        Algorithm::Hyperband => hyperband(b, t, points, baseline, oracle),
    }
}

/// How a landscape's candidate set is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    Uniform { n: usize, seed: u64 },
    Mesh { m: usize },
}

/// A named candidate set together with its oracle.
#[derive(Clone)]
pub struct Instance {
    pub name: String,
    pub points: Vec<Configuration>,
    pub oracle: Arc<dyn ValueOracle>,
}

impl fmt::Debug for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Instance")
            .field("name", &self.name)
            .field("points", &self.points.len())
            .field("horizon", &self.oracle.horizon())
            .finish()
    }
}

impl Instance {
    pub fn horizon(&self) -> usize {
        self.oracle.horizon()
    }

    pub fn landscape(kind: LandscapeKind, sampling: Sampling, bump_seed: u64, horizon: usize) -> Result<Self> {
        let spec = LandscapeSpec::standard(kind, bump_seed);
        let points = match sampling {
            Sampling::Uniform { n, seed } => sample_uniform(&spec.bounds, n, seed)?,
            Sampling::Mesh { m } => mesh_grid(&spec.bounds, m)?,
        };
        let oracle = LandscapeOracle::new(&spec, &points, horizon)?;
        Ok(Self {
            name: kind.name().to_string(),
            points,
            oracle: Arc::new(oracle),
        })
    }

    pub fn hard(spec: &HardInstanceSpec) -> Result<Self> {
        let inst = gen_hard(spec)?;
        Ok(Self {
            name: format!("hard-{}", spec.variant),
            points: inst.points.clone(),
            oracle: Arc::new(inst),
        })
    }

    pub fn tabular(path: &Path, opts: LoadOptions) -> Result<Self> {
        let bench = load_tabular(path, opts)?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "table".into());
        Ok(Self {
            name,
            points: bench.configs.clone(),
            oracle: Arc::new(bench),
        })
    }
}
