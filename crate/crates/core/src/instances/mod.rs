//! Value-function sources: analytic landscapes, adversarial clustered
//! instances, tabular learning curves and candidate-set builders.

mod grid;
mod hard;
mod landscape;
mod tabular;

pub use grid::{mesh_grid, mesh_grid_with_cap, sample_uniform, DEFAULT_MESH_CAP};
pub use hard::{gen_hard, HardInstance, HardInstanceSpec, HardRole, HardVariant};
pub use landscape::{landscape_eval, Bump, LandscapeKind, LandscapeOracle, LandscapeParams, LandscapeSpec};
pub use tabular::{load_tabular, read_tabular, write_tabular, ColumnScaling, LoadOptions, Scale, TabularBenchmark};
