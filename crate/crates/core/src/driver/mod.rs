//! Parameter policy, setup and solve pipelines, manufactured problems,
//! error metrics, configuration and output files.

pub mod config;
pub mod metrics;
pub mod output;
pub mod params;
pub mod pipeline;
pub mod problems;
pub mod selftest;
pub mod study;

pub use config::{RunConfig, StudySpec};
pub use metrics::{error_report, ErrorMetrics};
pub use params::{fixed_m_parameters, proportional_m, proportional_m_parameters, select_parameters, Overrides, Params};
pub use pipeline::{setup, setup_with, Diagnostics, SampledData, Solution, SolverContext};
pub use problems::{CurveSpec, Manufactured, PdeSpec, ProblemId};
pub use selftest::{run_selftest, Check};
pub use study::{run_config, run_manufactured, Refinement, RunOutcome};
