//! Budgeted probing of configurations whose value curves are unknown.
//!
//! Solvers spread a total budget of evaluation units over a finite candidate
//! set, using k-center clustering to decide which configurations to train.

pub mod analysis;
pub mod baselines;
pub mod cli;
pub mod clustering;
pub mod domain;
pub mod error;
pub mod instances;
pub mod runner;
pub mod solvers;

pub use domain::{
    enforce_monotone, learn, BudgetLedger, Configuration, Fill, History, Probe, SearchOutcome, TracePoint,
    ValueOracle,
};
pub use error::{Result, UvpError};
