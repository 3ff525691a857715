//! Clustering-based budget allocation solvers.

mod adaptive;
mod full;
mod predict;

use std::fmt;
use std::str::FromStr;

pub use adaptive::{ada_cent, e_ada_cent};
pub use full::{e_full_cent, full_cent};
pub use predict::{pred, tail_fit_pred};

use crate::clustering::{EnhancedMetric, DEFAULT_ETA_CAP};
use crate::domain::{validate_candidates, Configuration, ValueOracle};
use crate::error::{Result, UvpError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Predictor {
    TwoPoint,
    #[default]
    TailFit,
}

impl Predictor {
    pub fn name(self) -> &'static str {
        match self {
            Predictor::TwoPoint => "two-point",
            Predictor::TailFit => "tail-fit",
        }
    }
}

impl fmt::Display for Predictor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Predictor {
    type Err = UvpError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two-point" => Ok(Predictor::TwoPoint),
            "tail-fit" => Ok(Predictor::TailFit),
            other => Err(UvpError::InvalidParams(format!("unknown predictor '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverParams {
    /// Total budget `B` in evaluation units.
    pub budget: usize,
    /// Per-configuration horizon `T`.
    pub horizon: usize,
    /// New centers per adaptive round.
    pub p: usize,
    pub epsilon: f64,
    /// Exploration fraction; each adaptive enhanced round probes `floor(delta * T)` steps.
    pub delta: f64,
    /// Tail-fit window fraction.
    pub theta: f64,
    pub predictor: Predictor,
    pub eta_cap: f64,
}

impl SolverParams {
    /// Experimental defaults: `B = 20 T`, `p = 25`, `delta = 0.1`, `theta = 0.3`.
    pub fn new(horizon: usize) -> Self {
        Self {
            budget: 20 * horizon,
            horizon,
            p: 25,
            epsilon: 0.2,
            delta: 0.1,
            theta: 0.3,
            predictor: Predictor::TailFit,
            eta_cap: DEFAULT_ETA_CAP,
        }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.budget < 1 {
            return Err(UvpError::InvalidBudget("total budget must be at least 1".into()));
        }
        if self.horizon < 1 {
            return Err(UvpError::InvalidBudget("horizon must be at least 1".into()));
        }
        if self.p < 1 {
            return Err(UvpError::InvalidParams("p must be at least 1".into()));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(UvpError::InvalidParams(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(UvpError::InvalidParams(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        if !(self.theta > 0.0 && self.theta <= 1.0) {
            return Err(UvpError::InvalidParams(format!("theta must lie in (0, 1], got {}", self.theta)));
        }
        if !(self.eta_cap >= 1.0) {
            return Err(UvpError::InvalidParams(format!("eta cap must be >= 1, got {}", self.eta_cap)));
        }
        Ok(())
    }

    pub fn metric(&self) -> Result<EnhancedMetric> {
        EnhancedMetric::with_eta_cap(self.epsilon, self.eta_cap)
    }

    /// `k = floor(B / T)`, rejecting `B < T`.
    pub fn full_budget_count(&self) -> Result<usize> {
        let k = self.budget / self.horizon;
        if k == 0 {
            return Err(UvpError::InvalidBudget(format!(
                "budget {} is smaller than the horizon {}",
                self.budget, self.horizon
            )));
        }
        Ok(k)
    }

    pub(crate) fn predict(&self, values: &[f64]) -> Result<f64> {
        match self.predictor {
            Predictor::TwoPoint => pred(values, self.horizon),
            Predictor::TailFit => tail_fit_pred(values, self.horizon, self.theta),
        }
    }
}

pub(crate) fn check_run(params: &SolverParams, points: &[Configuration], oracle: &dyn ValueOracle) -> Result<()> {
    params.validate()?;
    let d = validate_candidates(points)?;
    if d != oracle.dimension() {
        return Err(UvpError::InvalidParams(format!(
            "candidates have dimension {d} but the oracle expects {}",
            oracle.dimension()
        )));
    }
    if params.horizon > oracle.horizon() {
        return Err(UvpError::InvalidBudget(format!(
            "horizon {} exceeds the oracle horizon {}",
            params.horizon,
            oracle.horizon()
        )));
    }
    Ok(())
}
