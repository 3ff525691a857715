use super::{check_run, SolverParams};
use crate::clustering::{e_k_center, k_center};
use crate::domain::{Configuration, Fill, Probe, SearchOutcome, ValueOracle};
use crate::error::{Result, UvpError};

fn full_count(params: &SolverParams, points: &[Configuration]) -> Result<usize> {
    let k = params.full_budget_count()?;
    if k > points.len() {
        return Err(UvpError::InsufficientCandidates {
            needed: k,
            available: points.len(),
        });
    }
    Ok(k)
}

/// Picks `floor(B/T)` greedy k-centers, trains each to the horizon and
/// returns the best. Leftover `B mod T` units stay unspent.
pub fn full_cent(params: &SolverParams, points: &[Configuration], oracle: &dyn ValueOracle) -> Result<SearchOutcome> {
    check_run(params, points, oracle)?;
    let k = full_count(params, points)?;
    let centers = k_center(k, &[], points)?;
    let mut probe = Probe::new(oracle, points, params.budget);
    for &c in &centers {
        probe.extend_to(c, params.horizon, Fill::Exact)?;
    }
    debug_assert_eq!(probe.ledger().spent(), k * params.horizon);
    probe.finish()
}

/// Like [`full_cent`] but centers come from value-aware selection with every
/// pick trained to the horizon before the next is chosen.
pub fn e_full_cent(params: &SolverParams, points: &[Configuration], oracle: &dyn ValueOracle) -> Result<SearchOutcome> {
    check_run(params, points, oracle)?;
    let k = full_count(params, points)?;
    let metric = params.metric()?;
    let mut probe = Probe::new(oracle, points, params.budget);
    e_k_center(&mut probe, k, &[], params.horizon, &metric, Fill::Exact)?;
    debug_assert_eq!(probe.ledger().spent(), k * params.horizon);
    probe.finish()
}
