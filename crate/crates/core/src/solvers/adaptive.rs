use super::{check_run, SolverParams};
use crate::clustering::{e_k_center, CenterState};
use crate::domain::{Configuration, Fill, Probe, SearchOutcome, ValueOracle};
use crate::error::{Result, UvpError};

/// Round-based k-center exploration with optimistic early pruning.
///
/// Each round adds up to `p` fresh centers, then advances every active
/// configuration one budget step at a time, dropping those whose prediction
/// falls below the best value currently held by the active set. Rounds repeat
/// until the budget is spent or no unprobed candidates remain.
pub fn ada_cent(params: &SolverParams, points: &[Configuration], oracle: &dyn ValueOracle) -> Result<SearchOutcome> {
    check_run(params, points, oracle)?;
    let mut probe = Probe::new(oracle, points, params.budget);
    let mut state = CenterState::new(points.len());
    let mut active = Vec::new();
    while !probe.ledger().is_exhausted() {
        let take = params.p.min(state.non_centers());
        if take == 0 {
            break;
        }
        active.extend(state.select(take, points)?);
        unit_steps(&mut probe, &mut active, 1, params)?;
    }
    probe.finish()
}

/// [`ada_cent`] with value-aware center selection: every new center is first
/// probed for `floor(delta * T)` steps, and unit stepping resumes from there.
pub fn e_ada_cent(params: &SolverParams, points: &[Configuration], oracle: &dyn ValueOracle) -> Result<SearchOutcome> {
    check_run(params, points, oracle)?;
    let explore = (params.delta * params.horizon as f64).floor() as usize;
    if explore < 1 {
        return Err(UvpError::InvalidParams(format!(
            "exploration budget floor({} * {}) is zero",
            params.delta, params.horizon
        )));
    }
    let metric = params.metric()?;
    let mut probe = Probe::new(oracle, points, params.budget);
    let mut centers: Vec<usize> = Vec::new();
    let mut active = Vec::new();
    while !probe.ledger().is_exhausted() {
        let take = params.p.min(points.len() - centers.len());
        if take == 0 {
            break;
        }
        let fresh = e_k_center(&mut probe, take, &centers, explore, &metric, Fill::Partial)?;
        if fresh.is_empty() {
            break;
        }
        centers.extend_from_slice(&fresh);
        active.extend(fresh);
        unit_steps(&mut probe, &mut active, explore + 1, params)?;
    }
    probe.finish()
}

/// Advances `active` through budgets `from..=T`, pruning after each step.
/// Only configurations sitting exactly one step behind are advanced, so
/// survivors of earlier rounds are never charged twice.
fn unit_steps(probe: &mut Probe<'_>, active: &mut Vec<usize>, from: usize, params: &SolverParams) -> Result<()> {
    for t in from..=params.horizon {
        if probe.ledger().is_exhausted() {
            break;
        }
        for &x in active.iter() {
            if probe.ledger().is_exhausted() {
                break;
            }
            if probe.len_of(x) + 1 == t {
                probe.step(x)?;
            }
        }
        prune(probe, active, params)?;
    }
    Ok(())
}

fn prune(probe: &Probe<'_>, active: &mut Vec<usize>, params: &SolverParams) -> Result<()> {
    let Some(best) = active
        .iter()
        .filter_map(|&x| probe.last(x))
        .reduce(f64::max)
    else {
        return Ok(());
    };
    let mut keep = Vec::with_capacity(active.len());
    for &x in active.iter() {
        let survives = match probe.history(x) {
            Some(h) if !h.is_empty() => params.predict(h.values())? >= best,
            _ => true,
        };
        if survives {
            keep.push(x);
        }
    }
    *active = keep;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::Predictor;

    /// Curves indexed by configuration id.
    struct Table(Vec<Vec<f64>>);
    impl ValueOracle for Table {
        fn dimension(&self) -> usize {
            1
        }
        fn horizon(&self) -> usize {
            self.0[0].len()
        }
        fn query(&self, x: &Configuration, b: usize) -> f64 {
            self.0[x.id][b - 1]
        }
    }

    fn line(n: usize) -> Vec<Configuration> {
        (0..n).map(|i| Configuration::new(i, vec![i as f64])).collect()
    }

    fn two_point(horizon: usize, budget: usize, p: usize) -> SolverParams {
        SolverParams {
            predictor: Predictor::TwoPoint,
            p,
            ..SolverParams::new(horizon).with_budget(budget)
        }
    }

    #[test]
    fn single_candidate_trained_to_horizon() {
        let curve: Vec<f64> = (1..=6).map(|b| 1.0 - 0.5f64.powi(b)).collect();
        let oracle = Table(vec![curve.clone()]);
        let out = ada_cent(&two_point(6, 100, 3), &line(1), &oracle).unwrap();
        assert_eq!(out.best, 0);
        assert_eq!(out.histories[&0].values(), curve.as_slice());
        assert_eq!(out.spent, 6);
    }

    #[test]
    fn weaker_arm_pruned_after_second_step() {
        // Hand trace, T = 10: after t = 2 the weak arm predicts
        // 0.10 + 0.05 * 8 = 0.50 < 0.55, the strong arm's last value.
        let weak: Vec<f64> = (1..=10).map(|t| 0.05 * t as f64).collect();
        let strong: Vec<f64> = (1..=10).map(|t| 0.45 + 0.05 * t as f64).collect();
        let oracle = Table(vec![weak, strong]);
        let out = ada_cent(&two_point(10, 100, 2), &line(2), &oracle).unwrap();
        assert_eq!(out.histories[&0].len(), 2);
        assert_eq!(out.histories[&1].len(), 10);
        assert_eq!(out.best, 1);
        assert!((out.best_value - 0.95).abs() < 1e-12);
        assert_eq!(out.spent, 12);
    }

    #[test]
    fn identical_linear_curves_never_pruned() {
        let curve: Vec<f64> = (1..=5).map(|t| 0.1 * t as f64).collect();
        let oracle = Table(vec![curve; 3]);
        let out = ada_cent(&two_point(5, 100, 3), &line(3), &oracle).unwrap();
        for h in out.histories.values() {
            assert_eq!(h.len(), 5);
        }
        assert_eq!(out.spent, 15);
    }

    #[test]
    fn cap_truncates_round() {
        let curve: Vec<f64> = (1..=5).map(|t| 0.1 * t as f64).collect();
        let oracle = Table(vec![curve; 4]);
        let out = ada_cent(&two_point(5, 7, 4), &line(4), &oracle).unwrap();
        assert_eq!(out.spent, 7);
        let total: usize = out.histories.values().map(|h| h.len()).sum();
        assert_eq!(total, 7);
    }

    #[test]
    fn later_rounds_reuse_survivors_without_recharging() {
        // p = 1: each round adds one center; no candidate is re-evaluated.
        let curves: Vec<Vec<f64>> = (0..4)
            .map(|i| (1..=4).map(|t| (0.1 + 0.05 * i as f64) * t as f64 / 4.0).collect())
            .collect();
        let oracle = Table(curves);
        let out = ada_cent(&two_point(4, 1000, 1), &line(4), &oracle).unwrap();
        let total: usize = out.histories.values().map(|h| h.len()).sum();
        assert_eq!(total, out.spent);
        assert!(out.spent <= 16);
        assert_eq!(out.best, 3);
    }

    #[test]
    fn enhanced_rejects_zero_exploration() {
        let oracle = Table(vec![vec![0.5; 5]]);
        let params = SolverParams { delta: 0.1, ..two_point(5, 10, 1) };
        assert!(matches!(e_ada_cent(&params, &line(1), &oracle), Err(UvpError::InvalidParams(_))));
    }

    #[test]
    fn enhanced_single_round_shape() {
        // p = 25, delta = 0.1, B = 20 T with identical linear curves: one round
        // of 25 one-step probes, then unit steps until the cap.
        let t = 10;
        let curve: Vec<f64> = (1..=t).map(|b| 0.05 * b as f64).collect();
        let oracle = Table(vec![curve; 40]);
        let params = SolverParams {
            p: 25,
            delta: 0.1,
            predictor: Predictor::TwoPoint,
            ..SolverParams::new(t).with_budget(20 * t)
        };
        let out = e_ada_cent(&params, &line(40), &oracle).unwrap();
        assert_eq!(out.spent, 200);
        assert_eq!(out.histories.len(), 25);
        assert!(out.histories.values().all(|h| !h.is_empty()));
    }

    #[test]
    fn enhanced_full_exploration_skips_unit_loop() {
        let curves: Vec<Vec<f64>> = (0..6).map(|i| vec![0.1 * (i + 1) as f64; 4]).collect();
        let oracle = Table(curves);
        let params = SolverParams {
            p: 2,
            delta: 0.999,
            ..SolverParams::new(4).with_budget(8)
        };
        // floor(0.999 * 4) = 3 exploration steps per center
        let out = e_ada_cent(&params, &line(6), &oracle).unwrap();
        assert!(out.spent <= 8);
        assert!(out.histories.values().all(|h| h.len() <= 4));
    }
}
