//! Model-free reference algorithms: random search, successive halving and
//! Hyperband.

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::domain::{validate_candidates, Configuration, Fill, Probe, SearchOutcome, ValueOracle};
use crate::error::{Result, UvpError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BaselineParams {
    /// Halving factor.
    pub eta: usize,
    pub seed: u64,
    /// Hyperband bracket count.
    pub iterations: usize,
}

impl Default for BaselineParams {
    fn default() -> Self {
        Self {
            eta: 3,
            seed: 0,
            iterations: 6,
        }
    }
}

impl BaselineParams {
    pub fn validate(&self) -> Result<()> {
        if self.eta < 2 {
            return Err(UvpError::InvalidParams(format!("eta must be at least 2, got {}", self.eta)));
        }
        if self.iterations < 1 {
            return Err(UvpError::InvalidParams("iterations must be at least 1".into()));
        }
        Ok(())
    }
}

fn check(budget: usize, horizon: usize, points: &[Configuration], oracle: &dyn ValueOracle) -> Result<()> {
    if horizon < 1 || horizon > oracle.horizon() {
        return Err(UvpError::InvalidBudget(format!(
            "horizon {horizon} outside 1..={}",
            oracle.horizon()
        )));
    }
    if budget < horizon {
        return Err(UvpError::InvalidBudget(format!(
            "budget {budget} is smaller than the horizon {horizon}"
        )));
    }
    let d = validate_candidates(points)?;
    if d != oracle.dimension() {
        return Err(UvpError::InvalidParams(format!(
            "candidates have dimension {d} but the oracle expects {}",
            oracle.dimension()
        )));
    }
    Ok(())
}

/// Trains `floor(B/T)` distinct uniformly drawn configurations to the horizon.
pub fn random_search(
    budget: usize,
    horizon: usize,
    points: &[Configuration],
    seed: u64,
    oracle: &dyn ValueOracle,
) -> Result<SearchOutcome> {
    check(budget, horizon, points, oracle)?;
    let k = budget / horizon;
    if k > points.len() {
        return Err(UvpError::InsufficientCandidates {
            needed: k,
            available: points.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut probe = Probe::new(oracle, points, budget);
    for id in index::sample(&mut rng, points.len(), k) {
        probe.extend_to(id, horizon, Fill::Exact)?;
    }
    probe.finish()
}

/// Largest `s` with `eta^s <= limit`.
fn floor_log(limit: usize, eta: usize) -> usize {
    let mut s = 0;
    let mut p = eta;
    while p <= limit {
        s += 1;
        match p.checked_mul(eta) {
            Some(next) => p = next,
            None => break,
        }
    }
    s
}

/// Rung budgets and sizes of a bracket with `n` starting arms and `s` halvings.
/// Budget of the last rung is always the horizon.
pub fn rung_schedule(n: usize, s: usize, eta: usize, horizon: usize) -> Vec<(usize, usize)> {
    (0..=s)
        .map(|i| {
            let shrink = eta.pow((s - i) as u32);
            let budget = (horizon / shrink).max(1);
            let size = (n / eta.pow(i as u32)).max(1);
            (size, budget)
        })
        .collect()
}

/// Units a bracket consumes when histories carry over between rungs.
pub fn schedule_cost(schedule: &[(usize, usize)]) -> usize {
    let mut prev = 0;
    schedule
        .iter()
        .map(|&(size, budget)| {
            let c = size * budget.saturating_sub(prev);
            prev = budget;
            c
        })
        .sum()
}

fn run_bracket(probe: &mut Probe<'_>, mut arms: Vec<usize>, schedule: &[(usize, usize)]) -> Result<()> {
    for (i, &(_, budget)) in schedule.iter().enumerate() {
        for &a in &arms {
            if probe.ledger().is_exhausted() {
                return Ok(());
            }
            probe.extend_to(a, budget, Fill::Partial)?;
        }
        if let Some(&(next, _)) = schedule.get(i + 1) {
            arms.sort_by(|&a, &b| {
                let (va, vb) = (probe.last(a).unwrap_or(f64::NEG_INFINITY), probe.last(b).unwrap_or(f64::NEG_INFINITY));
                vb.total_cmp(&va).then(a.cmp(&b))
            });
            arms.truncate(next);
        }
    }
    Ok(())
}

/// One successive-halving bracket sized to the largest `n0 = eta^s` that fits
/// both the candidate set and the budget.
pub fn successive_halving(
    budget: usize,
    horizon: usize,
    points: &[Configuration],
    params: &BaselineParams,
    oracle: &dyn ValueOracle,
) -> Result<SearchOutcome> {
    check(budget, horizon, points, oracle)?;
    params.validate()?;
    let eta = params.eta;
    let s_top = floor_log(horizon, eta).min(floor_log(points.len(), eta));
    let (n0, schedule) = (0..=s_top)
        .rev()
        .map(|s| {
            let n0 = eta.pow(s as u32);
            (n0, rung_schedule(n0, s, eta, horizon))
        })
        .find(|(_, sched)| schedule_cost(sched) <= budget)
        .expect("a single arm at the horizon fits since B >= T");
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let arms = index::sample(&mut rng, points.len(), n0).into_vec();
    let mut probe = Probe::new(oracle, points, budget);
    run_bracket(&mut probe, arms, &schedule)?;
    probe.finish()
}

/// Hyperband brackets cycling `s = s_max, s_max - 1, .., 0`, drawing fresh arms
/// without replacement and stopping wherever the shared ledger runs dry.
pub fn hyperband(
    budget: usize,
    horizon: usize,
    points: &[Configuration],
    params: &BaselineParams,
    oracle: &dyn ValueOracle,
) -> Result<SearchOutcome> {
    check(budget, horizon, points, oracle)?;
    params.validate()?;
    let eta = params.eta;
    let s_max = floor_log(horizon, eta);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut pool: Vec<usize> = (0..points.len()).collect();
    let mut probe = Probe::new(oracle, points, budget);
    for j in 0..params.iterations {
        if probe.ledger().is_exhausted() || pool.is_empty() {
            break;
        }
        let s = s_max - j % (s_max + 1);
        let want = ((s_max + 1) as f64 / (s + 1) as f64 * eta.pow(s as u32) as f64).ceil() as usize;
        let n = want.min(pool.len());
        let picks = index::sample(&mut rng, pool.len(), n).into_vec();
        let arms: Vec<usize> = picks.iter().map(|&i| pool[i]).collect();
        let mut taken = picks;
        taken.sort_unstable();
        for i in taken.into_iter().rev() {
            pool.remove(i);
        }
        run_bracket(&mut probe, arms, &rung_schedule(n, s, eta, horizon))?;
    }
    probe.finish()
}
