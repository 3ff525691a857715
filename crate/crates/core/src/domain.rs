//! Domain types shared by every solver: candidate configurations, value
//! oracles, per-configuration histories and the budget ledger.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Result, UvpError};

/// Values within this distance of `[0, 1]` are clamped instead of rejected.
pub const VALUE_TOLERANCE: f64 = 1e-12;

/// A candidate point in normalized search-space coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    pub id: usize,
    pub coords: Vec<f64>,
}

impl Configuration {
    pub fn new(id: usize, coords: Vec<f64>) -> Self {
        Self { id, coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn distance(&self, other: &Configuration) -> f64 {
        euclidean(&self.coords, &other.coords)
    }
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Checks that `points` is a well-formed candidate set and returns its dimension.
///
/// Ids must equal positions, every point must share the same dimension `d >= 1`
/// and all coordinates must be finite.
pub fn validate_candidates(points: &[Configuration]) -> Result<usize> {
    let first = points
        .first()
        .ok_or(UvpError::InsufficientCandidates { needed: 1, available: 0 })?;
    let d = first.dim();
    if d == 0 {
        return Err(UvpError::InvalidParams("configurations must have dimension >= 1".into()));
    }
    for (i, p) in points.iter().enumerate() {
        if p.id != i {
            return Err(UvpError::InvalidParams(format!(
                "configuration at position {i} carries id {}",
                p.id
            )));
        }
        if p.dim() != d {
            return Err(UvpError::InvalidParams(format!(
                "configuration {i} has dimension {} instead of {d}",
                p.dim()
            )));
        }
        if p.coords.iter().any(|c| !c.is_finite()) {
            return Err(UvpError::InvalidParams(format!("configuration {i} has non-finite coordinates")));
        }
    }
    Ok(d)
}

/// Clamps `v` into `[0, 1]` when it lies within [`VALUE_TOLERANCE`] of the interval.
pub fn clamp_unit(v: f64) -> Option<f64> {
    if v.is_finite() && (-VALUE_TOLERANCE..=1.0 + VALUE_TOLERANCE).contains(&v) {
        Some(v.clamp(0.0, 1.0))
    } else {
        None
    }
}

/// Observed values `A(x, 1..=len)` of one configuration. Append-only.
#[derive(Debug, Clone, PartialEq)]
pub struct History {
    owner: usize,
    values: Vec<f64>,
}

impl History {
    pub fn new(owner: usize) -> Self {
        Self { owner, values: Vec::new() }
    }

    pub fn from_values(owner: usize, values: Vec<f64>) -> Self {
        Self { owner, values }
    }

    pub fn owner(&self) -> usize {
        self.owner
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn last(&self) -> Option<f64> {
        self.values.last().copied()
    }

    /// Value at budget `b` (1-based).
    pub fn at(&self, b: usize) -> Option<f64> {
        b.checked_sub(1).and_then(|i| self.values.get(i).copied())
    }

    fn push(&mut self, v: f64) {
        self.values.push(v);
    }
}

/// Source of the unknown value function `A(x, b)` for `b` in `1..=horizon`.
pub trait ValueOracle: Send + Sync {
    fn dimension(&self) -> usize;
    fn horizon(&self) -> usize;
    fn query(&self, x: &Configuration, b: usize) -> f64;
}

impl<O: ValueOracle + ?Sized> ValueOracle for &O {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }
    fn horizon(&self) -> usize {
        (**self).horizon()
    }
    fn query(&self, x: &Configuration, b: usize) -> f64 {
        (**self).query(x, b)
    }
}

impl<O: ValueOracle + ?Sized> ValueOracle for Box<O> {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }
    fn horizon(&self) -> usize {
        (**self).horizon()
    }
    fn query(&self, x: &Configuration, b: usize) -> f64 {
        (**self).query(x, b)
    }
}

impl<O: ValueOracle + ?Sized> ValueOracle for Arc<O> {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }
    fn horizon(&self) -> usize {
        (**self).horizon()
    }
    fn query(&self, x: &Configuration, b: usize) -> f64 {
        (**self).query(x, b)
    }
}

/// Running-maximum wrapper: `query(x, b) = max_{t <= b} raw.query(x, t)`.
#[derive(Debug, Clone)]
pub struct Monotone<O> {
    raw: O,
}

pub fn enforce_monotone<O: ValueOracle>(raw: O) -> Monotone<O> {
    Monotone { raw }
}

impl<O> Monotone<O> {
    pub fn inner(&self) -> &O {
        &self.raw
    }
}

impl<O: ValueOracle> ValueOracle for Monotone<O> {
    fn dimension(&self) -> usize {
        self.raw.dimension()
    }
    fn horizon(&self) -> usize {
        self.raw.horizon()
    }
    fn query(&self, x: &Configuration, b: usize) -> f64 {
        (1..=b)
            .map(|t| self.raw.query(x, t))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Total evaluation cap and running spend.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BudgetLedger {
    cap: usize,
    spent: usize,
}

impl BudgetLedger {
    pub fn new(cap: usize) -> Self {
        Self { cap, spent: 0 }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn spent(&self) -> usize {
        self.spent
    }

    pub fn remaining(&self) -> usize {
        self.cap - self.spent
    }

    pub fn is_exhausted(&self) -> bool {
        self.spent >= self.cap
    }

    pub fn charge(&mut self, units: usize) -> Result<()> {
        if units > self.remaining() {
            return Err(UvpError::BudgetExhausted {
                requested: units,
                remaining: self.remaining(),
            });
        }
        self.spent += units;
        Ok(())
    }
}

/// How [`learn`] behaves when the ledger cannot cover the full request.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fill {
    /// Refuse the whole request up front.
    Exact,
    /// Spend whatever remains and truncate the history.
    Partial,
}

fn check_budget_index(t: usize, horizon: usize) -> Result<()> {
    if t == 0 || t > horizon {
        return Err(UvpError::InvalidBudget(format!(
            "per-configuration budget {t} outside 1..={horizon}"
        )));
    }
    Ok(())
}

/// Evaluates `x` at budgets `1..=t`, charging one unit per step.
pub fn learn(
    oracle: &dyn ValueOracle,
    ledger: &mut BudgetLedger,
    x: &Configuration,
    t: usize,
    fill: Fill,
) -> Result<History> {
    let mut history = History::new(x.id);
    extend_history(oracle, ledger, x, &mut history, t, fill)?;
    Ok(history)
}

/// Appends `A(x, len+1..=target)` to `history`; returns the number of units spent.
fn extend_history(
    oracle: &dyn ValueOracle,
    ledger: &mut BudgetLedger,
    x: &Configuration,
    history: &mut History,
    target: usize,
    fill: Fill,
) -> Result<usize> {
    check_budget_index(target, oracle.horizon())?;
    let need = target.saturating_sub(history.len());
    let units = match fill {
        Fill::Exact => {
            if need > ledger.remaining() {
                return Err(UvpError::BudgetExhausted {
                    requested: need,
                    remaining: ledger.remaining(),
                });
            }
            need
        }
        Fill::Partial => need.min(ledger.remaining()),
    };
    for _ in 0..units {
        ledger.charge(1)?;
        let b = history.len() + 1;
        let v = oracle.query(x, b);
        debug_assert!(clamp_unit(v).is_some(), "oracle value {v} outside [0, 1]");
        history.push(v);
    }
    Ok(units)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub spent: usize,
    pub incumbent: f64,
}

/// Result of one solver run.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub best: usize,
    pub best_value: f64,
    pub spent: usize,
    pub cap: usize,
    /// One point per unit spent, carrying the best value observed so far.
    pub trace: Vec<TracePoint>,
    pub histories: BTreeMap<usize, History>,
}

/// Mutable state of a single run: ledger, histories and anytime trace.
pub struct Probe<'a> {
    oracle: &'a dyn ValueOracle,
    points: &'a [Configuration],
    ledger: BudgetLedger,
    histories: BTreeMap<usize, History>,
    trace: Vec<TracePoint>,
    incumbent: f64,
}

impl<'a> Probe<'a> {
    pub fn new(oracle: &'a dyn ValueOracle, points: &'a [Configuration], cap: usize) -> Self {
        Self {
            oracle,
            points,
            ledger: BudgetLedger::new(cap),
            histories: BTreeMap::new(),
            trace: Vec::new(),
            incumbent: f64::NEG_INFINITY,
        }
    }

    pub fn points(&self) -> &'a [Configuration] {
        self.points
    }

    pub fn oracle(&self) -> &'a dyn ValueOracle {
        self.oracle
    }

    pub fn ledger(&self) -> &BudgetLedger {
        &self.ledger
    }

    pub fn history(&self, id: usize) -> Option<&History> {
        self.histories.get(&id)
    }

    pub fn histories(&self) -> &BTreeMap<usize, History> {
        &self.histories
    }

    pub fn last(&self, id: usize) -> Option<f64> {
        self.histories.get(&id).and_then(History::last)
    }

    pub fn len_of(&self, id: usize) -> usize {
        self.histories.get(&id).map_or(0, History::len)
    }

    /// Extends the history of `id` up to budget `target`. Returns units spent.
    pub fn extend_to(&mut self, id: usize, target: usize, fill: Fill) -> Result<usize> {
        let x = self
            .points
            .get(id)
            .ok_or_else(|| UvpError::InvalidParams(format!("unknown configuration id {id}")))?;
        let history = self.histories.entry(id).or_insert_with(|| History::new(id));
        let before = history.len();
        let start = self.ledger.spent();
        let units = extend_history(self.oracle, &mut self.ledger, x, history, target, fill)?;
        for (i, &v) in history.values()[before..].iter().enumerate() {
            self.incumbent = self.incumbent.max(v);
            self.trace.push(TracePoint {
                spent: start + i + 1,
                incumbent: self.incumbent,
            });
        }
        if history.is_empty() {
            self.histories.remove(&id);
        }
        Ok(units)
    }

    /// One more budget step for `id`; false when the cap or horizon stopped it.
    pub fn step(&mut self, id: usize) -> Result<bool> {
        let next = self.len_of(id) + 1;
        if next > self.oracle.horizon() {
            return Ok(false);
        }
        Ok(self.extend_to(id, next, Fill::Partial)? == 1)
    }

    /// Argmax of the last observed value over `ids`, lowest id on ties.
    pub fn best_among<I: IntoIterator<Item = usize>>(&self, ids: I) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for id in ids {
            if let Some(v) = self.last(id) {
                best = match best {
                    Some((bid, bv)) if bv > v || (bv == v && bid < id) => Some((bid, bv)),
                    _ => Some((id, v)),
                };
            }
        }
        best
    }

    pub fn finish(self) -> Result<SearchOutcome> {
        let (best, best_value) = self
            .best_among(self.histories.keys().copied())
            .ok_or_else(|| UvpError::InvalidBudget("no configuration was evaluated".into()))?;
        Ok(SearchOutcome {
            best,
            best_value,
            spent: self.ledger.spent(),
            cap: self.ledger.cap(),
            trace: self.trace,
            histories: self.histories,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Constant(f64);
    impl ValueOracle for Constant {
        fn dimension(&self) -> usize {
            1
        }
        fn horizon(&self) -> usize {
            5
        }
        fn query(&self, _: &Configuration, _: usize) -> f64 {
            self.0
        }
    }

    struct Ramp(usize);
    impl ValueOracle for Ramp {
        fn dimension(&self) -> usize {
            1
        }
        fn horizon(&self) -> usize {
            self.0
        }
        fn query(&self, _: &Configuration, b: usize) -> f64 {
            b as f64 / self.0 as f64
        }
    }

    struct Curve(Vec<f64>);
    impl ValueOracle for Curve {
        fn dimension(&self) -> usize {
            1
        }
        fn horizon(&self) -> usize {
            self.0.len()
        }
        fn query(&self, _: &Configuration, b: usize) -> f64 {
            self.0[b - 1]
        }
    }

    fn origin() -> Configuration {
        Configuration::new(0, vec![0.0])
    }

    #[test]
    fn learn_constant() {
        let mut ledger = BudgetLedger::new(10);
        let h = learn(&Constant(0.7), &mut ledger, &origin(), 3, Fill::Exact).unwrap();
        assert_eq!(h.values(), &[0.7, 0.7, 0.7]);
        assert_eq!(ledger.spent(), 3);
    }

    #[test]
    fn learn_single_step() {
        let mut ledger = BudgetLedger::new(10);
        let h = learn(&Ramp(4), &mut ledger, &origin(), 1, Fill::Exact).unwrap();
        assert_eq!(h.values(), &[0.25]);
        assert_eq!(ledger.spent(), 1);
    }

    #[test]
    fn learn_ramp() {
        let mut ledger = BudgetLedger::new(10);
        let h = learn(&Ramp(4), &mut ledger, &origin(), 4, Fill::Exact).unwrap();
        assert_eq!(h.values(), &[0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn learn_rejects_bad_budget() {
        let mut ledger = BudgetLedger::new(10);
        assert!(matches!(
            learn(&Ramp(4), &mut ledger, &origin(), 0, Fill::Exact),
            Err(UvpError::InvalidBudget(_))
        ));
        assert!(matches!(
            learn(&Ramp(4), &mut ledger, &origin(), 5, Fill::Exact),
            Err(UvpError::InvalidBudget(_))
        ));
        assert_eq!(ledger.spent(), 0);
    }

    #[test]
    fn learn_exact_refuses_short_ledger() {
        let mut ledger = BudgetLedger::new(2);
        let err = learn(&Ramp(4), &mut ledger, &origin(), 3, Fill::Exact).unwrap_err();
        assert!(matches!(err, UvpError::BudgetExhausted { requested: 3, remaining: 2 }));
        assert_eq!(ledger.spent(), 0);
    }

    #[test]
    fn learn_partial_truncates() {
        let mut ledger = BudgetLedger::new(2);
        let h = learn(&Ramp(4), &mut ledger, &origin(), 4, Fill::Partial).unwrap();
        assert_eq!(h.values(), &[0.25, 0.5]);
        assert!(ledger.is_exhausted());
        let h = learn(&Ramp(4), &mut ledger, &origin(), 4, Fill::Partial).unwrap();
        assert!(h.is_empty());
    }

    #[test]
    fn monotone_examples() {
        let x = origin();
        let cases: [(&[f64], &[f64]); 3] = [
            (&[0.2, 0.5, 0.4], &[0.2, 0.5, 0.5]),
            (&[0.1, 0.2, 0.3], &[0.1, 0.2, 0.3]),
            (&[0.9, 0.1, 0.1], &[0.9, 0.9, 0.9]),
        ];
        for (raw, want) in cases {
            let o = enforce_monotone(Curve(raw.to_vec()));
            let got: Vec<f64> = (1..=3).map(|b| o.query(&x, b)).collect();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn monotone_keeps_unit_cost() {
        let o = enforce_monotone(Curve(vec![0.2, 0.5, 0.4]));
        let mut ledger = BudgetLedger::new(3);
        learn(&o, &mut ledger, &origin(), 3, Fill::Exact).unwrap();
        assert_eq!(ledger.spent(), 3);
    }

    #[test]
    fn ledger_never_overspends() {
        let mut ledger = BudgetLedger::new(3);
        ledger.charge(2).unwrap();
        assert!(ledger.charge(2).is_err());
        assert_eq!(ledger.spent(), 2);
        ledger.charge(1).unwrap();
        assert!(ledger.is_exhausted());
    }

    #[test]
    fn clamp_tolerance() {
        assert_eq!(clamp_unit(1.0 + 1e-13), Some(1.0));
        assert_eq!(clamp_unit(-1e-13), Some(0.0));
        assert_eq!(clamp_unit(1.0 + 1e-9), None);
        assert_eq!(clamp_unit(f64::NAN), None);
    }

    #[test]
    fn probe_trace_and_conservation() {
        let points = vec![origin(), Configuration::new(1, vec![1.0])];
        let oracle = Ramp(4);
        let mut probe = Probe::new(&oracle, &points, 6);
        probe.extend_to(0, 4, Fill::Exact).unwrap();
        assert!(probe.step(1).unwrap());
        assert!(probe.step(1).unwrap());
        assert!(!probe.step(1).unwrap());
        let out = probe.finish().unwrap();
        assert_eq!(out.spent, 6);
        let total: usize = out.histories.values().map(History::len).sum();
        assert_eq!(total, out.spent);
        let spends: Vec<usize> = out.trace.iter().map(|p| p.spent).collect();
        assert_eq!(spends, vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(out.best, 0);
        assert_eq!(out.best_value, 1.0);
        assert_eq!(out.trace.last().unwrap().incumbent, out.best_value);
    }

    #[test]
    fn validate_rejects_mixed_dimensions() {
        let pts = vec![origin(), Configuration::new(1, vec![1.0, 2.0])];
        assert!(validate_candidates(&pts).is_err());
        let pts = vec![Configuration::new(3, vec![1.0])];
        assert!(validate_candidates(&pts).is_err());
        assert_eq!(validate_candidates(&[origin()]).unwrap(), 1);
    }
}
