use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use crate::domain::TracePoint;
use crate::error::{Result, UvpError};

/// Anytime trace of one (dataset, seed, algorithm) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub dataset: String,
    pub seed: u64,
    pub algorithm: String,
    pub cap: usize,
    pub trace: Vec<TracePoint>,
}

/// Mean rank per budget fraction (rows) and algorithm (columns, sorted by name).
#[derive(Debug, Clone, PartialEq)]
pub struct RankTable {
    pub fractions: Vec<f64>,
    pub algorithms: Vec<String>,
    pub mean: Vec<Vec<f64>>,
    /// Number of (dataset, seed) cells averaged.
    pub cells: usize,
}

impl RankTable {
    pub fn get(&self, fraction_idx: usize, algorithm: &str) -> Option<f64> {
        let a = self.algorithms.iter().position(|x| x == algorithm)?;
        self.mean.get(fraction_idx).map(|row| row[a])
    }

    /// `fraction,algorithm,mean_rank` rows.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["fraction", "algorithm", "mean_rank"])?;
        for (f, row) in self.fractions.iter().zip(&self.mean) {
            for (a, v) in self.algorithms.iter().zip(row) {
                w.write_record([f.to_string(), a.clone(), v.to_string()])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Ranks for descending `values`: 1 is best and tied entries share the
/// average of the positions they span.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start+1 ..= end
        let avg = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = avg;
        }
        start = end;
    }
    ranks
}

/// Incumbent of the last trace point spending at most `spend`.
pub fn incumbent_at(trace: &[TracePoint], spend: usize) -> Option<f64> {
    let idx = trace.partition_point(|p| p.spent <= spend);
    idx.checked_sub(1).map(|i| trace[i].incumbent)
}

pub fn mean_rank(records: &[RunRecord], grid: &[f64]) -> Result<RankTable> {
    if grid.iter().any(|f| !(*f >= 0.0 && *f <= 1.0)) {
        return Err(UvpError::InvalidParams("budget fractions must lie in [0, 1]".into()));
    }
    let algorithms: Vec<String> = records
        .iter()
        .map(|r| r.algorithm.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut cells: BTreeMap<(&str, u64), BTreeMap<&str, &RunRecord>> = BTreeMap::new();
    for r in records {
        let cell = cells.entry((r.dataset.as_str(), r.seed)).or_default();
        if cell.insert(r.algorithm.as_str(), r).is_some() {
            return Err(UvpError::InvalidParams(format!(
                "duplicate run for {} on {} seed {}",
                r.algorithm, r.dataset, r.seed
            )));
        }
    }
    let mut sums = vec![vec![0.0; algorithms.len()]; grid.len()];
    for ((dataset, seed), cell) in &cells {
        for (fi, &f) in grid.iter().enumerate() {
            let values = algorithms
                .iter()
                .map(|a| {
                    let rec = cell.get(a.as_str()).ok_or_else(|| {
                        UvpError::MissingTrace(format!("{a} has no run on {dataset} seed {seed}"))
                    })?;
                    let spend = (f * rec.cap as f64 + 1e-9).floor() as usize;
                    incumbent_at(&rec.trace, spend).ok_or_else(|| {
                        UvpError::MissingTrace(format!("{a} on {dataset} seed {seed} has no trace point by spend {spend}"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            for (s, r) in sums[fi].iter_mut().zip(average_ranks(&values)) {
                *s += r;
            }
        }
    }
    let n = cells.len().max(1) as f64;
    Ok(RankTable {
        fractions: grid.to_vec(),
        algorithms,
        mean: sums
            .into_iter()
            .map(|row| row.into_iter().map(|s| s / n).collect())
            .collect(),
        cells: cells.len(),
    })
}
