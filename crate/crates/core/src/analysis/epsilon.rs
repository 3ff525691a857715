use rayon::prelude::*;

use crate::clustering::{greedy_radius, k_center};
use crate::domain::{euclidean, Configuration};
use crate::error::{Result, UvpError};
use crate::instances::TabularBenchmark;

pub const DEFAULT_ALPHAS: [f64; 4] = [90.0, 95.0, 98.0, 99.0];

/// `a / b` under the zero conventions: both zero is 1, only `b` zero is `+inf`.
pub fn value_ratio(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        if a == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        a / b
    }
}

/// `min_b A_i(b) / A_j(b)`.
pub fn min_ratio(ci: &[f64], cj: &[f64]) -> f64 {
    ci.iter()
        .zip(cj)
        .map(|(&a, &b)| value_ratio(a, b))
        .fold(f64::INFINITY, f64::min)
}

/// Smallest `eps` with `min_b A_i/A_j >= 1 - eps * dist`, floored at zero.
/// `None` when the two embeddings coincide.
pub fn epsilon_ij(ci: &[f64], cj: &[f64], dist: f64) -> Option<f64> {
    if dist == 0.0 {
        return None;
    }
    Some(((1.0 - min_ratio(ci, cj)) / dist).max(0.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonReport {
    /// `oriented[i][j]` uses the ratio `A_i / A_j`.
    pub oriented: Vec<Vec<f64>>,
    /// Max of both orientations; zero on the diagonal and for skipped pairs.
    pub pairwise: Vec<Vec<f64>>,
    /// Unordered pairs `(i, j)`, `i < j`, whose embeddings coincide.
    pub skipped: Vec<(usize, usize)>,
    pub r: Option<f64>,
    pub percentiles: Vec<(f64, f64)>,
}

impl EpsilonReport {
    /// Largest pairwise value.
    pub fn max(&self) -> f64 {
        self.pairwise
            .iter()
            .flatten()
            .copied()
            .fold(0.0, f64::max)
    }

    /// `pairwise[i][j]` over `i < j`, skipped pairs excluded, in index order.
    pub fn upper(&self) -> Vec<f64> {
        let n = self.pairwise.len();
        let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        let mut skip = self.skipped.iter().peekable();
        for i in 0..n {
            for j in i + 1..n {
                if skip.peek() == Some(&&(i, j)) {
                    skip.next();
                    continue;
                }
                out.push(self.pairwise[i][j]);
            }
        }
        out
    }
}

pub fn epsilon_pairwise(bench: &TabularBenchmark) -> EpsilonReport {
    epsilon_pairwise_curves(&bench.configs, &bench.curves)
}

pub fn epsilon_pairwise_curves(points: &[Configuration], curves: &[Vec<f64>]) -> EpsilonReport {
    let n = points.len();
    let oriented: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    let d = euclidean(&points[i].coords, &points[j].coords);
                    epsilon_ij(&curves[i], &curves[j], d).unwrap_or(0.0)
                })
                .collect()
        })
        .collect();
    let mut skipped = Vec::new();
    let mut pairwise = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            if points[i].coords == points[j].coords {
                skipped.push((i, j));
                continue;
            }
            let v = oriented[i][j].max(oriented[j][i]);
            pairwise[i][j] = v;
            pairwise[j][i] = v;
        }
    }
    EpsilonReport {
        oriented,
        pairwise,
        skipped,
        r: None,
        percentiles: Vec::new(),
    }
}

/// The `ceil(alpha / 100 * N)`-th smallest entry, rank at least 1.
pub fn nearest_rank(sorted: &[f64], alpha: f64) -> Option<f64> {
    if sorted.is_empty() {
        return None;
    }
    let rank = ((alpha / 100.0 * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    Some(sorted[rank - 1])
}

/// Fills in the clustering radius from `min(k, n)` greedy centers and the
/// nearest-rank percentiles of `eps_ij * r`.
pub fn epsilon_percentiles(
    mut report: EpsilonReport,
    points: &[Configuration],
    k: usize,
    alphas: &[f64],
) -> Result<EpsilonReport> {
    if k < 1 {
        return Err(UvpError::InvalidParams("k must be at least 1".into()));
    }
    if alphas.iter().any(|a| !(*a > 0.0 && *a <= 100.0)) {
        return Err(UvpError::InvalidParams("percentiles must lie in (0, 100]".into()));
    }
    let k = k.min(points.len());
    let r = greedy_radius(&k_center(k, &[], points)?, points)?;
    let mut scaled: Vec<f64> = report.upper().into_iter().map(|e| e * r).collect();
    scaled.sort_by(f64::total_cmp);
    report.percentiles = alphas
        .iter()
        .map(|&a| (a, nearest_rank(&scaled, a).unwrap_or(0.0)))
        .collect();
    report.r = Some(r);
    Ok(report)
}

/// `max_{i,j,b} |A_i(b) - A_j(b)| - eps * ||x_i - x_j||`; non-positive when
/// the Lipschitz consequence holds. `-inf` for fewer than two points.
pub fn lipschitz_check(bench: &TabularBenchmark, epsilon: f64) -> f64 {
    lipschitz_check_curves(&bench.configs, &bench.curves, epsilon)
}

pub fn lipschitz_check_curves(points: &[Configuration], curves: &[Vec<f64>], epsilon: f64) -> f64 {
    let n = points.len();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut worst = f64::NEG_INFINITY;
            for j in i + 1..n {
                let gap = curves[i]
                    .iter()
                    .zip(&curves[j])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                worst = worst.max(gap - epsilon * euclidean(&points[i].coords, &points[j].coords));
            }
            worst
        })
        .reduce(|| f64::NEG_INFINITY, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(xs: &[f64]) -> Vec<Configuration> {
        xs.iter().enumerate().map(|(i, &x)| Configuration::new(i, vec![x])).collect()
    }

    #[test]
    fn ratio_conventions() {
        assert_eq!(value_ratio(0.0, 0.0), 1.0);
        assert_eq!(value_ratio(0.3, 0.0), f64::INFINITY);
        assert_eq!(value_ratio(0.0, 0.3), 0.0);
    }

    #[test]
    fn orientation_example() {
        let r = epsilon_pairwise_curves(&pts(&[0.0, 1.0]), &[vec![0.5; 3], vec![1.0; 3]]);
        assert_eq!(r.oriented[0][1], 0.5);
        assert_eq!(r.oriented[1][0], 0.0);
        assert_eq!(r.pairwise[0][1], 0.5);
        assert_eq!(r.pairwise[1][0], 0.5);
    }

    #[test]
    fn identical_curves_are_zero() {
        let r = epsilon_pairwise_curves(&pts(&[0.0, 4.0, 7.0]), &vec![vec![0.2, 0.4]; 3]);
        assert_eq!(r.max(), 0.0);
    }

    #[test]
    fn duplicates_skipped() {
        let r = epsilon_pairwise_curves(&pts(&[1.0, 1.0, 2.0]), &[vec![0.1], vec![0.9], vec![0.5]]);
        assert_eq!(r.skipped, vec![(0, 1)]);
        assert_eq!(r.pairwise[0][1], 0.0);
        assert_eq!(r.upper().len(), 2);
    }

    #[test]
    fn toy_three_config_table() {
        // x = 0, 1, 3 with constant curves 0.8, 0.4, 0.6
        let r = epsilon_pairwise_curves(&pts(&[0.0, 1.0, 3.0]), &[vec![0.8], vec![0.4], vec![0.6]]);
        assert!((r.pairwise[0][1] - 0.5).abs() < 1e-15);
        assert!((r.pairwise[0][2] - 0.25 / 3.0).abs() < 1e-15);
        assert!((r.pairwise[1][2] - (1.0 / 3.0) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn percentiles() {
        assert_eq!(nearest_rank(&[0.0, 1.0], 90.0), Some(1.0));
        assert_eq!(nearest_rank(&[0.0, 1.0], 50.0), Some(0.0));
        assert_eq!(nearest_rank(&[3.0], 1.0), Some(3.0));
        // every pair shares the same eps: 0.5 / 1 between neighbours only
        let p = pts(&[0.0, 1.0]);
        let rep = epsilon_percentiles(epsilon_pairwise_curves(&p, &[vec![0.5], vec![1.0]]), &p, 1, &DEFAULT_ALPHAS).unwrap();
        assert_eq!(rep.r, Some(1.0));
        assert!(rep.percentiles.iter().all(|&(_, v)| v == 0.5));
    }

    #[test]
    fn lipschitz_examples() {
        let p = pts(&[0.0, 1.0]);
        let v = lipschitz_check_curves(&p, &[vec![0.2, 0.7], vec![0.2, 0.2]], 0.2);
        assert!((v - 0.3).abs() < 1e-15);
        let same = lipschitz_check_curves(&pts(&[0.0, 2.0, 5.0]), &vec![vec![0.4]; 3], 0.1);
        assert!((same + 0.2).abs() < 1e-15);
    }
}
