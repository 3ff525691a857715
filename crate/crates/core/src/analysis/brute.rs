use itertools::Itertools;

use crate::clustering::{greedy_radius, k_center};
use crate::domain::{euclidean, validate_candidates, Configuration, ValueOracle};
use crate::error::{Result, UvpError};

/// Largest candidate set accepted by the exhaustive k-center search.
pub const BRUTE_FORCE_CAP: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusteringReport {
    pub k: usize,
    pub greedy_radius: f64,
    pub optimal_radius: Option<f64>,
}

/// Exact k-center radius with centers restricted to `points`.
pub fn optimal_radius(points: &[Configuration], k: usize) -> Result<f64> {
    if points.len() > BRUTE_FORCE_CAP {
        return Err(UvpError::TooLarge {
            size: points.len(),
            cap: BRUTE_FORCE_CAP,
        });
    }
    validate_candidates(points)?;
    if k == 0 {
        return Err(UvpError::InvalidParams("k must be at least 1".into()));
    }
    if k > points.len() {
        return Err(UvpError::InsufficientCandidates {
            needed: k,
            available: points.len(),
        });
    }
    let radius = (0..points.len())
        .combinations(k)
        .map(|centers| {
            points
                .iter()
                .map(|p| {
                    centers
                        .iter()
                        .map(|&c| euclidean(&p.coords, &points[c].coords))
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min);
    Ok(radius)
}

/// Greedy radius alongside the exact optimum.
pub fn brute_force_k_center(points: &[Configuration], k: usize) -> Result<ClusteringReport> {
    let optimal = optimal_radius(points, k)?;
    let greedy = greedy_radius(&k_center(k, &[], points)?, points)?;
    Ok(ClusteringReport {
        k,
        greedy_radius: greedy,
        optimal_radius: Some(optimal),
    })
}

/// `argmax_i A(x_i, T)` by full enumeration, lowest id on ties.
pub fn brute_force_opt(points: &[Configuration], oracle: &dyn ValueOracle, horizon: usize) -> Result<(usize, f64)> {
    validate_candidates(points)?;
    if horizon < 1 || horizon > oracle.horizon() {
        return Err(UvpError::InvalidBudget(format!("horizon {horizon} outside 1..={}", oracle.horizon())));
    }
    let mut best = (0, f64::NEG_INFINITY);
    for p in points {
        let v = oracle.query(p, horizon);
        if v > best.1 {
            best = (p.id, v);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(xs: &[f64]) -> Vec<Configuration> {
        xs.iter().enumerate().map(|(i, &x)| Configuration::new(i, vec![x])).collect()
    }

    struct Constant;
    impl ValueOracle for Constant {
        fn dimension(&self) -> usize {
            1
        }
        fn horizon(&self) -> usize {
            2
        }
        fn query(&self, _: &Configuration, _: usize) -> f64 {
            0.4
        }
    }

    #[test]
    fn examples() {
        let pts = line(&[0.0, 1.0, 2.0, 9.0]);
        let rep = brute_force_k_center(&pts, 2).unwrap();
        assert_eq!(rep.optimal_radius, Some(1.0));
        assert_eq!(rep.greedy_radius, 2.0);
        assert_eq!(optimal_radius(&pts, 4).unwrap(), 0.0);
        assert_eq!(optimal_radius(&line(&[0.0, 10.0]), 1).unwrap(), 10.0);
    }

    #[test]
    fn cap_and_bounds() {
        let big = line(&(0..16).map(f64::from).collect::<Vec<_>>());
        assert!(matches!(optimal_radius(&big, 2), Err(UvpError::TooLarge { size: 16, cap: 15 })));
        assert!(optimal_radius(&big[..15], 2).is_ok());
        assert!(matches!(optimal_radius(&line(&[1.0]), 2), Err(UvpError::InsufficientCandidates { .. })));
    }

    #[test]
    fn opt_ties_to_lowest_id() {
        let pts = line(&[3.0, 1.0, 2.0]);
        assert_eq!(brute_force_opt(&pts, &Constant, 2).unwrap(), (0, 0.4));
    }
}
