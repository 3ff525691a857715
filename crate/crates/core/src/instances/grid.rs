use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::domain::Configuration;
use crate::error::{Result, UvpError};

pub const DEFAULT_MESH_CAP: usize = 1_000_000;

fn check_bounds(bounds: &[(f64, f64)]) -> Result<()> {
    if bounds.is_empty() {
        return Err(UvpError::InvalidParams("need at least one dimension".into()));
    }
    for &(lo, hi) in bounds {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(UvpError::InvalidParams(format!("bad interval [{lo}, {hi}]")));
        }
    }
    Ok(())
}

/// Full Cartesian grid with `m` evenly spaced points per dimension, ids in
/// row-major order (last coordinate varies fastest).
pub fn mesh_grid(bounds: &[(f64, f64)], m: usize) -> Result<Vec<Configuration>> {
    mesh_grid_with_cap(bounds, m, DEFAULT_MESH_CAP)
}

pub fn mesh_grid_with_cap(bounds: &[(f64, f64)], m: usize, cap: usize) -> Result<Vec<Configuration>> {
    check_bounds(bounds)?;
    if m < 2 {
        return Err(UvpError::InvalidParams(format!("mesh needs at least 2 points per dimension, got {m}")));
    }
    let total = (m as u128).checked_pow(bounds.len() as u32).unwrap_or(u128::MAX);
    if total > cap as u128 {
        return Err(UvpError::SizeOverflow { points: total, cap });
    }
    let axes: Vec<Vec<f64>> = bounds
        .iter()
        .map(|&(lo, hi)| {
            (0..m)
                .map(|i| if i == m - 1 { hi } else { lo + (hi - lo) * i as f64 / (m - 1) as f64 })
                .collect()
        })
        .collect();
    let total = total as usize;
    let d = bounds.len();
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; d];
    for id in 0..total {
        out.push(Configuration::new(id, idx.iter().zip(&axes).map(|(&i, a)| a[i]).collect()));
        for j in (0..d).rev() {
            idx[j] += 1;
            if idx[j] < m {
                break;
            }
            idx[j] = 0;
        }
    }
    Ok(out)
}

/// `n` i.i.d. uniform points in the box, reproducible from `seed`.
pub fn sample_uniform(bounds: &[(f64, f64)], n: usize, seed: u64) -> Result<Vec<Configuration>> {
    check_bounds(bounds)?;
    if n < 1 {
        return Err(UvpError::InvalidParams("sample size must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dists: Vec<Uniform<f64>> = bounds.iter().map(|&(lo, hi)| Uniform::new_inclusive(lo, hi)).collect();
    Ok((0..n)
        .map(|id| Configuration::new(id, dists.iter().map(|u| u.sample(&mut rng)).collect()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coords(pts: &[Configuration]) -> Vec<Vec<f64>> {
        pts.iter().map(|p| p.coords.clone()).collect()
    }

    #[test]
    fn mesh_examples() {
        assert_eq!(coords(&mesh_grid(&[(0.0, 1.0)], 3).unwrap()), vec![vec![0.0], vec![0.5], vec![1.0]]);
        assert_eq!(
            coords(&mesh_grid(&[(0.0, 1.0); 2], 2).unwrap()),
            vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]]
        );
        let corners = mesh_grid(&[(-8.0, 8.0); 2], 2).unwrap();
        assert!(corners.iter().all(|p| p.coords.iter().all(|c| c.abs() == 8.0)));
        assert_eq!(corners.len(), 4);
        assert!(corners.iter().enumerate().all(|(i, p)| p.id == i));
    }

    #[test]
    fn mesh_limits() {
        assert!(matches!(mesh_grid(&[(0.0, 1.0)], 1), Err(UvpError::InvalidParams(_))));
        assert!(matches!(
            mesh_grid(&[(0.0, 1.0); 3], 101),
            Err(UvpError::SizeOverflow { points: 1_030_301, cap: DEFAULT_MESH_CAP })
        ));
        assert!(mesh_grid(&[(0.0, 1.0); 3], 100).is_ok());
        assert!(matches!(mesh_grid_with_cap(&[(0.0, 1.0); 2], 4, 15), Err(UvpError::SizeOverflow { .. })));
    }

    #[test]
    fn uniform_examples() {
        let one = sample_uniform(&[(2.5, 2.5); 3], 1, 0).unwrap();
        assert_eq!(one[0].coords, vec![2.5; 3]);
        let a = sample_uniform(&[(-8.0, 8.0); 2], 50, 17).unwrap();
        assert_eq!(a, sample_uniform(&[(-8.0, 8.0); 2], 50, 17).unwrap());
        assert_ne!(a, sample_uniform(&[(-8.0, 8.0); 2], 50, 18).unwrap());
    }

    #[test]
    fn uniform_mean_within_three_standard_errors() {
        // U(-8, 8) has variance 16^2 / 12; the mean of 10^4 draws has
        // standard error sqrt(256 / 12 / 10^4).
        let n = 10_000;
        let pts = sample_uniform(&[(-8.0, 8.0); 2], n, 2024).unwrap();
        let se = (256.0 / 12.0 / n as f64).sqrt();
        for j in 0..2 {
            let mean = pts.iter().map(|p| p.coords[j]).sum::<f64>() / n as f64;
            assert!(mean.abs() <= 3.0 * se, "dimension {j}: mean {mean}");
            assert!(pts.iter().all(|p| (-8.0..=8.0).contains(&p.coords[j])));
        }
    }
}
