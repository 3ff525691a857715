//! Greedy farthest-first center selection, plain and value-aware.
//!
//! All argmax/argmin ties break toward the lowest configuration id. When the
//! center set is empty every point sits at distance `+inf`, so the first pick
//! of an unseeded run is configuration 0.

use crate::domain::{euclidean, Configuration, Fill, Probe};
use crate::error::{Result, UvpError};

/// Default ceiling on the value ratio `eta` of a center.
pub const DEFAULT_ETA_CAP: f64 = 1e6;

/// Centers chosen so far plus the cached distance of every point to its
/// nearest center.
#[derive(Debug, Clone)]
pub struct CenterState {
    centers: Vec<usize>,
    is_center: Vec<bool>,
    delta: Vec<f64>,
}

impl CenterState {
    pub fn new(n: usize) -> Self {
        Self {
            centers: Vec::new(),
            is_center: vec![false; n],
            delta: vec![f64::INFINITY; n],
        }
    }

    pub fn with_seeds(seeds: &[usize], points: &[Configuration]) -> Result<Self> {
        let mut state = Self::new(points.len());
        for &s in seeds {
            if s >= points.len() {
                return Err(UvpError::InvalidParams(format!("seed {s} is not a candidate")));
            }
            if state.is_center[s] {
                return Err(UvpError::InvalidParams(format!("seed {s} listed twice")));
            }
            state.add(s, points);
        }
        Ok(state)
    }

    pub fn centers(&self) -> &[usize] {
        &self.centers
    }

    /// Nearest-center distance per point; `+inf` before any center exists.
    pub fn delta(&self) -> &[f64] {
        &self.delta
    }

    pub fn is_center(&self, id: usize) -> bool {
        self.is_center[id]
    }

    pub fn non_centers(&self) -> usize {
        self.is_center.len() - self.centers.len()
    }

    pub fn add(&mut self, id: usize, points: &[Configuration]) {
        debug_assert!(!self.is_center[id]);
        self.is_center[id] = true;
        self.centers.push(id);
        let c = &points[id].coords;
        for (d, p) in self.delta.iter_mut().zip(points) {
            let dist = euclidean(&p.coords, c);
            if dist < *d {
                *d = dist;
            }
        }
    }

    pub fn farthest(&self) -> Option<usize> {
        argmax_non_center(&self.delta, &self.is_center)
    }

    /// Adds `k` farthest-first centers and returns them in selection order.
    pub fn select(&mut self, k: usize, points: &[Configuration]) -> Result<Vec<usize>> {
        if k > self.non_centers() {
            return Err(UvpError::InsufficientCandidates {
                needed: k + self.centers.len(),
                available: points.len(),
            });
        }
        let mut picked = Vec::with_capacity(k);
        for _ in 0..k {
            let c = self.farthest().expect("non-center available");
            self.add(c, points);
            picked.push(c);
        }
        Ok(picked)
    }

    /// Covering radius of the current center set.
    pub fn radius(&self) -> f64 {
        self.delta.iter().copied().fold(0.0, f64::max)
    }
}

fn argmax_non_center(delta: &[f64], is_center: &[bool]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, (&d, &taken)) in delta.iter().zip(is_center).enumerate() {
        if taken {
            continue;
        }
        match best {
            Some((_, bd)) if bd >= d => {}
            _ => best = Some((i, d)),
        }
    }
    best.map(|(i, _)| i)
}

/// Greedy k-center: `k` new centers on top of `seeds`, in selection order.
pub fn k_center(k: usize, seeds: &[usize], points: &[Configuration]) -> Result<Vec<usize>> {
    if k + seeds.len() > points.len() {
        return Err(UvpError::InsufficientCandidates {
            needed: k + seeds.len(),
            available: points.len(),
        });
    }
    CenterState::with_seeds(seeds, points)?.select(k, points)
}

/// `max_x min_c ||x - c||` over all of `points`.
pub fn greedy_radius(centers: &[usize], points: &[Configuration]) -> Result<f64> {
    if centers.is_empty() {
        return Err(UvpError::EmptyCenters);
    }
    Ok(points
        .iter()
        .map(|p| {
            centers
                .iter()
                .map(|&c| euclidean(&p.coords, &points[c].coords))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max))
}

/// `min(dist, eta * dist - (eta - 1) / epsilon)`. May be negative.
pub fn enhanced_distance(dist: f64, eta: f64, epsilon: f64) -> f64 {
    let adjusted = eta * dist - (eta - 1.0) / epsilon;
    dist.min(adjusted)
}

/// Smoothness constant and ratio cap used to rescale distances from weak centers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnhancedMetric {
    pub epsilon: f64,
    pub eta_cap: f64,
}

impl EnhancedMetric {
    pub fn new(epsilon: f64) -> Result<Self> {
        Self::with_eta_cap(epsilon, DEFAULT_ETA_CAP)
    }

    pub fn with_eta_cap(epsilon: f64, eta_cap: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(UvpError::InvalidParams(format!("epsilon must be positive, got {epsilon}")));
        }
        if !(eta_cap >= 1.0) {
            return Err(UvpError::InvalidParams(format!("eta cap must be >= 1, got {eta_cap}")));
        }
        Ok(Self { epsilon, eta_cap })
    }

    /// `v_max / value`, with `0/0 = 1` and the ratio clamped to `eta_cap`.
    pub fn eta(&self, value: f64, v_max: f64) -> f64 {
        if value >= v_max {
            1.0
        } else if value <= 0.0 {
            self.eta_cap
        } else {
            (v_max / value).min(self.eta_cap)
        }
    }

    pub fn distance(&self, dist: f64, eta: f64) -> f64 {
        enhanced_distance(dist, eta, self.epsilon)
    }
}

/// Enhanced nearest-center distance of every point given the centers'
/// observed values. Every entry is `+inf` when `centers` is empty.
pub fn enhanced_deltas(
    points: &[Configuration],
    centers: &[usize],
    values: &[f64],
    metric: &EnhancedMetric,
) -> Vec<f64> {
    debug_assert_eq!(centers.len(), values.len());
    let v_max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let etas: Vec<f64> = values.iter().map(|&v| metric.eta(v, v_max)).collect();
    points
        .iter()
        .map(|p| {
            centers
                .iter()
                .zip(&etas)
                .map(|(&c, &eta)| metric.distance(euclidean(&p.coords, &points[c].coords), eta))
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

/// Largest enhanced nearest-center distance over the non-centers.
pub fn enhanced_radius(
    points: &[Configuration],
    centers: &[usize],
    values: &[f64],
    metric: &EnhancedMetric,
) -> f64 {
    let deltas = enhanced_deltas(points, centers, values, metric);
    deltas
        .iter()
        .enumerate()
        .filter(|(i, _)| !centers.contains(i))
        .map(|(_, &d)| d)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Value-aware greedy selection. Each new center is evaluated to budget `t`
/// before the next one is chosen, so the ledger grows by `t` per pick.
///
/// With [`Fill::Partial`] selection stops early once the ledger is exhausted
/// and the last pick may carry a truncated history.
pub fn e_k_center(
    probe: &mut Probe<'_>,
    k: usize,
    seeds: &[usize],
    t: usize,
    metric: &EnhancedMetric,
    fill: Fill,
) -> Result<Vec<usize>> {
    let points = probe.points();
    if k + seeds.len() > points.len() {
        return Err(UvpError::InsufficientCandidates {
            needed: k + seeds.len(),
            available: points.len(),
        });
    }
    let horizon = probe.oracle().horizon();
    if t == 0 || t > horizon {
        return Err(UvpError::InvalidBudget(format!("probe budget {t} outside 1..={horizon}")));
    }
    let mut is_center = vec![false; points.len()];
    let mut centers = Vec::with_capacity(seeds.len() + k);
    let mut values = Vec::with_capacity(seeds.len() + k);
    for &s in seeds {
        let v = probe
            .last(s)
            .ok_or_else(|| UvpError::InvalidParams(format!("seed {s} has no history")))?;
        if std::mem::replace(&mut is_center[s], true) {
            return Err(UvpError::InvalidParams(format!("seed {s} listed twice")));
        }
        centers.push(s);
        values.push(v);
    }

    let mut picked = Vec::with_capacity(k);
    for _ in 0..k {
        if fill == Fill::Partial && probe.ledger().is_exhausted() {
            break;
        }
        let deltas = enhanced_deltas(points, &centers, &values, metric);
        let c = argmax_non_center(&deltas, &is_center).expect("non-center available");
        probe.extend_to(c, t, fill)?;
        is_center[c] = true;
        centers.push(c);
        values.push(probe.last(c).expect("center was evaluated"));
        picked.push(c);
    }
    Ok(picked)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn line(xs: &[f64]) -> Vec<Configuration> {
        xs.iter()
            .enumerate()
            .map(|(i, &x)| Configuration::new(i, vec![x]))
            .collect()
    }

    #[test]
    fn k_center_line() {
        let pts = line(&[0.0, 1.0, 2.0, 9.0]);
        assert_eq!(k_center(2, &[], &pts).unwrap(), vec![0, 3]);
        assert!(k_center(0, &[], &pts).unwrap().is_empty());
    }

    #[test]
    fn k_center_with_seed() {
        // ids 0..3 are the candidates {0, 1, 9}; id 3 is the seed at 5.
        let pts = line(&[0.0, 1.0, 9.0, 5.0]);
        assert_eq!(k_center(1, &[3], &pts).unwrap(), vec![0]);
    }

    #[test]
    fn k_center_insufficient() {
        let pts = line(&[0.0, 1.0]);
        assert!(matches!(
            k_center(2, &[0], &pts),
            Err(UvpError::InsufficientCandidates { .. })
        ));
    }

    #[test]
    fn radius_examples() {
        let pts = line(&[0.0, 1.0, 2.0, 9.0]);
        assert_eq!(greedy_radius(&[0, 3], &pts).unwrap(), 2.0);
        assert_eq!(greedy_radius(&[0, 1, 2, 3], &pts).unwrap(), 0.0);
        assert_eq!(greedy_radius(&[1, 3], &pts).unwrap(), 1.0);
        assert!(matches!(greedy_radius(&[], &pts), Err(UvpError::EmptyCenters)));
    }

    #[test]
    fn enhanced_distance_examples() {
        assert_eq!(enhanced_distance(2.0, 1.0, 0.3), 2.0);
        assert_eq!(enhanced_distance(2.0, 2.0, 0.25), 0.0);
        // two-center geometry: sqrt(d^2 + r^2) with eta = 1 / (1 - eps d)
        let (d, r, eps) = (1.0f64, 0.5f64, 0.5f64);
        let dist = (d * d + r * r).sqrt();
        let got = enhanced_distance(dist, 1.0 / (1.0 - eps * d), eps);
        let want = ((d * d + r * r).sqrt() - d) / (1.0 - eps * d);
        assert!((got - want).abs() < 1e-12);
    }

    #[test]
    fn eta_conventions() {
        let m = EnhancedMetric::new(0.5).unwrap();
        assert_eq!(m.eta(0.0, 0.0), 1.0);
        assert_eq!(m.eta(0.0, 0.3), DEFAULT_ETA_CAP);
        assert_eq!(m.eta(0.25, 0.5), 2.0);
        assert_eq!(m.eta(0.5, 0.5), 1.0);
        assert!(EnhancedMetric::new(0.0).is_err());
    }

    #[test]
    fn center_state_cache_matches_recompute() {
        let pts = line(&[0.0, 3.0, 4.5, 7.0, 10.0]);
        let mut st = CenterState::new(pts.len());
        st.select(3, &pts).unwrap();
        let centers = st.centers();
        for (i, p) in pts.iter().enumerate() {
            let fresh = centers
                .iter()
                .map(|&c| euclidean(&p.coords, &pts[c].coords))
                .fold(f64::INFINITY, f64::min);
            assert_eq!(st.delta()[i], fresh);
        }
        assert_eq!(st.radius(), greedy_radius(centers, &pts).unwrap());
    }
}
