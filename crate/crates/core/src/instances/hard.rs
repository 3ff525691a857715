use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::domain::{Configuration, ValueOracle};
use crate::error::{Result, UvpError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HardVariant {
    /// Values appear only at the horizon.
    Fc,
    /// Linear ramps, with decoys plateauing early.
    Ac,
}

impl fmt::Display for HardVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HardVariant::Fc => "fc",
            HardVariant::Ac => "ac",
        })
    }
}

impl FromStr for HardVariant {
    type Err = UvpError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fc" => Ok(HardVariant::Fc),
            "ac" => Ok(HardVariant::Ac),
            other => Err(UvpError::InvalidParams(format!("unknown hard variant '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HardRole {
    Optimal,
    Suboptimal,
    Decoy,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardInstanceSpec {
    pub variant: HardVariant,
    pub epsilon: f64,
    pub beta: f64,
    /// Decoy plateau fraction; read by the ramp variant only.
    pub theta_frac: f64,
    pub k: usize,
    pub n_per_cluster: usize,
    /// Distance of every non-anchor point from its cluster anchor.
    pub r: f64,
    pub horizon: usize,
    pub seed: u64,
}

impl HardInstanceSpec {
    pub fn clusters(&self) -> usize {
        (self.beta * self.k as f64).ceil() as usize
    }

    /// Anchor spacing, large enough that points of different clusters stay
    /// at least `1/epsilon` apart.
    pub fn spacing(&self) -> f64 {
        (1.0 / self.epsilon + 2.0 * self.r).ceil()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(UvpError::InvalidParams(m));
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return bad(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if !(self.beta > 1.0 && self.beta.is_finite()) {
            return bad(format!("beta must exceed 1, got {}", self.beta));
        }
        if self.k < 1 || self.n_per_cluster < 1 || self.horizon < 1 {
            return bad("k, n and the horizon must all be at least 1".into());
        }
        if !(self.r >= 0.0 && self.epsilon * self.r <= 1.0) {
            return bad(format!("need r >= 0 and epsilon * r <= 1, got r = {}", self.r));
        }
        if self.variant == HardVariant::Ac && !(self.theta_frac > 0.0 && self.theta_frac < 1.0) {
            return bad(format!("theta must lie in (0, 1), got {}", self.theta_frac));
        }
        Ok(())
    }
}

/// Adversarial clustered instance with a single hidden optimum.
///
/// Ids are cluster-major and each cluster lists its anchor first. The
/// anchor of the optimal cluster is the optimum.
#[derive(Debug, Clone)]
pub struct HardInstance {
    pub spec: HardInstanceSpec,
    pub points: Vec<Configuration>,
    pub roles: Vec<HardRole>,
    pub optimal_cluster: usize,
}

pub fn gen_hard(spec: &HardInstanceSpec) -> Result<HardInstance> {
    spec.validate()?;
    let m = spec.clusters();
    let n = spec.n_per_cluster;
    let total = m
        .checked_mul(n)
        .ok_or_else(|| UvpError::InvalidParams("instance too large".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let optimal_cluster = rng.gen_range(0..m);
    let offset = spec.spacing() / std::f64::consts::SQRT_2;

    let mut points = Vec::with_capacity(total);
    let mut roles = Vec::with_capacity(total);
    for c in 0..m {
        let mut anchor = vec![0.0; m];
        anchor[c] = offset;
        for j in 0..n {
            let coords = if j == 0 {
                anchor.clone()
            } else {
                let dir = random_direction(&mut rng, m);
                anchor.iter().zip(dir).map(|(a, u)| a + spec.r * u).collect()
            };
            points.push(Configuration::new(points.len(), coords));
            roles.push(match (c == optimal_cluster, j == 0) {
                (true, true) => HardRole::Optimal,
                (true, false) => HardRole::Suboptimal,
                (false, _) => HardRole::Decoy,
            });
        }
    }
    Ok(HardInstance {
        spec: *spec,
        points,
        roles,
        optimal_cluster,
    })
}

fn random_direction(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-9 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

impl HardInstance {
    pub fn value(&self, role: HardRole, b: usize) -> f64 {
        let s = &self.spec;
        let t = s.horizon as f64;
        let sub = 1.0 - s.epsilon * s.r;
        match s.variant {
            HardVariant::Fc => {
                if b < s.horizon {
                    return 0.0;
                }
                match role {
                    HardRole::Optimal => 1.0,
                    HardRole::Suboptimal => sub,
                    HardRole::Decoy => 0.0,
                }
            }
            HardVariant::Ac => {
                let plateau = (s.theta_frac * t).floor() as usize;
                match role {
                    HardRole::Optimal => b as f64 / t,
                    HardRole::Suboptimal => sub * b as f64 / t,
                    HardRole::Decoy => sub * b.min(plateau) as f64 / t,
                }
            }
        }
    }

    pub fn optimum(&self) -> usize {
        self.optimal_cluster * self.spec.n_per_cluster
    }
}

impl ValueOracle for HardInstance {
    fn dimension(&self) -> usize {
        self.spec.clusters()
    }

    fn horizon(&self) -> usize {
        self.spec.horizon
    }

    fn query(&self, x: &Configuration, b: usize) -> f64 {
        self.value(self.roles[x.id], b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::euclidean;

    fn spec(variant: HardVariant) -> HardInstanceSpec {
        HardInstanceSpec {
            variant,
            epsilon: 0.5,
            beta: 2.0,
            theta_frac: 0.5,
            k: 2,
            n_per_cluster: 5,
            r: 0.5,
            horizon: 4,
            seed: 3,
        }
    }

    #[test]
    fn fc_values() {
        let inst = gen_hard(&spec(HardVariant::Fc)).unwrap();
        assert_eq!(inst.points.len(), 20);
        let opt = inst.optimum();
        assert_eq!(inst.roles[opt], HardRole::Optimal);
        assert_eq!(inst.query(&inst.points[opt], 4), 1.0);
        assert_eq!(inst.query(&inst.points[opt], 3), 0.0);
        assert_eq!(inst.query(&inst.points[opt + 1], 4), 0.75);
        for (p, role) in inst.points.iter().zip(&inst.roles) {
            if *role == HardRole::Decoy {
                assert!((1..=4).all(|b| inst.query(p, b) == 0.0));
            }
        }
    }

    #[test]
    fn ac_values_and_concavity() {
        let inst = gen_hard(&spec(HardVariant::Ac)).unwrap();
        let opt = inst.optimum();
        assert_eq!(inst.query(&inst.points[opt + 1], 4), 0.75);
        assert_eq!(inst.query(&inst.points[opt], 2), 0.5);
        let decoy = inst.roles.iter().position(|r| *r == HardRole::Decoy).unwrap();
        let curve: Vec<f64> = (1..=4).map(|b| inst.query(&inst.points[decoy], b)).collect();
        assert_eq!(curve, vec![0.1875, 0.375, 0.375, 0.375]);
        for p in &inst.points {
            let c: Vec<f64> = (0..=4).map(|b| if b == 0 { 0.0 } else { inst.query(p, b) }).collect();
            let inc: Vec<f64> = c.windows(2).map(|w| w[1] - w[0]).collect();
            assert!(inc.windows(2).all(|w| w[1] <= w[0] + 1e-15));
        }
    }

    #[test]
    fn geometry() {
        let s = spec(HardVariant::Fc);
        let inst = gen_hard(&s).unwrap();
        let n = s.n_per_cluster;
        for (i, a) in inst.points.iter().enumerate() {
            for (j, b) in inst.points.iter().enumerate() {
                let d = euclidean(&a.coords, &b.coords);
                if i / n != j / n {
                    assert!(d >= 1.0 / s.epsilon - 1e-9);
                } else if i % n == 0 && j % n != 0 {
                    assert!((d - s.r).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn optimal_cluster_depends_on_seed() {
        let seen: std::collections::BTreeSet<usize> = (0..40)
            .map(|seed| gen_hard(&HardInstanceSpec { seed, ..spec(HardVariant::Fc) }).unwrap().optimal_cluster)
            .collect();
        assert_eq!(seen.len(), 4);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(gen_hard(&HardInstanceSpec { beta: 1.0, ..spec(HardVariant::Fc) }).is_err());
        assert!(gen_hard(&HardInstanceSpec { r: 3.0, ..spec(HardVariant::Fc) }).is_err());
        assert!(gen_hard(&HardInstanceSpec { theta_frac: 1.0, ..spec(HardVariant::Ac) }).is_err());
    }
}
