use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::{Configuration, ValueOracle};
use crate::error::{Result, UvpError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LandscapeKind {
    RadialDecay,
    OffCentrePeak,
    CosineRing,
    RadialRipples,
    DoubleRings,
    MultimodalBumps,
}

impl LandscapeKind {
    pub const ALL: [LandscapeKind; 6] = [
        LandscapeKind::RadialDecay,
        LandscapeKind::OffCentrePeak,
        LandscapeKind::CosineRing,
        LandscapeKind::RadialRipples,
        LandscapeKind::DoubleRings,
        LandscapeKind::MultimodalBumps,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LandscapeKind::RadialDecay => "radial-decay",
            LandscapeKind::OffCentrePeak => "off-centre-peak",
            LandscapeKind::CosineRing => "cosine-ring",
            LandscapeKind::RadialRipples => "radial-ripples",
            LandscapeKind::DoubleRings => "double-rings",
            LandscapeKind::MultimodalBumps => "multimodal-bumps",
        }
    }

    /// Smooth single-peak surfaces used for the plain vs enhanced comparison.
    pub fn is_smooth(self) -> bool {
        matches!(
            self,
            LandscapeKind::RadialDecay | LandscapeKind::OffCentrePeak | LandscapeKind::CosineRing
        )
    }

    fn bump_count(self) -> usize {
        match self {
            LandscapeKind::RadialRipples => 150,
            LandscapeKind::MultimodalBumps => 30,
            _ => 0,
        }
    }

    /// Square domain the surface is defined on.
    pub fn half_width(self) -> f64 {
        if self.is_smooth() {
            8.0
        } else {
            10.0
        }
    }
}

impl fmt::Display for LandscapeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LandscapeKind {
    type Err = UvpError;

    fn from_str(s: &str) -> Result<Self> {
        LandscapeKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| UvpError::InvalidParams(format!("unknown landscape '{s}'")))
    }
}

/// Gaussian bump `h * exp(-||x - c||^2 / (2 s^2))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub height: f64,
    pub centre: [f64; 2],
    pub scale: f64,
}

impl Bump {
    fn at(&self, x: f64, y: f64) -> f64 {
        let dx = x - self.centre[0];
        let dy = y - self.centre[1];
        self.height * (-(dx * dx + dy * dy) / (2.0 * self.scale * self.scale)).exp()
    }
}

/// Shape parameters. Each kind reads only the fields it needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandscapeParams {
    pub lambda: f64,
    pub base: f64,
    pub sigma_base: f64,
    pub sigma_peak: f64,
    pub centre: [f64; 2],
    pub radius: f64,
    pub width: f64,
    pub height: f64,
}

impl Default for LandscapeParams {
    fn default() -> Self {
        Self {
            lambda: 0.18,
            base: 0.6,
            sigma_base: 10.0,
            sigma_peak: 5.0,
            centre: [0.2, -0.1],
            radius: 3.0,
            width: 3.0,
            height: 0.06,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LandscapeSpec {
    pub kind: LandscapeKind,
    pub params: LandscapeParams,
    pub bumps: Vec<Bump>,
    pub bounds: Vec<(f64, f64)>,
}

impl LandscapeSpec {
    /// The published parameterization of `kind`; bumps are drawn from `seed`
    /// with heights in [0.03, 1], centres in [-8, 8]^2 and scales in [0.15, 0.8].
    pub fn standard(kind: LandscapeKind, seed: u64) -> Self {
        let mut params = LandscapeParams::default();
        if kind == LandscapeKind::CosineRing {
            params.base = 0.2;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bumps = (0..kind.bump_count())
            .map(|_| Bump {
                height: rng.gen_range(0.03..=1.0),
                centre: [rng.gen_range(-8.0..=8.0), rng.gen_range(-8.0..=8.0)],
                scale: rng.gen_range(0.15..=0.8),
            })
            .collect();
        let w = kind.half_width();
        Self {
            kind,
            params,
            bumps,
            bounds: vec![(-w, w); 2],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.params;
        let all = [p.lambda, p.base, p.sigma_base, p.sigma_peak, p.radius, p.width, p.height, p.centre[0], p.centre[1]];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(UvpError::InvalidParams("landscape parameters must be finite".into()));
        }
        if self.bounds.len() != 2 || self.bounds.iter().any(|&(lo, hi)| !(lo <= hi)) {
            return Err(UvpError::InvalidParams("landscapes need two ordered bounds".into()));
        }
        for b in &self.bumps {
            let ok = (0.03..=1.0).contains(&b.height)
                && b.centre.iter().all(|c| (-8.0..=8.0).contains(c))
                && (0.15..=0.8).contains(&b.scale);
            if !ok {
                return Err(UvpError::InvalidParams(format!("bump {b:?} outside the allowed ranges")));
            }
        }
        Ok(())
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != 2 {
            return Err(UvpError::InvalidParams(format!("landscapes are 2-D, got {} coordinates", x.len())));
        }
        if x.iter().zip(&self.bounds).any(|(v, &(lo, hi))| !(lo..=hi).contains(v)) {
            return Err(UvpError::OutOfDomain { point: x.to_vec() });
        }
        Ok(self.raw(x[0], x[1]))
    }

    fn bump_sum(&self, x: f64, y: f64) -> f64 {
        self.bumps.iter().map(|b| b.at(x, y)).sum()
    }

    fn raw(&self, x: f64, y: f64) -> f64 {
        let p = &self.params;
        let r2 = x * x + y * y;
        let r = r2.sqrt();
        match self.kind {
            LandscapeKind::RadialDecay => (-p.lambda * r).exp(),
            LandscapeKind::OffCentrePeak => {
                let (dx, dy) = (x - p.centre[0], y - p.centre[1]);
                p.base * (-r2 / (2.0 * p.sigma_base * p.sigma_base)).exp()
                    + (-(dx * dx + dy * dy) / (2.0 * p.sigma_peak * p.sigma_peak)).exp()
            }
            LandscapeKind::CosineRing => {
                let off = r - p.radius;
                if off.abs() <= p.width {
                    p.base + (p.height + p.height * (PI / p.width * off).cos()) / 2.0
                } else {
                    p.base
                }
            }
            LandscapeKind::RadialRipples => {
                0.5 * ((3.0 * r).sin() + 1.0) * (-r2 / 50.0).exp() + self.bump_sum(x, y)
            }
            LandscapeKind::DoubleRings => {
                let theta = y.atan2(x);
                0.5 * (-(r - 3.0).powi(2) / (2.0 * 0.18 * 0.18)).exp()
                    + 0.4 * (-(r - 6.0).powi(2) / (2.0 * 0.25 * 0.25)).exp()
                    + 0.3 * ((4.0 * theta).sin() + 1.0) * (-r2 / 90.0).exp()
            }
            LandscapeKind::MultimodalBumps => 0.4 * (-r2 / (2.0 * 4.5 * 4.5)).exp() + self.bump_sum(x, y),
        }
    }
}

/// Closed-form value of `spec` at `x`.
pub fn landscape_eval(spec: &LandscapeSpec, x: &[f64]) -> Result<f64> {
    spec.eval(x)
}

/// A landscape evaluated once over a fixed candidate set.
///
/// Several surfaces exceed 1, so values are divided by `max(1, largest value)`
/// over the candidates. Ratios between configurations, and hence the
/// smoothness constant, are unchanged. Every budget returns the same value.
#[derive(Debug, Clone)]
pub struct LandscapeOracle {
    values: Vec<f64>,
    scale: f64,
    horizon: usize,
}

impl LandscapeOracle {
    pub fn new(spec: &LandscapeSpec, points: &[Configuration], horizon: usize) -> Result<Self> {
        spec.validate()?;
        if horizon < 1 {
            return Err(UvpError::InvalidBudget("horizon must be at least 1".into()));
        }
        let raw = points.iter().map(|p| spec.eval(&p.coords)).collect::<Result<Vec<_>>>()?;
        let scale = raw.iter().copied().fold(1.0, f64::max);
        Ok(Self {
            values: raw.iter().map(|v| v / scale).collect(),
            scale,
            horizon,
        })
    }

    /// Divisor applied to raw surface values.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

impl ValueOracle for LandscapeOracle {
    fn dimension(&self) -> usize {
        2
    }

    fn horizon(&self) -> usize {
        self.horizon
    }

    fn query(&self, x: &Configuration, _b: usize) -> f64 {
        self.values[x.id]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::euclidean;
    use approx::assert_relative_eq;

    #[test]
    fn published_examples() {
        let rad = LandscapeSpec::standard(LandscapeKind::RadialDecay, 0);
        assert_eq!(rad.eval(&[0.0, 0.0]).unwrap(), 1.0);
        let ring = LandscapeSpec::standard(LandscapeKind::CosineRing, 0);
        assert_relative_eq!(ring.eval(&[3.0, 0.0]).unwrap(), 0.26, epsilon = 1e-15);
        assert_relative_eq!(ring.eval(&[0.0, 3.0]).unwrap(), 0.26, epsilon = 1e-15);
        assert_eq!(ring.eval(&[8.0, 0.0]).unwrap(), 0.2);
        // the origin sits on the band edge where the cosine term vanishes
        assert_relative_eq!(ring.eval(&[0.0, 0.0]).unwrap(), 0.2, epsilon = 1e-15);
    }

    #[test]
    fn off_centre_peak_maximum_near_centre() {
        let off = LandscapeSpec::standard(LandscapeKind::OffCentrePeak, 0);
        let at_c = off.eval(&[0.2, -0.1]).unwrap();
        let base = 0.6 * (-(0.04 + 0.01) / 200.0f64).exp();
        assert_relative_eq!(at_c, base + 1.0, epsilon = 1e-15);
    }

    #[test]
    fn out_of_domain() {
        let rad = LandscapeSpec::standard(LandscapeKind::RadialDecay, 0);
        assert!(matches!(rad.eval(&[8.5, 0.0]), Err(UvpError::OutOfDomain { .. })));
        let rip = LandscapeSpec::standard(LandscapeKind::RadialRipples, 0);
        assert!(rip.eval(&[9.5, -9.5]).is_ok());
        assert!(rad.eval(&[1.0]).is_err());
    }

    #[test]
    fn bumps_seeded_and_in_range() {
        let a = LandscapeSpec::standard(LandscapeKind::RadialRipples, 4);
        let b = LandscapeSpec::standard(LandscapeKind::RadialRipples, 4);
        assert_eq!(a, b);
        assert_eq!(a.bumps.len(), 150);
        assert_eq!(LandscapeSpec::standard(LandscapeKind::MultimodalBumps, 4).bumps.len(), 30);
        a.validate().unwrap();
    }

    #[test]
    fn double_rings_angular_term() {
        let s = LandscapeSpec::standard(LandscapeKind::DoubleRings, 0);
        let at = |theta: f64| s.eval(&[2.0 * theta.cos(), 2.0 * theta.sin()]).unwrap();
        let eighth = std::f64::consts::FRAC_PI_8;
        // sin(4 theta) has period pi / 2, so opposite points agree
        assert_relative_eq!(at(eighth), at(eighth + PI), epsilon = 1e-12);
        let radial = 0.5 * (-1.0f64 / (2.0 * 0.18 * 0.18)).exp() + 0.4 * (-16.0f64 / (2.0 * 0.25 * 0.25)).exp();
        assert_relative_eq!(at(eighth), radial + 0.6 * (-4.0 / 90.0f64).exp(), epsilon = 1e-12);
        assert_relative_eq!(at(-eighth), radial, epsilon = 1e-12);
    }

    #[test]
    fn radial_decay_ratio_certificate() {
        let s = LandscapeSpec::standard(LandscapeKind::RadialDecay, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let eps = 0.2;
        for _ in 0..10_000 {
            let a = [rng.gen_range(-8.0..=8.0), rng.gen_range(-8.0..=8.0)];
            let b = [rng.gen_range(-8.0..=8.0), rng.gen_range(-8.0..=8.0)];
            let (fa, fb) = (s.eval(&a).unwrap(), s.eval(&b).unwrap());
            let ratio = fa.min(fb) / fa.max(fb);
            assert!(ratio >= 1.0 - eps * euclidean(&a, &b) - 1e-12);
        }
    }

    #[test]
    fn cosine_ring_gradient_bound() {
        let s = LandscapeSpec::standard(LandscapeKind::CosineRing, 0);
        let p = s.params;
        let bound = p.height * PI / (2.0 * p.width);
        let h = 1e-6;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5000 {
            let x: f64 = rng.gen_range(-7.9..=7.9);
            let y: f64 = rng.gen_range(-7.9..=7.9);
            let gx = (s.raw(x + h, y) - s.raw(x - h, y)) / (2.0 * h);
            let gy = (s.raw(x, y + h) - s.raw(x, y - h)) / (2.0 * h);
            assert!((gx * gx + gy * gy).sqrt() <= bound + 1e-6);
        }
    }

    #[test]
    fn oracle_normalizes_large_surfaces() {
        let spec = LandscapeSpec::standard(LandscapeKind::OffCentrePeak, 0);
        let pts = vec![
            Configuration::new(0, vec![0.2, -0.1]),
            Configuration::new(1, vec![5.0, 5.0]),
        ];
        let o = LandscapeOracle::new(&spec, &pts, 3).unwrap();
        assert_eq!(o.query(&pts[0], 1), 1.0);
        assert!(o.scale() > 1.5);
        assert_eq!(o.query(&pts[1], 1), o.query(&pts[1], 3));

        let rad = LandscapeSpec::standard(LandscapeKind::RadialDecay, 0);
        let o = LandscapeOracle::new(&rad, &pts, 1).unwrap();
        assert_eq!(o.scale(), 1.0);
    }
}
