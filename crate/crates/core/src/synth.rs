//! Synthetic data: points on a curve plus isotropic Gaussian noise.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SynthError {
    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),
}

/// A curve with a natural parameter `t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum SyntheticCurve {
    /// `(a + R cos t, b + R sin t)`.
    Circle { a: f64, b: f64, r: f64 },
    /// Center `(a, b)`, semi-axes `p`, `q`, rotated by `angle`:
    /// `(p cos t, q sin t)` before rotation.
    Ellipse {
        a: f64,
        b: f64,
        p: f64,
        q: f64,
        angle: f64,
    },
    /// `(± p cosh t, q sinh t)` before rotation and translation; points
    /// alternate between the two branches.
    Hyperbola {
        a: f64,
        b: f64,
        p: f64,
        q: f64,
        angle: f64,
    },
    /// `(t, c t²)`.
    Parabola { c: f64 },
}

impl SyntheticCurve {
    /// Builds a curve from a family name and a flat parameter list.
    pub fn from_params(family: &str, params: &[f64]) -> Result<Self, SynthError> {
        let need = |k: usize| {
            if params.len() == k {
                Ok(())
            } else {
                Err(SynthError::InvalidSpec(format!(
                    "{family} takes {k} parameters, got {}",
                    params.len()
                )))
            }
        };
        let curve = match family {
            "circle" => {
                need(3)?;
                SyntheticCurve::Circle {
                    a: params[0],
                    b: params[1],
                    r: params[2],
                }
            }
            "ellipse" | "hyperbola" => {
                need(5)?;
                let (a, b, p, q, angle) = (params[0], params[1], params[2], params[3], params[4]);
                if family == "ellipse" {
                    SyntheticCurve::Ellipse { a, b, p, q, angle }
                } else {
                    SyntheticCurve::Hyperbola { a, b, p, q, angle }
                }
            }
            "parabola" => {
                need(1)?;
                SyntheticCurve::Parabola { c: params[0] }
            }
            other => {
                return Err(SynthError::InvalidSpec(format!(
                    "unknown family `{other}` (expected circle, ellipse, hyperbola or parabola)"
                )))
            }
        };
        curve.validate()?;
        Ok(curve)
    }

    fn validate(&self) -> Result<(), SynthError> {
        let ok = match *self {
            SyntheticCurve::Circle { a, b, r } => a.is_finite() && b.is_finite() && r > 0.0 && r.is_finite(),
            SyntheticCurve::Ellipse { a, b, p, q, angle }
            | SyntheticCurve::Hyperbola { a, b, p, q, angle } => {
                [a, b, angle].iter().all(|v| v.is_finite())
                    && p > 0.0
                    && q > 0.0
                    && p.is_finite()
                    && q.is_finite()
            }
            SyntheticCurve::Parabola { c } => c.is_finite() && c != 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(SynthError::InvalidSpec(format!(
                "invalid curve parameters {self:?}"
            )))
        }
    }

    /// Default range of the natural parameter: the full curve for closed
    /// curves, `[−1.5, 1.5]` for hyperbola branches and `[−1, 1]` for
    /// parabolas.
    pub fn default_arc(&self) -> (f64, f64) {
        match self {
            SyntheticCurve::Circle { .. } | SyntheticCurve::Ellipse { .. } => (0.0, TAU),
            SyntheticCurve::Hyperbola { .. } => (-1.5, 1.5),
            SyntheticCurve::Parabola { .. } => (-1.0, 1.0),
        }
    }

    /// The point at parameter `t`; `branch` selects the hyperbola branch.
    pub fn point(&self, t: f64, branch: bool) -> (f64, f64) {
        let place = |a: f64, b: f64, u: f64, v: f64, angle: f64| {
            let (s, c) = angle.sin_cos();
            (a + c * u - s * v, b + s * u + c * v)
        };
        match *self {
            SyntheticCurve::Circle { a, b, r } => (a + r * t.cos(), b + r * t.sin()),
            SyntheticCurve::Ellipse { a, b, p, q, angle } => place(a, b, p * t.cos(), q * t.sin(), angle),
            SyntheticCurve::Hyperbola { a, b, p, q, angle } => {
                let sign = if branch { -1.0 } else { 1.0 };
                place(a, b, sign * p * t.cosh(), q * t.sinh(), angle)
            }
            SyntheticCurve::Parabola { c } => (t, c * t * t),
        }
    }

    /// Implicit equation value, zero on the curve.
    pub fn implicit(&self, x: f64, y: f64) -> f64 {
        let local = |a: f64, b: f64, angle: f64| {
            let (s, c) = angle.sin_cos();
            let (dx, dy) = (x - a, y - b);
            (c * dx + s * dy, -s * dx + c * dy)
        };
        match *self {
            SyntheticCurve::Circle { a, b, r } => (x - a).powi(2) + (y - b).powi(2) - r * r,
            SyntheticCurve::Ellipse { a, b, p, q, angle } => {
                let (u, v) = local(a, b, angle);
                (u / p).powi(2) + (v / q).powi(2) - 1.0
            }
            SyntheticCurve::Hyperbola { a, b, p, q, angle } => {
                let (u, v) = local(a, b, angle);
                (u / p).powi(2) - (v / q).powi(2) - 1.0
            }
            SyntheticCurve::Parabola { c } => y - c * x * x,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub curve: SyntheticCurve,
    pub n: usize,
    /// Standard deviation of the noise added to each coordinate.
    pub sigma: f64,
    /// Range of the natural parameter; `None` uses the curve's default.
    pub arc: Option<(f64, f64)>,
    pub seed: u64,
}

/// Draws `n` parameters uniformly from the arc, maps them onto the curve and
/// adds independent `N(0, σ²)` noise to both coordinates.
///
/// The generator is ChaCha8 seeded with `seed`; for each point the draws are
/// `t`, then the `x` noise, then the `y` noise, so output is reproducible
/// bit for bit.
pub fn generate(spec: &SyntheticSpec) -> Result<Vec<(f64, f64)>, SynthError> {
    spec.curve.validate()?;
    if spec.n == 0 {
        return Err(SynthError::InvalidSpec("n must be at least 1".into()));
    }
    if !(spec.sigma >= 0.0 && spec.sigma.is_finite()) {
        return Err(SynthError::InvalidSpec(format!(
            "sigma must be >= 0, got {}",
            spec.sigma
        )));
    }
    let (lo, hi) = spec.arc.unwrap_or_else(|| spec.curve.default_arc());
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(SynthError::InvalidSpec(format!("empty arc [{lo}, {hi}]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let noise = Normal::new(0.0, spec.sigma).expect("sigma validated");
    Ok((0..spec.n)
        .map(|i| {
            let t = rng.random_range(lo..hi);
            let (x, y) = spec.curve.point(t, i % 2 == 1);
            (x + noise.sample(&mut rng), y + noise.sample(&mut rng))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle_spec(n: usize, sigma: f64, seed: u64) -> SyntheticSpec {
        SyntheticSpec {
            curve: SyntheticCurve::Circle {
                a: 1.0,
                b: -2.0,
                r: 3.0,
            },
            n,
            sigma,
            arc: None,
            seed,
        }
    }

    #[test]
    fn noiseless_points_lie_on_curve() {
        let curves = [
            SyntheticCurve::Circle {
                a: 1.0,
                b: -2.0,
                r: 3.0,
            },
            SyntheticCurve::Ellipse {
                a: 0.5,
                b: 1.0,
                p: 2.0,
                q: 1.0,
                angle: 0.3,
            },
            SyntheticCurve::Hyperbola {
                a: 0.0,
                b: 0.0,
                p: 1.0,
                q: 2.0,
                angle: -0.4,
            },
            SyntheticCurve::Parabola { c: 1.5 },
        ];
        for curve in curves {
            let spec = SyntheticSpec {
                curve,
                n: 50,
                sigma: 0.0,
                arc: None,
                seed: 3,
            };
            for (x, y) in generate(&spec).unwrap() {
                assert!(
                    curve.implicit(x, y).abs() < 1e-12 * (1.0 + x * x + y * y),
                    "{curve:?}"
                );
            }
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let a = generate(&circle_spec(100, 0.1, 42)).unwrap();
        let b = generate(&circle_spec(100, 0.1, 42)).unwrap();
        let c = generate(&circle_spec(100, 0.1, 43)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn radial_noise_has_requested_spread() {
        let sigma = 0.05;
        let pts = generate(&circle_spec(10_000, sigma, 7)).unwrap();
        let residuals: Vec<f64> = pts
            .iter()
            .map(|(x, y)| ((x - 1.0).hypot(y + 2.0)) - 3.0)
            .collect();
        let n = residuals.len() as f64;
        let mean = residuals.iter().sum::<f64>() / n;
        let sd = (residuals.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        assert!(sd >= 0.9 * sigma && sd <= 1.1 * sigma, "sd = {sd}");
    }

    #[test]
    fn invalid_specs() {
        assert!(generate(&circle_spec(0, 0.1, 1)).is_err());
        assert!(generate(&circle_spec(10, -0.1, 1)).is_err());
        assert!(SyntheticCurve::from_params("spiral", &[]).is_err());
        assert!(SyntheticCurve::from_params("circle", &[0.0, 0.0]).is_err());
        assert!(SyntheticCurve::from_params("circle", &[0.0, 0.0, -1.0]).is_err());
        let mut spec = circle_spec(10, 0.1, 1);
        spec.arc = Some((1.0, 1.0));
        assert!(generate(&spec).is_err());
    }
}
