//! Built-in parametric curve families.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::poly::{Coeff, RatPoly, RealPoly};

/// A parametric family `P(x, y; Θ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveFamily {
    /// `cos φ · x + sin φ · y − ρ`, with `Θ = (φ, ρ)`.
    Line,
    /// `(x − a)² + (y − b)² − R²`, with `Θ = (a, b, R)`.
    Circle,
    /// `a x² + b y² + c` with `a, b > 0`, `a ≠ b`, `c < 0`.
    Ellipse,
    /// `a x² + b y² + c` with `a > 0 > b`, `c ≠ 0`.
    Hyperbola,
    /// `y − c x²`, with `Θ = (c)`.
    Parabola,
}

/// Sampled parameters lie on this grid so that exact and floating
/// polynomials describe the same curve.
const GRID: f64 = 1000.0;

fn grid_sample<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo..=hi) * GRID).round() / GRID
}

impl CurveFamily {
    pub const ALL: [CurveFamily; 5] = [
        CurveFamily::Line,
        CurveFamily::Circle,
        CurveFamily::Ellipse,
        CurveFamily::Hyperbola,
        CurveFamily::Parabola,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CurveFamily::Line => "line",
            CurveFamily::Circle => "circle",
            CurveFamily::Ellipse => "ellipse",
            CurveFamily::Hyperbola => "hyperbola",
            CurveFamily::Parabola => "parabola",
        }
    }

    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            CurveFamily::Line => &["phi", "rho"],
            CurveFamily::Circle => &["a", "b", "r"],
            CurveFamily::Ellipse | CurveFamily::Hyperbola => &["a", "b", "c"],
            CurveFamily::Parabola => &["c"],
        }
    }

    pub fn num_params(self) -> usize {
        self.param_names().len()
    }

    /// Draws a nondegenerate parameter vector on a 1/1000 grid.
    ///
    /// Circle centers come from `[−3, 3]²` and radii from `[0.5, 2]`; conic
    /// coefficients have magnitudes in `[0.5, 2]`.
    pub fn sample_params<R: Rng + ?Sized>(self, rng: &mut R) -> Vec<f64> {
        match self {
            CurveFamily::Line => vec![grid_sample(rng, -3.0, 3.0), grid_sample(rng, -3.0, 3.0)],
            CurveFamily::Circle => vec![
                grid_sample(rng, -3.0, 3.0),
                grid_sample(rng, -3.0, 3.0),
                grid_sample(rng, 0.5, 2.0),
            ],
            CurveFamily::Ellipse | CurveFamily::Hyperbola => {
                let a = grid_sample(rng, 0.5, 2.0);
                let mut b = grid_sample(rng, 0.5, 2.0);
                while b == a {
                    b = grid_sample(rng, 0.5, 2.0);
                }
                let c = grid_sample(rng, 0.5, 2.0);
                if self == CurveFamily::Ellipse {
                    vec![a, b, -c]
                } else {
                    let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                    vec![a, -b, sign * c]
                }
            }
            CurveFamily::Parabola => vec![grid_sample(rng, 0.5, 2.0)],
        }
    }

    /// Checks the family's parameter constraints.
    pub fn validate(self, theta: &[f64]) -> Result<(), String> {
        if theta.len() != self.num_params() {
            return Err(format!(
                "{} takes {} parameters, got {}",
                self.name(),
                self.num_params(),
                theta.len()
            ));
        }
        if theta.iter().any(|v| !v.is_finite()) {
            return Err("parameters must be finite".into());
        }
        let ok = match self {
            CurveFamily::Line => true,
            CurveFamily::Circle => theta[2] > 0.0,
            CurveFamily::Ellipse => {
                theta[0] > 0.0 && theta[1] > 0.0 && theta[0] != theta[1] && theta[2] < 0.0
            }
            CurveFamily::Hyperbola => theta[0] > 0.0 && theta[1] < 0.0 && theta[2] != 0.0,
            CurveFamily::Parabola => theta[0] != 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(format!(
                "parameters {theta:?} violate the {} constraints",
                self.name()
            ))
        }
    }

    /// `P(x, y; Θ)` in any coefficient domain. Parameters are converted with
    /// [`Coeff::rationalize`], so grid values are exact in rational mode.
    pub fn polynomial_in<C: Coeff>(self, theta: &[f64]) -> crate::poly::BivariatePoly<C> {
        use crate::poly::BivariatePoly;
        let v = |i: usize| C::rationalize(theta[i]);
        let one = C::one;
        match self {
            CurveFamily::Line => {
                let (s, c) = theta[0].sin_cos();
                BivariatePoly::from_terms([(1, 0, C::from_f64(c)), (0, 1, C::from_f64(s)), (0, 0, -v(1))])
            }
            CurveFamily::Circle => {
                let (a, b, r) = (v(0), v(1), v(2));
                let two = C::from_i64(2);
                BivariatePoly::from_terms([
                    (2, 0, one()),
                    (0, 2, one()),
                    (1, 0, -(two.clone() * a.clone())),
                    (0, 1, -(two * b.clone())),
                    (0, 0, a.clone() * a + b.clone() * b - r.clone() * r),
                ])
            }
            CurveFamily::Ellipse | CurveFamily::Hyperbola => {
                BivariatePoly::from_terms([(2, 0, v(0)), (0, 2, v(1)), (0, 0, v(2))])
            }
            CurveFamily::Parabola => BivariatePoly::from_terms([(0, 1, one()), (2, 0, -v(0))]),
        }
    }

    pub fn polynomial(self, theta: &[f64]) -> RealPoly {
        self.polynomial_in(theta)
    }

    pub fn exact_polynomial(self, theta: &[f64]) -> RatPoly {
        self.polynomial_in(theta)
    }

    /// `∂P/∂Θⱼ` for each parameter, as polynomials in `x, y`.
    pub fn polynomial_derivatives(self, theta: &[f64]) -> Vec<RealPoly> {
        match self {
            CurveFamily::Line => {
                let (s, c) = theta[0].sin_cos();
                vec![
                    RealPoly::from_terms([(1, 0, -s), (0, 1, c)]),
                    RealPoly::constant(-1.0),
                ]
            }
            CurveFamily::Circle => {
                let (a, b, r) = (theta[0], theta[1], theta[2]);
                vec![
                    RealPoly::from_terms([(1, 0, -2.0), (0, 0, 2.0 * a)]),
                    RealPoly::from_terms([(0, 1, -2.0), (0, 0, 2.0 * b)]),
                    RealPoly::constant(-2.0 * r),
                ]
            }
            CurveFamily::Ellipse | CurveFamily::Hyperbola => vec![
                RealPoly::monomial(1.0, 2, 0),
                RealPoly::monomial(1.0, 0, 2),
                RealPoly::constant(1.0),
            ],
            CurveFamily::Parabola => vec![RealPoly::monomial(-1.0, 2, 0)],
        }
    }
}

impl fmt::Display for CurveFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CurveFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CurveFamily::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                format!("unknown curve family `{s}` (expected line, circle, ellipse, hyperbola or parabola)")
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;
    use rand::SeedableRng;

    #[test]
    fn samples_satisfy_constraints() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for family in CurveFamily::ALL {
            for _ in 0..200 {
                let theta = family.sample_params(&mut rng);
                family.validate(&theta).unwrap();
                for v in &theta {
                    assert!(((v * 1000.0).round() - v * 1000.0).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn exact_circle_polynomial() {
        let p = CurveFamily::Circle.exact_polynomial(&[0.5, -1.25, 1.5]);
        let expected: RatPoly = "1 x^2 + 1 y^2 - 1 x + 5/2 y - 7/16".parse().unwrap();
        assert_eq!(p, expected);
        assert_eq!(p.coeff(0, 0), rat(-7, 16));
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for family in CurveFamily::ALL {
            let theta = family.sample_params(&mut rng);
            let d = family.polynomial_derivatives(&theta);
            let (x, y) = (0.7, -1.3);
            for (j, dp) in d.iter().enumerate() {
                let h = 1e-6;
                let mut up = theta.clone();
                let mut dn = theta.clone();
                up[j] += h;
                dn[j] -= h;
                let fd = (family.polynomial(&up).eval_real(x, y) - family.polynomial(&dn).eval_real(x, y))
                    / (2.0 * h);
                assert!((fd - dp.eval_real(x, y)).abs() < 1e-6, "{family} param {j}");
            }
        }
    }

    #[test]
    fn parse_names() {
        assert_eq!("Circle".parse::<CurveFamily>().unwrap(), CurveFamily::Circle);
        assert!("spiral".parse::<CurveFamily>().is_err());
    }
}
