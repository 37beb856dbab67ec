//! Curve fitters.
//!
//! * [`fit_circle_reduced`]: gradient-weighted algebraic circle fit driven
//!   only by a [`MomentVector`](crate::moments::MomentVector);
//! * [`fit_circle_geometric`]: orthogonal distance circle fit on the points;
//! * [`fit_conic_reweight`]: gradient-weighted conic fit by reweighting, one
//!   pass over the points per iteration;
//! * [`fit_reduced_generic`]: gradient-weighted fit of any family with a
//!   polynomial weight, again from moments only.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analyzer::CurveFamily;
use crate::moments::MomentError;

mod circle;
mod conic;
mod generic;
mod geometric;

pub use circle::{eval_fa_circle, fit_circle_reduced, kasa_init, reduced_circle_iteration, CircleObjective};
pub use conic::{conic_stationarity_residual, fit_conic_reweight, reweight_iteration};
pub use generic::{eval_fa_generic, fit_reduced_generic, initial_params, GenericObjective};
pub use geometric::fit_circle_geometric;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("radius must be positive, got {0}")]
    InvalidRadius(f64),
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: u64 },
    #[error("degenerate data: {0}")]
    DegenerateData(String),
    #[error("initial circle has imaginary radius (R^2 = {0})")]
    ImaginaryRadius(f64),
    #[error("circle center coincides with data point {index}")]
    CenterHitsDataPoint { index: usize },
    #[error("gradient of the conic vanishes at data point {index}")]
    GradientVanishesAtSample { index: usize },
    #[error("moment degree {found} is below the required {needed}")]
    DegreeMismatch { needed: u32, found: u32 },
    #[error("certificate identity residual {0:e} exceeds tolerance")]
    UnverifiedCertificate(f64),
    #[error("invalid initial parameters: {0}")]
    InvalidInit(String),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error(transparent)]
    Moments(#[from] MomentError),
}

/// A circle `(x − a)² + (y − b)² = R²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircleParams {
    pub a: f64,
    pub b: f64,
    pub r: f64,
}

impl CircleParams {
    pub fn new(a: f64, b: f64, r: f64) -> Result<Self, FitError> {
        if !(r > 0.0 && r.is_finite() && a.is_finite() && b.is_finite()) {
            return Err(FitError::InvalidRadius(r));
        }
        Ok(CircleParams { a, b, r })
    }

    /// `c = a² + b² − R²`.
    pub fn c(&self) -> f64 {
        self.a * self.a + self.b * self.b - self.r * self.r
    }

    pub fn translated(&self, dx: f64, dy: f64) -> Self {
        CircleParams {
            a: self.a + dx,
            b: self.b + dy,
            r: self.r,
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.a, self.b, self.r]
    }
}

/// A conic `A x² + B xy + C y² + D x + E y + F = 0`, stored with unit
/// Euclidean norm and its first nonzero coefficient positive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConicParams {
    coeffs: [f64; 6],
}

/// Coefficients below this magnitude (after normalization) do not decide the
/// sign convention.
const SIGN_TOL: f64 = 1e-12;

impl ConicParams {
    pub fn new(coeffs: [f64; 6]) -> Result<Self, FitError> {
        let norm = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(FitError::DegenerateData(
                "conic coefficients must be finite and not all zero".into(),
            ));
        }
        let mut c = coeffs.map(|v| v / norm);
        if let Some(first) = c.iter().find(|v| v.abs() > SIGN_TOL) {
            if *first < 0.0 {
                c = c.map(|v| -v);
            }
        }
        Ok(ConicParams { coeffs: c })
    }

    pub fn coeffs(&self) -> [f64; 6] {
        self.coeffs
    }

    /// All quadratic coefficients vanish: the "conic" is a line.
    pub fn is_degenerate(&self) -> bool {
        self.coeffs[..3].iter().all(|v| v.abs() <= SIGN_TOL)
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let [a, b, c, d, e, f] = self.coeffs;
        a * x * x + b * x * y + c * y * y + d * x + e * y + f
    }

    pub fn gradient(&self, x: f64, y: f64) -> (f64, f64) {
        let [a, b, c, d, e, _] = self.coeffs;
        (2.0 * a * x + b * y + d, b * x + 2.0 * c * y + e)
    }

    /// Euclidean distance between two normalized conics.
    pub fn distance(&self, other: &ConicParams) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

/// Fitted parameters, tagged by model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum FitParams {
    Circle(CircleParams),
    Conic(ConicParams),
    /// Parameters of a built-in family, named by the family's parameter list.
    Family {
        curve: CurveFamily,
        theta: Vec<f64>,
    },
}

impl FitParams {
    pub fn circle(&self) -> Option<CircleParams> {
        match self {
            FitParams::Circle(c) => Some(*c),
            FitParams::Family {
                curve: CurveFamily::Circle,
                theta,
            } => Some(CircleParams {
                a: theta[0],
                b: theta[1],
                r: theta[2],
            }),
            _ => None,
        }
    }

    pub fn conic(&self) -> Option<ConicParams> {
        match self {
            FitParams::Conic(c) => Some(*c),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub params: FitParams,
    pub objective: f64,
    pub iterations: usize,
    /// `false` when the iteration budget ran out or the line search stalled;
    /// the parameters are still the best found.
    pub converged: bool,
    /// Wall time of each iteration, in seconds.
    pub iteration_times: Vec<f64>,
    /// Passes over the raw data, counting the moment accumulation for the
    /// reduced fitters.
    pub data_passes: usize,
    /// Infinity norm of the objective gradient at the returned parameters.
    pub gradient_norm: f64,
    /// Norm of the full stationarity condition, including the derivative of
    /// the weights, for fitters that ignore that term while iterating.
    pub stationarity_residual: Option<f64>,
}

impl FitResult {
    pub fn mean_iteration_time(&self) -> f64 {
        if self.iteration_times.is_empty() {
            0.0
        } else {
            self.iteration_times.iter().sum::<f64>() / self.iteration_times.len() as f64
        }
    }
}

/// Starting point for the circle fitters and the generic fitter.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub enum Initializer {
    /// Algebraic (Kåsa) circle from the moments, or the family's default.
    #[default]
    Default,
    Params(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    pub max_iterations: usize,
    /// Stop when `‖∇F‖∞ ≤ gradient_tol · (1 + |F|)`.
    pub gradient_tol: f64,
    /// Stop when an accepted step has `‖Δθ‖∞ ≤ step_tol · (1 + ‖θ‖∞)`.
    pub step_tol: f64,
    /// Stop reweighting when successive conics differ by at most this much.
    pub reweight_tol: f64,
    /// Step halvings tried before the line search gives up.
    pub max_halvings: u32,
    pub init: Initializer,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            max_iterations: 100,
            gradient_tol: 1e-10,
            step_tol: 1e-12,
            reweight_tol: 1e-10,
            max_halvings: 60,
            init: Initializer::Default,
        }
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<(), FitError> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !(positive(self.gradient_tol) && positive(self.step_tol) && positive(self.reweight_tol)) {
            return Err(FitError::InvalidInit("tolerances must be positive".into()));
        }
        if self.max_iterations == 0 {
            return Err(FitError::InvalidInit("max_iterations must be positive".into()));
        }
        Ok(())
    }
}

/// Value, gradient and Hessian of an objective at a point.
pub(crate) struct Local {
    pub f: f64,
    pub g: DVector<f64>,
    pub h: DMatrix<f64>,
}

pub(crate) struct NewtonOutcome {
    pub x: DVector<f64>,
    pub f: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    pub times: Vec<f64>,
}

/// Newton direction from a Hessian shifted until it is positive definite.
pub(crate) fn newton_direction(h: &DMatrix<f64>, g: &DVector<f64>) -> Option<DVector<f64>> {
    let n = h.nrows();
    let scale = (0..n).map(|i| h[(i, i)].abs()).fold(0.0, f64::max).max(1e-300);
    let mut shift = 0.0;
    for _ in 0..40 {
        let shifted = h + DMatrix::identity(n, n) * shift;
        if let Some(chol) = shifted.cholesky() {
            let p = chol.solve(&(-g));
            if p.iter().all(|v| v.is_finite()) {
                return Some(p);
            }
        }
        shift = if shift == 0.0 { 1e-12 * scale } else { shift * 10.0 };
    }
    None
}

/// Damped Newton minimization with step halving.
///
/// `eval` returns the local model at a point or `None` where the objective
/// is undefined; such points are treated like ascent by the line search.
/// Every accepted step satisfies `F(new) ≤ F(old)`.
pub(crate) fn damped_newton<E>(
    x0: DVector<f64>,
    cfg: &FitConfig,
    mut eval: E,
) -> Result<NewtonOutcome, FitError>
where
    E: FnMut(&DVector<f64>, bool) -> Option<Local>,
{
    let mut x = x0;
    let mut cur = eval(&x, true)
        .ok_or_else(|| FitError::InvalidInit("objective undefined at the initial point".into()))?;
    let mut times = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    while iterations < cfg.max_iterations {
        if cur.g.amax() <= cfg.gradient_tol * (1.0 + cur.f.abs()) {
            converged = true;
            break;
        }
        let start = Instant::now();
        iterations += 1;
        let Some(p) = newton_direction(&cur.h, &cur.g) else {
            times.push(start.elapsed().as_secs_f64());
            break;
        };
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..=cfg.max_halvings {
            let trial = &x + &p * t;
            if let Some(local) = eval(&trial, false) {
                if local.f <= cur.f {
                    accepted = Some(trial);
                    break;
                }
            }
            t *= 0.5;
        }
        let Some(next) = accepted else {
            times.push(start.elapsed().as_secs_f64());
            // No descent along the Newton direction: at the rounding floor.
            converged = (&p * t).amax() <= cfg.step_tol * (1.0 + x.amax()) * 1e4;
            break;
        };
        let step = (&next - &x).amax();
        x = next;
        cur = eval(&x, true).expect("accepted point is evaluable");
        times.push(start.elapsed().as_secs_f64());
        if step <= cfg.step_tol * (1.0 + x.amax()) {
            converged = true;
            break;
        }
    }
    Ok(NewtonOutcome {
        gradient_norm: cur.g.amax(),
        x,
        f: cur.f,
        iterations,
        converged,
        times,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conic_normalization() {
        let c = ConicParams::new([-2.0, 0.0, -2.0, 0.0, 0.0, 2.0]).unwrap();
        let s = 1.0 / 3f64.sqrt();
        for (got, want) in c.coeffs().iter().zip([s, 0.0, s, 0.0, 0.0, -s]) {
            assert!((got - want).abs() < 1e-15);
        }
        assert!(ConicParams::new([0.0; 6]).is_err());
        assert!(ConicParams::new([0.0, 0.0, 0.0, 1.0, 1.0, 0.0])
            .unwrap()
            .is_degenerate());
    }

    #[test]
    fn circle_params_validation() {
        assert!(CircleParams::new(0.0, 0.0, 0.0).is_err());
        assert!(CircleParams::new(0.0, 0.0, -1.0).is_err());
        let c = CircleParams::new(1.0, 2.0, 2.0).unwrap();
        assert_eq!(c.c(), 1.0);
    }

    #[test]
    fn newton_on_quadratic() {
        // F = (x - 1)^2 + 10 (y + 2)^2
        let cfg = FitConfig::default();
        let out = damped_newton(DVector::from_vec(vec![5.0, 5.0]), &cfg, |v, _| {
            let (x, y) = (v[0], v[1]);
            Some(Local {
                f: (x - 1.0).powi(2) + 10.0 * (y + 2.0).powi(2),
                g: DVector::from_vec(vec![2.0 * (x - 1.0), 20.0 * (y + 2.0)]),
                h: DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 20.0]),
            })
        })
        .unwrap();
        assert!(out.converged);
        assert!((out.x[0] - 1.0).abs() < 1e-12 && (out.x[1] + 2.0).abs() < 1e-12);
        assert!(out.iterations <= 2);
    }

    #[test]
    fn newton_handles_indefinite_hessian() {
        // Rosenbrock from the standard start.
        let cfg = FitConfig {
            max_iterations: 500,
            ..FitConfig::default()
        };
        let out = damped_newton(DVector::from_vec(vec![-1.2, 1.0]), &cfg, |v, _| {
            let (x, y) = (v[0], v[1]);
            Some(Local {
                f: (1.0 - x).powi(2) + 100.0 * (y - x * x).powi(2),
                g: DVector::from_vec(vec![
                    -2.0 * (1.0 - x) - 400.0 * x * (y - x * x),
                    200.0 * (y - x * x),
                ]),
                h: DMatrix::from_row_slice(
                    2,
                    2,
                    &[2.0 - 400.0 * y + 1200.0 * x * x, -400.0 * x, -400.0 * x, 200.0],
                ),
            })
        })
        .unwrap();
        assert!(out.converged);
        assert!((out.x[0] - 1.0).abs() < 1e-8);
    }
}
