use std::time::Instant;

use nalgebra::{Matrix3, Vector3};

use super::{kasa_init, CircleParams, FitConfig, FitError, FitParams, FitResult, Initializer};
use crate::moments::MomentVector;

struct Normal {
    f: f64,
    jtj: Matrix3<f64>,
    jtr: Vector3<f64>,
}

/// `Σ rᵢ²` with `rᵢ = |(xᵢ, yᵢ) − (a, b)| − R`, plus the Gauss-Newton
/// normal equations. Fails if the center sits on a data point.
fn normal_equations(
    points: &[(f64, f64)],
    c: &CircleParams,
    want_jacobian: bool,
) -> Result<Normal, FitError> {
    let mut f = 0.0;
    let mut jtj = Matrix3::zeros();
    let mut jtr = Vector3::zeros();
    for (index, &(x, y)) in points.iter().enumerate() {
        let (dx, dy) = (x - c.a, y - c.b);
        let d = dx.hypot(dy);
        if d == 0.0 {
            return Err(FitError::CenterHitsDataPoint { index });
        }
        let r = d - c.r;
        f += r * r;
        if want_jacobian {
            let j = Vector3::new(-dx / d, -dy / d, -1.0);
            jtj += j * j.transpose();
            jtr += j * r;
        }
    }
    Ok(Normal { f, jtj, jtr })
}

/// Orthogonal distance circle fit: minimizes `Σ dᵢ²`, the squared distances
/// from the points to the circle, by Levenberg-Marquardt steps on the signed
/// residuals `|(xᵢ, yᵢ) − (a, b)| − R`.
///
/// Starts from the algebraic circle unless `cfg.init` holds parameters.
pub fn fit_circle_geometric(points: &[(f64, f64)], cfg: &FitConfig) -> Result<FitResult, FitError> {
    cfg.validate()?;
    if points.len() < 3 {
        return Err(FitError::TooFewPoints {
            needed: 3,
            got: points.len() as u64,
        });
    }
    let mut passes = 0;
    let mut c = match &cfg.init {
        Initializer::Default => {
            passes += 1;
            kasa_init(&MomentVector::from_points(3, points, 1)?)?
        }
        Initializer::Params(v) if v.len() == 3 => CircleParams::new(v[0], v[1], v[2])?,
        Initializer::Params(v) => {
            return Err(FitError::InvalidInit(format!(
                "a circle takes 3 parameters, got {}",
                v.len()
            )))
        }
    };
    let mut cur = normal_equations(points, &c, true)?;
    passes += 1;
    let mut lambda = 1e-3;
    let mut times = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    while iterations < cfg.max_iterations {
        if cur.jtr.amax() <= cfg.gradient_tol * (1.0 + cur.f) {
            converged = true;
            break;
        }
        let start = Instant::now();
        iterations += 1;
        let mut accepted = None;
        for _ in 0..=cfg.max_halvings {
            let damped = cur.jtj + Matrix3::from_diagonal(&cur.jtj.diagonal()) * lambda;
            let Some(step) = damped.cholesky().map(|ch| ch.solve(&(-cur.jtr))) else {
                lambda *= 10.0;
                continue;
            };
            let trial = CircleParams {
                a: c.a + step[0],
                b: c.b + step[1],
                r: c.r + step[2],
            };
            passes += 1;
            match normal_equations(points, &trial, false) {
                Ok(n) if trial.r > 0.0 && n.f <= cur.f => {
                    accepted = Some((trial, step.amax()));
                    lambda = (lambda * 0.1).max(1e-12);
                    break;
                }
                _ => lambda *= 10.0,
            }
        }
        let Some((next, step)) = accepted else {
            times.push(start.elapsed().as_secs_f64());
            converged = cur.jtr.amax() <= 1e-6 * (1.0 + cur.f);
            break;
        };
        c = next;
        cur = normal_equations(points, &c, true)?;
        passes += 1;
        times.push(start.elapsed().as_secs_f64());
        if step <= cfg.step_tol * (1.0 + c.a.abs().max(c.b.abs()).max(c.r)) {
            converged = true;
            break;
        }
    }
    Ok(FitResult {
        params: FitParams::Circle(c),
        objective: cur.f,
        iterations,
        converged,
        iteration_times: times,
        data_passes: passes,
        gradient_norm: 2.0 * cur.jtr.amax(),
        stationarity_residual: None,
    })
}
