use std::time::Instant;

use nalgebra::{Matrix6, SymmetricEigen, Vector6};

use super::{ConicParams, FitConfig, FitError, FitParams, FitResult};

fn monomials(x: f64, y: f64) -> Vector6<f64> {
    Vector6::new(x * x, x * y, y * y, x, y, 1.0)
}

/// `Σ wᵢ zᵢ zᵢᵀ` over the monomial vectors `zᵢ = (x², xy, y², x, y, 1)`, with
/// `wᵢ = 1 / |∇P(xᵢ, yᵢ)|²` at the current conic, or `wᵢ = 1` when there is
/// none yet.
fn weighted_scatter(points: &[(f64, f64)], current: Option<&ConicParams>) -> Result<Matrix6<f64>, FitError> {
    let mut m = Matrix6::zeros();
    for (index, &(x, y)) in points.iter().enumerate() {
        let w = match current {
            None => 1.0,
            Some(c) => {
                let (gx, gy) = c.gradient(x, y);
                let g2 = gx * gx + gy * gy;
                if !(g2 > f64::MIN_POSITIVE) {
                    return Err(FitError::GradientVanishesAtSample { index });
                }
                1.0 / g2
            }
        };
        let z = monomials(x, y);
        m += z * z.transpose() * w;
    }
    Ok(m)
}

fn smallest_eigenvector(m: Matrix6<f64>) -> Result<ConicParams, FitError> {
    let eig = SymmetricEigen::new(m);
    let k = eig.eigenvalues.imin();
    let v = eig.eigenvectors.column(k);
    ConicParams::new([v[0], v[1], v[2], v[3], v[4], v[5]])
}

/// `Σ P(xᵢ, yᵢ)² / |∇P(xᵢ, yᵢ)|²`.
fn graf_objective(points: &[(f64, f64)], c: &ConicParams) -> Result<f64, FitError> {
    let mut f = 0.0;
    for (index, &(x, y)) in points.iter().enumerate() {
        let (gx, gy) = c.gradient(x, y);
        let g2 = gx * gx + gy * gy;
        if !(g2 > f64::MIN_POSITIVE) {
            return Err(FitError::GradientVanishesAtSample { index });
        }
        f += c.eval(x, y).powi(2) / g2;
    }
    Ok(f)
}

/// Norm of the gradient of `Σ Pᵢ² / |∇Pᵢ|²` with respect to the conic
/// coefficients, including the terms from differentiating the weights that
/// the reweighting iteration holds fixed.
pub fn conic_stationarity_residual(points: &[(f64, f64)], c: &ConicParams) -> Result<f64, FitError> {
    let mut grad = Vector6::zeros();
    for (index, &(x, y)) in points.iter().enumerate() {
        let (gx, gy) = c.gradient(x, y);
        let g2 = gx * gx + gy * gy;
        if !(g2 > f64::MIN_POSITIVE) {
            return Err(FitError::GradientVanishesAtSample { index });
        }
        let p = c.eval(x, y);
        let dgx = Vector6::new(2.0 * x, y, 0.0, 1.0, 0.0, 0.0);
        let dgy = Vector6::new(0.0, x, 2.0 * y, 0.0, 1.0, 0.0);
        let dg2 = (dgx * gx + dgy * gy) * 2.0;
        grad += monomials(x, y) * (2.0 * p / g2) - dg2 * (p * p / (g2 * g2));
    }
    Ok(grad.norm())
}

/// One reweighting step: weights from `current`, then the unit-norm
/// minimizer of the weighted quadratic form.
pub fn reweight_iteration(
    points: &[(f64, f64)],
    current: Option<&ConicParams>,
) -> Result<ConicParams, FitError> {
    smallest_eigenvector(weighted_scatter(points, current)?)
}

/// Gradient-weighted algebraic conic fit by reweighting.
///
/// Iteration 0 uses unit weights (the plain algebraic fit). Each later
/// iteration recomputes `wᵢ = 1/|∇P(xᵢ, yᵢ)|²` at the previous conic and
/// takes the eigenvector of the smallest eigenvalue of the weighted scatter
/// matrix, so every iteration is one pass over the points.
pub fn fit_conic_reweight(points: &[(f64, f64)], cfg: &FitConfig) -> Result<FitResult, FitError> {
    cfg.validate()?;
    if points.len() < 6 {
        return Err(FitError::TooFewPoints {
            needed: 6,
            got: points.len() as u64,
        });
    }
    let mut times = Vec::new();
    let start = Instant::now();
    let mut conic = reweight_iteration(points, None)?;
    times.push(start.elapsed().as_secs_f64());
    let mut converged = false;
    let mut iterations = 1;
    while iterations < cfg.max_iterations {
        let start = Instant::now();
        let next = reweight_iteration(points, Some(&conic))?;
        times.push(start.elapsed().as_secs_f64());
        iterations += 1;
        let step = next.distance(&conic);
        conic = next;
        if step <= cfg.reweight_tol {
            converged = true;
            break;
        }
    }
    let objective = graf_objective(points, &conic)?;
    let stationarity = conic_stationarity_residual(points, &conic)?;
    Ok(FitResult {
        params: FitParams::Conic(conic),
        objective,
        iterations,
        converged,
        iteration_times: times,
        data_passes: iterations + 2,
        gradient_norm: stationarity,
        stationarity_residual: Some(stationarity),
    })
}
