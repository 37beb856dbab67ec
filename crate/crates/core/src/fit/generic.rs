use nalgebra::{DMatrix, DVector, Matrix2, SymmetricEigen};

use super::{damped_newton, kasa_init, FitConfig, FitError, FitParams, FitResult, Initializer, Local};
use crate::analyzer::certificate::{certificate_system_rows, FLOAT_IDENTITY_TOL};
use crate::analyzer::{CurveFamily, ReductionCertificate};
use crate::linalg::SVD_RANK_TOL;
use crate::moments::MomentVector;
use crate::poly::{monomials_up_to, Coeff, RealPoly, SimilarityTransform, Var};

/// Residual above which the weight system is considered unsolvable at a
/// parameter value.
const WEIGHT_SYSTEM_TOL: f64 = 1e-8;

/// Value and gradient of the moment-assembled objective.
#[derive(Clone, Debug, PartialEq)]
pub struct GenericObjective {
    pub value: f64,
    pub gradient: Vec<f64>,
}

fn to_matrix(rows: Vec<Vec<f64>>) -> DMatrix<f64> {
    let (r, c) = (rows.len(), rows.first().map_or(0, Vec::len));
    DMatrix::from_fn(r, c, |i, j| rows[i][j])
}

/// `Σ_{p,q} coeff_{p,q}(f) · m[p, q]`.
fn contract(f: &RealPoly, mv: &MomentVector) -> Result<f64, FitError> {
    let mut acc = 0.0;
    for ((p, q), c) in f.terms() {
        let m = mv.get(p, q).ok_or(FitError::DegreeMismatch {
            needed: p + q,
            found: mv.degree(),
        })?;
        acc += c * m;
    }
    Ok(acc)
}

fn weight_from_solution(x: &DVector<f64>, d: u32) -> RealPoly {
    let unknowns = monomials_up_to(d);
    let n = unknowns.len();
    RealPoly::from_terms(unknowns.iter().enumerate().map(|(j, &(p, q))| (p, q, x[n + j])))
}

/// `Q̇ = 2 (Pₓ Ṗₓ + P_y Ṗ_y)` for a parameter derivative `Ṗ` of `P`.
fn gradient_norm_derivative(p: &RealPoly, dp: &RealPoly) -> RealPoly {
    let t = &(&p.partial_derivative(Var::X) * &dp.partial_derivative(Var::X))
        + &(&p.partial_derivative(Var::Y) * &dp.partial_derivative(Var::Y));
    t.scale(&2.0)
}

/// Evaluates `F(Θ) = Σᵢ W(xᵢ, yᵢ; Θ) P(xᵢ, yᵢ; Θ)²` from moments.
///
/// `W(Θ)` is the minimum-norm solution of the certificate system of degree
/// `degree` for `P(·; Θ)` written in the moment frame. Its parameter
/// derivative comes from differentiating the pseudo-inverse solution,
/// `ẋ = −A⁺ Ȧ x + (I − A⁺A) Ȧᵀ A⁺ᵀ x`, which holds while the system is
/// consistent and of constant rank.
pub fn eval_fa_generic(
    family: CurveFamily,
    degree: u32,
    mv: &MomentVector,
    theta: &[f64],
) -> Result<GenericObjective, FitError> {
    eval_inner(family, degree, mv, theta, true)
}

fn eval_inner(
    family: CurveFamily,
    degree: u32,
    mv: &MomentVector,
    theta: &[f64],
    with_gradient: bool,
) -> Result<GenericObjective, FitError> {
    family.validate(theta).map_err(FitError::InvalidInit)?;
    let (ox, oy) = mv.origin();
    let shift = SimilarityTransform::translation(-ox, -oy);
    let p = family.polynomial(theta).apply_transform(&shift);
    let q = p.gradient_norm_squared();
    let top = degree + p.degree().unwrap_or(0).max(q.degree().unwrap_or(0));
    let (a_rows, b) = certificate_system_rows(&p, &q, degree, top);
    let a = to_matrix(a_rows);
    let b = DVector::from_vec(b);
    let svd = a.clone().svd(true, true);
    let cutoff = SVD_RANK_TOL * svd.singular_values.max().max(f64::MIN_POSITIVE);
    let pinv = svd
        .pseudo_inverse(cutoff)
        .map_err(|e| FitError::NumericalFailure(e.to_string()))?;
    let x = &pinv * &b;
    let residual = (&a * &x - &b).amax();
    if !(residual <= WEIGHT_SYSTEM_TOL) {
        return Err(FitError::NumericalFailure(format!(
            "weight system has no solution of degree {degree} at {theta:?} (residual {residual:e})"
        )));
    }
    let w = weight_from_solution(&x, degree);
    let p2 = &p * &p;
    let value = contract(&(&w * &p2), mv)?;
    if !with_gradient {
        return Ok(GenericObjective {
            value,
            gradient: Vec::new(),
        });
    }

    let projector = DMatrix::identity(a.ncols(), a.ncols()) - &pinv * &a;
    let pinv_t_x = pinv.transpose() * &x;
    let wp = &w * &p;
    let mut gradient = Vec::with_capacity(theta.len());
    for dp in family.polynomial_derivatives(theta) {
        let dp = dp.apply_transform(&shift);
        let dq = gradient_norm_derivative(&p, &dp);
        let da = to_matrix(certificate_system_rows(&dp, &dq, degree, top).0);
        let dx = -(&pinv * (&da * &x)) + &projector * (da.transpose() * &pinv_t_x);
        let dw = weight_from_solution(&dx, degree);
        let df = &(&dw * &p2) + &(&wp * &dp).scale(&2.0);
        gradient.push(contract(&df, mv)?);
    }
    Ok(GenericObjective { value, gradient })
}

/// Default starting parameters from the moments: the algebraic circle for
/// circles, the total least squares line for lines.
pub fn initial_params(family: CurveFamily, mv: &MomentVector) -> Result<Vec<f64>, FitError> {
    match family {
        CurveFamily::Circle => Ok(kasa_init(mv)?.as_array().to_vec()),
        CurveFamily::Line => {
            let n = mv.count() as f64;
            if mv.count() < 2 {
                return Err(FitError::TooFewPoints {
                    needed: 2,
                    got: mv.count(),
                });
            }
            if mv.degree() < 2 {
                return Err(FitError::DegreeMismatch {
                    needed: 2,
                    found: mv.degree(),
                });
            }
            let (mx, my) = (mv.moment(1, 0) / n, mv.moment(0, 1) / n);
            let sxx = mv.moment(2, 0) / n - mx * mx;
            let sxy = mv.moment(1, 1) / n - mx * my;
            let syy = mv.moment(0, 2) / n - my * my;
            let eig = SymmetricEigen::new(Matrix2::new(sxx, sxy, sxy, syy));
            let normal = eig.eigenvectors.column(eig.eigenvalues.imin());
            let (ox, oy) = mv.origin();
            let phi = normal[1].atan2(normal[0]);
            let rho = normal[0] * (mx + ox) + normal[1] * (my + oy);
            Ok(vec![phi, rho])
        }
        _ => Err(FitError::InvalidInit(format!(
            "no default starting point for the {family} family; pass parameters"
        ))),
    }
}

/// Symmetrized central differences of the analytic gradient.
fn fd_hessian(family: CurveFamily, degree: u32, mv: &MomentVector, theta: &[f64]) -> Option<DMatrix<f64>> {
    let k = theta.len();
    let mut h = DMatrix::zeros(k, k);
    for j in 0..k {
        let step = 1e-6 * (1.0 + theta[j].abs());
        let mut up = theta.to_vec();
        let mut dn = theta.to_vec();
        up[j] += step;
        dn[j] -= step;
        let gu = eval_fa_generic(family, degree, mv, &up).ok()?.gradient;
        let gd = eval_fa_generic(family, degree, mv, &dn).ok()?.gradient;
        for i in 0..k {
            h[(i, j)] = (gu[i] - gd[i]) / (2.0 * step);
        }
    }
    Some((&h + h.transpose()) * 0.5)
}

/// Gradient-weighted fit of `family` from moments alone, with the weight
/// polynomial of degree `cert.degree` re-solved at every parameter value.
///
/// `cert` is a certificate for one member of the family; it fixes the weight
/// degree and must satisfy its identity to [`FLOAT_IDENTITY_TOL`]. The
/// moments must reach degree `cert.degree + 2·deg P`.
pub fn fit_reduced_generic<C: Coeff>(
    family: CurveFamily,
    cert: &ReductionCertificate<C>,
    mv: &MomentVector,
    cfg: &FitConfig,
) -> Result<FitResult, FitError> {
    cfg.validate()?;
    if !(cert.identity_residual <= FLOAT_IDENTITY_TOL) {
        return Err(FitError::UnverifiedCertificate(cert.identity_residual));
    }
    let degree = cert.degree;
    let deg_p = match family {
        CurveFamily::Line => 1,
        _ => 2,
    };
    let needed = degree + 2 * deg_p;
    if mv.degree() < needed {
        return Err(FitError::DegreeMismatch {
            needed,
            found: mv.degree(),
        });
    }
    let theta0 = match &cfg.init {
        Initializer::Default => initial_params(family, mv)?,
        Initializer::Params(v) => {
            family.validate(v).map_err(FitError::InvalidInit)?;
            v.clone()
        }
    };
    let out = damped_newton(DVector::from_vec(theta0), cfg, |x, full| {
        let theta = x.as_slice();
        if !full {
            let obj = eval_inner(family, degree, mv, theta, false).ok()?;
            return Some(Local {
                f: obj.value,
                g: DVector::zeros(0),
                h: DMatrix::zeros(0, 0),
            });
        }
        let obj = eval_fa_generic(family, degree, mv, theta).ok()?;
        let h = fd_hessian(family, degree, mv, theta)?;
        Some(Local {
            f: obj.value,
            g: DVector::from_vec(obj.gradient),
            h,
        })
    })?;
    Ok(FitResult {
        params: FitParams::Family {
            curve: family,
            theta: out.x.iter().copied().collect(),
        },
        objective: out.f,
        iterations: out.iterations,
        converged: out.converged,
        iteration_times: out.times,
        data_passes: 1,
        gradient_norm: out.gradient_norm,
        stationarity_residual: None,
    })
}
