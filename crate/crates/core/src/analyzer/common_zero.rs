//! Search for a common complex zero of two polynomials.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::AnalyzerError;
use crate::poly::{sylvester_resultant, ComplexPoly, RatPoly, UniPoly, Var};
use crate::roots::polynomial_roots;

/// Largest accepted relative residual of a witness.
pub const WITNESS_TOL: f64 = 1e-8;

/// Leading coefficients below this fraction of the largest coefficient are
/// dropped after substituting a root.
const LEADING_TRIM_TOL: f64 = 1e-9;

/// A candidate this close to vanishing that still fails refinement is
/// reported as a numerical failure rather than dismissed.
const NEAR_MISS_TOL: f64 = 1e-4;

/// Abscissae tried when the two polynomials share a factor and the
/// resultant vanishes identically.
const SAMPLE_ABSCISSAE: [f64; 8] = [0.3719, -0.6143, 1.2381, -1.7727, 0.0911, 2.4453, -0.9337, 3.1177];

/// An explicit point `(x, y) ∈ ℂ²` where both polynomials vanish.
///
/// Residuals are relative: `|P(x, y)|` divided by `Σ |c_pq| |x|^p |y|^q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommonZeroWitness {
    pub x: Complex64,
    pub y: Complex64,
    pub residual_p: f64,
    pub residual_q: f64,
}

/// `|P(x, y)|` relative to the sum of the magnitudes of its terms.
pub fn relative_residual(p: &ComplexPoly, x: Complex64, y: Complex64) -> f64 {
    let v = p.eval(x, y).norm();
    if v == 0.0 {
        return 0.0;
    }
    v / p.eval_abs_scale(x, y).max(f64::MIN_POSITIVE)
}

/// Complexified pair with precomputed partial derivatives.
struct System {
    p: ComplexPoly,
    q: ComplexPoly,
    px: ComplexPoly,
    py: ComplexPoly,
    qx: ComplexPoly,
    qy: ComplexPoly,
}

impl System {
    fn new(p: &RatPoly, q: &RatPoly) -> Self {
        let p = p.to_complex();
        let q = q.to_complex();
        System {
            px: p.partial_derivative(Var::X),
            py: p.partial_derivative(Var::Y),
            qx: q.partial_derivative(Var::X),
            qy: q.partial_derivative(Var::Y),
            p,
            q,
        }
    }

    fn residuals(&self, x: Complex64, y: Complex64) -> (f64, f64) {
        (relative_residual(&self.p, x, y), relative_residual(&self.q, x, y))
    }

    fn witness(&self, x: Complex64, y: Complex64) -> CommonZeroWitness {
        let (rp, rq) = self.residuals(x, y);
        CommonZeroWitness {
            x,
            y,
            residual_p: rp,
            residual_q: rq,
        }
    }

    /// Damped Newton (Levenberg-Marquardt) on `(P, Q) = 0` over ℂ², keeping
    /// the iterate with the smallest residual.
    fn refine(&self, mut x: Complex64, mut y: Complex64) -> (Complex64, Complex64) {
        let score = |x, y| {
            let (a, b) = self.residuals(x, y);
            a.max(b)
        };
        let mut best = (score(x, y), x, y);
        for _ in 0..40 {
            if best.0 <= WITNESS_TOL * 1e-6 {
                break;
            }
            let f = [self.p.eval(x, y), self.q.eval(x, y)];
            let j = [
                [self.px.eval(x, y), self.py.eval(x, y)],
                [self.qx.eval(x, y), self.qy.eval(x, y)],
            ];
            // normal equations (JᴴJ + λI) δ = -Jᴴ f
            let mut a = [[Complex64::new(0.0, 0.0); 2]; 2];
            let mut g = [Complex64::new(0.0, 0.0); 2];
            for r in 0..2 {
                for c in 0..2 {
                    a[r][c] = j[0][r].conj() * j[0][c] + j[1][r].conj() * j[1][c];
                }
                g[r] = -(j[0][r].conj() * f[0] + j[1][r].conj() * f[1]);
            }
            let lambda = 1e-14 * (a[0][0].norm() + a[1][1].norm()) + f64::MIN_POSITIVE;
            a[0][0] += lambda;
            a[1][1] += lambda;
            let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
            if det.norm() == 0.0 {
                break;
            }
            let dx = (g[0] * a[1][1] - a[0][1] * g[1]) / det;
            let dy = (a[0][0] * g[1] - a[1][0] * g[0]) / det;
            x += dx;
            y += dy;
            if !(x.re.is_finite() && x.im.is_finite() && y.re.is_finite() && y.im.is_finite()) {
                break;
            }
            let s = score(x, y);
            if s < best.0 {
                best = (s, x, y);
            }
        }
        (best.1, best.2)
    }
}

enum Lift {
    Found(CommonZeroWitness),
    /// No common zero exists (decided exactly).
    Infeasible,
    /// Nothing found; `near_miss` is set when some candidate came close but
    /// could not be refined to tolerance.
    NotFound {
        near_miss: bool,
    },
}

/// Finds a point `(x, y) ∈ ℂ²` with `P = Q = 0`, or `None` when the system
/// has no complex solution.
///
/// `y` is eliminated by a resultant; each root `x₀` of the square-free part
/// of the resultant is lifted by intersecting the root sets of `P(x₀, ·)` and
/// `Q(x₀, ·)`, then refined by Newton's method on the pair. When nothing
/// lifts, the roles of the variables are swapped and the search repeated.
pub fn find_common_zero(p: &RatPoly, q: &RatPoly) -> Result<Option<CommonZeroWitness>, AnalyzerError> {
    if p.is_constant() {
        return Err(AnalyzerError::DegenerateInput(
            "P must be a nonconstant polynomial".into(),
        ));
    }
    if q.is_zero() {
        return Ok(point_on_curve(p).map(|(x, y)| System::new(p, q).witness(x, y)));
    }
    if q.is_constant() {
        return Ok(None);
    }

    let mut near_miss = false;
    for eliminate in [Var::Y, Var::X] {
        let swapped = eliminate == Var::X;
        let (pp, qq) = if swapped {
            (p.swap_variables(), q.swap_variables())
        } else {
            (p.clone(), q.clone())
        };
        match eliminate_y_and_lift(&pp, &qq) {
            Lift::Found(w) => {
                let (x, y) = if swapped { (w.y, w.x) } else { (w.x, w.y) };
                return Ok(Some(System::new(p, q).witness(x, y)));
            }
            Lift::Infeasible => return Ok(None),
            Lift::NotFound { near_miss: nm } => near_miss |= nm,
        }
    }
    if near_miss {
        return Err(AnalyzerError::NumericalFailure(
            "a candidate common zero could not be refined to the witness tolerance".into(),
        ));
    }
    Ok(None)
}

fn exact_roots(f: &UniPoly<num_rational::BigRational>) -> Vec<Complex64> {
    let sf = f.square_free();
    // scale so the largest coefficient has magnitude one before rounding
    let scale = sf
        .coeffs()
        .iter()
        .map(crate::poly::Coeff::magnitude)
        .fold(0.0, f64::max);
    let c = UniPoly::new(
        sf.coeffs()
            .iter()
            .map(|v| crate::poly::Coeff::to_complex(v) / scale)
            .collect(),
    );
    polynomial_roots(&c)
}

fn eliminate_y_and_lift(p: &RatPoly, q: &RatPoly) -> Lift {
    let sys = System::new(p, q);
    let res = match sylvester_resultant(p, q, Var::Y) {
        Ok(r) => r,
        Err(_) => {
            // Both free of y: common zeros are the roots of gcd(P, Q) in x.
            let pu = p.coefficients_in(Var::Y).swap_remove(0);
            let qu = q.coefficients_in(Var::Y).swap_remove(0);
            let g = pu.gcd(&qu);
            if g.is_constant() {
                return Lift::Infeasible;
            }
            let zero = Complex64::new(0.0, 0.0);
            return match exact_roots(&g).into_iter().next() {
                Some(x) => Lift::Found(sys.witness(x, zero)),
                None => Lift::NotFound { near_miss: true },
            };
        }
    };

    if res.is_zero() {
        // Shared factor with positive degree in y: any abscissa works.
        let mut near_miss = false;
        for x0 in SAMPLE_ABSCISSAE {
            match lift_root(&sys, Complex64::new(x0, 0.0)) {
                Lift::Found(w) => return Lift::Found(w),
                Lift::NotFound { near_miss: nm } => near_miss |= nm,
                Lift::Infeasible => {}
            }
        }
        return Lift::NotFound { near_miss };
    }
    if res.is_constant() {
        return Lift::Infeasible;
    }

    let mut near_miss = false;
    for x0 in exact_roots(&res) {
        match lift_root(&sys, x0) {
            Lift::Found(w) => return Lift::Found(w),
            Lift::NotFound { near_miss: nm } => near_miss |= nm,
            Lift::Infeasible => {}
        }
    }
    Lift::NotFound { near_miss }
}

/// Looks for `y` with `P(x₀, y) = Q(x₀, y) = 0`.
fn lift_root(sys: &System, x0: Complex64) -> Lift {
    let pu = sys.p.specialize(Var::X, x0).trim_relative(LEADING_TRIM_TOL);
    let qu = sys.q.specialize(Var::X, x0).trim_relative(LEADING_TRIM_TOL);

    // Degrees are checked explicitly: a resultant root can come from both
    // leading coefficients vanishing rather than from a shared root.
    let candidates = match (pu.degree(), qu.degree()) {
        (Some(0), _) | (_, Some(0)) => return Lift::Infeasible,
        (None, None) => vec![Complex64::new(0.0, 0.0)],
        (None, Some(_)) => polynomial_roots(&qu),
        (Some(_), _) => polynomial_roots(&pu),
    };

    let mut ranked: Vec<(f64, Complex64)> = candidates
        .into_iter()
        .map(|y| {
            let (a, b) = sys.residuals(x0, y);
            (a.max(b), y)
        })
        .collect();
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut near_miss = false;
    for (initial, y) in ranked.into_iter().take(4) {
        if initial > NEAR_MISS_TOL.sqrt() {
            break;
        }
        let (x, y) = sys.refine(x0, y);
        let w = sys.witness(x, y);
        if w.residual_p <= WITNESS_TOL && w.residual_q <= WITNESS_TOL {
            return Lift::Found(w);
        }
        near_miss |= initial <= NEAR_MISS_TOL;
    }
    Lift::NotFound { near_miss }
}

/// Some point on the complex curve `P = 0`.
fn point_on_curve(p: &RatPoly) -> Option<(Complex64, Complex64)> {
    let cp = p.to_complex();
    if p.degree_in(Var::Y).unwrap_or(0) == 0 {
        let px = p.coefficients_in(Var::Y).swap_remove(0);
        return exact_roots(&px)
            .into_iter()
            .next()
            .map(|x| (x, Complex64::new(0.0, 0.0)));
    }
    SAMPLE_ABSCISSAE.iter().find_map(|&x0| {
        let x = Complex64::new(x0, 0.0);
        let pu = cp.specialize(Var::X, x).trim_relative(LEADING_TRIM_TOL);
        if pu.is_constant() {
            return None;
        }
        polynomial_roots(&pu).into_iter().next().map(|y| (x, y))
    })
}
