//! Bézout certificates `P·U + Q·W = 1`.
//!
//! Writing `U` and `W` with unknown coefficients over all monomials of total
//! degree at most `d` and matching coefficients of `P·U + Q·W` against the
//! constant 1 gives a linear system. Its solvability for some `d` shows that
//! `P` and `Q` have no common complex zero, and `W` is then a polynomial
//! weight equal to `1/Q` on the curve `P = 0`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_rational::BigRational;

use crate::linalg::{exact_consistent, solve_exact_min_norm, solve_float_min_norm};
use crate::poly::{monomials_up_to, BivariatePoly, Coeff, Monomial, RealPoly, UniPoly, Var};
use crate::roots::polynomial_roots;

/// Identity residual accepted for certificates computed in floating point.
pub const FLOAT_IDENTITY_TOL: f64 = 1e-10;

/// Curve-restriction tolerance: `|W·Q − 1|` at sampled curve points.
pub const CURVE_CHECK_TOL: f64 = 1e-8;

/// Minimum number of real curve points the verifier tries to sample.
pub const CURVE_SAMPLES: usize = 20;

/// A solution `(U, W)` of `P·U + Q·W = 1`.
#[derive(Clone, Debug)]
pub struct ReductionCertificate<C> {
    pub u: BivariatePoly<C>,
    pub w: BivariatePoly<C>,
    /// Total degree bound at which the certificate was found.
    pub degree: u32,
    /// Largest coefficient magnitude of `P·U + Q·W − 1`.
    pub identity_residual: f64,
}

/// Coefficient domains in which the certificate system can be solved.
pub trait CertificateField: Coeff {
    /// Minimum-norm solution of `A x = b`, or `None` when inconsistent.
    fn solve_system(a: Vec<Vec<Self>>, b: Vec<Self>) -> Option<Vec<Self>>;

    /// Whether `A x = b` is solvable, without computing a solution.
    fn is_solvable(a: Vec<Vec<Self>>, b: Vec<Self>) -> bool {
        Self::solve_system(a, b).is_some()
    }
}

impl CertificateField for BigRational {
    fn solve_system(a: Vec<Vec<Self>>, b: Vec<Self>) -> Option<Vec<Self>> {
        solve_exact_min_norm(&a, &b)
    }

    fn is_solvable(a: Vec<Vec<Self>>, b: Vec<Self>) -> bool {
        exact_consistent(&a, &b)
    }
}

impl CertificateField for f64 {
    fn solve_system(a: Vec<Vec<Self>>, b: Vec<Self>) -> Option<Vec<Self>> {
        let rows = a.len();
        let cols = a.first().map_or(0, Vec::len);
        let m = DMatrix::from_fn(rows, cols, |i, j| a[i][j]);
        let rhs = DVector::from_vec(b);
        let (x, residual) = solve_float_min_norm(&m, &rhs);
        let scale = rhs.amax().max(1.0);
        (residual <= FLOAT_IDENTITY_TOL * scale).then(|| x.iter().copied().collect())
    }
}

/// Default degree bound: `max(3, deg P) · max(3, deg Q)`.
pub fn default_max_degree<C: Coeff>(p: &BivariatePoly<C>, q: &BivariatePoly<C>) -> u32 {
    let d = |f: &BivariatePoly<C>| f.degree().unwrap_or(0).max(3);
    d(p) * d(q)
}

/// The linear system for degree bound `d`: one row per monomial of
/// `P·U + Q·W`, columns for the coefficients of `U` then of `W` (both over
/// [`monomials_up_to`]`(d)`).
pub fn certificate_system<C: Coeff>(
    p: &BivariatePoly<C>,
    q: &BivariatePoly<C>,
    d: u32,
) -> (Vec<Vec<C>>, Vec<C>) {
    let top = d + p.degree().unwrap_or(0).max(q.degree().unwrap_or(0));
    certificate_system_rows(p, q, d, top)
}

/// [`certificate_system`] with rows for every monomial up to degree `top`,
/// which must be at least `d + max(deg P, deg Q)`.
pub fn certificate_system_rows<C: Coeff>(
    p: &BivariatePoly<C>,
    q: &BivariatePoly<C>,
    d: u32,
    top: u32,
) -> (Vec<Vec<C>>, Vec<C>) {
    let unknowns = monomials_up_to(d);
    let rows = monomials_up_to(top);
    let index: std::collections::HashMap<Monomial, usize> =
        rows.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let n = unknowns.len();
    let mut a = vec![vec![C::zero(); 2 * n]; rows.len()];
    for (block, f) in [p, q].into_iter().enumerate() {
        for (j, &(up, uq)) in unknowns.iter().enumerate() {
            for ((fp, fq), c) in f.terms() {
                let row = index[&(fp + up, fq + uq)];
                a[row][block * n + j] = c.clone();
            }
        }
    }
    let mut b = vec![C::zero(); rows.len()];
    b[0] = C::one();
    (a, b)
}

fn solve_at_degree<C: CertificateField>(
    p: &BivariatePoly<C>,
    q: &BivariatePoly<C>,
    d: u32,
) -> Option<ReductionCertificate<C>> {
    let (a, b) = certificate_system(p, q, d);
    let x = C::solve_system(a, b)?;
    let unknowns = monomials_up_to(d);
    let n = unknowns.len();
    let build = |offset: usize| {
        BivariatePoly::from_terms(
            unknowns
                .iter()
                .enumerate()
                .map(|(j, &(mp, mq))| (mp, mq, x[offset + j].clone())),
        )
    };
    let u = build(0);
    let w = build(n);
    let identity_residual = identity_residual(p, q, &u, &w);
    Some(ReductionCertificate {
        u,
        w,
        degree: d,
        identity_residual,
    })
}

/// Searches for `U`, `W` of total degree at most `d` with `P·U + Q·W = 1`
/// for `d = 0, 1, …, max_degree` and returns the first (minimal-degree)
/// solution. `None` means the system is infeasible through `max_degree`.
///
/// Solvability is monotone in `d`, so feasibility at `max_degree` is checked
/// first and an infeasible search costs a single elimination.
pub fn solve_nullstellensatz<C: CertificateField>(
    p: &BivariatePoly<C>,
    q: &BivariatePoly<C>,
    max_degree: u32,
) -> Option<ReductionCertificate<C>> {
    if p.is_zero() && q.is_zero() {
        return None;
    }
    let (a, b) = certificate_system(p, q, max_degree);
    if !C::is_solvable(a, b) {
        return None;
    }
    (0..=max_degree).find_map(|d| solve_at_degree(p, q, d))
}

/// Largest coefficient magnitude of `P·U + Q·W − 1`.
pub fn identity_residual<C: Coeff>(
    p: &BivariatePoly<C>,
    q: &BivariatePoly<C>,
    u: &BivariatePoly<C>,
    w: &BivariatePoly<C>,
) -> f64 {
    let lhs = &(p * u) + &(q * w);
    (&lhs - &BivariatePoly::one()).max_coeff_magnitude()
}

/// Result of [`verify_certificate`].
#[derive(Clone, Debug, PartialEq)]
pub struct CertificateCheck {
    pub identity_residual: f64,
    /// Number of real curve points at which `W·Q = 1` was checked.
    pub curve_points: usize,
    /// Largest `|W·Q − 1|` over those points (0 when none were found).
    pub max_curve_error: f64,
}

impl CertificateCheck {
    pub fn passes(&self, exact: bool) -> bool {
        let identity_ok = if exact {
            self.identity_residual == 0.0
        } else {
            self.identity_residual <= FLOAT_IDENTITY_TOL
        };
        identity_ok && self.max_curve_error <= CURVE_CHECK_TOL
    }
}

/// Recomputes the identity residual of a certificate and checks that `W`
/// agrees with `1/Q` at real points of the curve `P = 0`, when it has any.
pub fn verify_certificate<C: Coeff>(
    p: &BivariatePoly<C>,
    q: &BivariatePoly<C>,
    cert: &ReductionCertificate<C>,
) -> CertificateCheck {
    let identity_residual = identity_residual(p, q, &cert.u, &cert.w);
    let points = sample_real_curve(&p.to_real(), CURVE_SAMPLES);
    let (qr, wr) = (q.to_real(), cert.w.to_real());
    let max_curve_error = points
        .iter()
        .map(|&(x, y)| (wr.eval_real(x, y) * qr.eval_real(x, y) - 1.0).abs())
        .fold(0.0, f64::max);
    CertificateCheck {
        identity_residual,
        curve_points: points.len(),
        max_curve_error,
    }
}

/// Real points on `P = 0`, found by intersecting the curve with horizontal
/// and vertical lines over a widening window. Returns at least `count`
/// points when the window search finds that many, fewer (possibly none) for
/// curves with few or no real points.
pub fn sample_real_curve(p: &RealPoly, count: usize) -> Vec<(f64, f64)> {
    const LINES: usize = 48;
    let mut out = Vec::new();
    if p.is_constant() {
        return out;
    }
    let cp = p.to_complex();
    for half_width in [1.0, 4.0, 16.0, 64.0, 256.0] {
        out.clear();
        for k in 0..LINES {
            // Offset keeps the lines off the axes of symmetry.
            let t = -half_width + (k as f64 + 0.37) * 2.0 * half_width / LINES as f64;
            for var in [Var::X, Var::Y] {
                let u = cp.specialize(var, Complex64::new(t, 0.0)).trim_relative(1e-12);
                for r in real_roots(&u) {
                    let pt = if var == Var::X { (t, r) } else { (r, t) };
                    if p.eval_real(pt.0, pt.1).abs()
                        <= 1e-9 * p.eval_abs_scale(Complex64::new(pt.0, 0.0), Complex64::new(pt.1, 0.0))
                    {
                        out.push(pt);
                    }
                }
            }
        }
        if out.len() >= count {
            break;
        }
    }
    out
}

fn real_roots(u: &UniPoly<Complex64>) -> Vec<f64> {
    polynomial_roots(u)
        .into_iter()
        .filter(|z| z.im.abs() <= 1e-9 * (1.0 + z.re.abs()))
        .map(|z| z.re)
        .collect()
}

impl<C: Coeff> ReductionCertificate<C> {
    /// `true` when `W` is a constant, i.e. the gradient weight is constant on
    /// the curve.
    pub fn has_constant_weight(&self) -> bool {
        self.w.is_constant() && !self.w.is_zero()
    }

    pub fn weight_degree(&self) -> u32 {
        self.w.degree().unwrap_or(0)
    }

    pub fn to_real(&self) -> ReductionCertificate<f64> {
        ReductionCertificate {
            u: self.u.to_real(),
            w: self.w.to_real(),
            degree: self.degree,
            identity_residual: self.identity_residual,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, RatPoly};

    fn r(n: i64) -> BigRational {
        rat(n, 1)
    }

    fn circle(a: BigRational, b: BigRational, radius: BigRational) -> RatPoly {
        RatPoly::from_terms([
            (2, 0, r(1)),
            (0, 2, r(1)),
            (1, 0, r(-2) * a.clone()),
            (0, 1, r(-2) * b.clone()),
            (0, 0, a.clone() * a + b.clone() * b - radius.clone() * radius),
        ])
    }

    #[test]
    fn circle_certificate_is_constant() {
        let radius = rat(3, 2);
        let p = circle(rat(1, 3), r(-2), radius.clone());
        let q = p.gradient_norm_squared();
        let cert = solve_nullstellensatz(&p, &q, default_max_degree(&p, &q)).unwrap();
        let r2 = radius.clone() * radius;
        assert_eq!(cert.degree, 0);
        assert_eq!(cert.u, RatPoly::constant(-(r(1) / r2.clone())));
        assert_eq!(cert.w, RatPoly::constant(r(1) / (r(4) * r2)));
        assert_eq!(cert.identity_residual, 0.0);

        let check = verify_certificate(&p, &q, &cert);
        assert_eq!(check.identity_residual, 0.0);
        assert!(check.curve_points >= CURVE_SAMPLES);
        assert!(check.passes(true));
    }

    #[test]
    fn ellipse_has_no_certificate() {
        let p: RatPoly = "1 x^2 + 2 y^2 + 1".parse().unwrap();
        let q = p.gradient_norm_squared();
        assert!(solve_nullstellensatz(&p, &q, default_max_degree(&p, &q)).is_none());
    }

    #[test]
    fn unit_ideal() {
        let p = RatPoly::one();
        let q: RatPoly = "x^3 - 2 x y + 5".parse().unwrap();
        let cert = solve_nullstellensatz(&p, &q, 4).unwrap();
        assert_eq!(cert.degree, 0);
        assert_eq!(cert.u, RatPoly::one());
        assert!(cert.w.is_zero());
    }

    #[test]
    fn perturbed_weight_breaks_identity() {
        let p = circle(r(1), r(0), r(2));
        let q = p.gradient_norm_squared();
        let mut cert = solve_nullstellensatz(&p, &q, 2).unwrap();
        cert.w = &cert.w + &RatPoly::one();
        let check = verify_certificate(&p, &q, &cert);
        // P·U + Q·(W + 1) − 1 = Q
        assert_eq!(check.identity_residual, q.max_coeff_magnitude());
        assert!(!check.passes(true));
    }

    #[test]
    fn higher_degree_certificate() {
        // (x y - 1)(-1 - x y) + x² · y² = 1
        let p: RatPoly = "x y - 1".parse().unwrap();
        let q: RatPoly = "x^2".parse().unwrap();
        let cert = solve_nullstellensatz(&p, &q, 4).unwrap();
        assert_eq!(cert.degree, 2);
        assert_eq!(cert.identity_residual, 0.0);
        assert!(solve_nullstellensatz(&p, &q, 1).is_none());
    }

    #[test]
    fn float_certificate_for_circle() {
        let p: RealPoly = "1 x^2 + 1 y^2 - 2 x - 3".parse().unwrap();
        let q = p.gradient_norm_squared();
        let cert = solve_nullstellensatz(&p, &q, 2).unwrap();
        assert_eq!(cert.degree, 0);
        assert!((cert.w.coeff(0, 0) - 1.0 / 16.0).abs() < 1e-12);
        assert!(verify_certificate(&p, &q, &cert).passes(false));
    }

    #[test]
    fn curve_sampler_finds_circle_points() {
        let p: RealPoly = "1 x^2 + 1 y^2 - 6 x + 8".parse().unwrap(); // center (3,0), R=1
        let pts = sample_real_curve(&p, 20);
        assert!(pts.len() >= 20);
        for (x, y) in pts {
            assert!((((x - 3.0).powi(2) + y * y).sqrt() - 1.0).abs() < 1e-9);
        }
        let empty: RealPoly = "1 x^2 + 1 y^2 + 1".parse().unwrap();
        assert!(sample_real_curve(&empty, 20).is_empty());
    }
}
