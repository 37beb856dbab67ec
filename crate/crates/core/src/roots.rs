//! Univariate root finding: eigenvalues of the companion matrix, then a few
//! Newton steps on the original polynomial.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::poly::UniPoly;

const NEWTON_STEPS: usize = 8;
const ABERTH_ITERATIONS: usize = 500;

/// All complex roots of `p`, with multiplicity. The zero polynomial and
/// nonzero constants have none.
pub fn polynomial_roots(p: &UniPoly<Complex64>) -> Vec<Complex64> {
    let Some(deg) = p.degree() else {
        return Vec::new();
    };
    if deg == 0 {
        return Vec::new();
    }
    let c = p.coeffs();
    let lead = c[deg];
    if deg == 1 {
        return vec![-c[0] / lead];
    }
    // Companion matrix of the monic polynomial: ones on the subdiagonal,
    // negated coefficients in the last column.
    let mut m = DMatrix::<Complex64>::zeros(deg, deg);
    for i in 1..deg {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..deg {
        m[(i, deg - 1)] = -c[i] / lead;
    }
    // The shifted QR iteration can cycle on highly symmetric companions
    // such as x^6 + c; bound it and fall back to Aberth's method.
    let eig: Vec<Complex64> = match Schur::try_new(m, f64::EPSILON, 200 * deg) {
        Some(schur) => schur
            .eigenvalues()
            .expect("complex Schur form is triangular")
            .iter()
            .copied()
            .collect(),
        None => aberth(p),
    };
    eig.iter().map(|&z| polish_root(p, z)).collect()
}

/// Simultaneous root iteration, started on a circle of the Cauchy bound
/// radius with an irrational angular offset.
fn aberth(p: &UniPoly<Complex64>) -> Vec<Complex64> {
    let c = p.coeffs();
    let deg = c.len() - 1;
    let lead = c[deg];
    let radius = 1.0 + c[..deg].iter().map(|v| (v / lead).norm()).fold(0.0, f64::max);
    let dp = p.derivative();
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / deg as f64 + 0.4))
        .collect();
    for _ in 0..ABERTH_ITERATIONS {
        let mut moved: f64 = 0.0;
        for k in 0..deg {
            let ratio = p.eval(z[k]) / dp.eval(z[k]);
            let repulsion: Complex64 = (0..deg)
                .filter(|&j| j != k)
                .map(|j| Complex64::new(1.0, 0.0) / (z[k] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.re.is_finite() && step.im.is_finite() {
                z[k] -= step;
                moved = moved.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Newton refinement of an approximate root; keeps the best iterate.
pub fn polish_root(p: &UniPoly<Complex64>, mut z: Complex64) -> Complex64 {
    let dp = p.derivative();
    let mut best = (p.eval(z).norm(), z);
    for _ in 0..NEWTON_STEPS {
        let d = dp.eval(z);
        if d.norm() == 0.0 {
            break;
        }
        z -= p.eval(z) / d;
        if !z.re.is_finite() || !z.im.is_finite() {
            break;
        }
        let v = p.eval(z).norm();
        if v < best.0 {
            best = (v, z);
        }
        if v == 0.0 {
            break;
        }
    }
    best.1
}
