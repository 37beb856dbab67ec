//! Linear systems for certificate search.
//!
//! The exact path clears denominators row by row and runs fraction-free
//! (Bareiss) elimination over the integers, so feasibility is decided without
//! any rounding. The floating path uses an SVD with a relative cutoff on the
//! singular values.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Singular values below this fraction of the largest are treated as zero.
pub const SVD_RANK_TOL: f64 = 1e-10;

/// Outcome of reducing `[A | b]` to echelon form.
struct Echelon {
    /// Independent rows of the integer-scaled system, in echelon form.
    rows: Vec<Vec<BigInt>>,
    rhs: Vec<BigInt>,
    consistent: bool,
}

fn integer_rows(a: &[Vec<BigRational>], b: &[BigRational]) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    let mut rows = Vec::with_capacity(a.len());
    let mut rhs = Vec::with_capacity(a.len());
    for (row, bi) in a.iter().zip(b) {
        let lcm = row
            .iter()
            .chain(std::iter::once(bi))
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let scale = |v: &BigRational| v.numer() * (&lcm / v.denom());
        rows.push(row.iter().map(scale).collect());
        rhs.push(scale(bi));
    }
    (rows, rhs)
}

fn echelon(a: &[Vec<BigRational>], b: &[BigRational]) -> Echelon {
    let (mut m, mut rhs) = integer_rows(a, b);
    let n_rows = m.len();
    let n_cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..n_cols {
        if rank == n_rows {
            break;
        }
        let Some(pivot) = (rank..n_rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        rhs.swap(rank, pivot);
        let piv = m[rank][col].clone();
        for i in rank + 1..n_rows {
            let factor = m[i][col].clone();
            if factor.is_zero() {
                // row_i = piv * row_i / prev
                if !piv.is_one() || !prev.is_one() {
                    for j in col + 1..n_cols {
                        if !m[i][j].is_zero() {
                            m[i][j] = &piv * &m[i][j] / &prev;
                        }
                    }
                    rhs[i] = &piv * &rhs[i] / &prev;
                }
                continue;
            }
            for j in col + 1..n_cols {
                let v = &piv * &m[i][j] - &factor * &m[rank][j];
                debug_assert!((&v % &prev).is_zero());
                m[i][j] = v / &prev;
            }
            rhs[i] = (&piv * &rhs[i] - &factor * &rhs[rank]) / &prev;
            m[i][col] = BigInt::zero();
        }
        prev = piv;
        rank += 1;
    }
    let consistent = rhs[rank..].iter().all(Zero::is_zero);
    m.truncate(rank);
    rhs.truncate(rank);
    Echelon {
        rows: m,
        rhs,
        consistent,
    }
}

/// Rank of a rational matrix.
pub fn exact_rank(a: &[Vec<BigRational>]) -> usize {
    let zeros = vec![BigRational::zero(); a.len()];
    echelon(a, &zeros).rows.len()
}

/// Solves a square nonsingular rational system by Gaussian elimination.
fn solve_square(mut g: Vec<Vec<BigRational>>, mut rhs: Vec<BigRational>) -> Vec<BigRational> {
    let n = g.len();
    for k in 0..n {
        let pivot = (k..n)
            .find(|&i| !g[i][k].is_zero())
            .expect("Gram matrix of independent rows is nonsingular");
        g.swap(k, pivot);
        rhs.swap(k, pivot);
        let inv = BigRational::one() / &g[k][k];
        for i in k + 1..n {
            if g[i][k].is_zero() {
                continue;
            }
            let f = &g[i][k] * &inv;
            for j in k..n {
                let d = &f * &g[k][j];
                g[i][j] -= d;
            }
            let d = &f * &rhs[k];
            rhs[i] -= d;
        }
    }
    let mut x = vec![BigRational::zero(); n];
    for k in (0..n).rev() {
        let mut acc = rhs[k].clone();
        for j in k + 1..n {
            acc -= &g[k][j] * &x[j];
        }
        x[k] = acc / &g[k][k];
    }
    x
}

/// Whether `A x = b` has an exact solution.
pub fn exact_consistent(a: &[Vec<BigRational>], b: &[BigRational]) -> bool {
    echelon(a, b).consistent
}

/// Minimum-Euclidean-norm exact solution of `A x = b`, or `None` when the
/// system is inconsistent.
///
/// The minimum-norm solution lies in the row space of `A`; with `E` a basis of
/// independent rows (scaled row operations of `A`, same row space) it is
/// `x = Eᵀ (E Eᵀ)⁻¹ e`.
pub fn solve_exact_min_norm(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n_cols = a.first().map_or(0, Vec::len);
    let ech = echelon(a, b);
    if !ech.consistent {
        return None;
    }
    let r = ech.rows.len();
    if r == 0 {
        return Some(vec![BigRational::zero(); n_cols]);
    }
    // Gram matrix of the echelon rows, in integers.
    let mut gram = vec![vec![BigRational::zero(); r]; r];
    for i in 0..r {
        for j in i..r {
            let dot: BigInt = ech.rows[i]
                .iter()
                .zip(&ech.rows[j])
                .filter(|(u, v)| !u.is_zero() && !v.is_zero())
                .map(|(u, v)| u * v)
                .sum();
            let v = BigRational::from_integer(dot);
            gram[i][j] = v.clone();
            gram[j][i] = v;
        }
    }
    let rhs: Vec<BigRational> = ech.rhs.iter().cloned().map(BigRational::from_integer).collect();
    let y = solve_square(gram, rhs);
    let mut x = vec![BigRational::zero(); n_cols];
    for (row, yi) in ech.rows.iter().zip(&y) {
        if yi.is_zero() {
            continue;
        }
        for (xj, e) in x.iter_mut().zip(row) {
            if !e.is_zero() {
                *xj += yi * BigRational::from_integer(e.clone());
            }
        }
    }
    Some(x)
}

/// Minimum-norm least-squares solution of `A x = b` through the SVD, with
/// singular values below [`SVD_RANK_TOL`] times the largest treated as zero.
/// Returns the solution and the residual `‖A x − b‖∞`.
pub fn solve_float_min_norm(a: &DMatrix<f64>, b: &DVector<f64>) -> (DVector<f64>, f64) {
    if a.nrows() == 0 || a.ncols() == 0 {
        return (DVector::zeros(a.ncols()), b.amax());
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let x = svd
        .solve(b, SVD_RANK_TOL * smax.max(f64::MIN_POSITIVE))
        .expect("SVD computed with both factors");
    let residual = (a * &x - b).amax();
    (x, residual)
}

/// Largest absolute value in a rational vector, as a double.
pub fn max_abs(v: &[BigRational]) -> f64 {
    v.iter()
        .map(|x| crate::poly::coeff::ratio_to_f64(&x.abs()))
        .fold(0.0, f64::max)
}
