use thiserror::Error;

use super::{BivariatePoly, Coeff, UniPoly, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResultantError {
    /// Both inputs are free of the eliminated variable; the caller has to
    /// compare them as univariate polynomials instead.
    #[error("both polynomials have degree 0 in the eliminated variable")]
    DegenerateElimination,
}

/// Sylvester matrix of `p` and `q` viewed as polynomials in `eliminate`,
/// with entries that are polynomials in the other variable. Rows hold the
/// coefficients from the leading one down.
pub fn sylvester_matrix<C: Coeff>(
    p: &BivariatePoly<C>,
    q: &BivariatePoly<C>,
    eliminate: Var,
) -> Vec<Vec<UniPoly<C>>> {
    let a = p.coefficients_in(eliminate);
    let b = q.coefficients_in(eliminate);
    let m = a.len().saturating_sub(1);
    let n = b.len().saturating_sub(1);
    let size = m + n;
    let mut rows = vec![vec![UniPoly::zero(); size]; size];
    for shift in 0..n {
        for (k, c) in a.iter().enumerate() {
            rows[shift][shift + m - k] = c.clone();
        }
    }
    for shift in 0..m {
        for (k, c) in b.iter().enumerate() {
            rows[n + shift][shift + n - k] = c.clone();
        }
    }
    rows
}

/// Resultant of `p` and `q` with respect to `eliminate`, as a univariate
/// polynomial in the remaining variable.
///
/// The determinant is taken by fraction-free (Bareiss) elimination, so every
/// intermediate division is exact in the exact domain.
pub fn sylvester_resultant<C: Coeff>(
    p: &BivariatePoly<C>,
    q: &BivariatePoly<C>,
    eliminate: Var,
) -> Result<UniPoly<C>, ResultantError> {
    if p.is_zero() || q.is_zero() {
        if p.degree_in(eliminate).unwrap_or(0) == 0 && q.degree_in(eliminate).unwrap_or(0) == 0 {
            return Err(ResultantError::DegenerateElimination);
        }
        return Ok(UniPoly::zero());
    }
    let m = p.degree_in(eliminate).unwrap_or(0);
    let n = q.degree_in(eliminate).unwrap_or(0);
    if m == 0 && n == 0 {
        return Err(ResultantError::DegenerateElimination);
    }
    Ok(bareiss_determinant(sylvester_matrix(p, q, eliminate)))
}

pub(crate) fn bareiss_determinant<C: Coeff>(mut m: Vec<Vec<UniPoly<C>>>) -> UniPoly<C> {
    let size = m.len();
    if size == 0 {
        return UniPoly::constant(C::one());
    }
    let mut negate = false;
    let mut prev = UniPoly::constant(C::one());
    for k in 0..size - 1 {
        if m[k][k].is_zero() {
            let Some(pivot) = (k + 1..size).find(|&i| !m[i][k].is_zero()) else {
                return UniPoly::zero();
            };
            m.swap(k, pivot);
            negate = !negate;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let lhs = &m[k][k] * &m[i][j];
                let rhs = &m[i][k] * &m[k][j];
                m[i][j] = (&lhs - &rhs).exact_div(&prev);
            }
            m[i][k] = UniPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[size - 1][size - 1].clone();
    if negate {
        -&det
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, RatPoly};
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn r(n: i64) -> BigRational {
        rat(n, 1)
    }

    /// Cofactor-expansion determinant, independent of the Bareiss path.
    fn cofactor_det(m: &[Vec<UniPoly<BigRational>>]) -> UniPoly<BigRational> {
        let n = m.len();
        if n == 0 {
            return UniPoly::constant(r(1));
        }
        let mut acc = UniPoly::zero();
        for col in 0..n {
            if m[0][col].is_zero() {
                continue;
            }
            let minor: Vec<Vec<_>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(j, _)| *j != col)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let term = &m[0][col] * &cofactor_det(&minor);
            acc = if col % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    fn uni(cs: &[i64]) -> UniPoly<BigRational> {
        UniPoly::new(cs.iter().map(|&c| r(c)).collect())
    }

    #[test]
    fn two_lines() {
        let p = RatPoly::from_terms([(0, 1, r(1)), (1, 0, r(-1))]);
        let q = RatPoly::from_terms([(0, 1, r(1)), (1, 0, r(1))]);
        assert_eq!(sylvester_resultant(&p, &q, Var::Y).unwrap(), uni(&[0, 2]));
    }

    #[test]
    fn resultant_with_constant() {
        let p = RatPoly::from_terms([(0, 3, r(1)), (1, 1, r(2)), (0, 0, r(-1))]);
        let five = RatPoly::constant(r(5));
        assert_eq!(sylvester_resultant(&p, &five, Var::Y).unwrap(), uni(&[125]));
        assert_eq!(sylvester_resultant(&five, &p, Var::Y).unwrap(), uni(&[125]));
    }

    #[test]
    fn unit_circle_against_its_gradient_norm() {
        let p = RatPoly::from_terms([(2, 0, r(1)), (0, 2, r(1)), (0, 0, r(-1))]);
        let q = p.gradient_norm_squared();
        let res = sylvester_resultant(&p, &q, Var::Y).unwrap();
        assert_eq!(res, uni(&[16]));
        assert_eq!(cofactor_det(&sylvester_matrix(&p, &q, Var::Y)), uni(&[16]));
    }

    #[test]
    fn both_free_of_variable_is_degenerate() {
        let p = RatPoly::from_terms([(2, 0, r(1)), (0, 0, r(-1))]);
        let q = RatPoly::from_terms([(1, 0, r(1))]);
        assert_eq!(
            sylvester_resultant(&p, &q, Var::Y),
            Err(ResultantError::DegenerateElimination)
        );
    }

    #[test]
    fn vanishing_pivot_is_swapped() {
        // x*y - 1 and y: leading coefficient of the first row vanishes at x = 0
        let p = RatPoly::from_terms([(1, 1, r(1)), (0, 0, r(-1))]);
        let q = RatPoly::from_terms([(0, 1, r(1)), (1, 0, r(1))]);
        let res = sylvester_resultant(&p, &q, Var::Y).unwrap();
        assert_eq!(res, cofactor_det(&sylvester_matrix(&p, &q, Var::Y)));
    }

    fn small_poly(max_deg: u32) -> impl Strategy<Value = RatPoly> {
        prop::collection::vec((0..=max_deg, 0..=max_deg, -5i64..=5), 1..=5).prop_map(move |ts| {
            RatPoly::from_terms(
                ts.into_iter()
                    .filter(|(p, q, _)| p + q <= max_deg)
                    .map(|(p, q, c)| (p, q, r(c))),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn bareiss_matches_cofactor_expansion(p in small_poly(3), q in small_poly(3)) {
            if let Ok(res) = sylvester_resultant(&p, &q, Var::Y) {
                let m = sylvester_matrix(&p, &q, Var::Y);
                if !p.is_zero() && !q.is_zero() {
                    prop_assert_eq!(res, cofactor_det(&m));
                }
            }
        }

        #[test]
        fn resultant_is_multiplicative(p1 in small_poly(2), p2 in small_poly(2), q in small_poly(2)) {
            prop_assume!(!p1.is_zero() && !p2.is_zero() && !q.is_zero());
            let deg = |f: &RatPoly| f.degree_in(Var::Y).unwrap_or(0);
            prop_assume!(deg(&p1) > 0 && deg(&p2) > 0 && deg(&q) > 0);
            let lhs = sylvester_resultant(&(&p1 * &p2), &q, Var::Y).unwrap();
            let rhs = &sylvester_resultant(&p1, &q, Var::Y).unwrap()
                * &sylvester_resultant(&p2, &q, Var::Y).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
