//! Sparse bivariate polynomials.
//!
//! A [`BivariatePoly`] is a map from exponent pairs `(p, q)` (the monomial
//! `x^p y^q`) to nonzero coefficients. The coefficient domain is a type
//! parameter; see [`coeff`].

pub mod coeff;
mod resultant;
mod text;
mod transform;
mod univariate;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;

pub use coeff::{rat, Coeff};
pub use resultant::{sylvester_matrix, sylvester_resultant, ResultantError};
pub use text::{describe_rational, FormatCoeff, ParsePolyError};
pub use transform::SimilarityTransform;
pub use univariate::UniPoly;

/// Exponent pair `(p, q)` of the monomial `x^p y^q`.
pub type Monomial = (u32, u32);

/// Polynomial with exact rational coefficients.
pub type RatPoly = BivariatePoly<BigRational>;
/// Polynomial with real double coefficients.
pub type RealPoly = BivariatePoly<f64>;
/// Polynomial with complex double coefficients.
pub type ComplexPoly = BivariatePoly<Complex64>;

/// Relative tolerance used when comparing floating polynomials.
pub const FLOAT_EQ_TOL: f64 = 1e-12;

/// One of the two variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
}

impl Var {
    pub fn other(self) -> Var {
        match self {
            Var::X => Var::Y,
            Var::Y => Var::X,
        }
    }
}

/// Sparse polynomial in `x` and `y`. Zero coefficients are never stored.
#[derive(Clone, Debug)]
pub struct BivariatePoly<C> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> Default for BivariatePoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> BivariatePoly<C> {
    pub fn zero() -> Self {
        BivariatePoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn x() -> Self {
        Self::monomial(C::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(C::one(), 0, 1)
    }

    /// The single term `c x^p y^q`.
    pub fn monomial(c: C, p: u32, q: u32) -> Self {
        let mut out = Self::zero();
        out.add_term(p, q, c);
        out
    }

    /// Builds a polynomial from `(p, q, coefficient)` triples; repeated
    /// monomials are summed.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, C)>,
    {
        let mut out = Self::zero();
        for (p, q, c) in terms {
            out.add_term(p, q, c);
        }
        out
    }

    /// Adds `c x^p y^q` in place, keeping the map canonical.
    pub fn add_term(&mut self, p: u32, q: u32, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&(p, q)) {
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert((p, q), sum);
                }
            }
            None => {
                self.terms.insert((p, q), c);
            }
        }
    }

    pub fn coeff(&self, p: u32, q: u32) -> C {
        self.terms.get(&(p, q)).cloned().unwrap_or_else(C::zero)
    }

    /// Iterates terms as `((p, q), coefficient)` in lexicographic `(p, q)` order.
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &C)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` stands for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|(p, q)| p + q).max()
    }

    /// Degree in one variable; `None` for the zero polynomial.
    pub fn degree_in(&self, var: Var) -> Option<u32> {
        self.terms
            .keys()
            .map(|&(p, q)| match var {
                Var::X => p,
                Var::Y => q,
            })
            .max()
    }

    /// `true` for the zero polynomial and for nonzero constants.
    pub fn is_constant(&self) -> bool {
        self.degree().is_none_or(|d| d == 0)
    }

    /// Largest coefficient magnitude (0 for the zero polynomial).
    pub fn max_coeff_magnitude(&self) -> f64 {
        self.terms.values().map(Coeff::magnitude).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_terms(self.terms().map(|((p, q), v)| (p, q, v.clone() * c.clone())))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn partial_derivative(&self, var: Var) -> Self {
        Self::from_terms(self.terms().filter_map(|((p, q), c)| match var {
            Var::X if p > 0 => Some((p - 1, q, c.clone() * C::from_i64(p as i64))),
            Var::Y if q > 0 => Some((p, q - 1, c.clone() * C::from_i64(q as i64))),
            _ => None,
        }))
    }

    /// `Q = (∂P/∂x)² + (∂P/∂y)²`, the squared gradient norm as a polynomial.
    pub fn gradient_norm_squared(&self) -> Self {
        let px = self.partial_derivative(Var::X);
        let py = self.partial_derivative(Var::Y);
        &(&px * &px) + &(&py * &py)
    }

    /// Evaluates at a complex point. Terms are grouped by powers of `y` and
    /// each group is evaluated by Horner's rule in `x`, then the groups are
    /// combined by Horner's rule in `y`.
    pub fn eval(&self, x: Complex64, y: Complex64) -> Complex64 {
        let Some(deg_y) = self.degree_in(Var::Y) else {
            return Complex64::new(0.0, 0.0);
        };
        let rows = self.coefficients_in(Var::Y);
        let mut acc = Complex64::new(0.0, 0.0);
        for q in (0..=deg_y as usize).rev() {
            acc = acc * y + rows[q].eval(x);
        }
        acc
    }

    /// Evaluates at a real point, returning the real part.
    pub fn eval_real(&self, x: f64, y: f64) -> f64 {
        self.eval(Complex64::new(x, 0.0), Complex64::new(y, 0.0)).re
    }

    /// `Σ |c_pq| |x|^p |y|^q`: the scale against which a value of the
    /// polynomial at `(x, y)` is judged to be small.
    pub fn eval_abs_scale(&self, x: Complex64, y: Complex64) -> f64 {
        let (ax, ay) = (x.norm(), y.norm());
        self.terms()
            .map(|((p, q), c)| c.magnitude() * ax.powi(p as i32) * ay.powi(q as i32))
            .sum()
    }

    /// Views the polynomial as a univariate polynomial in `var` whose
    /// coefficients are univariate polynomials in the other variable. Entry
    /// `k` of the result multiplies `var^k`.
    pub fn coefficients_in(&self, var: Var) -> Vec<UniPoly<C>> {
        let Some(deg) = self.degree_in(var) else {
            return Vec::new();
        };
        let mut rows: Vec<Vec<C>> = vec![Vec::new(); deg as usize + 1];
        for ((p, q), c) in self.terms() {
            let (outer, inner) = match var {
                Var::X => (p, q),
                Var::Y => (q, p),
            };
            let row = &mut rows[outer as usize];
            if row.len() <= inner as usize {
                row.resize(inner as usize + 1, C::zero());
            }
            row[inner as usize] = c.clone();
        }
        rows.into_iter().map(UniPoly::new).collect()
    }

    /// Substitutes a value for `var`, leaving a univariate polynomial in the
    /// other variable (complex coefficients).
    pub fn specialize(&self, var: Var, value: Complex64) -> UniPoly<Complex64> {
        let Some(deg) = self.degree_in(var.other()) else {
            return UniPoly::zero();
        };
        let mut coeffs = vec![Complex64::new(0.0, 0.0); deg as usize + 1];
        for ((p, q), c) in self.terms() {
            let (fixed_exp, free_exp) = match var {
                Var::X => (p, q),
                Var::Y => (q, p),
            };
            coeffs[free_exp as usize] += c.to_complex() * value.powu(fixed_exp);
        }
        UniPoly::new(coeffs)
    }

    /// Swaps the roles of `x` and `y`.
    pub fn swap_variables(&self) -> Self {
        Self::from_terms(self.terms().map(|((p, q), c)| (q, p, c.clone())))
    }

    /// Converts coefficients to another domain.
    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> BivariatePoly<D> {
        BivariatePoly::from_terms(self.terms().map(|((p, q), c)| (p, q, f(c))))
    }

    pub fn to_real(&self) -> RealPoly {
        self.map_coeffs(Coeff::to_f64)
    }

    pub fn to_complex(&self) -> ComplexPoly {
        self.map_coeffs(Coeff::to_complex)
    }

    /// Dense coefficient vector over the given monomial list.
    pub fn coefficient_vector(&self, monomials: &[Monomial]) -> Vec<C> {
        monomials.iter().map(|&(p, q)| self.coeff(p, q)).collect()
    }
}

impl RealPoly {
    /// Exact rational copy; lossless because every finite double is rational.
    pub fn to_exact(&self) -> RatPoly {
        self.map_coeffs(|c| <BigRational as Coeff>::from_f64(*c))
    }
}

/// All monomials of total degree at most `d`, ordered by degree then by
/// descending power of `x`.
pub fn monomials_up_to(d: u32) -> Vec<Monomial> {
    let mut out = Vec::with_capacity(((d + 1) * (d + 2) / 2) as usize);
    for total in 0..=d {
        for p in (0..=total).rev() {
            out.push((p, total - p));
        }
    }
    out
}

impl<C: Coeff> PartialEq for BivariatePoly<C> {
    fn eq(&self, other: &Self) -> bool {
        if C::EXACT {
            return self.terms == other.terms;
        }
        let scale = self
            .max_coeff_magnitude()
            .max(other.max_coeff_magnitude())
            .max(f64::MIN_POSITIVE);
        let diff = self - other;
        diff.max_coeff_magnitude() / scale <= FLOAT_EQ_TOL
    }
}

impl<C: Coeff> Add for &BivariatePoly<C> {
    type Output = BivariatePoly<C>;
    fn add(self, rhs: Self) -> BivariatePoly<C> {
        let mut out = self.clone();
        for ((p, q), c) in rhs.terms() {
            out.add_term(p, q, c.clone());
        }
        out
    }
}

impl<C: Coeff> Sub for &BivariatePoly<C> {
    type Output = BivariatePoly<C>;
    fn sub(self, rhs: Self) -> BivariatePoly<C> {
        let mut out = self.clone();
        for ((p, q), c) in rhs.terms() {
            out.add_term(p, q, -c.clone());
        }
        out
    }
}

impl<C: Coeff> Mul for &BivariatePoly<C> {
    type Output = BivariatePoly<C>;
    fn mul(self, rhs: Self) -> BivariatePoly<C> {
        let mut out = BivariatePoly::zero();
        for ((p1, q1), c1) in self.terms() {
            for ((p2, q2), c2) in rhs.terms() {
                out.add_term(p1 + p2, q1 + q2, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<C: Coeff> Neg for &BivariatePoly<C> {
    type Output = BivariatePoly<C>;
    fn neg(self) -> BivariatePoly<C> {
        BivariatePoly::from_terms(self.terms().map(|((p, q), c)| (p, q, -c.clone())))
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl<C: Coeff> $tr for BivariatePoly<C> {
            type Output = BivariatePoly<C>;
            fn $method(self, rhs: Self) -> BivariatePoly<C> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl<C: Coeff> fmt::Display for BivariatePoly<C>
where
    C: FormatCoeff,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::format_poly(self))
    }
}
