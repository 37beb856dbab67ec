//! Text form of polynomials: a sum of `coeff x^p y^q` terms, for example
//! `1 x^2 + 1 y^2 - 1` or `3/4 x y - 2.5`. Coefficients are decimals or
//! rationals `num/den`; an omitted coefficient means 1; `x` is `x^1`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use super::{BivariatePoly, Coeff, Monomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse polynomial at byte {position}: {message}")]
pub struct ParsePolyError {
    pub position: usize,
    pub message: String,
}

/// Coefficient domains with a text representation.
pub trait FormatCoeff: Coeff {
    fn format(&self) -> String;
    fn parse_decimal(text: &str) -> Option<Self>;
}

impl FormatCoeff for BigRational {
    fn format(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn parse_decimal(text: &str) -> Option<Self> {
        // mantissa with optional fraction, optional exponent, parsed exactly
        let (mantissa, exponent) = match text.find(['e', 'E']) {
            Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
            None => (text, 0),
        };
        let (int_part, frac_part) = match mantissa.find('.') {
            Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
            None => (mantissa, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        let digits = format!("{int_part}{frac_part}");
        if !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let value = BigInt::from_str(&digits).ok()?;
        let shift = exponent - frac_part.len() as i32;
        let ten = BigInt::from(10);
        Some(if shift >= 0 {
            BigRational::from_integer(value * num_traits::pow(ten, shift as usize))
        } else {
            BigRational::new(value, num_traits::pow(ten, (-shift) as usize))
        })
    }
}

impl FormatCoeff for f64 {
    fn format(&self) -> String {
        format!("{self}")
    }

    fn parse_decimal(text: &str) -> Option<Self> {
        if !text.bytes().all(|b| b.is_ascii_digit() || b"+-.eE".contains(&b)) {
            return None;
        }
        text.parse().ok()
    }
}

fn monomial_text(p: u32, q: u32) -> String {
    let part = |name: &str, e: u32| match e {
        0 => None,
        1 => Some(name.to_string()),
        _ => Some(format!("{name}^{e}")),
    };
    [part("x", p), part("y", q)]
        .into_iter()
        .flatten()
        .collect::<Vec<_>>()
        .join(" ")
}

pub(super) fn format_poly<C: FormatCoeff>(poly: &BivariatePoly<C>) -> String {
    let mut terms: Vec<(Monomial, &C)> = poly.terms().collect();
    if terms.is_empty() {
        return "0".to_string();
    }
    terms.sort_by(|((p1, q1), _), ((p2, q2), _)| (p2 + q2, p2).cmp(&(p1 + q1, p1)));
    let mut out = String::new();
    for (i, ((p, q), c)) in terms.into_iter().enumerate() {
        let negative = c.to_f64() < 0.0;
        let abs = if negative { -c.clone() } else { c.clone() };
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&abs.format());
        let mono = monomial_text(p, q);
        if !mono.is_empty() {
            out.push(' ');
            out.push_str(&mono);
        }
    }
    out
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParsePolyError> {
        Err(ParsePolyError {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace() || c == '*') {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while self.peek().is_some_and(&f) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn number<C: FormatCoeff>(&mut self) -> Result<C, ParsePolyError> {
        let start = self.pos;
        let is_num = |c: char| c.is_ascii_digit() || c == '.';
        let mut text = self.take_while(is_num).to_string();
        // exponent suffix, only when followed by digits
        if matches!(self.peek(), Some('e' | 'E')) {
            let rest = &self.src[self.pos + 1..];
            let signed = rest.starts_with(['+', '-']);
            let digits_at = if signed { 1 } else { 0 };
            if rest[digits_at..].starts_with(|c: char| c.is_ascii_digit()) {
                self.pos += 1 + digits_at;
                let exp = self.take_while(|c| c.is_ascii_digit());
                text.push('e');
                if signed {
                    text.push_str(&rest[..1]);
                }
                text.push_str(exp);
            }
        }
        let Some(mut value) = C::parse_decimal(&text) else {
            self.pos = start;
            return self.err(format!("invalid number `{text}`"));
        };
        self.skip_ws();
        if self.peek() == Some('/') {
            self.pos += 1;
            self.skip_ws();
            let den_text = self.take_while(|c| c.is_ascii_digit());
            let Some(den) = C::parse_decimal(den_text) else {
                return self.err("expected denominator after `/`");
            };
            if den.is_zero() {
                return self.err("zero denominator");
            }
            value = value / den;
        }
        Ok(value)
    }

    fn exponent(&mut self) -> Result<u32, ParsePolyError> {
        self.skip_ws();
        if self.peek() != Some('^') {
            return Ok(1);
        }
        self.pos += 1;
        self.skip_ws();
        let digits = self.take_while(|c| c.is_ascii_digit());
        match digits.parse() {
            Ok(e) => Ok(e),
            Err(_) => self.err("expected a nonnegative integer exponent"),
        }
    }

    fn term<C: FormatCoeff>(&mut self, negative: bool) -> Result<(Monomial, C), ParsePolyError> {
        self.skip_ws();
        let mut coeff = C::one();
        let mut seen_any = false;
        if self.peek().is_some_and(|c| c.is_ascii_digit() || c == '.') {
            coeff = self.number()?;
            seen_any = true;
        }
        let (mut p, mut q) = (0, 0);
        loop {
            self.skip_ws();
            match self.peek() {
                Some('x') => {
                    self.pos += 1;
                    p += self.exponent()?;
                }
                Some('y') => {
                    self.pos += 1;
                    q += self.exponent()?;
                }
                _ => break,
            }
            seen_any = true;
        }
        if !seen_any {
            return self.err("expected a coefficient or a monomial");
        }
        Ok(((p, q), if negative { -coeff } else { coeff }))
    }

    fn poly<C: FormatCoeff>(&mut self) -> Result<BivariatePoly<C>, ParsePolyError> {
        let mut out = BivariatePoly::zero();
        self.skip_ws();
        let mut negative = false;
        if let Some(c @ ('+' | '-')) = self.peek() {
            negative = c == '-';
            self.pos += 1;
        }
        loop {
            let ((p, q), c) = self.term::<C>(negative)?;
            out.add_term(p, q, c);
            self.skip_ws();
            match self.peek() {
                None => return Ok(out),
                Some(c @ ('+' | '-')) => {
                    negative = c == '-';
                    self.pos += 1;
                }
                Some(c) => return self.err(format!("unexpected character `{c}`")),
            }
        }
    }
}

impl<C: FormatCoeff> FromStr for BivariatePoly<C> {
    type Err = ParsePolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Parser { src: s, pos: 0 }.poly()
    }
}

/// Renders a rational with a decimal approximation, e.g. `1/3 (≈0.333333)`.
pub fn describe_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        return r.format();
    }
    format!("{} (~{:.6})", r.format(), crate::poly::coeff::ratio_to_f64(r))
}

#[cfg(test)]
mod tests {
    use crate::poly::{rat, RatPoly, RealPoly};
    use proptest::prelude::*;

    #[test]
    fn parses_documented_forms() {
        let p: RatPoly = "1 x^2 + 1 y^2 - 1".parse().unwrap();
        assert_eq!(p.coeff(2, 0), rat(1, 1));
        assert_eq!(p.coeff(0, 2), rat(1, 1));
        assert_eq!(p.coeff(0, 0), rat(-1, 1));

        let parabola: RatPoly = "1 y - 1 x^2".parse().unwrap();
        assert_eq!(parabola.coeff(0, 1), rat(1, 1));
        assert_eq!(parabola.coeff(2, 0), rat(-1, 1));

        let q: RatPoly = "-3/4 x y^2 + 0.125 x - y + 2e1".parse().unwrap();
        assert_eq!(q.coeff(1, 2), rat(-3, 4));
        assert_eq!(q.coeff(1, 0), rat(1, 8));
        assert_eq!(q.coeff(0, 1), rat(-1, 1));
        assert_eq!(q.coeff(0, 0), rat(20, 1));
    }

    #[test]
    fn emits_in_degree_order() {
        let p: RatPoly = "-1 + 1 y^2 + 1 x^2".parse().unwrap();
        assert_eq!(p.to_string(), "1 x^2 + 1 y^2 - 1");
        let q: RatPoly = "x y - 1/3".parse().unwrap();
        assert_eq!(q.to_string(), "1 x y - 1/3");
        assert_eq!(RatPoly::zero().to_string(), "0");
        let f: RealPoly = "2.5 x - 1".parse().unwrap();
        assert_eq!(f.to_string(), "2.5 x - 1");
    }

    #[test]
    fn rejects_garbage() {
        assert!("1 x^".parse::<RatPoly>().is_err());
        assert!("1 z".parse::<RatPoly>().is_err());
        assert!("1 x +".parse::<RatPoly>().is_err());
        assert!("1/0 x".parse::<RatPoly>().is_err());
        let err = "x + ?".parse::<RatPoly>().unwrap_err();
        assert_eq!(err.position, 4);
    }

    proptest! {
        #[test]
        fn display_then_parse_is_identity(ts in prop::collection::vec((0u32..5, 0u32..5, -50i64..50, 1i64..20), 0..8)) {
            let p = RatPoly::from_terms(ts.into_iter().map(|(a, b, n, d)| (a, b, rat(n, d))));
            let back: RatPoly = p.to_string().parse().unwrap();
            prop_assert_eq!(back, p);
        }
    }
}
