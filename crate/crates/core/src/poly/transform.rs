use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{BivariatePoly, Coeff};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransformError {
    #[error("similarity scale must be finite and nonzero, got {0}")]
    InvalidScale(f64),
    #[error("transform parameters must be finite")]
    NonFinite,
}

/// A similarity of the plane: optional mirror `(x, y) ↦ (x, −y)`, then a
/// rotation by `angle`, a uniform scaling by `scale`, and a translation.
///
/// `T(u) = scale · R(angle) · M · u + (tx, ty)`
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimilarityTransform {
    angle: f64,
    scale: f64,
    tx: f64,
    ty: f64,
    mirror: bool,
}

impl SimilarityTransform {
    pub fn new(
        angle: f64,
        scale: f64,
        translation: (f64, f64),
        mirror: bool,
    ) -> Result<Self, TransformError> {
        if !angle.is_finite() || !translation.0.is_finite() || !translation.1.is_finite() {
            return Err(TransformError::NonFinite);
        }
        if !scale.is_finite() || scale == 0.0 {
            return Err(TransformError::InvalidScale(scale));
        }
        Ok(SimilarityTransform {
            angle,
            scale,
            tx: translation.0,
            ty: translation.1,
            mirror,
        })
    }

    pub fn identity() -> Self {
        Self::new(0.0, 1.0, (0.0, 0.0), false).unwrap()
    }

    pub fn translation(tx: f64, ty: f64) -> Self {
        Self::new(0.0, 1.0, (tx, ty), false).expect("non-finite translation")
    }

    pub fn rotation(angle: f64) -> Self {
        Self::new(angle, 1.0, (0.0, 0.0), false).expect("non-finite angle")
    }

    pub fn scaling(scale: f64) -> Result<Self, TransformError> {
        Self::new(0.0, scale, (0.0, 0.0), false)
    }

    pub fn reflection() -> Self {
        Self::new(0.0, 1.0, (0.0, 0.0), true).unwrap()
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn offset(&self) -> (f64, f64) {
        (self.tx, self.ty)
    }

    pub fn is_mirror(&self) -> bool {
        self.mirror
    }

    /// `self` applied after `first`.
    pub fn compose(&self, first: &SimilarityTransform) -> SimilarityTransform {
        // R(a) M R(b) = R(a - b) M
        let inner_angle = if self.mirror { -first.angle } else { first.angle };
        let (tx, ty) = self.apply_linear(first.tx, first.ty);
        SimilarityTransform {
            angle: self.angle + inner_angle,
            scale: self.scale * first.scale,
            tx: tx + self.tx,
            ty: ty + self.ty,
            mirror: self.mirror ^ first.mirror,
        }
    }

    fn apply_linear(&self, x: f64, y: f64) -> (f64, f64) {
        let y = if self.mirror { -y } else { y };
        let (s, c) = self.angle.sin_cos();
        (self.scale * (c * x - s * y), self.scale * (s * x + c * y))
    }

    /// Image of a point.
    pub fn apply_point(&self, x: f64, y: f64) -> (f64, f64) {
        let (u, v) = self.apply_linear(x, y);
        (u + self.tx, v + self.ty)
    }

    /// `(cos, sin)` of the rotation in the coefficient domain. In the exact
    /// domain the pair is a rational point on the unit circle obtained from a
    /// rational approximation of `tan(angle / 2)`, so `cos² + sin² = 1` holds
    /// exactly and circles stay circles.
    fn rotation_pair<C: Coeff>(&self) -> (C, C) {
        if !C::EXACT {
            let (s, c) = self.angle.sin_cos();
            return (C::from_f64(c), C::from_f64(s));
        }
        // Reduce to |angle| <= pi/2 so the half-angle tangent is bounded.
        let turns = (self.angle / PI).round();
        let reduced = self.angle - turns * PI;
        let t = C::rationalize((reduced / 2.0).tan());
        let one = C::one();
        let denom = one.clone() + t.clone() * t.clone();
        let mut cos = (one.clone() - t.clone() * t.clone()) / denom.clone();
        let mut sin = (C::from_i64(2) * t) / denom;
        if (turns as i64).rem_euclid(2) == 1 {
            cos = -cos;
            sin = -sin;
        }
        (cos, sin)
    }
}

impl<C: Coeff> BivariatePoly<C> {
    /// The polynomial in transformed coordinates: `P̃(ũ) = P(T⁻¹(ũ))`, so
    /// that the zero set of the result is the image of the zero set of `self`.
    pub fn apply_transform(&self, t: &SimilarityTransform) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let (cos, sin) = t.rotation_pair::<C>();
        let inv_scale = C::one() / C::rationalize(t.scale);
        let tx = C::rationalize(t.tx);
        let ty = C::rationalize(t.ty);
        // v = (ũ - t) / scale
        let vx = Self::from_terms([(1, 0, inv_scale.clone()), (0, 0, -(tx * inv_scale.clone()))]);
        let vy = Self::from_terms([(0, 1, inv_scale.clone()), (0, 0, -(ty * inv_scale))]);
        // u = M R(-angle) v
        let x_of = &vx.scale(&cos) + &vy.scale(&sin);
        let mut y_of = &vy.scale(&cos) - &vx.scale(&sin);
        if t.mirror {
            y_of = -&y_of;
        }

        let deg = self.degree().unwrap_or(0) as usize;
        let mut x_pows = vec![Self::one()];
        let mut y_pows = vec![Self::one()];
        for k in 1..=deg {
            x_pows.push(&x_pows[k - 1] * &x_of);
            y_pows.push(&y_pows[k - 1] * &y_of);
        }
        let mut out = Self::zero();
        for ((p, q), c) in self.terms() {
            let term = (&x_pows[p as usize] * &y_pows[q as usize]).scale(c);
            out = &out + &term;
        }
        out
    }
}
