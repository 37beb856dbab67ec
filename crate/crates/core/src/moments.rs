//! Raw data moments `m[p, q] = Σ (xᵢ − x₀)ᵖ (yᵢ − y₀)ᵍ` for `p + q ≤ D`.
//!
//! A [`MomentVector`] is filled in one pass and can be merged with others,
//! so accumulation parallelizes and the raw points can be discarded
//! afterwards. Moments are taken about an origin `(x₀, y₀)`; fourth-order
//! sums about a point near the data lose far less to cancellation than sums
//! about the coordinate origin.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MomentError {
    #[error("non-finite input point ({x}, {y})")]
    NonFiniteInput { x: f64, y: f64 },
    #[error("moment degree mismatch: need {expected}, found {found}")]
    DegreeMismatch { expected: u32, found: u32 },
    #[error("invalid moment record: {0}")]
    InvalidRecord(String),
}

/// Neumaier's compensated sum.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    fn from_value(v: f64) -> Self {
        CompensatedSum { sum: v, comp: 0.0 }
    }

    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.add(other.comp);
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// How the moment origin is chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
enum Origin {
    /// Set from the first accumulated point.
    Pending,
    Fixed(f64, f64),
}

/// Streaming accumulator of all moments up to total degree `D`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentVector {
    degree: u32,
    n: u64,
    origin: Origin,
    /// Indexed by `(p, q)` in lexicographic order, see [`MomentVector::index`].
    sums: Vec<CompensatedSum>,
}

fn num_entries(degree: u32) -> usize {
    let d = degree as usize;
    (d + 1) * (d + 2) / 2
}

fn binomial_row(n: u32) -> Vec<f64> {
    let mut row = vec![1.0];
    for k in 1..=n {
        let prev = row[k as usize - 1];
        row.push(prev * f64::from(n - k + 1) / f64::from(k));
    }
    row
}

impl MomentVector {
    /// Moments about the coordinate origin.
    pub fn new(degree: u32) -> Self {
        Self::with_origin(degree, (0.0, 0.0))
    }

    /// Moments about a fixed point.
    pub fn with_origin(degree: u32, origin: (f64, f64)) -> Self {
        MomentVector {
            degree,
            n: 0,
            origin: Origin::Fixed(origin.0, origin.1),
            sums: vec![CompensatedSum::default(); num_entries(degree)],
        }
    }

    /// Moments about the first point absorbed.
    pub fn centered(degree: u32) -> Self {
        MomentVector {
            degree,
            n: 0,
            origin: Origin::Pending,
            sums: vec![CompensatedSum::default(); num_entries(degree)],
        }
    }

    /// Accumulates `points` about their centroid (two passes over the slice),
    /// splitting the work across `workers` threads when `workers > 1`.
    pub fn from_points(degree: u32, points: &[(f64, f64)], workers: usize) -> Result<Self, MomentError> {
        if let Some(&(x, y)) = points.iter().find(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(MomentError::NonFiniteInput { x, y });
        }
        let origin = if points.is_empty() {
            (0.0, 0.0)
        } else {
            let n = points.len() as f64;
            let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
            (sx / n, sy / n)
        };
        if workers <= 1 || points.len() < 2 * workers {
            let mut mv = Self::with_origin(degree, origin);
            mv.extend(points.iter().copied())?;
            return Ok(mv);
        }
        let chunk = points.len().div_ceil(workers);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| MomentError::InvalidRecord(e.to_string()))?;
        let parts: Vec<MomentVector> = pool.install(|| {
            points
                .par_chunks(chunk)
                .map(|c| {
                    let mut mv = Self::with_origin(degree, origin);
                    mv.extend(c.iter().copied()).map(|_| mv)
                })
                .collect::<Result<_, _>>()
        })?;
        let mut total = Self::with_origin(degree, origin);
        for part in &parts {
            total.merge(part)?;
        }
        Ok(total)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Number of points absorbed.
    pub fn count(&self) -> u64 {
        self.n
    }

    /// The origin the moments are taken about; `(0, 0)` for an empty
    /// centered accumulator.
    pub fn origin(&self) -> (f64, f64) {
        match self.origin {
            Origin::Pending => (0.0, 0.0),
            Origin::Fixed(x, y) => (x, y),
        }
    }

    /// Position of `(p, q)` in lexicographic order.
    fn index(&self, p: u32, q: u32) -> usize {
        // entries with first exponent < p: Σ_{i<p} (D - i + 1)
        let (d, p, q) = (self.degree as usize, p as usize, q as usize);
        p * (d + 1) - p * (p.saturating_sub(1)) / 2 + q
    }

    /// `m[p, q]` about [`origin`](Self::origin), or `None` if `p + q > D`.
    pub fn get(&self, p: u32, q: u32) -> Option<f64> {
        (p + q <= self.degree).then(|| self.sums[self.index(p, q)].value())
    }

    /// `m[p, q]`; panics if `p + q > D`.
    pub fn moment(&self, p: u32, q: u32) -> f64 {
        self.get(p, q)
            .unwrap_or_else(|| panic!("moment ({p}, {q}) exceeds degree {}", self.degree))
    }

    /// All exponent pairs in storage order.
    pub fn exponents(&self) -> impl Iterator<Item = (u32, u32)> {
        let d = self.degree;
        (0..=d).flat_map(move |p| (0..=d - p).map(move |q| (p, q)))
    }

    /// Absorbs one point.
    pub fn accumulate(&mut self, x: f64, y: f64) -> Result<(), MomentError> {
        if !x.is_finite() || !y.is_finite() {
            return Err(MomentError::NonFiniteInput { x, y });
        }
        let (ox, oy) = match self.origin {
            Origin::Pending => {
                self.origin = Origin::Fixed(x, y);
                (x, y)
            }
            Origin::Fixed(ox, oy) => (ox, oy),
        };
        let (u, v) = (x - ox, y - oy);
        let d = self.degree as usize;
        let mut vp = vec![1.0; d + 1];
        for q in 1..=d {
            vp[q] = vp[q - 1] * v;
        }
        let mut up = 1.0;
        let mut k = 0;
        for p in 0..=d {
            for vq in &vp[..=d - p] {
                self.sums[k].add(up * vq);
                k += 1;
            }
            up *= u;
        }
        self.n += 1;
        Ok(())
    }

    pub fn extend<I: IntoIterator<Item = (f64, f64)>>(&mut self, points: I) -> Result<(), MomentError> {
        points.into_iter().try_for_each(|(x, y)| self.accumulate(x, y))
    }

    /// Adds the moments of `other` into `self`. Moments about a different
    /// origin are shifted to `self`'s origin first.
    pub fn merge(&mut self, other: &MomentVector) -> Result<(), MomentError> {
        if other.degree != self.degree {
            return Err(MomentError::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        if other.n == 0 {
            return Ok(());
        }
        let shifted;
        let other = match (self.origin, other.origin) {
            (Origin::Pending, o) => {
                self.origin = o;
                other
            }
            (Origin::Fixed(ax, ay), Origin::Fixed(bx, by)) if (ax, ay) != (bx, by) => {
                shifted = other.recentered((ax, ay));
                &shifted
            }
            _ => other,
        };
        for (a, b) in self.sums.iter_mut().zip(&other.sums) {
            a.merge(b);
        }
        self.n += other.n;
        Ok(())
    }

    /// The same moments taken about `origin`.
    pub fn recentered(&self, origin: (f64, f64)) -> MomentVector {
        let (ox, oy) = self.origin();
        // x − origin = (x − o) + δ
        let (dx, dy) = (ox - origin.0, oy - origin.1);
        let mut out = Self::with_origin(self.degree, origin);
        out.n = self.n;
        if self.n == 0 {
            return out;
        }
        let d = self.degree;
        let binom: Vec<Vec<f64>> = (0..=d).map(binomial_row).collect();
        let pow = |base: f64, k: u32| base.powi(k as i32);
        for (p, q) in self.exponents() {
            let mut acc = CompensatedSum::default();
            for i in 0..=p {
                for j in 0..=q {
                    let c = binom[p as usize][i as usize]
                        * binom[q as usize][j as usize]
                        * pow(dx, p - i)
                        * pow(dy, q - j);
                    acc.add(c * self.moment(i, j));
                }
            }
            let k = out.index(p, q);
            out.sums[k] = CompensatedSum::from_value(acc.value());
        }
        out
    }

    /// The nine statistics of the reduced circle objective, computed about
    /// the moment origin. Requires `D ≥ 4`.
    pub fn circle_z_view(&self) -> Result<CircleStats, MomentError> {
        if self.degree < 4 {
            return Err(MomentError::DegreeMismatch {
                expected: 4,
                found: self.degree,
            });
        }
        let m = |p, q| self.moment(p, q);
        let s2 = m(4, 0) + 2.0 * m(2, 2) + m(0, 4);
        let xs = m(3, 0) + m(1, 2);
        let ys = m(2, 1) + m(0, 3);
        let s = m(2, 0) + m(0, 2);
        Ok(CircleStats {
            z: [
                s2,
                -4.0 * xs,
                -4.0 * ys,
                4.0 * m(2, 0),
                4.0 * m(0, 2),
                8.0 * m(1, 1),
                2.0 * s,
                -4.0 * m(1, 0),
                -4.0 * m(0, 1),
            ],
            n: self.n as f64,
            origin: self.origin(),
        })
    }

    pub fn to_record(&self) -> MomentRecord {
        MomentRecord {
            degree: self.degree,
            n: self.n,
            origin: match self.origin {
                Origin::Pending => None,
                Origin::Fixed(x, y) => Some([x, y]),
            },
            m: self.sums.iter().map(CompensatedSum::value).collect(),
        }
    }

    pub fn from_record(rec: &MomentRecord) -> Result<Self, MomentError> {
        let expected = num_entries(rec.degree);
        if rec.m.len() != expected {
            return Err(MomentError::InvalidRecord(format!(
                "degree {} needs {expected} moments, found {}",
                rec.degree,
                rec.m.len()
            )));
        }
        if rec.m.iter().any(|v| !v.is_finite()) {
            return Err(MomentError::InvalidRecord("non-finite moment".into()));
        }
        if rec.m[0] != rec.n as f64 {
            return Err(MomentError::InvalidRecord(format!(
                "m[0,0] = {} disagrees with n = {}",
                rec.m[0], rec.n
            )));
        }
        let origin = match rec.origin {
            None if rec.n == 0 => Origin::Pending,
            None => return Err(MomentError::InvalidRecord("missing origin".into())),
            Some([x, y]) if x.is_finite() && y.is_finite() => Origin::Fixed(x, y),
            Some(_) => return Err(MomentError::InvalidRecord("non-finite origin".into())),
        };
        Ok(MomentVector {
            degree: rec.degree,
            n: rec.n,
            origin,
            sums: rec.m.iter().copied().map(CompensatedSum::from_value).collect(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_record()).expect("moment record serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, MomentError> {
        let rec: MomentRecord =
            serde_json::from_str(text).map_err(|e| MomentError::InvalidRecord(e.to_string()))?;
        Self::from_record(&rec)
    }
}

/// Flat serialized form: degree, count, origin and the moments in
/// `(p, q)`-lexicographic order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentRecord {
    pub degree: u32,
    pub n: u64,
    pub origin: Option<[f64; 2]>,
    pub m: Vec<f64>,
}

/// `z₁ … z₉` and `n` for the reduced circle objective, about `origin`.
///
/// With `s = x² + y²`: `z₁ = Σs²`, `z₂ = −4Σxs`, `z₃ = −4Σys`, `z₄ = 4Σx²`,
/// `z₅ = 4Σy²`, `z₆ = 8Σxy`, `z₇ = 2Σs`, `z₈ = −4Σx`, `z₉ = −4Σy`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircleStats {
    pub z: [f64; 9],
    pub n: f64,
    pub origin: (f64, f64),
}
