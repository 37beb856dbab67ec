//! Gradient-weighted algebraic curve fitting, with a reduced circle fitter
//! that iterates on moments alone and an exact analyzer that decides which
//! polynomial families admit the same reduction.
//!
//! - [`poly`]: sparse bivariate polynomials over exact, real and complex
//!   coefficients, with a text form and similarity transforms.
//! - [`analyzer`]: common-zero witnesses and Bézout certificates for
//!   `(P, |∇P|²)`.
//! - [`moments`]: compensated, mergeable power sums of the data.
//! - [`fit`]: reduced, geometric, reweighting and certificate-driven fitters.
//! - [`synth`], [`ingest`], [`bench`]: data and timing plumbing for the CLI.
//!
//! ```
//! use graf::analyzer::{analyze_polynomial, Verdict};
//!
//! let circle = "x^2 + y^2 - 1".parse()?;
//! assert_eq!(analyze_polynomial(&circle, None).verdict, Verdict::Admissible);
//! let parabola = "y - x^2".parse()?;
//! assert_eq!(analyze_polynomial(&parabola, None).verdict, Verdict::NotAdmissible);
//! # Ok::<(), graf::poly::ParsePolyError>(())
//! ```

// `!(a > b)` is deliberate: it is true for NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod analyzer;
pub mod bench;
pub mod fit;
pub mod ingest;
pub mod linalg;
pub mod moments;
pub mod poly;
pub mod roots;
pub mod synth;

#[cfg(doctest)]
mod book;
