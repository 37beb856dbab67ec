//! Deciding whether a curve family admits a reduction of complexity.
//!
//! A polynomial `P` admits the reduction exactly when `P` and
//! `Q = |∇P|²` have no common zero in `ℂ²`. The two halves of that decision
//! are computed independently:
//!
//! * [`find_common_zero`] looks for an explicit witness `(x, y)`;
//! * [`solve_nullstellensatz`] looks for polynomials `U`, `W` with
//!   `P·U + Q·W = 1`, whose `W` is then the weight polynomial.
//!
//! [`analyze_pair`] runs both and insists that exactly one succeeds.

use thiserror::Error;

pub mod certificate;
pub mod common_zero;
pub mod family;
pub mod report;

pub use certificate::{
    default_max_degree, solve_nullstellensatz, verify_certificate, CertificateCheck, ReductionCertificate,
};
pub use common_zero::{find_common_zero, CommonZeroWitness, WITNESS_TOL};
pub use family::CurveFamily;
pub use report::{
    analyze_family, analyze_pair, analyze_polynomial, FamilyReport, PairAnalysis, SampleReport, Verdict,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalyzerError {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    /// No certificate up to the bound and no witness either.
    #[error("no certificate of degree <= {max_degree} and no common zero found")]
    BoundExhausted { max_degree: u32 },
    /// Both a witness and a certificate were found, which is impossible.
    #[error("found both a common zero and a certificate (residual {witness_residual:e})")]
    Inconsistent { witness_residual: f64 },
}
