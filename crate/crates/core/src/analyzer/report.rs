//! Combined verdicts for single polynomials and sampled families.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::certificate::{
    default_max_degree, solve_nullstellensatz, verify_certificate, ReductionCertificate,
};
use super::common_zero::{find_common_zero, CommonZeroWitness};
use super::family::CurveFamily;
use super::AnalyzerError;
use crate::poly::RatPoly;

/// Outcome of running both searches on one pair `(P, Q)`.
#[derive(Clone, Debug)]
pub enum PairAnalysis {
    /// A certificate exists; no common zero.
    Admissible(ReductionCertificate<num_rational::BigRational>),
    /// A common zero exists; the certificate system is infeasible.
    NotAdmissible(CommonZeroWitness),
}

/// Runs [`find_common_zero`] and [`solve_nullstellensatz`] on `(P, Q)`.
///
/// Exactly one of them must succeed: both succeeding is reported as
/// [`AnalyzerError::Inconsistent`], neither as
/// [`AnalyzerError::BoundExhausted`].
pub fn analyze_pair(p: &RatPoly, q: &RatPoly, max_degree: u32) -> Result<PairAnalysis, AnalyzerError> {
    if p.is_zero() {
        return Err(AnalyzerError::DegenerateInput("P is the zero polynomial".into()));
    }
    // A nonzero constant P has no zeros at all.
    let witness = if p.is_constant() {
        None
    } else {
        find_common_zero(p, q)?
    };
    let cert = solve_nullstellensatz(p, q, max_degree);
    match (witness, cert) {
        (Some(w), Some(_)) => Err(AnalyzerError::Inconsistent {
            witness_residual: w.residual_p.max(w.residual_q),
        }),
        (Some(w), None) => Ok(PairAnalysis::NotAdmissible(w)),
        (None, Some(c)) => Ok(PairAnalysis::Admissible(c)),
        (None, None) => Err(AnalyzerError::BoundExhausted { max_degree }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Admissible,
    NotAdmissible,
    /// Neither search succeeded within the degree bound.
    Inconclusive,
    Error,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Admissible => "ADMISSIBLE",
            Verdict::NotAdmissible => "NOT ADMISSIBLE",
            Verdict::Inconclusive => "INCONCLUSIVE",
            Verdict::Error => "ERROR",
        }
    }
}

/// Certificate polynomials in text form, with verification results.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub u: String,
    pub w: String,
    pub degree: u32,
    pub identity_residual: f64,
    pub curve_points: usize,
    pub max_curve_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub index: usize,
    pub params: Vec<f64>,
    pub polynomial: String,
    pub gradient_norm_squared: String,
    pub verdict: Verdict,
    pub witness: Option<CommonZeroWitness>,
    pub certificate: Option<CertificateSummary>,
    pub max_degree: u32,
    pub error: Option<String>,
}

/// Analyzes `P` against `Q = |∇P|²`. A `max_degree` of `None` uses
/// [`default_max_degree`].
pub fn analyze_polynomial(p: &RatPoly, max_degree: Option<u32>) -> SampleReport {
    let q = p.gradient_norm_squared();
    let max_degree = max_degree.unwrap_or_else(|| default_max_degree(p, &q));
    let mut report = SampleReport {
        index: 0,
        params: Vec::new(),
        polynomial: p.to_string(),
        gradient_norm_squared: q.to_string(),
        verdict: Verdict::Error,
        witness: None,
        certificate: None,
        max_degree,
        error: None,
    };
    match analyze_pair(p, &q, max_degree) {
        Ok(PairAnalysis::Admissible(cert)) => {
            let check = verify_certificate(p, &q, &cert);
            report.verdict = Verdict::Admissible;
            report.certificate = Some(CertificateSummary {
                u: cert.u.to_string(),
                w: cert.w.to_string(),
                degree: cert.degree,
                identity_residual: check.identity_residual,
                curve_points: check.curve_points,
                max_curve_error: check.max_curve_error,
            });
        }
        Ok(PairAnalysis::NotAdmissible(w)) => {
            report.verdict = Verdict::NotAdmissible;
            report.witness = Some(w);
        }
        Err(e @ AnalyzerError::BoundExhausted { .. }) => {
            report.verdict = Verdict::Inconclusive;
            report.error = Some(e.to_string());
        }
        Err(e) => report.error = Some(e.to_string()),
    }
    report
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub family: CurveFamily,
    pub seed: u64,
    pub samples: Vec<SampleReport>,
    /// All samples that did not error share one verdict.
    pub consistent: bool,
}

impl FamilyReport {
    /// The common verdict, when the report is consistent and nonempty.
    pub fn verdict(&self) -> Option<Verdict> {
        if !self.consistent {
            return None;
        }
        self.samples
            .iter()
            .map(|s| s.verdict)
            .find(|v| *v != Verdict::Error)
    }
}

/// Samples `samples` parameter vectors from `family` and analyzes each.
///
/// Sample `i` draws from stream `i` of a ChaCha8 generator seeded with
/// `seed`, so the report does not depend on scheduling. Errors in one sample
/// are recorded in that sample and do not abort the batch.
pub fn analyze_family(
    family: CurveFamily,
    samples: usize,
    seed: u64,
    max_degree: Option<u32>,
) -> FamilyReport {
    let mut reports: Vec<SampleReport> = (0..samples)
        .into_par_iter()
        .map(|index| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(index as u64);
            let params = family.sample_params(&mut rng);
            let p = family.exact_polynomial(&params);
            let mut report = analyze_polynomial(&p, max_degree);
            report.index = index;
            report.params = params;
            report
        })
        .collect();
    reports.sort_by_key(|r| r.index);
    let mut verdicts = reports.iter().map(|r| r.verdict).filter(|v| *v != Verdict::Error);
    let consistent = match verdicts.next() {
        Some(first) => verdicts.all(|v| v == first),
        None => true,
    };
    FamilyReport {
        family,
        seed,
        samples: reports,
        consistent,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_family_is_admissible() {
        let report = analyze_family(CurveFamily::Circle, 4, 11, None);
        assert!(report.consistent);
        assert_eq!(report.verdict(), Some(Verdict::Admissible));
        for s in &report.samples {
            let cert = s.certificate.as_ref().unwrap();
            assert_eq!(cert.degree, 0);
            assert_eq!(cert.identity_residual, 0.0);
        }
    }

    #[test]
    fn line_family_is_admissible() {
        let report = analyze_family(CurveFamily::Line, 3, 5, None);
        assert_eq!(report.verdict(), Some(Verdict::Admissible));
    }

    #[test]
    fn conic_families_are_not_admissible() {
        for family in [
            CurveFamily::Ellipse,
            CurveFamily::Hyperbola,
            CurveFamily::Parabola,
        ] {
            let report = analyze_family(family, 3, 3, None);
            assert_eq!(report.verdict(), Some(Verdict::NotAdmissible), "{family}");
        }
    }

    #[test]
    fn report_is_deterministic() {
        let a = analyze_family(CurveFamily::Ellipse, 5, 99, None);
        let b = analyze_family(CurveFamily::Ellipse, 5, 99, None);
        assert_eq!(a, b);
    }

    #[test]
    fn zero_polynomial_is_an_error() {
        let r = analyze_polynomial(&RatPoly::zero(), None);
        assert_eq!(r.verdict, Verdict::Error);
        assert!(r.error.is_some());
    }
}
