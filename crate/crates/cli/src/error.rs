use std::fmt;
use std::process::ExitCode;

use graf::analyzer::AnalyzerError;
use graf::bench::BenchError;
use graf::fit::FitError;
use graf::ingest::IngestError;
use graf::moments::MomentError;
use graf::synth::SynthError;

/// Errors surfaced to the user, one exit code per class.
#[derive(Debug)]
pub enum CliError {
    Io(String),
    /// Bad flag combination not caught by the argument parser.
    Usage(String),
    /// Unparseable points, polynomial or moment file.
    Input(String),
    /// The data cannot determine the model.
    Degenerate(String),
    NotConverged,
    Numerical(String),
    /// No verdict within the degree bound, or an inconsistent report.
    Inconclusive(String),
    /// A reduced fit was requested for a family without a certificate.
    NotReducible(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Input(_) => 3,
            CliError::Degenerate(_) => 4,
            CliError::NotConverged => 5,
            CliError::Numerical(_) => 6,
            CliError::Inconclusive(_) => 7,
            CliError::NotReducible(_) => 8,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Input(m) => write!(f, "invalid input: {m}"),
            CliError::Degenerate(m) => write!(f, "degenerate data: {m}"),
            CliError::NotConverged => write!(f, "fit did not converge"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Inconclusive(m) => write!(f, "inconclusive: {m}"),
            CliError::NotReducible(m) => write!(f, "no reduced fit: {m}"),
        }
    }
}

impl From<IngestError> for CliError {
    fn from(e: IngestError) -> Self {
        match e {
            IngestError::Io { .. } => CliError::Io(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<MomentError> for CliError {
    fn from(e: MomentError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<SynthError> for CliError {
    fn from(e: SynthError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<FitError> for CliError {
    fn from(e: FitError) -> Self {
        match e {
            FitError::NumericalFailure(_) | FitError::UnverifiedCertificate(_) => {
                CliError::Numerical(e.to_string())
            }
            FitError::InvalidInit(_) | FitError::InvalidRadius(_) => CliError::Usage(e.to_string()),
            FitError::DegreeMismatch { .. } | FitError::Moments(_) => CliError::Input(e.to_string()),
            _ => CliError::Degenerate(e.to_string()),
        }
    }
}

impl From<AnalyzerError> for CliError {
    fn from(e: AnalyzerError) -> Self {
        match e {
            AnalyzerError::DegenerateInput(_) => CliError::Input(e.to_string()),
            AnalyzerError::NumericalFailure(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Inconclusive(e.to_string()),
        }
    }
}

impl From<BenchError> for CliError {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::Fit(f) => f.into(),
            BenchError::Synth(s) => s.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}
