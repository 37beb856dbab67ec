use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use graf::analyzer::{analyze_pair, default_max_degree, CurveFamily, PairAnalysis, ReductionCertificate};
use graf::fit::{
    fit_circle_geometric, fit_circle_reduced, fit_conic_reweight, fit_reduced_generic, FitConfig, FitParams,
    FitResult, Initializer,
};
use graf::moments::MomentVector;
use num_rational::BigRational;

use super::{load_moments, load_points, workers, write_file};
use crate::error::CliError;
use crate::{Algorithm, FitArgs, FitFamily};

fn curve_family(f: FitFamily) -> Option<CurveFamily> {
    match f {
        FitFamily::Circle => Some(CurveFamily::Circle),
        FitFamily::Line => Some(CurveFamily::Line),
        FitFamily::Ellipse => Some(CurveFamily::Ellipse),
        FitFamily::Hyperbola => Some(CurveFamily::Hyperbola),
        FitFamily::Parabola => Some(CurveFamily::Parabola),
        FitFamily::Conic => None,
    }
}

/// Certificate for one sampled member of `family`, or the reason there is
/// none.
fn family_certificate(family: FitFamily, seed: u64) -> Result<ReductionCertificate<BigRational>, CliError> {
    let Some(curve) = curve_family(family) else {
        return Err(CliError::NotReducible(
            "general conics include ellipses, which share complex zeros with |grad P|^2".into(),
        ));
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = curve.exact_polynomial(&curve.sample_params(&mut rng));
    let q = p.gradient_norm_squared();
    match analyze_pair(&p, &q, default_max_degree(&p, &q))? {
        PairAnalysis::Admissible(cert) => Ok(cert),
        PairAnalysis::NotAdmissible(w) => Err(CliError::NotReducible(format!(
            "{curve} member {p} and its |grad P|^2 vanish together at ({:.6}, {:.6})",
            w.x, w.y
        ))),
    }
}

fn run_reduced(args: &FitArgs, cfg: &FitConfig, seed: u64) -> Result<(FitResult, u64), CliError> {
    let cert = match args.family {
        FitFamily::Circle => None,
        other => Some(family_certificate(other, seed)?),
    };
    let degree = match (&cert, args.family) {
        (None, _) => 4,
        (Some(c), FitFamily::Line) => c.degree + 2,
        (Some(c), _) => c.degree + 4,
    };
    let mv = match (&args.input, &args.moments) {
        (_, Some(path)) => load_moments(path)?,
        (Some(path), None) => {
            let points = load_points(path)?;
            MomentVector::from_points(degree, &points, workers(args.parallel)?)?
        }
        (None, None) => unreachable!("argument parser requires a source"),
    };
    if let Some(path) = &args.save_moments {
        write_file(path, &mv.to_json())?;
    }
    let result = match (&cert, args.family) {
        (None, _) => fit_circle_reduced(&mv, cfg)?,
        (Some(c), family) => {
            fit_reduced_generic(curve_family(family).expect("certified family"), c, &mv, cfg)?
        }
    };
    Ok((result, mv.count()))
}

fn run_on_points(args: &FitArgs, cfg: &FitConfig) -> Result<(FitResult, u64), CliError> {
    let Some(input) = &args.input else {
        return Err(CliError::Usage(
            format!(
                "--algo {:?} needs the points; moment files only support --algo reduced",
                args.algo
            )
            .to_lowercase(),
        ));
    };
    if args.save_moments.is_some() {
        return Err(CliError::Usage("--save-moments applies to --algo reduced".into()));
    }
    let points = load_points(input)?;
    let result = match (args.algo, args.family) {
        (Algorithm::Geometric, FitFamily::Circle) => fit_circle_geometric(&points, cfg)?,
        (Algorithm::Geometric, f) => {
            return Err(CliError::Usage(
                format!("--algo geometric fits circles, not {f:?}").to_lowercase(),
            ))
        }
        (Algorithm::Reweight, FitFamily::Line) => {
            return Err(CliError::Usage("--algo reweight fits conics, not lines".into()))
        }
        _ => fit_conic_reweight(&points, cfg)?,
    };
    Ok((result, points.len() as u64))
}

pub fn run(args: &FitArgs, seed: u64) -> Result<(), CliError> {
    let cfg = FitConfig {
        max_iterations: args.max_iterations,
        gradient_tol: args.gradient_tol,
        init: args
            .init
            .clone()
            .map_or(Initializer::Default, Initializer::Params),
        ..FitConfig::default()
    };
    let (result, n) = match args.algo {
        Algorithm::Reduced => run_reduced(args, &cfg, seed)?,
        _ => run_on_points(args, &cfg)?,
    };
    let algo = format!("{:?}", args.algo).to_lowercase();
    if args.json {
        let doc = json!({ "algorithm": algo, "n": n, "result": result });
        println!(
            "{}",
            serde_json::to_string_pretty(&doc).expect("fit result serializes")
        );
    } else {
        print!("{}", human(&algo, n, &result));
    }
    if result.converged {
        Ok(())
    } else {
        Err(CliError::NotConverged)
    }
}

fn human(algo: &str, n: u64, r: &FitResult) -> String {
    let mut out = String::new();
    let mut line = |k: &str, v: String| out.push_str(&format!("{k:<20} {v}\n"));
    line("algorithm", algo.to_string());
    line("points", n.to_string());
    match &r.params {
        FitParams::Circle(c) => {
            line("family", "circle".into());
            line("a", c.a.to_string());
            line("b", c.b.to_string());
            line("r", c.r.to_string());
        }
        FitParams::Conic(c) => {
            line("family", "conic".into());
            for (name, v) in ["A", "B", "C", "D", "E", "F"].iter().zip(c.coeffs()) {
                line(name, v.to_string());
            }
        }
        FitParams::Family { curve, theta } => {
            line("family", curve.to_string());
            for (name, v) in curve.param_names().iter().zip(theta) {
                line(name, v.to_string());
            }
        }
    }
    line("objective", format!("{:e}", r.objective));
    line("iterations", r.iterations.to_string());
    line("converged", if r.converged { "yes" } else { "no" }.into());
    line("gradient norm", format!("{:e}", r.gradient_norm));
    if let Some(s) = r.stationarity_residual {
        line("stationarity", format!("{s:e}"));
    }
    line("data passes", r.data_passes.to_string());
    line("mean iteration (s)", format!("{:e}", r.mean_iteration_time()));
    out
}
