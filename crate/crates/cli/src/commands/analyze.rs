use graf::analyzer::{analyze_family, analyze_polynomial, CommonZeroWitness, SampleReport, Verdict};
use graf::poly::RatPoly;
use num_complex::Complex64;

use crate::error::CliError;
use crate::AnalyzeArgs;

pub fn run(args: &AnalyzeArgs, seed: u64) -> Result<(), CliError> {
    if let Some(family) = args.family {
        if args.samples == 0 {
            return Err(CliError::Usage("--samples must be at least 1".into()));
        }
        let report = analyze_family(family, args.samples, seed, args.max_degree);
        if args.json {
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("report serializes")
            );
        } else {
            println!("family {family}, {} samples, seed {seed}", report.samples.len());
            for s in &report.samples {
                let params: Vec<String> = s.params.iter().map(|v| v.to_string()).collect();
                println!("  #{:<3} ({}): {}", s.index, params.join(", "), s.verdict.label());
                print_details(s, "      ");
            }
            match report.verdict() {
                Some(v) => println!("verdict: {}", v.label()),
                None => println!("verdict: INCONSISTENT"),
            }
        }
        return match report.verdict() {
            Some(Verdict::Admissible | Verdict::NotAdmissible) => Ok(()),
            Some(v) => Err(CliError::Inconclusive(format!("family verdict {}", v.label()))),
            None => Err(CliError::Inconclusive("samples disagree".into())),
        };
    }

    let text = args
        .polynomial
        .as_deref()
        .expect("argument group requires a target");
    let p: RatPoly = text
        .parse()
        .map_err(|e| CliError::Input(format!("cannot parse polynomial `{text}`: {e}")))?;
    let report = analyze_polynomial(&p, args.max_degree);
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        );
    } else {
        println!("P          = {}", report.polynomial);
        println!("|grad P|^2 = {}", report.gradient_norm_squared);
        println!("verdict: {}", report.verdict.label());
        print_details(&report, "  ");
    }
    match report.verdict {
        Verdict::Admissible | Verdict::NotAdmissible => Ok(()),
        Verdict::Inconclusive => Err(CliError::Inconclusive(report.error.unwrap_or_default())),
        Verdict::Error => Err(CliError::Input(report.error.unwrap_or_default())),
    }
}

fn print_details(s: &SampleReport, indent: &str) {
    if let Some(w) = &s.witness {
        println!("{indent}{}", describe_witness(w));
    }
    if let Some(c) = &s.certificate {
        println!("{indent}W = {}", c.w);
        println!("{indent}U = {}", c.u);
        println!(
            "{indent}degree {}, identity residual {:.1e}, max |W Q - 1| on {} curve points {:.1e}",
            c.degree, c.identity_residual, c.curve_points, c.max_curve_error
        );
    }
    if let Some(e) = &s.error {
        println!("{indent}{e}");
    }
}

fn complex(z: Complex64) -> String {
    let clean = |v: f64| if v.abs() < 1e-12 { 0.0 } else { v };
    let (re, im) = (clean(z.re), clean(z.im));
    match (re == 0.0, im == 0.0) {
        (_, true) => format!("{re}"),
        (true, false) => format!("{im}i"),
        (false, false) if im < 0.0 => format!("{re} - {}i", -im),
        _ => format!("{re} + {im}i"),
    }
}

fn describe_witness(w: &CommonZeroWitness) -> String {
    format!(
        "common zero: x = {}, y = {} (residuals {:.1e}, {:.1e})",
        complex(w.x),
        complex(w.y),
        w.residual_p,
        w.residual_q
    )
}
