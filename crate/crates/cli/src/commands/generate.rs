use serde_json::json;

use graf::ingest::format_points;
use graf::synth::{generate, SyntheticCurve, SyntheticSpec};

use super::write_file;
use crate::error::CliError;
use crate::GenerateArgs;

fn default_params(family: &str) -> Vec<f64> {
    match family {
        "circle" => vec![0.0, 0.0, 1.0],
        "ellipse" => vec![0.0, 0.0, 2.0, 1.0, 0.0],
        "hyperbola" => vec![0.0, 0.0, 1.0, 1.0, 0.0],
        _ => vec![1.0],
    }
}

pub fn run(args: &GenerateArgs, seed: u64) -> Result<(), CliError> {
    let params = args
        .params
        .clone()
        .unwrap_or_else(|| default_params(&args.family));
    let spec = SyntheticSpec {
        curve: SyntheticCurve::from_params(&args.family, &params)?,
        n: args.n,
        sigma: args.sigma,
        arc: args.arc.as_ref().map(|v| (v[0], v[1])),
        seed,
    };
    let points = generate(&spec)?;
    let text = if args.json {
        let doc = json!({ "spec": spec, "points": points });
        serde_json::to_string_pretty(&doc).expect("points serialize") + "\n"
    } else {
        format_points(&points)
    };
    match &args.output {
        Some(path) => write_file(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
