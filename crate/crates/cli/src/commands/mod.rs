pub mod analyze;
pub mod bench;
pub mod fit;
pub mod generate;

use std::fs;
use std::io::{self, Read};
use std::path::Path;

use graf::ingest::{parse_points, read_points};
use graf::moments::MomentVector;

use crate::error::CliError;
use crate::AccumulateArgs;

/// Reads a point file, or standard input for `-`.
pub fn load_points(path: &Path) -> Result<Vec<(f64, f64)>, CliError> {
    if path == Path::new("-") {
        let mut text = String::new();
        io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::Io(format!("standard input: {e}")))?;
        return Ok(parse_points(&text)?);
    }
    Ok(read_points(path)?)
}

pub fn load_moments(path: &Path) -> Result<MomentVector, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(MomentVector::from_json(&text)?)
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Worker count for `--parallel [N]`: absent is one, bare is every core.
pub fn workers(flag: Option<Option<usize>>) -> Result<usize, CliError> {
    match flag {
        None => Ok(1),
        Some(None) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
        Some(Some(0)) => Err(CliError::Usage("--parallel needs at least one worker".into())),
        Some(Some(n)) => Ok(n),
    }
}

pub fn accumulate(args: &AccumulateArgs) -> Result<(), CliError> {
    let points = load_points(&args.input)?;
    let mv = MomentVector::from_points(args.degree, &points, workers(args.parallel)?)?;
    let json = mv.to_json();
    match &args.output {
        Some(path) => write_file(path, &json),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}
