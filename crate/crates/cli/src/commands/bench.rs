use graf::bench::{run_bench, BenchAlgorithm, BenchConfig};

use crate::error::CliError;
use crate::BenchArgs;

pub fn run(args: &BenchArgs, seed: u64) -> Result<(), CliError> {
    let cfg = BenchConfig {
        sizes: args.sizes.clone(),
        iterations: args.iterations,
        reduced_batch: args.reduced_batch,
        repetitions: args.repetitions,
        sigma: args.sigma,
        seed,
    };
    let report = run_bench(&cfg)?;
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        );
        return Ok(());
    }
    print!("{}", report.to_table());
    for (name, alg) in [
        ("reduced", BenchAlgorithm::Reduced),
        ("reweight", BenchAlgorithm::Reweight),
    ] {
        if let Some(ratio) = report.per_iteration_ratio(alg) {
            println!("{name} per-iteration ratio, largest n over smallest: {ratio:.2}");
        }
    }
    Ok(())
}
