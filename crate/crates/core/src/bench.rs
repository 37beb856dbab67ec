//! Timing harness contrasting the reduced circle fit, whose iterations touch
//! only the moments, with the reweighting fit, whose iterations touch every
//! point.

use std::hint::black_box;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::fit::{
    fit_circle_reduced, fit_conic_reweight, kasa_init, reduced_circle_iteration, reweight_iteration,
    FitConfig, FitError,
};
use crate::moments::MomentVector;
use crate::synth::{generate, SynthError, SyntheticCurve, SyntheticSpec};

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("benchmark sizes must be at least 10, got {0}")]
    SizeTooSmall(usize),
    #[error("need at least 5 repetitions, got {0}")]
    TooFewRepetitions(usize),
    #[error(transparent)]
    Fit(#[from] FitError),
    #[error(transparent)]
    Synth(#[from] SynthError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    /// Iterations timed per repetition for the reweighting fit.
    pub iterations: usize,
    /// Iterations timed per repetition for the reduced fit; its iterations
    /// take microseconds, so many are batched to get above timer resolution.
    pub reduced_batch: usize,
    pub repetitions: usize,
    pub sigma: f64,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: vec![1_000, 10_000, 100_000, 1_000_000],
            iterations: 5,
            reduced_batch: 20_000,
            repetitions: 5,
            sigma: 0.01,
            seed: 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchAlgorithm {
    Reduced,
    Reweight,
}

/// One cell of the benchmark. Times are medians, in seconds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub algorithm: BenchAlgorithm,
    pub n: usize,
    /// Moment accumulation; zero for the reweighting fit, which has none.
    pub accumulation_time: f64,
    pub per_iteration_time: f64,
    /// Iterations the full fit took on this data.
    pub iterations: usize,
    /// `accumulation_time + iterations · per_iteration_time`.
    pub total_time: f64,
    pub objective: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub rows: Vec<BenchRow>,
}

/// Median wall time of `f` over `reps` runs, after one discarded warm-up.
pub fn median_time<F: FnMut()>(reps: usize, mut f: F) -> f64 {
    f();
    let mut times: Vec<f64> = (0..reps)
        .map(|_| {
            let start = Instant::now();
            f();
            start.elapsed().as_secs_f64()
        })
        .collect();
    times.sort_by(f64::total_cmp);
    let mid = times.len() / 2;
    if times.len() % 2 == 1 {
        times[mid]
    } else {
        0.5 * (times[mid - 1] + times[mid])
    }
}

/// Data for one benchmark size: unit circle with Gaussian noise.
pub fn bench_points(n: usize, sigma: f64, seed: u64) -> Result<Vec<(f64, f64)>, SynthError> {
    generate(&SyntheticSpec {
        curve: SyntheticCurve::Circle {
            a: 0.0,
            b: 0.0,
            r: 1.0,
        },
        n,
        sigma,
        arc: None,
        seed,
    })
}

/// Times the reduced fit on `points`: accumulation, then a batch of Newton
/// iterations that read only the moments.
pub fn bench_reduced(points: &[(f64, f64)], cfg: &BenchConfig) -> Result<BenchRow, BenchError> {
    let accumulation_time = median_time(cfg.repetitions, || {
        black_box(MomentVector::from_points(4, black_box(points), 1).expect("finite points"));
    });
    let mv = MomentVector::from_points(4, points, 1).map_err(FitError::from)?;
    let stats = mv.circle_z_view().map_err(FitError::from)?;
    let start = kasa_init(&mv)?;
    let batch = cfg.reduced_batch.max(1);
    let per_iteration_time = median_time(cfg.repetitions, || {
        for _ in 0..batch {
            black_box(reduced_circle_iteration(black_box(&stats), black_box(&start)).ok());
        }
    }) / batch as f64;
    let fit = fit_circle_reduced(&mv, &FitConfig::default())?;
    Ok(BenchRow {
        algorithm: BenchAlgorithm::Reduced,
        n: points.len(),
        accumulation_time,
        per_iteration_time,
        iterations: fit.iterations,
        total_time: accumulation_time + fit.iterations as f64 * per_iteration_time,
        objective: fit.objective,
    })
}

/// Times the reweighting fit on `points`, one pass per iteration.
pub fn bench_reweight(points: &[(f64, f64)], cfg: &BenchConfig) -> Result<BenchRow, BenchError> {
    let first = reweight_iteration(points, None)?;
    let k = cfg.iterations.max(1);
    let per_iteration_time = median_time(cfg.repetitions, || {
        let mut c = first;
        for _ in 0..k {
            c = reweight_iteration(black_box(points), Some(&c)).expect("weights defined");
        }
        black_box(c);
    }) / k as f64;
    let fit = fit_conic_reweight(points, &FitConfig::default())?;
    Ok(BenchRow {
        algorithm: BenchAlgorithm::Reweight,
        n: points.len(),
        accumulation_time: 0.0,
        per_iteration_time,
        iterations: fit.iterations,
        total_time: fit.iterations as f64 * per_iteration_time,
        objective: fit.objective,
    })
}

/// Runs both algorithms at every size.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport, BenchError> {
    if cfg.repetitions < 5 {
        return Err(BenchError::TooFewRepetitions(cfg.repetitions));
    }
    if let Some(&n) = cfg.sizes.iter().find(|&&n| n < 10) {
        return Err(BenchError::SizeTooSmall(n));
    }
    let mut rows = Vec::with_capacity(2 * cfg.sizes.len());
    for &n in &cfg.sizes {
        let points = bench_points(n, cfg.sigma, cfg.seed)?;
        rows.push(bench_reduced(&points, cfg)?);
        rows.push(bench_reweight(&points, cfg)?);
    }
    Ok(BenchReport {
        config: cfg.clone(),
        rows,
    })
}

impl BenchReport {
    fn row(&self, algorithm: BenchAlgorithm, n: usize) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.algorithm == algorithm && r.n == n)
    }

    /// Per-iteration time at the largest size over that at the smallest.
    pub fn per_iteration_ratio(&self, algorithm: BenchAlgorithm) -> Option<f64> {
        let lo = *self.config.sizes.iter().min()?;
        let hi = *self.config.sizes.iter().max()?;
        Some(self.row(algorithm, hi)?.per_iteration_time / self.row(algorithm, lo)?.per_iteration_time)
    }

    /// Human-readable table.
    pub fn to_table(&self) -> String {
        let mut out = format!(
            "{:<9} {:>9} {:>13} {:>13} {:>5} {:>13} {:>12}\n",
            "algorithm", "n", "accum (s)", "per-iter (s)", "k", "total (s)", "objective"
        );
        for r in &self.rows {
            let name = match r.algorithm {
                BenchAlgorithm::Reduced => "reduced",
                BenchAlgorithm::Reweight => "reweight",
            };
            out.push_str(&format!(
                "{:<9} {:>9} {:>13.3e} {:>13.3e} {:>5} {:>13.3e} {:>12.5e}\n",
                name, r.n, r.accumulation_time, r.per_iteration_time, r.iterations, r.total_time, r.objective
            ));
        }
        out
    }
}
