//! Error as a function of the noise level: evaluate a grid of fixed-mode
//! std values, each over several seeds, and tabulate mean / min / max.
//!
//! ```bash
//! cargo run -p privgauge --example sigma_sweep
//! ```

use std::fs::File;

use privgauge::{pipeline_evaluate, CsvSchema, CvConfig, Dataset, KnnConfig, NoiseParams};

const IRIS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/iris.csv");

fn main() -> privgauge::Result<()> {
    let data = Dataset::from_csv(File::open(IRIS)?, &CsvSchema::default())?;
    let knn = KnnConfig::with_k(1);
    let sigmas = [0.0, 0.05, 0.1, 0.2, 0.5, 1.0];
    let seeds = 0..20u64;

    println!(
        "{:>8} {:>12} {:>10} {:>10}   ({} seeds each)",
        "sigma",
        "mean_error",
        "min",
        "max",
        seeds.clone().count()
    );
    for sigma in sigmas {
        let mut errors = Vec::new();
        for seed in seeds.clone() {
            let params = NoiseParams::fixed(0.0, sigma, seed);
            let cv = CvConfig::new(10, seed);
            errors.push(pipeline_evaluate(&data, &params, &knn, &cv)?.overall_error);
        }
        let mean = errors.iter().sum::<f64>() / errors.len() as f64;
        let min = errors.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = errors.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        println!("{sigma:>8} {mean:>12.4} {min:>10.4} {max:>10.4}");
    }
    println!("\nerror grows with sigma: each extra bit of privacy costs utility");
    Ok(())
}
