//! Close the loop: privatize, classify, compare the error to a threshold,
//! halve the noise std, repeat. Stops at the first setting whose error is
//! acceptable, or when the step budget runs out.
//!
//! ```bash
//! cargo run -p privgauge --example tune_to_threshold
//! ```

use std::fs::File;

use privgauge::{
    tune, CsvSchema, CvConfig, Dataset, KnnConfig, NoiseParams, SeedPolicy, TuneConfig,
    TuneOutcome, TuneSchedule,
};

const IRIS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/iris.csv");

fn main() -> privgauge::Result<()> {
    let data = Dataset::from_csv(File::open(IRIS)?, &CsvSchema::default())?;

    let config = TuneConfig {
        threshold: 0.06,
        initial: NoiseParams::fixed(0.0, 1.0, 42),
        schedule: TuneSchedule::MultiplicativeDecay { gamma: 0.5 },
        max_iterations: 12,
        knn: KnnConfig::with_k(1),
        cv: CvConfig::new(10, 42),
        seed_policy: SeedPolicy::Fixed,
    };
    let trace = tune(&data, &config)?;

    println!("target error <= {}, halving std each step\n", config.threshold);
    println!("{:>4} {:>10} {:>10}  decision", "step", "std", "error");
    for (i, step) in trace.steps.iter().enumerate() {
        let decision = if step.error <= config.threshold {
            "accept"
        } else {
            "keep going"
        };
        println!("{i:>4} {:>10.6} {:>10.4}  {decision}", step.params.std, step.error);
    }
    match trace.outcome {
        TuneOutcome::MetThreshold => {
            let accepted = trace.accepted.expect("accepted params accompany the outcome");
            println!(
                "\naccepted std {} after {} steps; weaker noise would gain little utility",
                accepted.std,
                trace.steps.len()
            );
        }
        TuneOutcome::BudgetExhausted => {
            println!("\nbudget exhausted; the threshold needs weaker noise or more steps");
        }
    }
    Ok(())
}
