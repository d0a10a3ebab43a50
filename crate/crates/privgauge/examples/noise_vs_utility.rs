//! The privacy-utility tradeoff in one table: classification error on the
//! clean data, under small fixed noise, and under attribute-scaled noise,
//! with one shared noise realization and varying fold seeds.
//!
//! ```bash
//! cargo run -p privgauge --example noise_vs_utility
//! ```

use std::fs::File;

use privgauge::{
    cross_validate, pipeline_evaluate, CsvSchema, CvConfig, Dataset, KnnConfig, NoiseParams,
};

const IRIS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/iris.csv");

fn main() -> privgauge::Result<()> {
    let data = Dataset::from_csv(File::open(IRIS)?, &CsvSchema::default())?;
    let knn = KnnConfig::with_k(1);

    // both privatized settings share one noise stream seed, so the fold
    // seed is the only thing varying per row
    let fixed = NoiseParams::fixed(0.0, 0.1, 42);
    let scaled = NoiseParams::attribute_scaled(1.0, 1.0, 42);

    println!(
        "{:>9} {:>10} {:>16} {:>20}",
        "fold seed", "no noise", "fixed(0, 0.1)", "attribute-scaled(1,1)"
    );
    let seeds = 0..10u64;
    let (mut mean_b, mut mean_f, mut mean_a) = (0.0, 0.0, 0.0);
    for seed in seeds.clone() {
        let cv = CvConfig::new(10, seed);
        let b = cross_validate(&data, &knn, &cv)?.overall_error;
        let f = pipeline_evaluate(&data, &fixed, &knn, &cv)?.overall_error;
        let a = pipeline_evaluate(&data, &scaled, &knn, &cv)?.overall_error;
        println!("{seed:>9} {b:>10.4} {f:>16.4} {a:>20.4}");
        let n = seeds.clone().count() as f64;
        mean_b += b / n;
        mean_f += f / n;
        mean_a += a / n;
    }
    println!("{:>9} {mean_b:>10.4} {mean_f:>16.4} {mean_a:>20.4}", "mean");
    println!(
        "\nmore noise, less utility: {mean_a:.4} > {mean_f:.4} > {mean_b:.4} = {}",
        mean_a > mean_f && mean_f > mean_b
    );
    Ok(())
}
