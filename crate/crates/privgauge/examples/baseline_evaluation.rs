//! Gauge the clean-data baseline: 1-nearest-neighbor under 10-fold
//! stratified cross-validation on the original Iris dataset.
//!
//! ```bash
//! cargo run -p privgauge --example baseline_evaluation
//! ```

use std::fs::File;

use privgauge::report::render_confusion;
use privgauge::{cross_validate, CsvSchema, CvConfig, Dataset, KnnConfig};

const IRIS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/iris.csv");

fn main() -> privgauge::Result<()> {
    let data = Dataset::from_csv(File::open(IRIS)?, &CsvSchema::default())?;
    let knn = KnnConfig::with_k(1);
    let cv = CvConfig::new(10, 0);

    let result = cross_validate(&data, &knn, &cv)?;
    println!(
        "overall error {:.4} ({} of {} misclassified)",
        result.overall_error,
        result.confusion.misclassified(),
        data.n_records()
    );
    print!("fold errors:");
    for e in &result.per_fold_error {
        print!(" {e:.4}");
    }
    println!("\n\n{}", render_confusion(&result.confusion, data.class_names()));

    // a different fold seed moves a borderline record or two, nothing more
    for seed in 1..4 {
        let r = cross_validate(&data, &knn, &cv.with_seed(seed))?;
        println!("seed {seed}: error {:.4}", r.overall_error);
    }
    Ok(())
}
