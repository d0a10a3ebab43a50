//! Load the bundled Iris dataset and summarize it: shape, classes, and
//! per-attribute mean / standard deviation.
//!
//! ```bash
//! cargo run -p privgauge --example load_and_describe
//! ```

use std::fs::File;

use privgauge::{CsvSchema, Dataset, StdConvention};

const IRIS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/iris.csv");

fn main() -> privgauge::Result<()> {
    // the UCI layout (comma-separated, no header, trailing label) is the
    // default schema, so no configuration is needed
    let data = Dataset::from_csv(File::open(IRIS)?, &CsvSchema::default())?;

    println!(
        "{} records x {} attributes, {} classes",
        data.n_records(),
        data.n_attributes(),
        data.n_classes()
    );
    for (name, count) in data.class_names().iter().zip(data.class_counts()) {
        println!("  {name}: {count} records");
    }

    println!("\n{:<10} {:>10} {:>12} {:>12}", "attribute", "mean", "std (pop)", "std (n-1)");
    let population = data.attribute_stats();
    let sample = data.attribute_stats_with(StdConvention::Sample)?;
    for j in 0..data.n_attributes() {
        println!(
            "{:<10} {:>10.4} {:>12.4} {:>12.4}",
            data.attribute_names()[j],
            population.means[j],
            population.stds[j],
            sample.stds[j]
        );
    }
    Ok(())
}
