//! Render classification results as an SVG scatter plot over the first
//! two feature axes: filled circles for correctly classified records,
//! crosses for misclassified ones.
//!
//! ```bash
//! cargo run -p privgauge --example render_scatter_plot
//! ```

use std::fs::File;

use privgauge::{
    cross_validate, pipeline_evaluate, CsvSchema, CvConfig, Dataset, KnnConfig, NoiseParams,
    PlotData,
};

const IRIS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/iris.csv");

fn main() -> privgauge::Result<()> {
    let data = Dataset::from_csv(File::open(IRIS)?, &CsvSchema::default())?;
    let knn = KnnConfig::with_k(1);
    let cv = CvConfig::new(10, 0);
    let out_dir = std::env::temp_dir();

    // clean baseline
    let result = cross_validate(&data, &knn, &cv)?;
    let plot = PlotData::from_result(&data, &result)?;
    let path = out_dir.join("iris_baseline.svg");
    plot.render_svg(
        File::create(&path)?,
        &format!("original iris: {} of 150 misclassified", plot.misclassified()),
    )?;
    println!("baseline: {} misclassified -> {}", plot.misclassified(), path.display());

    // the same view after privatization
    let noisy = pipeline_evaluate(&data, &NoiseParams::fixed(0.0, 0.1, 42), &knn, &cv)?;
    let privatized = privgauge::privatize(&data, &NoiseParams::fixed(0.0, 0.1, 42))?;
    let plot = PlotData::from_result(&privatized, &noisy)?;
    let path = out_dir.join("iris_privatized.svg");
    plot.render_svg(
        File::create(&path)?,
        &format!("privatized iris (sigma=0.1): {} of 150 misclassified", plot.misclassified()),
    )?;
    println!("privatized: {} misclassified -> {}", plot.misclassified(), path.display());

    // the plot-data text behind either figure can be written too
    let mut buf = Vec::new();
    plot.write_text(&mut buf)?;
    let path = out_dir.join("iris_privatized_plot_data.csv");
    std::fs::write(&path, buf)?;
    println!("plot data -> {}", path.display());
    Ok(())
}
