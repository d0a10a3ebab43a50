//! Privatize numeric labeled datasets with additive Gaussian noise and
//! gauge how much utility survives, using a KNN classifier under k-fold
//! cross-validation as the measuring stick.
//!
//! The published dataset is Z = X + ε, where ε is drawn per cell from a
//! seeded normal stream. Utility is the cross-validated misclassification
//! rate of a deterministic k-nearest-neighbors classifier on Z: the lower
//! the error, the more analytic value the privatized data retains. A
//! closed feedback loop ([`tuner`]) adjusts the noise parameters until the
//! error drops to a target threshold or a step budget runs out.
//!
//! ## Learning by example
//!
//! The `examples/` directory is the front door; each file is a runnable
//! walkthrough of one capability:
//!
//! ```text
//! examples/
//! ├── load_and_describe.rs    # dataset loading + per-attribute stats
//! ├── privatize_dataset.rs    # seeded Gaussian noise, before/after stats
//! ├── baseline_evaluation.rs  # 10-fold KNN error on clean data
//! ├── noise_vs_utility.rs     # error under the two noise settings
//! ├── tune_to_threshold.rs    # the threshold-retry feedback loop
//! ├── sigma_sweep.rs          # error across a grid of noise levels
//! └── render_scatter_plot.rs  # SVG scatter of hits and misses
//! ```
//!
//! Run any of them with, e.g.:
//!
//! ```bash
//! cargo run -p privgauge --example baseline_evaluation
//! ```
//!
//! The same capabilities are scriptable through the `privgauge` binary
//! (`privatize`, `evaluate`, `tune`, `sweep`, `plot`); see the README.
//!
//! ## Quick start
//!
//! ```
//! use privgauge::{cross_validate, pipeline_evaluate, CvConfig, KnnConfig, NoiseParams};
//!
//! let csv = "5.1,3.5,A\n4.9,3.0,A\n6.2,2.9,B\n6.4,3.2,B\n5.9,3.0,B\n5.0,3.3,A\n";
//! let data = privgauge::Dataset::from_csv(csv.as_bytes(), &Default::default())?;
//!
//! // clean baseline
//! let knn = KnnConfig::with_k(1);
//! let cv = CvConfig { fold_count: 3, seed: 7, stratified: true };
//! let baseline = cross_validate(&data, &knn, &cv)?;
//!
//! // privatize, then gauge what the noise cost
//! let noisy = pipeline_evaluate(&data, &NoiseParams::fixed(0.0, 0.1, 42), &knn, &cv)?;
//! assert!(noisy.overall_error >= 0.0 && noisy.overall_error <= 1.0);
//! # let _ = baseline;
//! # Ok::<(), privgauge::Error>(())
//! ```

pub mod cli;
pub mod dataset;
pub mod error;
pub mod evaluate;
pub mod knn;
pub mod noise;
pub mod plot;
pub mod report;
pub mod tuner;

pub use dataset::{AttributeStats, CsvSchema, Dataset, FoldAssignment, LabelColumn, StdConvention};
pub use error::{Error, Result};
pub use evaluate::{
    classification_error, cross_validate, pipeline_evaluate, pipeline_evaluate_with,
    ConfusionMatrix, CvConfig, CvResult, EvalTarget,
};
pub use knn::{classify, classify_batch, euclidean_distance, Distance, KnnConfig, TieRule};
pub use noise::{privatize, sample_gaussian, GaussianStream, NoiseMode, NoiseParams};
pub use plot::{PlotData, PlotPoint};
pub use report::Report;
pub use tuner::{
    tune, SeedPolicy, TuneConfig, TuneOutcome, TuneSchedule, TuneStep, TuneTrace,
};
