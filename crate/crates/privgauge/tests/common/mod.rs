//! Shared test fixtures: the vendored Iris dataset and an independent
//! brute-force KNN oracle used to cross-check the classifier.
#![allow(dead_code)] // each test binary uses a different subset

use std::fs::File;

use privgauge::{CsvSchema, Dataset, KnnConfig, TieRule};

pub const IRIS_PATH: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/iris.csv");

pub fn load_iris() -> Dataset {
    Dataset::from_csv(File::open(IRIS_PATH).expect("vendored iris file"), &CsvSchema::default())
        .expect("iris parses with the default schema")
}

/// Brute-force reference classifier, deliberately built on a different
/// route than the library: true (square-rooted) distances, a stable sort
/// keyed on distance alone so original index order settles ties, and its
/// own vote counting.
pub fn oracle_classify(
    train_rows: &[Vec<f64>],
    train_labels: &[usize],
    n_classes: usize,
    query: &[f64],
    config: &KnnConfig,
) -> usize {
    let distances: Vec<f64> = train_rows
        .iter()
        .map(|row| {
            row.iter()
                .zip(query)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    let mut order: Vec<usize> = (0..train_rows.len()).collect();
    order.sort_by(|&a, &b| distances[a].partial_cmp(&distances[b]).unwrap());

    let top = &order[..config.k];
    let mut votes = vec![0usize; n_classes];
    for &i in top {
        votes[train_labels[i]] += 1;
    }
    let best = *votes.iter().max().unwrap();
    match config.tie_rule {
        TieRule::NearestTiedClass => top
            .iter()
            .map(|&i| train_labels[i])
            .find(|&c| votes[c] == best)
            .unwrap(),
        TieRule::LowestClassIndex => votes.iter().position(|&v| v == best).unwrap(),
    }
}
