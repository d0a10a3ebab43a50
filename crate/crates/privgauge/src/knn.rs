//! K-nearest-neighbors classification under Euclidean distance.
//!
//! The classifier is fully deterministic: distance ties between training
//! records are broken by the lower record index, and class-vote ties are
//! resolved by the configured [`TieRule`].

use std::fmt;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// How a tied class vote is resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieRule {
    /// The tied class that contains the closest neighbor wins.
    #[default]
    NearestTiedClass,
    /// The tied class with the smallest class index wins.
    LowestClassIndex,
}

impl fmt::Display for TieRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TieRule::NearestTiedClass => f.write_str("nearest-tied-class"),
            TieRule::LowestClassIndex => f.write_str("lowest-class-index"),
        }
    }
}

/// Distance metric. Euclidean is the only supported metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Distance {
    #[default]
    Euclidean,
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("euclidean")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnnConfig {
    pub k: usize,
    pub tie_rule: TieRule,
    pub distance: Distance,
}

impl Default for KnnConfig {
    fn default() -> Self {
        KnnConfig {
            k: 1,
            tie_rule: TieRule::default(),
            distance: Distance::default(),
        }
    }
}

impl KnnConfig {
    pub fn with_k(k: usize) -> KnnConfig {
        KnnConfig {
            k,
            ..KnnConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Config("k must be at least 1".into()));
        }
        Ok(())
    }
}

/// sqrt(Σ (xᵢ − yᵢ)²) over vectors of equal dimension.
pub fn euclidean_distance(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.is_empty() || x.len() != y.len() {
        return Err(Error::Usage(format!(
            "dimension mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    Ok(squared_distance(x, y).sqrt())
}

/// Squared Euclidean distance; ranks identically to the true distance.
fn squared_distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| {
            let d = a - b;
            d * d
        })
        .sum()
}

/// Predicts the class of `query` as the majority label among the `k`
/// training records nearest to it.
pub fn classify(train: &Dataset, query: &[f64], config: &KnnConfig) -> Result<usize> {
    config.validate()?;
    let n = train.n_records();
    if config.k > n {
        return Err(Error::Usage(format!(
            "k={} exceeds the training-set size {n}",
            config.k
        )));
    }
    if query.len() != train.n_attributes() {
        return Err(Error::Usage(format!(
            "query dimension {} does not match training dimension {}",
            query.len(),
            train.n_attributes()
        )));
    }

    // rank by squared distance, distance ties broken by lower record index
    let mut order: Vec<(f64, usize)> = train
        .rows()
        .enumerate()
        .map(|(i, row)| (squared_distance(query, row), i))
        .collect();
    order.sort_unstable_by(|a, b| a.partial_cmp(b).expect("distances are finite"));
    vote(train, &order[..config.k], config.tie_rule)
}

fn vote(train: &Dataset, neighbors: &[(f64, usize)], tie_rule: TieRule) -> Result<usize> {
    let mut counts = vec![0usize; train.n_classes()];
    for &(_, i) in neighbors {
        counts[train.label(i)] += 1;
    }
    let best = *counts.iter().max().expect("at least one class");
    match tie_rule {
        TieRule::NearestTiedClass => neighbors
            .iter()
            .map(|&(_, i)| train.label(i))
            .find(|&c| counts[c] == best)
            .ok_or_else(|| Error::Usage("no neighbors to vote".into())),
        TieRule::LowestClassIndex => counts
            .iter()
            .position(|&c| c == best)
            .ok_or_else(|| Error::Usage("no neighbors to vote".into())),
    }
}

/// Classifies every record of `queries` against `train`; element i is the
/// prediction for query row i.
pub fn classify_batch(train: &Dataset, queries: &Dataset, config: &KnnConfig) -> Result<Vec<usize>> {
    classify_rows(train, queries.rows(), config)
}

/// Row-slice variant of [`classify_batch`]; an empty iterator yields an
/// empty prediction list.
pub fn classify_rows<'a, I>(train: &Dataset, rows: I, config: &KnnConfig) -> Result<Vec<usize>>
where
    I: IntoIterator<Item = &'a [f64]>,
{
    rows.into_iter()
        .map(|row| classify(train, row, config))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn train(rows: Vec<Vec<f64>>, labels: Vec<&str>) -> Dataset {
        Dataset::from_rows(rows, labels).unwrap()
    }

    #[test]
    fn three_four_five_triangle() {
        assert_eq!(euclidean_distance(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 5.0);
    }

    #[test]
    fn identical_points_have_zero_distance() {
        let p = [1.7, 2.2, 9.9];
        assert_eq!(euclidean_distance(&p, &p).unwrap(), 0.0);
    }

    #[test]
    fn unit_cube_diagonal() {
        let d = euclidean_distance(&[1.0, 1.0, 1.0], &[2.0, 2.0, 2.0]).unwrap();
        assert!((d - 3.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        assert!(euclidean_distance(&[1.0], &[1.0, 2.0]).is_err());
        let t = train(vec![vec![0.0, 0.0]], vec!["A"]);
        assert!(classify(&t, &[0.0], &KnnConfig::default()).is_err());
    }

    #[test]
    fn nearest_cluster_wins() {
        // all four distances hand-computed: (0,0)→0.4, (0,1)→0.6, (5,5)→~6.8, (5,6)→~7.5
        let t = train(
            vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![5.0, 5.0], vec![5.0, 6.0]],
            vec!["A", "A", "B", "B"],
        );
        let pred = classify(&t, &[0.0, 0.4], &KnnConfig::with_k(1)).unwrap();
        assert_eq!(t.class_names()[pred], "A");
    }

    #[test]
    fn distance_tie_goes_to_lower_record_index() {
        // both records are exactly 1.0 away; k=2 splits the vote 1-1 and the
        // nearest-tied-class rule falls back to the earlier record's class
        let t = train(vec![vec![0.0, 0.0], vec![2.0, 0.0]], vec!["A", "B"]);
        let cfg = KnnConfig {
            k: 2,
            ..KnnConfig::default()
        };
        let pred = classify(&t, &[1.0, 0.0], &cfg).unwrap();
        assert_eq!(t.class_names()[pred], "A");

        // with the record order swapped the same rule elects B
        let t = train(vec![vec![2.0, 0.0], vec![0.0, 0.0]], vec!["B", "A"]);
        let pred = classify(&t, &[1.0, 0.0], &cfg).unwrap();
        assert_eq!(t.class_names()[pred], "B");
    }

    #[test]
    fn lowest_class_index_tie_rule() {
        let t = train(vec![vec![2.0, 0.0], vec![0.0, 0.0]], vec!["B", "A"]);
        let cfg = KnnConfig {
            k: 2,
            tie_rule: TieRule::LowestClassIndex,
            ..KnnConfig::default()
        };
        // classes tie 1-1; "B" holds index 0 because it appeared first
        let pred = classify(&t, &[1.0, 0.0], &cfg).unwrap();
        assert_eq!(t.class_names()[pred], "B");
    }

    #[test]
    fn query_on_training_record_returns_its_label() {
        let t = train(
            vec![vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]],
            vec!["A", "B", "C"],
        );
        for i in 0..t.n_records() {
            let pred = classify(&t, t.row(i), &KnnConfig::with_k(1)).unwrap();
            assert_eq!(pred, t.label(i));
        }
    }

    #[test]
    fn k_larger_than_train_is_rejected() {
        let t = train(vec![vec![0.0]], vec!["A"]);
        assert!(matches!(
            classify(&t, &[0.0], &KnnConfig::with_k(2)),
            Err(Error::Usage(_))
        ));
        assert!(classify(&t, &[0.0], &KnnConfig::with_k(0)).is_err());
    }

    #[test]
    fn empty_query_list_yields_empty_predictions() {
        let t = train(vec![vec![0.0]], vec!["A"]);
        let preds = classify_rows(&t, std::iter::empty(), &KnnConfig::with_k(1)).unwrap();
        assert!(preds.is_empty());
    }

    #[test]
    fn self_queries_reproduce_training_labels() {
        let t = train(
            vec![vec![0.0, 0.0], vec![9.0, 9.0], vec![-3.0, 4.0]],
            vec!["A", "B", "C"],
        );
        let preds = classify_batch(&t, &t, &KnnConfig::with_k(1)).unwrap();
        assert_eq!(preds, t.labels());
    }

    fn arb_instance() -> impl Strategy<Value = (Dataset, Vec<f64>, KnnConfig)> {
        (2usize..20, 1usize..4).prop_flat_map(|(n, d)| {
            (
                proptest::collection::vec(
                    proptest::collection::vec(-100.0_f64..100.0, d..=d),
                    n..=n,
                ),
                proptest::collection::vec(0usize..3, n..=n),
                proptest::collection::vec(-100.0_f64..100.0, d..=d),
                1usize..=n.min(5),
                any::<bool>(),
            )
                .prop_map(|(rows, ids, query, k, nearest)| {
                    let labels: Vec<String> = ids.iter().map(|c| format!("c{c}")).collect();
                    let data = Dataset::from_rows(rows, labels).unwrap();
                    let cfg = KnnConfig {
                        k,
                        tie_rule: if nearest {
                            TieRule::NearestTiedClass
                        } else {
                            TieRule::LowestClassIndex
                        },
                        distance: Distance::Euclidean,
                    };
                    (data, query, cfg)
                })
        })
    }

    proptest! {
        #[test]
        fn metric_axioms(
            (x, y, z) in (1usize..6).prop_flat_map(|d| {
                let v = || proptest::collection::vec(-1e3_f64..1e3, d..=d);
                (v(), v(), v())
            }),
        ) {
            let dxy = euclidean_distance(&x, &y).unwrap();
            let dyx = euclidean_distance(&y, &x).unwrap();
            let dxz = euclidean_distance(&x, &z).unwrap();
            let dyz = euclidean_distance(&y, &z).unwrap();
            prop_assert!(dxy >= 0.0);
            prop_assert_eq!(dxy, dyx);
            prop_assert_eq!(euclidean_distance(&x, &x).unwrap(), 0.0);
            prop_assert!(dxz <= dxy + dyz + 1e-9);
        }

        #[test]
        fn permutation_invariance_with_distinct_distances((data, query, cfg) in arb_instance()) {
            let dists: Vec<f64> = data
                .rows()
                .map(|r| euclidean_distance(r, &query).unwrap())
                .collect();
            let mut sorted = dists.clone();
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            prop_assume!(sorted.windows(2).all(|w| w[0] != w[1]));

            let baseline = classify(&data, &query, &cfg).unwrap();
            // reverse the training rows; predictions must not move
            let reversed: Vec<usize> = (0..data.n_records()).rev().collect();
            let permuted = data.subset(&reversed).unwrap();
            let moved = classify(&permuted, &query, &cfg).unwrap();
            prop_assert_eq!(
                &data.class_names()[baseline],
                &permuted.class_names()[moved]
            );
        }

        #[test]
        fn k_equals_n_returns_global_majority((data, query, _) in arb_instance()) {
            let cfg = KnnConfig {
                k: data.n_records(),
                tie_rule: TieRule::LowestClassIndex,
                ..KnnConfig::default()
            };
            let pred = classify(&data, &query, &cfg).unwrap();
            let counts = data.class_counts();
            let best = *counts.iter().max().unwrap();
            let majority = counts.iter().position(|&c| c == best).unwrap();
            prop_assert_eq!(pred, majority);
        }

        #[test]
        fn batch_equals_per_row_classify((data, _, cfg) in arb_instance()) {
            let batch = classify_batch(&data, &data, &cfg).unwrap();
            for (i, &pred) in batch.iter().enumerate() {
                prop_assert_eq!(pred, classify(&data, data.row(i), &cfg).unwrap());
            }
        }
    }
}
