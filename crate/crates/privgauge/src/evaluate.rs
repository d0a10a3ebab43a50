//! Cross-validated classification error, the utility gauge.
//!
//! Every record is predicted exactly once: fold f's records are classified
//! against the union of all other folds, and the pooled misclassification
//! rate is the headline number. [`pipeline_evaluate`] privatizes first and
//! then cross-validates the privatized data, so both training and testing
//! partitions see the published values.

use crate::dataset::{Dataset, FoldAssignment};
use crate::error::{Error, Result};
use crate::knn::{classify, KnnConfig};
use crate::noise::{privatize, NoiseParams};

/// Cross-validation shape: fold count, shuffle seed, stratification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CvConfig {
    pub fold_count: usize,
    pub seed: u64,
    pub stratified: bool,
}

impl Default for CvConfig {
    /// 10 stratified folds, seed 0.
    fn default() -> Self {
        CvConfig {
            fold_count: 10,
            seed: 0,
            stratified: true,
        }
    }
}

impl CvConfig {
    pub fn new(fold_count: usize, seed: u64) -> CvConfig {
        CvConfig {
            fold_count,
            seed,
            stratified: true,
        }
    }

    pub fn with_seed(&self, seed: u64) -> CvConfig {
        CvConfig {
            seed,
            ..self.clone()
        }
    }
}

/// class × class prediction counts; rows are true classes, columns are
/// predicted classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    counts: Vec<usize>,
    n_classes: usize,
}

impl ConfusionMatrix {
    pub fn from_pairs(truths: &[usize], predictions: &[usize], n_classes: usize) -> ConfusionMatrix {
        let mut counts = vec![0; n_classes * n_classes];
        for (&t, &p) in truths.iter().zip(predictions) {
            counts[t * n_classes + p] += 1;
        }
        ConfusionMatrix { counts, n_classes }
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn count(&self, true_class: usize, predicted_class: usize) -> usize {
        self.counts[true_class * self.n_classes + predicted_class]
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn misclassified(&self) -> usize {
        self.total() - (0..self.n_classes).map(|c| self.count(c, c)).sum::<usize>()
    }

    pub fn error_rate(&self) -> f64 {
        self.misclassified() as f64 / self.total() as f64
    }
}

/// Everything a cross-validation run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct CvResult {
    pub fold_assignment: FoldAssignment,
    /// Predicted class index per record, in original record order.
    pub predictions: Vec<usize>,
    /// Pooled misclassification rate, misclassified / n.
    pub overall_error: f64,
    /// Misclassified-in-fold / fold-size, per fold.
    pub per_fold_error: Vec<f64>,
    pub confusion: ConfusionMatrix,
}

/// Fraction of positions where prediction ≠ truth.
pub fn classification_error(predictions: &[usize], truths: &[usize]) -> Result<f64> {
    if predictions.is_empty() {
        return Err(Error::Usage("no predictions to score".into()));
    }
    if predictions.len() != truths.len() {
        return Err(Error::Usage(format!(
            "{} predictions vs {} truths",
            predictions.len(),
            truths.len()
        )));
    }
    let miss = predictions
        .iter()
        .zip(truths)
        .filter(|(p, t)| p != t)
        .count();
    Ok(miss as f64 / predictions.len() as f64)
}

/// Which features the held-out folds are drawn from in
/// [`pipeline_evaluate_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvalTarget {
    /// Held-out queries come from the privatized data, like the training
    /// folds.
    #[default]
    Privatized,
    /// Held-out queries keep the original feature values; only training
    /// folds are privatized. Sensitivity-analysis mode.
    Original,
}

/// K-fold cross-validation of the KNN classifier over `data`.
pub fn cross_validate(data: &Dataset, knn: &KnnConfig, cv: &CvConfig) -> Result<CvResult> {
    cross_validate_pair(data, data, knn, cv)
}

/// Privatizes `data`, then cross-validates the privatized dataset.
pub fn pipeline_evaluate(
    data: &Dataset,
    noise: &NoiseParams,
    knn: &KnnConfig,
    cv: &CvConfig,
) -> Result<CvResult> {
    pipeline_evaluate_with(data, noise, knn, cv, EvalTarget::Privatized)
}

/// Pipeline evaluation with an explicit choice of query features.
pub fn pipeline_evaluate_with(
    data: &Dataset,
    noise: &NoiseParams,
    knn: &KnnConfig,
    cv: &CvConfig,
    target: EvalTarget,
) -> Result<CvResult> {
    let privatized = privatize(data, noise)?;
    match target {
        EvalTarget::Privatized => cross_validate(&privatized, knn, cv),
        EvalTarget::Original => cross_validate_pair(&privatized, data, knn, cv),
    }
}

/// Trains on folds of `train_source` and queries rows of `query_source`.
/// Both views must describe the same records (same labels, same shape);
/// the fold partition is shared.
fn cross_validate_pair(
    train_source: &Dataset,
    query_source: &Dataset,
    knn: &KnnConfig,
    cv: &CvConfig,
) -> Result<CvResult> {
    knn.validate()?;
    debug_assert_eq!(train_source.labels(), query_source.labels());
    let n = train_source.n_records();
    let folds = train_source.split_folds(cv.fold_count, cv.seed, cv.stratified)?;

    let max_fold = *folds.fold_sizes().iter().max().expect("folds exist");
    if knn.k > n - max_fold {
        return Err(Error::Usage(format!(
            "k={} exceeds the smallest training partition size {}",
            knn.k,
            n - max_fold
        )));
    }

    let mut predictions = vec![0usize; n];
    for fold in 0..folds.fold_count() {
        let train = train_source.subset(&folds.train_indices(fold))?;
        for i in folds.test_indices(fold) {
            predictions[i] = classify(&train, query_source.row(i), knn)?;
        }
    }

    let truths = train_source.labels();
    let overall_error = classification_error(&predictions, truths)?;
    let per_fold_error = (0..folds.fold_count())
        .map(|fold| {
            let idx = folds.test_indices(fold);
            let miss = idx.iter().filter(|&&i| predictions[i] != truths[i]).count();
            miss as f64 / idx.len() as f64
        })
        .collect();
    let confusion = ConfusionMatrix::from_pairs(truths, &predictions, train_source.n_classes());

    Ok(CvResult {
        fold_assignment: folds,
        predictions,
        overall_error,
        per_fold_error,
        confusion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::NoiseMode;
    use proptest::prelude::*;

    #[test]
    fn perfect_predictions_score_zero() {
        let p = vec![0, 1, 2, 1];
        assert_eq!(classification_error(&p, &p).unwrap(), 0.0);
    }

    #[test]
    fn error_fractions_are_exact_at_150_records() {
        // 6 of 150 and 48 of 150 come out as exactly 0.04 and 0.32
        let truths = vec![0usize; 150];
        let mut p = truths.clone();
        for slot in p.iter_mut().take(6) {
            *slot = 1;
        }
        assert_eq!(classification_error(&p, &truths).unwrap(), 0.04);
        let mut p = truths.clone();
        for slot in p.iter_mut().take(48) {
            *slot = 1;
        }
        assert_eq!(classification_error(&p, &truths).unwrap(), 0.32);
    }

    #[test]
    fn mismatched_or_empty_inputs_are_rejected() {
        assert!(classification_error(&[0], &[0, 1]).is_err());
        assert!(classification_error(&[], &[]).is_err());
    }

    fn two_clusters() -> Dataset {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..10 {
            rows.push(vec![i as f64 * 0.1, 0.0]);
            labels.push("near".to_string());
            rows.push(vec![100.0 + i as f64 * 0.1, 0.0]);
            labels.push("far".to_string());
        }
        Dataset::from_rows(rows, labels).unwrap()
    }

    #[test]
    fn separated_clusters_classify_perfectly() {
        let data = two_clusters();
        let result = cross_validate(&data, &KnnConfig::with_k(1), &CvConfig::new(10, 7)).unwrap();
        assert_eq!(result.overall_error, 0.0);
        assert!(result.per_fold_error.iter().all(|&e| e == 0.0));
        assert_eq!(result.confusion.misclassified(), 0);
    }

    #[test]
    fn four_record_cv_matches_manual_computation() {
        // B at x=0.4 sits between the two A's; its nearest neighbor is
        // always A at x=0, so it is misclassified in any fold layout.
        let data = Dataset::from_rows(
            vec![vec![0.0], vec![1.0], vec![0.4], vec![5.0]],
            vec!["A", "A", "B", "B"],
        )
        .unwrap();
        let cv = CvConfig::new(2, 11);
        let result = cross_validate(&data, &KnnConfig::with_k(1), &cv).unwrap();

        // manual fold-by-fold recomputation from the same assignment
        let folds = data.split_folds(2, 11, true).unwrap();
        let mut manual = vec![0usize; 4];
        for fold in 0..2 {
            let train_idx = folds.train_indices(fold);
            for i in folds.test_indices(fold) {
                let mut best = (f64::INFINITY, 0usize);
                for &t in &train_idx {
                    let d = (data.feature(i, 0) - data.feature(t, 0)).abs();
                    if d < best.0 {
                        best = (d, data.label(t));
                    }
                }
                manual[i] = best.1;
            }
        }
        assert_eq!(result.predictions, manual);
        // the stray B is wrong in every layout
        assert_eq!(result.predictions[2], 0);
        assert!(result.overall_error >= 0.25);
    }

    #[test]
    fn k_beyond_training_partition_is_rejected() {
        let data = two_clusters();
        let err = cross_validate(&data, &KnnConfig::with_k(19), &CvConfig::new(10, 0));
        assert!(matches!(err, Err(Error::Usage(_))));
    }

    #[test]
    fn zero_noise_pipeline_equals_plain_cross_validation() {
        let data = two_clusters();
        let cv = CvConfig::new(5, 3);
        let knn = KnnConfig::with_k(1);
        let a = cross_validate(&data, &knn, &cv).unwrap();
        let b = pipeline_evaluate(&data, &NoiseParams::fixed(0.0, 0.0, 9), &knn, &cv).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn original_target_queries_keep_clean_features() {
        // huge additive shift: privatized training folds land far from the
        // clean queries, while privatized-vs-privatized stays consistent
        let data = two_clusters();
        let cv = CvConfig::new(5, 3);
        let knn = KnnConfig::with_k(1);
        let noise = NoiseParams {
            mode: NoiseMode::Fixed,
            mean: 1e6,
            std: 0.0,
            seed: 1,
        };
        let shifted = pipeline_evaluate(&data, &noise, &knn, &cv).unwrap();
        assert_eq!(shifted.overall_error, 0.0); // pure translation, both sides
        let mixed =
            pipeline_evaluate_with(&data, &noise, &knn, &cv, EvalTarget::Original).unwrap();
        // every clean query is nearest to the cluster whose translated image
        // stayed closest; geometry no longer separates the classes cleanly
        assert!(mixed.overall_error > 0.0);
    }

    fn arb_labeled(n: usize) -> impl Strategy<Value = Dataset> {
        (
            proptest::collection::vec(proptest::collection::vec(-50.0_f64..50.0, 2), n),
            proptest::collection::vec(0usize..2, n),
        )
            .prop_map(|(rows, ids)| {
                let labels: Vec<String> = ids.iter().map(|c| format!("c{c}")).collect();
                Dataset::from_rows(rows, labels).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn cv_invariants_hold(data in arb_labeled(12), seed in any::<u64>()) {
            let cv = CvConfig { fold_count: 3, seed, stratified: false };
            let result = cross_validate(&data, &KnnConfig::with_k(1), &cv).unwrap();

            // determinism
            let again = cross_validate(&data, &KnnConfig::with_k(1), &cv).unwrap();
            prop_assert_eq!(&result, &again);

            // coverage and accounting
            prop_assert_eq!(result.predictions.len(), data.n_records());
            prop_assert_eq!(result.confusion.total(), data.n_records());
            let miss = result.confusion.misclassified();
            prop_assert_eq!(
                result.overall_error,
                miss as f64 / data.n_records() as f64
            );

            // fold-size-weighted fold errors average to the pooled error
            let sizes = result.fold_assignment.fold_sizes();
            let weighted: f64 = result
                .per_fold_error
                .iter()
                .zip(&sizes)
                .map(|(e, &s)| e * s as f64)
                .sum();
            let pooled = weighted / data.n_records() as f64;
            prop_assert!((pooled - result.overall_error).abs() < 1e-12);
        }

        #[test]
        fn zero_noise_equivalence(data in arb_labeled(10), seed in any::<u64>()) {
            let cv = CvConfig { fold_count: 2, seed, stratified: false };
            let knn = KnnConfig::with_k(1);
            let plain = cross_validate(&data, &knn, &cv).unwrap();
            let piped =
                pipeline_evaluate(&data, &NoiseParams::fixed(0.0, 0.0, seed), &knn, &cv).unwrap();
            prop_assert_eq!(plain, piped);
        }
    }
}
