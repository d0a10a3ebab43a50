//! Closed-loop noise tuning: privatize, classify, compare the error to a
//! threshold, adjust the noise parameters, repeat.
//!
//! The adjustment policy is explicit: either a multiplicative decay of the
//! noise std (mean held constant) or a caller-supplied list of parameter
//! settings tried in order. The loop stops at the first step whose error
//! is at or below the threshold, or when the step budget runs out.

use std::fmt;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::evaluate::{pipeline_evaluate, CvConfig};
use crate::knn::KnnConfig;
use crate::noise::NoiseParams;

/// How noise parameters change between steps.
#[derive(Debug, Clone, PartialEq)]
pub enum TuneSchedule {
    /// std ← gamma · std after every step; mean, mode, and seed stay put.
    MultiplicativeDecay { gamma: f64 },
    /// Settings tried verbatim, in order.
    Explicit(Vec<NoiseParams>),
}

/// How per-step seeds are derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeedPolicy {
    /// Every step reuses the configured seeds, isolating the parameter
    /// effect.
    #[default]
    Fixed,
    /// Step i adds i to both the noise seed and the fold seed.
    FreshPerStep,
}

impl fmt::Display for SeedPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeedPolicy::Fixed => f.write_str("fixed"),
            SeedPolicy::FreshPerStep => f.write_str("fresh-per-step"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuneConfig {
    /// Accept as soon as the error is ≤ this value.
    pub threshold: f64,
    /// Step-0 parameters (multiplicative schedule only; the explicit
    /// schedule carries its own settings).
    pub initial: NoiseParams,
    pub schedule: TuneSchedule,
    pub max_iterations: usize,
    pub knn: KnnConfig,
    pub cv: CvConfig,
    pub seed_policy: SeedPolicy,
}

impl TuneConfig {
    /// Parses the plain-text config layout (`key=value` lines; see the
    /// README for the key set). Keys not present fall back to `defaults`.
    /// `schedule=explicit` switches to the `step.N.*` settings, which must
    /// each carry at least a `mode`.
    pub fn from_config_str(text: &str, defaults: &TuneConfig) -> Result<TuneConfig> {
        let kv = crate::report::Report::parse_machine(text)?;
        let mut config = defaults.clone();

        let parse_f64 = |key: &str, value: &str| -> Result<f64> {
            value
                .parse()
                .map_err(|_| Error::Config(format!("bad value for {key}: {value:?}")))
        };
        let parse_u64 = |key: &str, value: &str| -> Result<u64> {
            value
                .parse()
                .map_err(|_| Error::Config(format!("bad value for {key}: {value:?}")))
        };

        let mut schedule_kind: Option<String> = None;
        let mut gamma: Option<f64> = None;
        let mut steps: Vec<(usize, String, String)> = Vec::new();

        for (key, value) in kv.entries() {
            match key.as_str() {
                "threshold" => config.threshold = parse_f64(key, value)?,
                "max_iterations" => config.max_iterations = parse_u64(key, value)? as usize,
                "seed_policy" => {
                    config.seed_policy = match value.as_str() {
                        "fixed" => SeedPolicy::Fixed,
                        "fresh-per-step" => SeedPolicy::FreshPerStep,
                        other => {
                            return Err(Error::Config(format!("unknown seed policy {other:?}")))
                        }
                    }
                }
                "schedule" => schedule_kind = Some(value.clone()),
                "gamma" => gamma = Some(parse_f64(key, value)?),
                "knn.k" => config.knn.k = parse_u64(key, value)? as usize,
                "cv.folds" => config.cv.fold_count = parse_u64(key, value)? as usize,
                "cv.seed" => config.cv.seed = parse_u64(key, value)?,
                "cv.stratified" => {
                    config.cv.stratified = value.parse().map_err(|_| {
                        Error::Config(format!("bad value for cv.stratified: {value:?}"))
                    })?
                }
                "initial.mode" => config.initial.mode = value.parse()?,
                "initial.mean" => config.initial.mean = parse_f64(key, value)?,
                "initial.std" => config.initial.std = parse_f64(key, value)?,
                "initial.seed" => config.initial.seed = parse_u64(key, value)?,
                other if other.starts_with("step.") => {
                    let rest = &other[5..];
                    let (idx, field) = rest
                        .split_once('.')
                        .ok_or_else(|| Error::Config(format!("malformed step key {other:?}")))?;
                    let idx: usize = idx
                        .parse()
                        .map_err(|_| Error::Config(format!("malformed step key {other:?}")))?;
                    steps.push((idx, field.to_string(), value.clone()));
                }
                other => return Err(Error::Config(format!("unknown tune key {other:?}"))),
            }
        }

        match schedule_kind.as_deref() {
            Some("explicit") => {
                let count = steps
                    .iter()
                    .map(|(i, _, _)| i + 1)
                    .max()
                    .ok_or_else(|| Error::Config("explicit schedule has no step.* keys".into()))?;
                let mut list: Vec<NoiseParams> = vec![NoiseParams::fixed(0.0, 0.0, 0); count];
                let mut seen_mode = vec![false; count];
                for (idx, field, value) in &steps {
                    let slot = list.get_mut(*idx).expect("count covers all indices");
                    match field.as_str() {
                        "mode" => {
                            slot.mode = value.parse()?;
                            seen_mode[*idx] = true;
                        }
                        "mean" => slot.mean = parse_f64(field, value)?,
                        "std" => slot.std = parse_f64(field, value)?,
                        "seed" => slot.seed = parse_u64(field, value)?,
                        other => {
                            return Err(Error::Config(format!("unknown step field {other:?}")))
                        }
                    }
                }
                if let Some(missing) = seen_mode.iter().position(|&m| !m) {
                    return Err(Error::Config(format!("step.{missing}.mode is missing")));
                }
                config.schedule = TuneSchedule::Explicit(list);
            }
            Some("multiplicative") | None => {
                if !steps.is_empty() {
                    return Err(Error::Config("step.* keys need schedule=explicit".into()));
                }
                if let Some(gamma) = gamma {
                    config.schedule = TuneSchedule::MultiplicativeDecay { gamma };
                } else if schedule_kind.is_some() {
                    config.schedule = TuneSchedule::MultiplicativeDecay { gamma: 0.5 };
                }
            }
            Some(other) => {
                return Err(Error::Config(format!("unknown schedule {other:?}")));
            }
        }
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.threshold) {
            return Err(Error::Config(format!(
                "threshold {} outside [0, 1]",
                self.threshold
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be at least 1".into()));
        }
        self.knn.validate()?;
        if self.cv.fold_count < 2 {
            return Err(Error::Config("fold count must be at least 2".into()));
        }
        match &self.schedule {
            TuneSchedule::MultiplicativeDecay { gamma } => {
                if !(*gamma > 0.0 && *gamma < 1.0) {
                    return Err(Error::Config(format!(
                        "decay factor {gamma} outside the open interval (0, 1)"
                    )));
                }
                self.initial.validate()?;
                if self.initial.std <= 0.0 {
                    return Err(Error::Config(
                        "multiplicative decay needs a positive initial std".into(),
                    ));
                }
            }
            TuneSchedule::Explicit(steps) => {
                if steps.is_empty() {
                    return Err(Error::Config("explicit schedule has no steps".into()));
                }
                for params in steps {
                    params.validate()?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TuneOutcome {
    MetThreshold,
    BudgetExhausted,
}

impl fmt::Display for TuneOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TuneOutcome::MetThreshold => f.write_str("met-threshold"),
            TuneOutcome::BudgetExhausted => f.write_str("budget-exhausted"),
        }
    }
}

/// One evaluated setting. `params` and `cv_seed` carry the effective
/// seeds, so re-running the pipeline on them reproduces `error` exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct TuneStep {
    pub params: NoiseParams,
    pub cv_seed: u64,
    pub error: f64,
}

/// Ordered record of every step the loop evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct TuneTrace {
    pub steps: Vec<TuneStep>,
    pub outcome: TuneOutcome,
    /// The accepted parameters when the threshold was met.
    pub accepted: Option<NoiseParams>,
}

/// Runs the threshold-retry loop over `data`.
pub fn tune(data: &Dataset, config: &TuneConfig) -> Result<TuneTrace> {
    config.validate()?;

    let budget = match &config.schedule {
        TuneSchedule::MultiplicativeDecay { .. } => config.max_iterations,
        TuneSchedule::Explicit(steps) => config.max_iterations.min(steps.len()),
    };

    let mut current = config.initial.clone();
    let mut steps: Vec<TuneStep> = Vec::new();
    for step in 0..budget {
        let mut params = match &config.schedule {
            TuneSchedule::MultiplicativeDecay { gamma } => {
                if step > 0 {
                    current.std *= gamma;
                }
                current.clone()
            }
            TuneSchedule::Explicit(list) => list[step].clone(),
        };
        let mut cv = config.cv.clone();
        if config.seed_policy == SeedPolicy::FreshPerStep {
            params.seed = params.seed.wrapping_add(step as u64);
            cv.seed = cv.seed.wrapping_add(step as u64);
        }

        let result = pipeline_evaluate(data, &params, &config.knn, &cv)?;
        let error = result.overall_error;
        steps.push(TuneStep {
            params: params.clone(),
            cv_seed: cv.seed,
            error,
        });
        if error <= config.threshold {
            return Ok(TuneTrace {
                steps,
                outcome: TuneOutcome::MetThreshold,
                accepted: Some(params),
            });
        }
    }

    Ok(TuneTrace {
        steps,
        outcome: TuneOutcome::BudgetExhausted,
        accepted: None,
    })
}
