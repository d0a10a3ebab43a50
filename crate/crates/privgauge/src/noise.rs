//! Additive Gaussian privatization: every published feature value is
//! z = x + e with e drawn from a seeded normal stream.
//!
//! Two parameterizations are supported. `Fixed` draws every cell's noise
//! from N(mean, std²) directly. `AttributeScaled` treats `mean` and `std`
//! as multipliers on each attribute's own mean and population standard
//! deviation, so attribute j receives noise from
//! N(mean·mean_j, (std·std_j)²).
//!
//! Reproducibility contract: noise is drawn per cell in row-major order
//! from a single stream seeded by [`NoiseParams::seed`]. The stream uses
//! the Marsaglia polar transform over ChaCha12 uniforms, so equal seeds
//! give bit-identical output wherever the float format matches.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// How `mean` and `std` parameterize the per-cell noise distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NoiseMode {
    /// Noise is N(mean, std²) for every cell.
    #[default]
    Fixed,
    /// Per attribute j, noise is N(mean·mean_j, (std·std_j)²).
    AttributeScaled,
}

impl fmt::Display for NoiseMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoiseMode::Fixed => f.write_str("fixed"),
            NoiseMode::AttributeScaled => f.write_str("attribute-scaled"),
        }
    }
}

impl std::str::FromStr for NoiseMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<NoiseMode> {
        match s {
            "fixed" => Ok(NoiseMode::Fixed),
            "attribute-scaled" => Ok(NoiseMode::AttributeScaled),
            other => Err(Error::Config(format!(
                "unknown noise mode {other:?} (expected fixed or attribute-scaled)"
            ))),
        }
    }
}

/// Parameters of the additive-noise generator.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseParams {
    pub mode: NoiseMode,
    pub mean: f64,
    pub std: f64,
    pub seed: u64,
}

impl NoiseParams {
    pub fn fixed(mean: f64, std: f64, seed: u64) -> NoiseParams {
        NoiseParams {
            mode: NoiseMode::Fixed,
            mean,
            std,
            seed,
        }
    }

    /// `mean` and `std` are multipliers on each attribute's own statistics.
    pub fn attribute_scaled(mean: f64, std: f64, seed: u64) -> NoiseParams {
        NoiseParams {
            mode: NoiseMode::AttributeScaled,
            mean,
            std,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.mean.is_finite() || !self.std.is_finite() {
            return Err(Error::Config("noise parameters must be finite".into()));
        }
        if self.std < 0.0 {
            return Err(Error::Config(format!(
                "noise std {} must be nonnegative",
                self.std
            )));
        }
        Ok(())
    }

    /// Serializes to the plain-text config layout (`mode=`, `mean=`,
    /// `std=`, `seed=`, one per line).
    pub fn to_config_string(&self) -> String {
        format!(
            "mode={}\nmean={}\nstd={}\nseed={}\n",
            self.mode, self.mean, self.std, self.seed
        )
    }

    /// Parses the plain-text config layout. Unknown keys are rejected;
    /// omitted keys fall back to mode=fixed, mean=0, std=0, seed=0.
    pub fn from_config_str(text: &str) -> Result<NoiseParams> {
        let mut params = NoiseParams::fixed(0.0, 0.0, 0);
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key=value, got {raw:?}", idx + 1))
            })?;
            let value = value.trim();
            match key.trim() {
                "mode" => params.mode = value.parse()?,
                "mean" => {
                    params.mean = value
                        .parse()
                        .map_err(|_| Error::Config(format!("bad mean value {value:?}")))?
                }
                "std" => {
                    params.std = value
                        .parse()
                        .map_err(|_| Error::Config(format!("bad std value {value:?}")))?
                }
                "seed" => {
                    params.seed = value
                        .parse()
                        .map_err(|_| Error::Config(format!("bad seed value {value:?}")))?
                }
                other => return Err(Error::Config(format!("unknown noise key {other:?}"))),
            }
        }
        params.validate()?;
        Ok(params)
    }
}

/// A seeded stream of Gaussian draws.
///
/// Standard normals come from the Marsaglia polar transform: draw
/// u,v uniform on (−1,1) until 0 < s = u²+v² < 1, then u·√(−2·ln s / s)
/// and v·√(−2·ln s / s) are two independent N(0,1) values (the second is
/// cached for the next call). Only `ln` and `sqrt` are involved, and the
/// draw order is fixed, so a seed pins the entire stream.
#[derive(Debug, Clone)]
pub struct GaussianStream {
    rng: ChaCha12Rng,
    spare: Option<f64>,
}

impl GaussianStream {
    pub fn new(seed: u64) -> GaussianStream {
        GaussianStream {
            rng: ChaCha12Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    /// One standard normal draw.
    pub fn standard(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.rng.random::<f64>() - 1.0;
            let v = 2.0 * self.rng.random::<f64>() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let scale = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * scale);
                return u * scale;
            }
        }
    }

    /// One draw from N(mean, std²). A zero std yields exactly `mean` and
    /// consumes no randomness.
    pub fn sample(&mut self, mean: f64, std: f64) -> f64 {
        if std == 0.0 {
            mean
        } else {
            mean + std * self.standard()
        }
    }

    /// `count` draws from N(mean, std²).
    pub fn sample_many(&mut self, mean: f64, std: f64, count: usize) -> Result<Vec<f64>> {
        if std < 0.0 {
            return Err(Error::Config(format!("noise std {std} must be nonnegative")));
        }
        if !mean.is_finite() || !std.is_finite() {
            return Err(Error::Config("noise parameters must be finite".into()));
        }
        Ok((0..count).map(|_| self.sample(mean, std)).collect())
    }
}

/// `count` draws from N(mean, std²) out of a fresh stream seeded by `seed`.
pub fn sample_gaussian(seed: u64, mean: f64, std: f64, count: usize) -> Result<Vec<f64>> {
    GaussianStream::new(seed).sample_many(mean, std, count)
}

/// Publishes z = x + e for every feature cell, drawing e per cell in
/// row-major order from a single stream seeded by `params.seed`. Labels,
/// shape, and names are untouched. With zero effective noise the feature
/// bits pass through unchanged.
pub fn privatize(data: &Dataset, params: &NoiseParams) -> Result<Dataset> {
    params.validate()?;
    let d = data.n_attributes();
    let mut stream = GaussianStream::new(params.seed);
    let mut cell_params: Vec<(f64, f64)> = Vec::new();
    if params.mode == NoiseMode::AttributeScaled {
        let stats = data.attribute_stats();
        cell_params = (0..d)
            .map(|j| (params.mean * stats.means[j], params.std * stats.stds[j]))
            .collect();
    }

    let mut features = Vec::with_capacity(data.features().len());
    for row in data.rows() {
        for (j, &x) in row.iter().enumerate() {
            let e = match params.mode {
                NoiseMode::Fixed => stream.sample(params.mean, params.std),
                NoiseMode::AttributeScaled => {
                    let (m, s) = cell_params[j];
                    stream.sample(m, s)
                }
            };
            // e == 0.0 passes x through bit-for-bit (x + 0.0 would lose -0.0)
            features.push(if e == 0.0 { x } else { x + e });
        }
    }
    data.with_features(features)
}
