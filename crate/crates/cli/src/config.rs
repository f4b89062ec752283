use anyhow::{bail, Context, Result};
use predissoc_core::model::{ModelSpec, PotentialModel};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

/// Run configuration read from a JSON file; every field has a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Model description file; the built-in model when absent.
    pub model: Option<PathBuf>,
    /// Strictly decreasing semiclassical parameters.
    pub h_list: Vec<f64>,
    /// Complex-scaling angle.
    pub theta: f64,
    /// Grid density multiplier of the banded resolvents.
    pub multiplier: f64,
    /// Survival traces cover `0 <= h t <= horizon`.
    pub horizon: f64,
    /// Samples per survival trace.
    pub samples: usize,
    /// Seed of the random probe vectors.
    pub seed: u64,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: None,
            h_list: vec![0.04, 0.02, 0.01],
            theta: 0.2,
            multiplier: 1.0,
            horizon: 40.0,
            samples: 800,
            seed: 11,
            out: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg: Self = serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        if let (Some(model), Some(dir)) = (&cfg.model, path.parent()) {
            if model.is_relative() {
                cfg.model = Some(dir.join(model));
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.h_list.len() < 3 {
            bail!(
                "h_list needs at least 3 values for slope fits, got {}",
                self.h_list.len()
            );
        }
        if let Some(h) = self.h_list.iter().find(|h| !(**h > 0.0 && **h <= 0.1)) {
            bail!("h = {h} outside (0, 0.1]");
        }
        if self.h_list.windows(2).any(|w| w[1] >= w[0]) {
            bail!("h_list must be strictly decreasing: {:?}", self.h_list);
        }
        if !(self.theta > 0.0 && self.theta <= 0.35) {
            bail!("theta = {} outside (0, 0.35]", self.theta);
        }
        if !(self.multiplier >= 1.0 && self.multiplier.is_finite()) {
            bail!("multiplier = {} must be at least 1", self.multiplier);
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            bail!("horizon = {} must be positive", self.horizon);
        }
        if self.samples < 2 {
            bail!("samples = {} must be at least 2", self.samples);
        }
        Ok(())
    }

    pub fn model_spec(&self) -> Result<ModelSpec> {
        match &self.model {
            None => Ok(ModelSpec::default()),
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading model {}", path.display()))?;
                serde_json::from_str(&text)
                    .with_context(|| format!("parsing model {}", path.display()))
            }
        }
    }

    pub fn build_model(&self) -> Result<(ModelSpec, PotentialModel)> {
        let spec = self.model_spec()?;
        let model = PotentialModel::from_spec(&spec)?;
        Ok((spec, model))
    }
}

/// SHA-256 of the resolved configuration and model, hex encoded.
pub fn config_hash(cfg: &RunConfig, spec: &ModelSpec) -> Result<String> {
    #[derive(Serialize)]
    struct Resolved<'a> {
        h_list: &'a [f64],
        theta: f64,
        multiplier: f64,
        horizon: f64,
        samples: usize,
        seed: u64,
        model: &'a ModelSpec,
    }
    let bytes = serde_json::to_vec(&Resolved {
        h_list: &cfg.h_list,
        theta: cfg.theta,
        multiplier: cfg.multiplier,
        horizon: cfg.horizon,
        samples: cfg.samples,
        seed: cfg.seed,
        model: spec,
    })?;
    Ok(Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_bad_sweeps() {
        let bad = |h: Vec<f64>| {
            RunConfig {
                h_list: h,
                ..RunConfig::default()
            }
            .validate()
            .is_err()
        };
        assert!(bad(vec![0.04, 0.02]));
        assert!(bad(vec![0.02, 0.04, 0.01]));
        assert!(bad(vec![0.2, 0.04, 0.01]));
        assert!(bad(vec![0.04, 0.04, 0.01]));
    }

    #[test]
    fn hash_ignores_output_location() {
        let spec = ModelSpec::default();
        let a = RunConfig::default();
        let b = RunConfig {
            out: "elsewhere".into(),
            ..RunConfig::default()
        };
        assert_eq!(
            config_hash(&a, &spec).unwrap(),
            config_hash(&b, &spec).unwrap()
        );
        let c = RunConfig {
            theta: 0.25,
            ..RunConfig::default()
        };
        assert_ne!(
            config_hash(&a, &spec).unwrap(),
            config_hash(&c, &spec).unwrap()
        );
    }
}
