use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::null_models::{AssessmentParams, Thresholds};

#[derive(Debug, Error, Clone, PartialEq)]
#[error("invalid configuration: {0}")]
pub struct ConfigError(pub String);

/// Pipeline parameters. Every field has a default, so a config file only
/// needs the values it overrides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub k_citing: usize,
    pub k_cited: usize,
    pub min_community_size: usize,
    pub null_samples: usize,
    pub seed: u64,
    pub ws_p: f64,
    pub rewire_budget_factor: usize,
    pub thresholds: Thresholds,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            k_citing: 5,
            k_cited: 6,
            min_community_size: 4,
            null_samples: 100,
            seed: 42,
            ws_p: 0.1,
            rewire_budget_factor: 10,
            thresholds: Thresholds::default(),
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = [
            ("k_citing", self.k_citing),
            ("k_cited", self.k_cited),
            ("min_community_size", self.min_community_size),
            ("null_samples", self.null_samples),
            ("rewire_budget_factor", self.rewire_budget_factor),
        ];
        for (name, v) in positive {
            if v == 0 {
                return Err(ConfigError(format!("{name} must be positive")));
            }
        }
        if !(0.0..=1.0).contains(&self.ws_p) {
            return Err(ConfigError(format!("ws_p = {} is not a probability", self.ws_p)));
        }
        let t = &self.thresholds;
        let factors = [
            ("dense_degree_fraction", t.dense_degree_fraction),
            ("small_world_clustering_factor", t.small_world_clustering_factor),
            ("small_world_path_factor", t.small_world_path_factor),
            ("random_clustering_sigmas", t.random_clustering_sigmas),
        ];
        for (name, v) in factors {
            if !v.is_finite() || v < 0.0 {
                return Err(ConfigError(format!("thresholds.{name} must be finite and >= 0")));
            }
        }
        Ok(())
    }

    pub fn assessment_params(&self) -> AssessmentParams {
        AssessmentParams {
            samples: self.null_samples,
            seed: self.seed,
            ws_p: self.ws_p,
            rewire_budget_factor: self.rewire_budget_factor,
            thresholds: self.thresholds,
        }
    }

    /// SHA-256 of the canonical JSON form.
    pub fn digest(&self) -> String {
        let value = serde_json::to_value(self).expect("config serializes");
        let text = crate::report::canonical_json(&value);
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}
