//! Strict JSON experiment configuration.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::innovations::{DistributionSpec, InnovationModel, MarkovVolatility};
use crate::linproc::CoefficientSeq;

/// Innovation model as written in a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    Pareto {
        alpha: f64,
        #[serde(default = "half")]
        balance_p: f64,
        #[serde(default = "one")]
        scale: f64,
        #[serde(default)]
        dependence: DependenceConfig,
    },
    /// Deterministic innovations, for exactness checks only.
    Constant { value: f64 },
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DependenceConfig {
    #[default]
    Iid,
    MarkovVolatility { state_scales: Vec<f64>, transition: Vec<Vec<f64>> },
}

impl ModelSpec {
    pub fn build(&self) -> Result<InnovationModel> {
        match self {
            ModelSpec::Pareto { alpha, balance_p, scale, dependence } => {
                let dist = DistributionSpec::new(*alpha, *balance_p, *scale)?;
                Ok(match dependence {
                    DependenceConfig::Iid => InnovationModel::iid(dist),
                    DependenceConfig::MarkovVolatility { state_scales, transition } => {
                        InnovationModel::markov_volatility(
                            dist,
                            MarkovVolatility::new(state_scales.clone(), transition.clone())?,
                        )
                    }
                })
            }
            ModelSpec::Constant { value } => {
                if !value.is_finite() {
                    return Err(Error::InvalidArgument("constant innovation must be finite".into()));
                }
                Ok(InnovationModel::constant(*value))
            }
        }
    }
}

fn half() -> f64 {
    0.5
}
fn one() -> f64 {
    1.0
}
fn default_model() -> ModelSpec {
    ModelSpec::Pareto { alpha: 1.5, balance_p: 0.5, scale: 1.0, dependence: DependenceConfig::Iid }
}
fn default_n_values() -> Vec<u64> {
    vec![1000]
}
fn default_s() -> f64 {
    2.0
}
fn default_tau() -> f64 {
    0.5
}
fn default_delta() -> f64 {
    0.1
}
fn default_epsilon() -> f64 {
    1.0
}
fn default_refine_eps() -> f64 {
    1e-4
}
fn default_k_values() -> Vec<i64> {
    vec![0]
}
fn default_r_n_exponent() -> f64 {
    0.6
}
fn default_truncation_tol() -> f64 {
    1e-8
}
fn default_window_steps() -> u64 {
    2
}

/// One experiment run. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    #[serde(default = "default_model")]
    pub model: ModelSpec,
    #[serde(default = "CoefficientSeq::identity")]
    pub coefficients: CoefficientSeq,
    #[serde(default = "default_n_values")]
    pub n_values: Vec<u64>,
    #[serde(default)]
    pub m_values: Vec<u64>,
    #[serde(default)]
    pub replicas: u64,
    #[serde(default = "default_s")]
    pub s_exponent: f64,
    #[serde(default = "default_tau")]
    pub tau: f64,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(rename = "T", default = "one")]
    pub horizon: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_refine_eps")]
    pub refine_eps: f64,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    /// Extra δ levels; defaults to `[delta]` (and `2 delta` for truncation_gap).
    #[serde(default)]
    pub delta_values: Option<Vec<f64>>,
    /// Window offsets for the moment-bound experiment; stationary models only need 0.
    #[serde(default = "default_k_values")]
    pub k_values: Vec<i64>,
    /// `r_n = ⌊n^{r_n_exponent}⌋`.
    #[serde(default = "default_r_n_exponent")]
    pub r_n_exponent: f64,
    /// Tail-mass tolerance used to pick the truncation of the full process.
    #[serde(default = "default_truncation_tol")]
    pub truncation_tol: f64,
    /// Exponent `r` of the summability condition; defaults to 1 for α > 1, α/2 otherwise.
    #[serde(default)]
    pub summability_r: Option<f64>,
    /// Modulus window in grid steps (`window = window_steps / n`).
    #[serde(default = "default_window_steps")]
    pub window_steps: u64,
    /// Pass/fail thresholds; valid keys depend on the experiment.
    #[serde(default)]
    pub thresholds: BTreeMap<String, f64>,
}

fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid config JSON: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn model(&self) -> Result<InnovationModel> {
        self.model.build().map_err(as_config)
    }

    /// Summability exponent, defaulting from the tail index.
    pub fn summability_r(&self) -> f64 {
        self.summability_r.unwrap_or_else(|| match self.model.build().ok().and_then(|m| m.alpha()) {
            Some(a) if a <= 1.0 => a / 2.0,
            _ => 1.0,
        })
    }

    pub fn threshold(&self, key: &str, default: f64) -> f64 {
        self.thresholds.get(key).copied().unwrap_or(default)
    }

    pub fn validate(&self) -> Result<()> {
        let Some(spec) = super::experiment_spec(&self.experiment) else {
            let names: Vec<&str> = super::EXPERIMENTS.iter().map(|e| e.name).collect();
            return config_err(format!("unknown experiment {:?}; expected one of {names:?}", self.experiment));
        };
        self.model()?;
        self.coefficients.validate().map_err(as_config)?;
        for key in self.thresholds.keys() {
            if !spec.thresholds.contains(&key.as_str()) {
                return config_err(format!(
                    "unknown threshold {key:?} for {}; expected one of {:?}",
                    self.experiment, spec.thresholds
                ));
            }
        }
        if self.thresholds.values().any(|v| !v.is_finite()) {
            return config_err("thresholds must be finite");
        }
        if self.n_values.is_empty() {
            return config_err("n_values must be nonempty");
        }
        if self.n_values.iter().any(|&n| n < 2) {
            return config_err("every n must be at least 2");
        }
        let positive = [
            ("delta", self.delta),
            ("T", self.horizon),
            ("epsilon", self.epsilon),
            ("refine_eps", self.refine_eps),
            ("truncation_tol", self.truncation_tol),
            ("r_n_exponent", self.r_n_exponent),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return config_err(format!("{name} must be positive and finite, got {v}"));
            }
        }
        if !(self.s_exponent >= 1.0 && self.s_exponent.is_finite()) {
            return config_err(format!("s_exponent must be >= 1, got {}", self.s_exponent));
        }
        if !(self.tau > 0.0 && self.tau <= 1.0) {
            return config_err(format!("tau must lie in (0, 1], got {}", self.tau));
        }
        if self.r_n_exponent >= 1.0 {
            return config_err("r_n_exponent must be below 1 so that r_n = o(n)");
        }
        if let Some(r) = self.summability_r {
            if !(r > 0.0 && r <= 1.0) {
                return config_err(format!("summability_r must lie in (0, 1], got {r}"));
            }
        }
        if let Some(ds) = &self.delta_values {
            if ds.is_empty() || ds.iter().any(|d| !(*d > 0.0 && d.is_finite())) {
                return config_err("delta_values must be a nonempty list of positive numbers");
            }
        }
        if self.window_steps == 0 {
            return config_err("window_steps must be at least 1");
        }
        if self.k_values.is_empty() {
            return config_err("k_values must be nonempty");
        }
        if self.m_values.windows(2).any(|w| w[0] >= w[1]) {
            return config_err("m_values must be strictly increasing");
        }
        Ok(())
    }
}

pub(crate) fn as_config(e: Error) -> Error {
    match e {
        Error::InvalidArgument(m) | Error::Unsupported(m) => Error::Config(m),
        other => other,
    }
}

/// JSON schema of [`ExperimentConfig`], printed by `fclt list`.
pub const CONFIG_SCHEMA: &str = r#"{
  "type": "object",
  "additionalProperties": false,
  "required": ["experiment"],
  "properties": {
    "experiment": {"type": "string", "description": "registered experiment name"},
    "model": {
      "oneOf": [
        {"type": "object", "additionalProperties": false, "required": ["kind", "alpha"],
         "properties": {
           "kind": {"const": "pareto"},
           "alpha": {"type": "number", "exclusiveMinimum": 0, "maximum": 2},
           "balance_p": {"type": "number", "minimum": 0, "maximum": 1, "default": 0.5},
           "scale": {"type": "number", "exclusiveMinimum": 0, "default": 1},
           "dependence": {"oneOf": [
             {"type": "object", "additionalProperties": false, "properties": {"kind": {"const": "iid"}}},
             {"type": "object", "additionalProperties": false,
              "required": ["kind", "state_scales", "transition"],
              "properties": {"kind": {"const": "markov_volatility"},
                             "state_scales": {"type": "array", "items": {"type": "number"}},
                             "transition": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}}}}
           ]}
         }},
        {"type": "object", "additionalProperties": false, "required": ["kind", "value"],
         "properties": {"kind": {"const": "constant"}, "value": {"type": "number"}}}
      ],
      "default": {"kind": "pareto", "alpha": 1.5}
    },
    "coefficients": {
      "oneOf": [
        {"type": "object", "additionalProperties": false, "required": ["kind", "first_index", "values"],
         "properties": {"kind": {"const": "finite_list"}, "first_index": {"type": "integer"},
                        "values": {"type": "array", "items": {"type": "number"}}}},
        {"type": "object", "additionalProperties": false, "required": ["kind", "c", "rho"],
         "properties": {"kind": {"const": "geometric"}, "c": {"type": "number"}, "rho": {"type": "number"}}},
        {"type": "object", "additionalProperties": false, "required": ["kind", "c", "beta"],
         "properties": {"kind": {"const": "polynomial"}, "c": {"type": "number"}, "beta": {"type": "number"}}}
      ],
      "default": {"kind": "finite_list", "first_index": 0, "values": [1.0]}
    },
    "n_values": {"type": "array", "items": {"type": "integer", "minimum": 2}, "default": [1000]},
    "m_values": {"type": "array", "items": {"type": "integer", "minimum": 0}, "default": []},
    "replicas": {"type": "integer", "minimum": 0, "default": 0},
    "s_exponent": {"type": "number", "minimum": 1, "default": 2},
    "tau": {"type": "number", "exclusiveMinimum": 0, "maximum": 1, "default": 0.5},
    "delta": {"type": "number", "exclusiveMinimum": 0, "default": 0.1},
    "T": {"type": "number", "exclusiveMinimum": 0, "default": 1},
    "epsilon": {"type": "number", "exclusiveMinimum": 0, "default": 1},
    "seed": {"type": "integer", "minimum": 0, "default": 0},
    "refine_eps": {"type": "number", "exclusiveMinimum": 0, "default": 0.0001},
    "output_dir": {"type": "string"},
    "delta_values": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}},
    "k_values": {"type": "array", "items": {"type": "integer"}, "default": [0]},
    "r_n_exponent": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1, "default": 0.6},
    "truncation_tol": {"type": "number", "exclusiveMinimum": 0, "default": 1e-8},
    "summability_r": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
    "window_steps": {"type": "integer", "minimum": 1, "default": 2},
    "thresholds": {"type": "object", "additionalProperties": {"type": "number"}}
  }
}"#;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = ExperimentConfig::from_json(r#"{"experiment": "addition_continuity"}"#).unwrap();
        assert_eq!(cfg.horizon, 1.0);
        assert_eq!(cfg.coefficients, CoefficientSeq::identity());
        assert_eq!(cfg.summability_r(), 1.0);
    }

    #[test]
    fn rejects_unknown_keys_and_names() {
        assert!(matches!(
            ExperimentConfig::from_json(r#"{"experiment": "addition_continuity", "bogus": 1}"#),
            Err(Error::Config(_))
        ));
        assert!(matches!(ExperimentConfig::from_json(r#"{"experiment": "nope"}"#), Err(Error::Config(_))));
        assert!(matches!(
            ExperimentConfig::from_json(
                r#"{"experiment": "truncation_gap", "model": {"kind": "pareto", "alpha": 1.5, "extra": 0}}"#
            ),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            ExperimentConfig::from_json(r#"{"experiment": "truncation_gap", "thresholds": {"ks_max": 1}}"#),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            ExperimentConfig::from_json(r#"{"experiment": "truncation_gap", "tau": 1.5}"#),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn schema_is_valid_json() {
        let v: serde_json::Value = serde_json::from_str(CONFIG_SCHEMA).unwrap();
        let props = v["properties"].as_object().unwrap();
        let cfg = serde_json::to_value(
            ExperimentConfig::from_json(r#"{"experiment": "addition_continuity"}"#).unwrap(),
        )
        .unwrap();
        for key in cfg.as_object().unwrap().keys() {
            assert!(props.contains_key(key), "{key} missing from schema");
        }
    }
}
