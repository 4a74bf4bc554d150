//! Experiment configuration files (TOML).

use serde::Deserialize;
use std::fmt;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Kirillov,
    Star,
    Compose,
    Stability,
    Torsor,
    Disintegrate,
    Relchar,
    Nilcone,
    Microlocal,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Kirillov => "kirillov",
            Experiment::Star => "star",
            Experiment::Compose => "compose",
            Experiment::Stability => "stability",
            Experiment::Torsor => "torsor",
            Experiment::Disintegrate => "disintegrate",
            Experiment::Relchar => "relchar",
            Experiment::Nilcone => "nilcone",
            Experiment::Microlocal => "microlocal",
        }
    }
}

/// A Gaussian bump exp(−|ξ − center|²/2w²).
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolDecl {
    pub center: Vec<f64>,
    pub width: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    /// Acceptance criterion this file addresses, if any.
    pub criterion: Option<u32>,
    pub mode: Option<String>,
    #[serde(default)]
    pub algebras: Vec<String>,
    pub spin: Option<f64>,
    pub h: Option<f64>,
    pub radius: Option<f64>,
    #[serde(default)]
    pub symbols: Vec<SymbolDecl>,
    pub j_list: Option<Vec<f64>>,
    pub h_list: Option<Vec<f64>>,
    pub n_list: Option<Vec<f64>>,
    pub orders: Option<Vec<usize>>,
    pub samples: Option<usize>,
    pub secondary_samples: Option<usize>,
    pub threshold: Option<f64>,
    pub tolerances: Option<Vec<f64>>,
    pub range: Option<[f64; 2]>,
    pub seed: Option<u64>,
    pub inner_nodes: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn err(path: &str, message: impl Into<String>) -> ConfigError {
    ConfigError { path: path.into(), message: message.into() }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| {
            let path = e.span().map(|s| format!("byte {}..{}", s.start, s.end)).unwrap_or_else(|| "<root>".into());
            err(&path, e.message().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| err(&path.display().to_string(), e.to_string()))?;
        Self::from_toml(&text).map_err(|e| err(&format!("{}:{}", path.display(), e.path), e.message))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for (name, list) in [("j_list", &self.j_list), ("h_list", &self.h_list), ("n_list", &self.n_list)] {
            if let Some(l) = list {
                if l.is_empty() {
                    return Err(err(name, "must be nonempty"));
                }
                if name != "n_list" && l.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
                    return Err(err(name, "entries must be positive and finite"));
                }
            }
        }
        if let Some(o) = &self.orders {
            if o.is_empty() {
                return Err(err("orders", "must be nonempty"));
            }
        }
        for (name, v) in [("threshold", self.threshold), ("h", self.h), ("radius", self.radius)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(err(name, "must be positive"));
                }
            }
        }
        if let Some(t) = &self.tolerances {
            if t.iter().any(|v| !(*v > 0.0)) {
                return Err(err("tolerances", "entries must be positive"));
            }
        }
        if self.samples == Some(0) {
            return Err(err("samples", "must be at least 1"));
        }
        for (k, s) in self.symbols.iter().enumerate() {
            if !(s.width > 0.0) {
                return Err(err(&format!("symbols[{k}].width"), "must be positive"));
            }
            if s.center.is_empty() {
                return Err(err(&format!("symbols[{k}].center"), "must be nonempty"));
            }
        }
        if let Some(c) = self.criterion {
            if !(1..=13).contains(&c) {
                return Err(err("criterion", "must be in 1..=13"));
            }
        }
        Ok(())
    }

    pub fn mode_or<'a>(&'a self, default: &'a str) -> &'a str {
        self.mode.as_deref().unwrap_or(default)
    }

    pub fn require<T: Clone>(&self, name: &str, v: &Option<T>) -> Result<T, ConfigError> {
        v.clone().ok_or_else(|| err(name, format!("required for experiment {}", self.experiment.name())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_j_list_is_rejected_with_path() {
        let e = ExperimentConfig::from_toml("experiment = \"kirillov\"\nj_list = []\n").unwrap_err();
        assert_eq!(e.path, "j_list");
    }

    #[test]
    fn unknown_experiment_is_rejected() {
        let e = ExperimentConfig::from_toml("experiment = \"tarot\"\n").unwrap_err();
        assert!(e.message.contains("unknown variant"), "{e}");
    }

    #[test]
    fn symbol_width_path() {
        let e = ExperimentConfig::from_toml(
            "experiment = \"compose\"\n[[symbols]]\ncenter = [0.0, 0.0, 1.0]\nwidth = -1.0\n",
        )
        .unwrap_err();
        assert_eq!(e.path, "symbols[0].width");
    }
}
