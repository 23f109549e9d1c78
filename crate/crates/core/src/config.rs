//! Run configuration: JSON file, then command-line overrides, then checks.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::{HarnessConfig, LemmaSuiteConfig};
use crate::oscillation::field::DEFAULT_REGION_BUDGET;
use crate::variation::MIN_HORIZON;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub tol: f64,
    pub eps_dec: f64,
    pub eps_agree: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol: 0.05,
            eps_dec: 0.05,
            eps_agree: 0.02,
        }
    }
}

/// A single decomposition to evaluate on the configured sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LemmaPoint {
    pub m: usize,
    pub n: usize,
    pub mu: usize,
    pub eta: usize,
    pub direction: crate::oscillation::Direction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Corpus name with optional `key=value` parameters, or an expression in `m`, `n`.
    pub sequence: String,
    pub weights_p: String,
    pub weights_q: String,
    /// Largest profile horizon; the limit ladder runs from here to 8× this.
    pub horizon: usize,
    pub classify_horizon: usize,
    pub lambda_ladder: Vec<f64>,
    pub kappa_ladder: Vec<f64>,
    pub delta: f64,
    pub gamma: f64,
    pub tail_fraction: f64,
    pub tolerances: Tolerances,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub lemma_sequences: usize,
    pub lemma_grid: usize,
    pub lemma_point: Option<LemmaPoint>,
    pub sweep_points: usize,
    pub region_budget: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            sequence: "additive_convergent".into(),
            weights_p: "ones".into(),
            weights_q: "ones".into(),
            horizon: 512,
            classify_horizon: 100_000,
            lambda_ladder: vec![2.0, 1.5, 1.25, 1.1, 1.05],
            kappa_ladder: vec![2.0, 1.5, 1.25, 1.1, 1.05],
            delta: 0.5,
            gamma: 0.5,
            tail_fraction: 0.5,
            tolerances: Tolerances::default(),
            seed: 0,
            output_dir: PathBuf::from("out"),
            lemma_sequences: 100,
            lemma_grid: 20,
            lemma_point: None,
            sweep_points: 5,
            region_budget: DEFAULT_REGION_BUDGET,
        }
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn check_ladder(name: &str, ladder: &[f64]) -> Result<()> {
    if ladder.is_empty() {
        return Err(bad(format!("{name} is empty")));
    }
    if let Some(x) = ladder.iter().find(|&&x| !(x > 1.0 && x.is_finite())) {
        return Err(bad(format!("{name} entries must be finite and > 1, found {x}")));
    }
    if ladder.windows(2).any(|w| w[1] >= w[0]) {
        return Err(bad(format!("{name} must decrease strictly toward 1")));
    }
    Ok(())
}

impl RunConfig {
    /// Reads a JSON file; missing fields take their defaults.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| bad(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<()> {
        for (name, h) in [("horizon", self.horizon), ("classify_horizon", self.classify_horizon)] {
            if h < MIN_HORIZON {
                return Err(bad(format!("{name} must be at least {MIN_HORIZON}, got {h}")));
            }
        }
        if self.horizon.checked_mul(8).is_none() {
            return Err(bad("horizon too large"));
        }
        check_ladder("lambda_ladder", &self.lambda_ladder)?;
        check_ladder("kappa_ladder", &self.kappa_ladder)?;
        if self.lambda_ladder.len() != self.kappa_ladder.len() {
            return Err(bad("lambda_ladder and kappa_ladder must have the same length"));
        }
        for (name, v) in [("delta", self.delta), ("gamma", self.gamma)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(bad(format!("{name} must be positive, got {v}")));
            }
        }
        let t = &self.tolerances;
        for (name, v) in [("tol", t.tol), ("eps_dec", t.eps_dec), ("eps_agree", t.eps_agree)] {
            if !(v > 0.0 && v < 0.5) {
                return Err(bad(format!("tolerance {name} must lie in (0, 0.5), got {v}")));
            }
        }
        if !(self.tail_fraction > 0.0 && self.tail_fraction < 1.0) {
            return Err(bad(format!("tail_fraction must lie in (0, 1), got {}", self.tail_fraction)));
        }
        if self.lemma_grid < 1 || self.lemma_sequences < 1 {
            return Err(bad("lemma_grid and lemma_sequences must be positive"));
        }
        if self.sweep_points < 1 || self.region_budget < 1 {
            return Err(bad("sweep_points and region_budget must be positive"));
        }
        Ok(())
    }

    /// `{H/8, H/4, H/2, H}`.
    pub fn profile_horizons(&self) -> Vec<usize> {
        let h = self.horizon;
        let mut v = vec![h / 8, h / 4, h / 2, h];
        v.dedup();
        v
    }

    /// `{H, 2H, 4H, 8H}`.
    pub fn limit_ladder(&self) -> Vec<usize> {
        let h = self.horizon;
        vec![h, 2 * h, 4 * h, 8 * h]
    }

    pub fn rungs(&self) -> Vec<(f64, f64)> {
        self.lambda_ladder.iter().copied().zip(self.kappa_ladder.iter().copied()).collect()
    }

    pub fn harness(&self) -> HarnessConfig {
        HarnessConfig {
            classify_horizon: self.classify_horizon,
            tol: self.tolerances.tol,
            profile_horizons: self.profile_horizons(),
            lambda_ladder: self.lambda_ladder.clone(),
            kappa_ladder: self.kappa_ladder.clone(),
            limit_ladder: self.limit_ladder(),
            tail_fraction: self.tail_fraction,
            eps_dec: self.tolerances.eps_dec,
            eps_agree: self.tolerances.eps_agree,
            region_budget: self.region_budget,
        }
    }

    pub fn lemma_suite(&self) -> LemmaSuiteConfig {
        LemmaSuiteConfig {
            seed: self.seed,
            sequences: self.lemma_sequences,
            grid: self.lemma_grid,
            ..Default::default()
        }
    }
}
