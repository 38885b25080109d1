//! Runtime configuration with pinned numerical tolerances.
//!
//! Every threshold lives here with its rationale; nothing downstream invents
//! ad-hoc magic numbers. Defaults can be overridden by pointing the
//! `SPANWALK_CONFIG` environment variable at a JSON file whose fields mirror
//! [`Config`]; absent fields keep their defaults.

use serde::{Deserialize, Serialize};
use std::path::Path;

/// Environment variable naming a JSON config file.
pub const CONFIG_ENV: &str = "SPANWALK_CONFIG";

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, rename_all = "camelCase")]
pub struct Config {
    /// Output-edge reweight numerator: the output edge gets weight
    /// `eps_w / sqrt(adv)` before spectral checks and walk runs. Chosen by a
    /// sweep over {0.05, 0.1, 0.2} on depth-1/2 majority trees; 0.1 gave the
    /// best joint margin (largest kernel output support in true cases that
    /// still leaves the false-case gap clear of the acceptance window).
    pub eps_w: f64,
    /// Gap parameter: false inputs must have no output-supported eigenvector
    /// with |λ| ≤ eps / adv  (λ in units of the rescaled adjacency). Checked
    /// jointly with `eps_w` in the same sweep; with `eps_w = 0.1` the
    /// measured worst-case supported-eigenvector gaps on majority trees are
    /// ≈ 0.0387 at adv 2 (depth 1) and ≈ 0.0176 at adv 4 (depth 2), which
    /// certify any eps ≤ 0.070, so 0.05 keeps a ≥ 29% margin.
    pub eps: f64,
    /// Phase-estimation failure budget per run; drives the repetition count.
    pub delta_e: f64,
    /// Extra phase-estimation bits beyond ceil(log2(2π/δ_p)).
    pub t_pad: u32,
    /// Relative singular-value cutoff for rank and pseudoinverse decisions.
    pub rank_tol_rel: f64,
    /// Absolute tolerance when checking that witness-size routes agree and
    /// that program weights balance.
    pub balance_tol: f64,
    /// Kernel band: eigenvalues with |λ| ≤ kernel_tol_rel·‖A‖ count as zero.
    pub kernel_tol_rel: f64,
    /// Squared-amplitude threshold below which eigenvector support on a
    /// vertex counts as absent.
    pub supp_tol: f64,
    /// Small-λ probe points for output-ratio checks.
    pub lambda_probes: Vec<f64>,
    /// Largest supported EQUAL gate arity (coordinate count grows with k).
    pub equal_arity_cap: usize,
    /// Force the walk onto the full |V|² tensor space instead of the reduced
    /// edge space (cross-validation only; the spectra on the reachable
    /// subspace must agree).
    pub full_edge_space: bool,
    /// Seed for the sampled-measurement estimator mode.
    pub seed: u64,
    /// Shots per repetition in the sampled-measurement mode.
    pub shots: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            eps_w: 0.1,
            eps: 0.05,
            delta_e: 0.1,
            t_pad: 2,
            rank_tol_rel: 1e-10,
            balance_tol: 1e-9,
            kernel_tol_rel: 1e-8,
            supp_tol: 1e-8,
            lambda_probes: vec![1e-3, 1e-4, 1e-5],
            equal_arity_cap: 8,
            full_edge_space: false,
            seed: 0x0005_eed0_f0a1_1a55,
            shots: 512,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot parse config file {path}: {source}")]
    Parse {
        path: String,
        source: serde_json::Error,
    },
}

impl Config {
    /// Load from the file named by `SPANWALK_CONFIG`, or defaults if unset.
    pub fn from_env() -> Result<Config, ConfigError> {
        match std::env::var(CONFIG_ENV) {
            Ok(path) if !path.is_empty() => Config::from_file(Path::new(&path)),
            _ => Ok(Config::default()),
        }
    }

    pub fn from_file(path: &Path) -> Result<Config, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| ConfigError::Parse {
            path: path.display().to_string(),
            source,
        })
    }
}
