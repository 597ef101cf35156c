//! Run configuration: defaults, JSON file loading, field validation.

use std::fmt;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use theta_core::torus::TorusModulus;

/// Names of the verification suites, in report order.
pub const SUITE_NAMES: [&str; 7] = [
    "adiabatic",
    "cocycles",
    "curvature-forms",
    "holonomy",
    "lemma4",
    "p2p",
    "splitting",
];

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Degree δ of the reference bundle.
    #[serde(default = "default_delta")]
    pub delta: u32,
    /// Lattice shape τ as `[re, im]`.
    #[serde(default = "default_tau")]
    pub tau: [f64; 2],
    /// Target truncation error for theta evaluation.
    #[serde(default = "default_eps")]
    pub eps: f64,
    /// Trapezoid node counts `[n1, n2]`.
    #[serde(default = "default_quad")]
    pub quad: [usize; 2],
    /// Finite-difference step for adiabatic curvature.
    #[serde(default = "default_fd_step")]
    pub fd_step: f64,
    /// Side of the μ grid for field checks.
    #[serde(default = "default_grid")]
    pub grid: usize,
    /// Suites to run (`"all"` expands to every suite).
    #[serde(default = "default_suites")]
    pub suites: Vec<String>,
    /// Report destination; stdout when absent.
    #[serde(default)]
    pub out: Option<PathBuf>,
    /// Run suites concurrently (report order stays fixed by suite name).
    #[serde(default)]
    pub parallel: bool,
}

fn default_delta() -> u32 {
    2
}
fn default_tau() -> [f64; 2] {
    [0.0, 1.0]
}
fn default_eps() -> f64 {
    1e-14
}
fn default_quad() -> [usize; 2] {
    [64, 64]
}
fn default_fd_step() -> f64 {
    1e-3
}
fn default_grid() -> usize {
    5
}
fn default_suites() -> Vec<String> {
    vec!["all".to_string()]
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            delta: default_delta(),
            tau: default_tau(),
            eps: default_eps(),
            quad: default_quad(),
            fd_step: default_fd_step(),
            grid: default_grid(),
            suites: default_suites(),
            out: None,
            parallel: false,
        }
    }
}

/// A rejected configuration, with the offending field by name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub field: &'static str,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid {}: {}", self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.delta < 1 {
            return Err(ConfigError {
                field: "delta",
                message: "must satisfy delta >= 1".into(),
            });
        }
        if self.tau[1].is_nan() || self.tau[1] <= 0.0 || !self.tau.iter().all(|t| t.is_finite()) {
            return Err(ConfigError {
                field: "tau",
                message: "must satisfy Im(tau) > 0 with finite entries".into(),
            });
        }
        if !(self.eps > 0.0 && self.eps <= 1e-6) {
            return Err(ConfigError {
                field: "eps",
                message: "must lie in (0, 1e-6]".into(),
            });
        }
        if self.quad[0] < 16 || self.quad[1] < 16 {
            return Err(ConfigError {
                field: "quad",
                message: "node counts must be at least 16".into(),
            });
        }
        if !(self.fd_step > 0.0 && self.fd_step <= 0.1) {
            return Err(ConfigError {
                field: "fd_step",
                message: "must lie in (0, 0.1]".into(),
            });
        }
        if self.grid < 2 {
            return Err(ConfigError {
                field: "grid",
                message: "grid side must be at least 2".into(),
            });
        }
        if self.suites.is_empty() {
            return Err(ConfigError {
                field: "suites",
                message: "at least one suite must be requested".into(),
            });
        }
        for s in &self.suites {
            if s != "all" && !SUITE_NAMES.contains(&s.as_str()) {
                return Err(ConfigError {
                    field: "suites",
                    message: format!(
                        "unknown suite {s:?}; known: {} and \"all\"",
                        SUITE_NAMES.join(", ")
                    ),
                });
            }
        }
        Ok(())
    }

    pub fn modulus(&self) -> TorusModulus {
        TorusModulus::new(self.delta, Complex64::new(self.tau[0], self.tau[1]))
            .expect("validated config")
    }

    /// The requested suites expanded and sorted by name.
    pub fn selected_suites(&self) -> Vec<&'static str> {
        let mut out: Vec<&'static str> = if self.suites.iter().any(|s| s == "all") {
            SUITE_NAMES.to_vec()
        } else {
            SUITE_NAMES
                .iter()
                .copied()
                .filter(|n| self.suites.iter().any(|s| s == n))
                .collect()
        };
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn from_file(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let cfg: RunConfig = serde_json::from_str(&text)?;
        Ok(cfg)
    }
}
