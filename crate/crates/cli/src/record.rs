//! Machine-readable run records and number formatting.

use std::fmt;

use clap::ValueEnum;
use concbound::optimizer::ScanResult;
use concbound::BoundReport;
use serde::{Deserialize, Serialize};

use crate::input::StateSource;

/// Partial-transpose eigenvalues below `-PPT_TOL` count as NPT.
pub const PPT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Bipartite aggregate bound on C^2.
    Obs1,
    /// Tripartite joint-operator bound on C_tau^2.
    Obs2,
    /// Tripartite bound from the three bipartite aggregates.
    Obs3,
    /// Two-qubit closed formula.
    Wootters,
    /// Partial-transpose minimum eigenvalue only.
    Ppt,
    /// Normalised all-generator bound on C.
    Total,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Self::Obs1 => "obs1",
            Self::Obs2 => "obs2",
            Self::Obs3 => "obs3",
            Self::Wootters => "wootters",
            Self::Ppt => "ppt",
            Self::Total => "total",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Entangled,
    Undetected,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Entangled => "ENTANGLED",
            Self::Undetected => "UNDETECTED",
        })
    }
}

/// Result of `bound`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundOutcome {
    pub mode: Mode,
    pub k: usize,
    /// Operator family used by `obs2`, or the split used by `obs1` on three parties.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operators: Option<String>,
    /// Lower bound on the squared concurrence; absent in `ppt` mode.
    pub bound_c_squared: Option<f64>,
    pub ppt_min_eig_worst_split: f64,
    pub tol_detect: f64,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<BoundReport>,
}

impl BoundOutcome {
    pub fn bound_c(&self) -> Option<f64> {
        self.bound_c_squared.map(|b| b.max(0.0).sqrt())
    }

    /// The verdict implied by the stored numbers.
    pub fn derive_verdict(mode: Mode, bound_c_squared: Option<f64>, ppt: f64, tol_detect: f64) -> Verdict {
        let detected = match (mode, bound_c_squared) {
            (Mode::Ppt, _) => ppt < -PPT_TOL,
            (_, Some(b)) => b > tol_detect,
            (_, None) => false,
        };
        if detected {
            Verdict::Entangled
        } else {
            Verdict::Undetected
        }
    }

    pub fn verdict_is_consistent(&self) -> bool {
        Self::derive_verdict(self.mode, self.bound_c_squared, self.ppt_min_eig_worst_split, self.tol_detect)
            == self.verdict
    }
}

/// One evaluated point of a scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub p: f64,
    /// Bound on `C^2`; absent for `ppt` scans.
    pub bound: Option<f64>,
    pub ppt_min_eig_worst_split: f64,
}

/// Result of `scan`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanOutcome {
    pub mode: Mode,
    pub k: usize,
    pub tol_p: f64,
    pub tol_detect: f64,
    pub scan: ScanResult,
    pub rows: Vec<ScanRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunResult {
    Bound(BoundOutcome),
    Scan(ScanOutcome),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub command: Vec<String>,
    pub input: StateSource,
    pub result: RunResult,
    pub version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl RunRecord {
    pub fn new(command: &[String], input: StateSource, result: RunResult) -> Self {
        let timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            command: command.to_vec(),
            input,
            result,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp,
        }
    }
}

/// `x` with 12 significant digits.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.11e}")
    }
}
