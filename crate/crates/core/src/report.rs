use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::generators::TripartiteSplit;
use crate::numerics::C64;
use crate::optimizer::OptimizerConfig;

/// Which inequality a report aggregates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// Bipartite `C^2 >= N/(k^2 C(N,k)) sum Delta_k^2`.
    Bipartite,
    /// Tripartite joint-operator bound `C_tau^2 >= N/(6 k^2 C(N,k)) sum (Delta^tot_k)^2`.
    JointTripartite,
    /// Tripartite bound from the three bipartite aggregates (halved).
    SplitTripartite,
    /// `C >= Delta^tot` with a unit-norm coefficient vector over all generators.
    NormalizedTotal,
}

/// Coefficients used for one subset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coefficients {
    Single(Vec<C64>),
    Triple { u: Vec<C64>, v: Vec<C64>, w: Vec<C64> },
}

/// `Delta` achieved for one subset `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<TripartiteSplit>,
    pub subset: Vec<usize>,
    pub coefficients: Coefficients,
    pub delta: f64,
}

/// Aggregated lower bound on a squared concurrence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub bound_on_c_squared: f64,
    pub k: usize,
    /// Number of operators `N` entering the prefactor.
    pub n_generators: usize,
    pub prefactor: f64,
    pub per_subset: Vec<SubsetEntry>,
    #[serde(default)]
    pub config: Option<OptimizerConfig>,
    /// Seconds; filled in by callers that have a clock.
    #[serde(default)]
    pub wall_time: Option<f64>,
}

impl BoundReport {
    pub fn bound_on_c(&self) -> f64 {
        self.bound_on_c_squared.max(0.0).sqrt()
    }

    /// `prefactor * sum Delta^2` from the stored per-subset values.
    pub fn recompute(&self) -> f64 {
        self.prefactor * self.per_subset.iter().map(|e| e.delta * e.delta).sum::<f64>()
    }

    pub fn detects(&self, tol_detect: f64) -> bool {
        self.bound_on_c_squared > tol_detect
    }
}
