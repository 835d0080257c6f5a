//! Structured result of one sensitivity run.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Which engine produced the Shapley effects.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    /// Value table for every subset, inverted on the lattice.
    Moebius,
    /// Marginal contributions over all permutations, memoized.
    Permutation,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Algorithm::Moebius => write!(f, "moebius"),
            Algorithm::Permutation => write!(f, "permutation"),
        }
    }
}

/// Full lattice rows for one run, indexed by subset mask bits (entry
/// 0, the empty set, is zero). At `2^k` entries per row these are
/// emitted only on request.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeTables {
    /// Subset-importance estimates, absolute variance units.
    pub value_subset: Vec<f64>,
    /// Dual-value estimates, absolute variance units.
    pub value_superset: Vec<f64>,
    /// Normalized Möbius inverses of the subset row.
    pub moebius_subset: Vec<f64>,
    /// Normalized Möbius inverses of the superset row.
    pub moebius_superset: Vec<f64>,
}

/// Everything one analysis run produces.
///
/// Effects are normalized so the subset-row Shapley effects sum to the
/// grand total of one; `var_y` makes absolute variance contributions
/// recoverable as `phi * var_y`. Negative entries can occur at finite
/// sample size for the cross-covariance estimator; they are reported
/// raw and only counted in `negative_subset_entries`, never clamped in
/// computation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ShapleyReport {
    pub model: String,
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub algorithm: Algorithm,
    /// Unbiased sample variance of the B-block outputs.
    pub var_y: f64,
    /// Model evaluations spent.
    pub evals: u64,
    /// Shapley effects from the subset-importance row.
    pub phi_subset: Vec<f64>,
    /// Shapley effects from the superset (dual value) row.
    pub phi_superset: Vec<f64>,
    /// First-order effects (singleton subset values).
    pub first_order: Vec<f64>,
    /// Total effects.
    pub total: Vec<f64>,
    /// Shapley-Owen group effects keyed by one-based member label
    /// (for example `"1+3"`), from the subset row.
    pub owen: BTreeMap<String, f64>,
    pub dependent: bool,
    pub superset_substituted: bool,
    pub negative_subset_entries: usize,
    pub warnings: Vec<String>,
    /// Full per-mask tables; present only when requested (the lattice
    /// algorithm only — the permutation walk never builds them).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tables: Option<LatticeTables>,
}

impl ShapleyReport {
    /// Absolute-variance view of the subset-row Shapley effects.
    pub fn phi_subset_absolute(&self) -> Vec<f64> {
        self.phi_subset.iter().map(|p| p * self.var_y).collect()
    }
}
