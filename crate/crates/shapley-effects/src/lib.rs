//! Variance-based Shapley and Shapley-Owen sensitivity effects for
//! black-box simulators.
//!
//! A Shapley effect attributes output variance to a model input the
//! way a cooperative game splits payoff among players: the coalition
//! worth of an input subset is the fraction of output variance its
//! inputs explain, and each input receives its averaged marginal
//! contribution. The effects are nonnegative, sum to one, and remain
//! meaningful when inputs are statistically dependent — which is where
//! plain first-order and total Sobol' indices stop telling a coherent
//! story.
//!
//! The crate estimates all `2^k - 1` coalition values from one paired
//! pick'n'freeze design (two Sobol' sample blocks plus one mixed block
//! per subset) and inverts them on the subset lattice into Möbius
//! inverses, from which Shapley effects, Shapley-Owen group effects,
//! first-order and total effects all fall out as weighted sums. A
//! memoized permutation engine computes the same effects along all
//! `k!` input orderings as an independent cross-check. Dependent
//! inputs are handled with a Gaussian copula on Spearman rank
//! correlations and triangular conditional sampling.
//!
//! # Quick start
//!
//! ```
//! use shapley_effects::{
//!     models, AnalysisOptions, InputTransform, OwenSelection, run_shapley,
//! };
//!
//! let setup = models::by_name("ishigami")?;
//! let transform = InputTransform::independent(setup.marginals)?;
//! let options = AnalysisOptions {
//!     owen: OwenSelection::AllPairs,
//!     ..Default::default()
//! };
//! let report = run_shapley(&setup.model, &transform, 1024, 0, &options)?;
//!
//! // Effects are normalized: they sum to one.
//! let sum: f64 = report.phi_subset.iter().sum();
//! assert!((sum - 1.0).abs() < 1e-10);
//! // The deliberately inert fourth input is identified exactly.
//! assert_eq!(report.phi_subset[3], 0.0);
//! # Ok::<(), shapley_effects::Error>(())
//! ```

// Validation uses negated comparisons (`!(x > 0.0)`) so NaN fails
// closed; index-based loops stay where several arrays advance in
// lockstep.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod analysis;
pub mod analytic;
pub mod copula;
pub mod error;
pub mod marginals;
pub mod matrix;
pub mod models;
pub mod moebius;
mod norm;
pub mod permutation;
pub mod pick_freeze;
pub mod qmc;
pub mod report;
pub mod subset;
pub mod value_table;

pub use analysis::{run_shapley, AnalysisOptions, OwenSelection};
pub use analytic::{
    exact_shapley, gfunction_game, ishigami_game, quadratic_risk, AnalyticGame, ExactEffects,
};
pub use copula::{DependenceSpec, InputTransform};
pub use error::{Error, Result};
pub use marginals::{MarginalFamily, MarginalSpec, Truncation};
pub use matrix::Matrix;
pub use moebius::{
    first_and_total, moebius_invert, owen_bounds, reconstruct_value, shapley_effects,
    shapley_owen, MoebiusTable, OwenBounds, ShapleyEffects,
};
pub use permutation::{
    for_each_permutation, permutation_shapley, permutation_shapley_from_table, MemoStats,
    PermutationRun,
};
pub use pick_freeze::{evaluate_base, EvaluatedDesign, Model, ModelHandle};
pub use qmc::{generate_design, UniformDesign};
pub use report::{Algorithm, LatticeTables, ShapleyReport};
pub use subset::{SubsetMask, MAX_INPUTS};
pub use value_table::{
    build_value_table, build_value_table_with, substitute_superset, SupersetEstimator, ValueTable,
};

/// Doc-tests for the guide: every Rust snippet in the book compiles
/// and runs against the current API.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/shapley-and-moebius.md")]
    mod shapley_and_moebius {}
    #[doc = include_str!("../../../book/src/estimation.md")]
    mod estimation {}
    #[doc = include_str!("../../../book/src/dependence.md")]
    mod dependence {}
    #[doc = include_str!("../../../book/src/benchmarks.md")]
    mod benchmarks {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
