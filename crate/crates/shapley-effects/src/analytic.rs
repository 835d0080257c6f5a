//! Closed-form value functions and exact effects for test models.
//!
//! These games are the ground truth the estimators are judged
//! against. The exact pipeline deliberately reuses the production
//! inversion and weighting code, so oracle tests double as code-path
//! tests; the genuinely independent checks (dense lattice inversion,
//! brute-force permutation enumeration) live in the test suites.

use crate::error::{Error, Result};
use crate::moebius::{self, MoebiusTable, OwenBounds, ShapleyEffects};
use crate::subset::SubsetMask;
use crate::value_table::ValueTable;

/// Exact variance decomposition constants of the Ishigami function
/// with coefficients 7 and 1/10, inputs uniform on `(-pi, pi)`.
///
/// Derivation: averaging over `X3` leaves `sin(X1) (1 + pi^4/50)`, so
/// the first-order variance of `X1` is half the squared coefficient
/// (the variance of `sin` over a full period is one half). The
/// `7 sin^2(X2)` term contributes `49/8` on its own and interacts with
/// nothing. What remains of the first term is
/// `sin(X1) (X3^4 - pi^4/5)/10`, a pure two-factor interaction whose
/// variance is `pi^8 (1/18 - 1/50) / 100`. The full derivation is
/// worked through in the guide's benchmarks chapter.
#[derive(Clone, Copy, Debug)]
pub struct IshigamiAnova {
    /// First-order variance of input 1.
    pub v1: f64,
    /// First-order variance of input 2.
    pub v2: f64,
    /// Interaction variance of inputs 1 and 3.
    pub v13: f64,
}

impl IshigamiAnova {
    pub fn derive() -> Self {
        let pi4 = std::f64::consts::PI.powi(4);
        let pi8 = pi4 * pi4;
        IshigamiAnova {
            v1: 0.5 * (1.0 + pi4 / 50.0).powi(2),
            v2: 49.0 / 8.0,
            v13: pi8 * (1.0 / 18.0 - 1.0 / 50.0) / 100.0,
        }
    }

    pub fn total(&self) -> f64 {
        self.v1 + self.v2 + self.v13
    }
}

/// Total output variance of the Ishigami benchmark (about 13.84).
pub fn ishigami_total_variance() -> f64 {
    IshigamiAnova::derive().total()
}

/// An exact coalition-worth function over `k` inputs.
///
/// Values are in absolute variance units; the empty set is zero by
/// convention and never stored explicitly.
#[derive(Clone, Debug)]
pub struct AnalyticGame {
    k: usize,
    /// Indexed by mask bits, entry 0 is zero.
    values: Vec<f64>,
    pub note: String,
}

impl AnalyticGame {
    /// Build from an explicit per-mask value function.
    pub fn from_fn(k: usize, note: &str, value: impl Fn(SubsetMask) -> f64) -> Self {
        let mut values = vec![0.0; 1 << k];
        for mask in SubsetMask::all_nonempty(k) {
            values[mask.index()] = value(mask);
        }
        AnalyticGame {
            k,
            values,
            note: note.to_string(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn value(&self, mask: SubsetMask) -> f64 {
        self.values[mask.index()]
    }

    /// Grand-coalition value (total explained variance).
    pub fn total(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// The dual value: total minus the complement's value.
    pub fn dual_value(&self, mask: SubsetMask) -> f64 {
        match mask.complement(self.k) {
            Some(comp) => self.total() - self.value(comp),
            None => self.total(),
        }
    }
}

/// Exact g-function game: `val(alpha) = prod_{i in alpha}(1 + V_i) - 1`
/// with `V_i = (1 + a_i)^-2 / 3`.
pub fn gfunction_game(a: &[f64]) -> AnalyticGame {
    assert!(a.iter().all(|&v| v >= 0.0), "coefficients must be nonnegative");
    let v: Vec<f64> = a.iter().map(|&ai| (1.0 + ai).powi(-2) / 3.0).collect();
    AnalyticGame::from_fn(a.len(), "g-function product game", |mask| {
        mask.members().map(|i| 1.0 + v[i]).product::<f64>() - 1.0
    })
}

/// Exact Ishigami game over four inputs (the fourth inert): variance
/// mass sits at `{1}`, `{2}`, and `{1,3}` only.
pub fn ishigami_game() -> AnalyticGame {
    let anova = IshigamiAnova::derive();
    AnalyticGame::from_fn(4, "ishigami closed-form game", move |mask| {
        let mut v = 0.0;
        if mask.contains(0) {
            v += anova.v1;
        }
        if mask.contains(1) {
            v += anova.v2;
        }
        if mask.contains(0) && mask.contains(2) {
            v += anova.v13;
        }
        v
    })
}

/// Exact effects of an analytic game, computed through the production
/// Möbius pipeline (noise-free input, same code path).
#[derive(Clone, Debug)]
pub struct ExactEffects {
    pub phi: Vec<f64>,
    /// Effects recomputed from the dual-value row; equal to `phi` up to
    /// rounding, kept as a consistency diagnostic.
    pub phi_dual: Vec<f64>,
    pub first_order: Vec<f64>,
    pub total: Vec<f64>,
    moebius: MoebiusTable,
}

impl ExactEffects {
    pub fn shapley_owen(&self, group: SubsetMask) -> f64 {
        moebius::shapley_owen(&self.moebius, group)
    }

    pub fn owen_bounds(&self, group: SubsetMask) -> OwenBounds {
        moebius::owen_bounds(&self.moebius, group)
    }

    pub fn moebius(&self) -> &MoebiusTable {
        &self.moebius
    }
}

/// Cutoff for exact-game evaluation (the lattice has `2^k` entries).
pub const MAX_EXACT_INPUTS: usize = 20;

/// Normalized exact Shapley, first-order and total effects of a game.
pub fn exact_shapley(game: &AnalyticGame) -> Result<ExactEffects> {
    if game.k() > MAX_EXACT_INPUTS {
        return Err(Error::TooManyInputs {
            k: game.k(),
            limit: MAX_EXACT_INPUTS,
        });
    }
    let len = 1usize << game.k();
    let mut h_sub = vec![0.0; len];
    let mut h_sup = vec![0.0; len];
    for mask in SubsetMask::all_nonempty(game.k()) {
        h_sub[mask.index()] = game.value(mask);
        h_sup[mask.index()] = game.dual_value(mask);
    }
    let table = ValueTable::from_parts(game.k(), h_sup, h_sub, game.total())?;
    let moebius_table = moebius::moebius_invert(&table);
    let ShapleyEffects {
        from_subset,
        from_superset,
    } = moebius::shapley_effects(&moebius_table);
    let (first_order, total) = moebius::first_and_total(&moebius_table);
    Ok(ExactEffects {
        phi: from_subset,
        phi_dual: from_superset,
        first_order,
        total,
        moebius: moebius_table,
    })
}

/// Mean over replicates of the summed squared estimation errors.
///
/// Each row of `estimates` is one replicate's per-input estimates;
/// `truth` is the exact target vector.
pub fn quadratic_risk(estimates: &[Vec<f64>], truth: &[f64]) -> f64 {
    assert!(!estimates.is_empty(), "need at least one replicate");
    let mut sum = 0.0;
    for replicate in estimates {
        assert_eq!(replicate.len(), truth.len(), "replicate length mismatch");
        sum += replicate
            .iter()
            .zip(truth)
            .map(|(e, t)| (e - t) * (e - t))
            .sum::<f64>();
    }
    sum / estimates.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gfunction_component_variances() {
        let game = gfunction_game(&[0.0, 0.0]);
        // a_i = 0 gives V_i = 1/3.
        let v1 = game.value(SubsetMask::singleton(0));
        assert!((v1 - 1.0 / 3.0).abs() < 1e-15);
        // Pair value from the product formula: (4/3)^2 - 1 = 7/9.
        let pair = game.value(SubsetMask::full(2));
        assert!((pair - 7.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn ishigami_game_matches_reported_effects() {
        let game = ishigami_game();
        let exact = exact_shapley(&game).unwrap();
        let expect = [0.4358, 0.4424, 0.1218, 0.0];
        for (i, e) in expect.into_iter().enumerate() {
            assert!(
                (exact.phi[i] - e).abs() < 2e-4,
                "phi[{i}] = {} vs {e}",
                exact.phi[i]
            );
        }
        let pair = SubsetMask::from_inputs(&[0, 2]).unwrap();
        assert!((exact.shapley_owen(pair) - 0.2437).abs() < 2e-4);
    }

    #[test]
    fn ishigami_masses_partition_variance() {
        let anova = IshigamiAnova::derive();
        let game = ishigami_game();
        let exact = exact_shapley(&game).unwrap();
        let s1 = exact.first_order[0];
        let s2 = exact.first_order[1];
        let upsilon13 = exact
            .owen_bounds(SubsetMask::from_inputs(&[0, 2]).unwrap())
            .upper;
        assert!((s1 + s2 + upsilon13 - 1.0).abs() < 1e-12);
        assert!((anova.total() - 13.84).abs() < 0.01);
    }

    #[test]
    fn ishigami_mean_bound_is_tight_for_input_one() {
        // Input 1 appears in exactly one second-order interaction, so
        // its Shapley effect equals the mean of first and total.
        let exact = exact_shapley(&ishigami_game()).unwrap();
        let mid = 0.5 * (exact.first_order[0] + exact.total[0]);
        assert!((exact.phi[0] - mid).abs() < 1e-12);
    }

    #[test]
    fn ishigami_first_and_total_structure() {
        let exact = exact_shapley(&ishigami_game()).unwrap();
        // Input 2 interacts with nothing: S = T = phi.
        assert!((exact.first_order[1] - 0.4424).abs() < 2e-4);
        assert!((exact.total[1] - exact.first_order[1]).abs() < 1e-12);
        // Input 3 acts only through the {1,3} interaction.
        assert_eq!(exact.first_order[2], 0.0);
        assert!((exact.total[2] - 0.2437).abs() < 2e-4);
        // The dummy has no mass anywhere.
        assert_eq!(exact.first_order[3], 0.0);
        assert_eq!(exact.total[3], 0.0);
    }

    #[test]
    fn dual_route_matches_primal_route() {
        let exact = exact_shapley(&gfunction_game(&[0.0, 1.0, 4.0])).unwrap();
        for i in 0..3 {
            assert!((exact.phi[i] - exact.phi_dual[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn single_player_game_is_fully_attributed() {
        let game = AnalyticGame::from_fn(1, "one player", |_| 2.5);
        let exact = exact_shapley(&game).unwrap();
        assert!((exact.phi[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn symmetric_players_share_equally() {
        let game = AnalyticGame::from_fn(2, "symmetric", |mask| {
            if mask.cardinality() == 1 {
                0.3
            } else {
                1.0
            }
        });
        let exact = exact_shapley(&game).unwrap();
        assert_eq!(exact.phi[0], exact.phi[1]);
    }

    #[test]
    fn quadratic_risk_basics() {
        let truth = vec![0.5, 0.25, 0.25];
        assert_eq!(quadratic_risk(&[truth.clone(), truth.clone()], &truth), 0.0);
        let off = vec![0.5 + 0.02, 0.25, 0.25];
        let risk = quadratic_risk(&[off], &truth);
        assert!((risk - 0.0004).abs() < 1e-15);
    }

    #[test]
    fn pareto_and_bracket_hold_exactly() {
        let exact = exact_shapley(&gfunction_game(&[0.0, 0.0, 3.0, 9.0])).unwrap();
        let sum: f64 = exact.phi.iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        for i in 0..4 {
            assert!(exact.first_order[i] <= exact.phi[i] + 1e-12);
            assert!(exact.phi[i] <= exact.total[i] + 1e-12);
        }
    }
}
