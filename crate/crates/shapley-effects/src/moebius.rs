//! Möbius inversion on the subset lattice and the effects derived
//! from it.
//!
//! The value function and its Möbius inverse are related by
//! `val(alpha) = sum over beta subset of alpha of mob(beta)`, so
//! `mob(alpha) = sum over beta subset of alpha of
//! (-1)^(|alpha| - |beta|) val(beta)`. Under binary subset coding the
//! inclusion matrix is Pascal's triangle modulo two (the Sierpinski
//! gasket), and the inversion never needs that matrix: it factors into
//! one in-place difference pass per input bit,
//!
//! ```text
//! for each bit b:                     // 2^(k-1) updates per bit
//!     f[mask] -= f[mask without b]    // for every mask containing b
//! ```
//!
//! which is `O(k 2^k)` and has an important exactness property: if an
//! input is inert, the table is constant along its bit, every
//! difference along that bit is an exact floating-point zero, and all
//! downstream effects of that input come out bitwise zero rather than
//! small.
//!
//! From the Möbius inverses everything else is a weighted lattice sum:
//! Shapley effects weight each inverse by the reciprocal coalition
//! size, Shapley-Owen group effects generalize the weight to
//! `1 / (|beta| - |alpha| + 1)` over supersets, and first-order/total
//! effects are the singleton mass and the full containing sum.

use crate::subset::SubsetMask;
use crate::value_table::ValueTable;

/// Möbius inverses of both estimator rows, each normalized by its own
/// grand-total value so the inverses of a row sum to exactly one.
#[derive(Clone, Debug)]
pub struct MoebiusTable {
    k: usize,
    /// Indexed by mask bits; entry 0 is zero.
    m_sup: Vec<f64>,
    m_sub: Vec<f64>,
    var_y: f64,
    dependent: bool,
    superset_substituted: bool,
}

/// In-place subset-difference transform: turns values into Möbius
/// inverses. `f` is indexed by mask bits and must have length `2^k`
/// with `f[0] = 0`.
fn moebius_transform_in_place(f: &mut [f64], k: usize) {
    for b in 0..k {
        let bit = 1usize << b;
        for mask in 0..f.len() {
            if mask & bit != 0 {
                f[mask] -= f[mask ^ bit];
            }
        }
    }
}

/// Invert a complete value table to Möbius inverses.
///
/// Total function: every complete table has a unique inverse. The raw
/// rows are inverted first and normalized by their grand totals after,
/// so exact structure in the estimates (inert inputs, exactly
/// representable masses) survives the division untouched.
pub fn moebius_invert(table: &ValueTable) -> MoebiusTable {
    let k = table.k();
    let mut m_sup = table.superset_row().to_vec();
    let mut m_sub = table.subset_row().to_vec();
    moebius_transform_in_place(&mut m_sup, k);
    moebius_transform_in_place(&mut m_sub, k);
    let sup_scale = table.superset_scale();
    let sub_scale = table.subset_scale();
    for v in &mut m_sup {
        *v /= sup_scale;
    }
    for v in &mut m_sub {
        *v /= sub_scale;
    }
    MoebiusTable {
        k,
        m_sup,
        m_sub,
        var_y: table.var_y(),
        dependent: table.dependent(),
        superset_substituted: table.superset_substituted(),
    }
}

impl MoebiusTable {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn var_y(&self) -> f64 {
        self.var_y
    }

    pub fn dependent(&self) -> bool {
        self.dependent
    }

    pub fn superset_substituted(&self) -> bool {
        self.superset_substituted
    }

    /// Normalized Möbius inverse of the superset (dual value) row.
    pub fn superset(&self, mask: SubsetMask) -> f64 {
        self.m_sup[mask.index()]
    }

    /// Normalized Möbius inverse of the subset row. Under independent
    /// inputs this is the Sobol' interaction index of the subset.
    pub fn subset(&self, mask: SubsetMask) -> f64 {
        self.m_sub[mask.index()]
    }

    /// The whole superset-row inverse table, indexed by mask bits.
    pub fn superset_row(&self) -> &[f64] {
        &self.m_sup
    }

    /// The whole subset-row inverse table, indexed by mask bits.
    pub fn subset_row(&self) -> &[f64] {
        &self.m_sub
    }
}

/// Shapley effects computed from each estimator row.
#[derive(Clone, Debug, PartialEq)]
pub struct ShapleyEffects {
    /// From the subset-importance row.
    pub from_subset: Vec<f64>,
    /// From the superset (dual value) row. Under dependence this row
    /// comes from the substitute estimator.
    pub from_superset: Vec<f64>,
}

/// Per-input Shapley effects: each Möbius inverse, split evenly among
/// the members of its coalition.
pub fn shapley_effects(m: &MoebiusTable) -> ShapleyEffects {
    let k = m.k;
    let mut from_subset = vec![0.0; k];
    let mut from_superset = vec![0.0; k];
    for mask in SubsetMask::all_nonempty(k) {
        let weight = 1.0 / mask.cardinality() as f64;
        let w_sub = m.m_sub[mask.index()] * weight;
        let w_sup = m.m_sup[mask.index()] * weight;
        for i in mask.members() {
            from_subset[i] += w_sub;
            from_superset[i] += w_sup;
        }
    }
    ShapleyEffects {
        from_subset,
        from_superset,
    }
}

/// Shapley-Owen effect of an input group, from the subset row.
///
/// Generalizes the per-input effect: every Möbius inverse of a
/// superset of the group contributes, weighted by
/// `1 / (|beta| - |alpha| + 1)`. At singletons this coincides exactly
/// with the per-input Shapley effect.
pub fn shapley_owen(m: &MoebiusTable, group: SubsetMask) -> f64 {
    let a = group.cardinality() as f64;
    group
        .supersets(m.k)
        .map(|beta| m.m_sub[beta.index()] / (beta.cardinality() as f64 - a + 1.0))
        .sum()
}

/// First-order and total effects from the subset row: the singleton
/// Möbius mass, and the sum of all containing masses.
pub fn first_and_total(m: &MoebiusTable) -> (Vec<f64>, Vec<f64>) {
    let k = m.k;
    let mut first = vec![0.0; k];
    let mut total = vec![0.0; k];
    for (i, f) in first.iter_mut().enumerate() {
        *f = m.m_sub[SubsetMask::singleton(i).index()];
    }
    for mask in SubsetMask::all_nonempty(k) {
        let v = m.m_sub[mask.index()];
        for i in mask.members() {
            total[i] += v;
        }
    }
    (first, total)
}

/// Bounds for a Shapley-Owen group effect.
///
/// `lower` is the group's own Möbius mass (its Sobol' index under
/// independence), `upper` is the superset importance (sum over all
/// containing masses), and `sharp_upper` is their midpoint. The bounds
/// are only guaranteed when all Möbius inverses are nonnegative;
/// `moebius_nonnegative` reports whether that held, and the values are
/// computed either way.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OwenBounds {
    pub lower: f64,
    pub upper: f64,
    pub sharp_upper: f64,
    pub moebius_nonnegative: bool,
}

pub fn owen_bounds(m: &MoebiusTable, group: SubsetMask) -> OwenBounds {
    let lower = m.m_sub[group.index()];
    let upper: f64 = group
        .supersets(m.k)
        .map(|beta| m.m_sub[beta.index()])
        .sum();
    let moebius_nonnegative = m.m_sub.iter().skip(1).all(|&v| v >= 0.0);
    OwenBounds {
        lower,
        upper,
        sharp_upper: 0.5 * (lower + upper),
        moebius_nonnegative,
    }
}

/// Rebuild a value from the inverses by the defining identity
/// `val(alpha) = sum over beta subset of alpha of mob(beta)`.
/// Returns `(superset_row, subset_row)` values, normalized.
pub fn reconstruct_value(m: &MoebiusTable, mask: SubsetMask) -> (f64, f64) {
    let mut sup = 0.0;
    let mut sub = 0.0;
    for beta in mask.subsets() {
        sup += m.m_sup[beta.index()];
        sub += m.m_sub[beta.index()];
    }
    (sup, sub)
}
