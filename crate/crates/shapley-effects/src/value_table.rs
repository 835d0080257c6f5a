//! The two value-function estimates per input subset.
//!
//! For every non-empty subset the mixed block yields two estimates of
//! coalition worth:
//!
//! * the squared-difference (Jansen) form `mean((yi - ya)^2) / 2`,
//!   which estimates the expected conditional variance given the
//!   complement — the dual value, here called the superset row;
//! * the cross-covariance (Sobol'/Saltelli) form
//!   `dot(yb, yi - ya) / n`, which estimates the variance of the
//!   conditional expectation — subset importance, the subset row.
//!
//! Under independent inputs the two rows lead to the same Shapley
//! effects. Under dependence the squared-difference form stops
//! estimating anything useful, because the unmixed columns of the
//! mixed block are no longer independent of A's; the
//! cross-covariance form `dot(yb, yb - yi) / n` still works and
//! estimates the dual value of the complementary subset, so the
//! superset row is rebuilt from those values via a complement-index
//! remap ([`substitute_superset`]).

use rayon::prelude::*;

use crate::copula::InputTransform;
use crate::error::{Error, Result};
use crate::pick_freeze::EvaluatedDesign;
use crate::subset::{SubsetMask, MAX_INPUTS};

/// How to fill the superset (dual value) row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SupersetEstimator {
    /// Jansen under independence, complement substitute under
    /// dependence.
    Auto,
    /// Force the squared-difference form. Under dependence this row is
    /// known-invalid; it exists for diagnostics.
    Jansen,
    /// Force the complement-remapped cross-covariance form.
    ComplementSubstitute,
}

/// Per-mask value-function estimates plus the total-variance estimate.
#[derive(Clone, Debug)]
pub struct ValueTable {
    k: usize,
    /// Superset row, indexed by mask bits; entry 0 unused.
    h_sup: Vec<f64>,
    /// Subset row, indexed by mask bits; entry 0 unused.
    h_sub: Vec<f64>,
    var_y: f64,
    dependent: bool,
    superset_substituted: bool,
    evals: u64,
}

impl ValueTable {
    /// Wrap externally computed rows (analytic games, synthetic test
    /// tables). Arrays are indexed by mask bits and must have length
    /// `2^k` with entry 0 equal to zero.
    pub fn from_parts(k: usize, h_sup: Vec<f64>, h_sub: Vec<f64>, var_y: f64) -> Result<Self> {
        if k == 0 || k > MAX_INPUTS {
            return Err(Error::TooManyInputs {
                k,
                limit: MAX_INPUTS,
            });
        }
        let len = 1usize << k;
        assert_eq!(h_sup.len(), len, "superset row length");
        assert_eq!(h_sub.len(), len, "subset row length");
        assert_eq!(h_sup[0], 0.0, "empty-set entry must be zero");
        assert_eq!(h_sub[0], 0.0, "empty-set entry must be zero");
        if !(var_y > 0.0) {
            return Err(Error::DegenerateVariance);
        }
        Ok(ValueTable {
            k,
            h_sup,
            h_sub,
            var_y,
            dependent: false,
            superset_substituted: false,
            evals: 0,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Unbiased sample variance of the B-block outputs, used for all
    /// normalizations. The full-mask subset entry is kept as a
    /// diagnostic and should agree with this up to estimator noise.
    pub fn var_y(&self) -> f64 {
        self.var_y
    }

    pub fn dependent(&self) -> bool {
        self.dependent
    }

    pub fn superset_substituted(&self) -> bool {
        self.superset_substituted
    }

    /// Model evaluations spent building this table (0 for synthetic
    /// tables).
    pub fn evals(&self) -> u64 {
        self.evals
    }

    /// Superset-row (dual value) estimate, absolute units.
    pub fn superset(&self, mask: SubsetMask) -> f64 {
        self.h_sup[mask.index()]
    }

    /// Subset-row (subset importance) estimate, absolute units.
    pub fn subset(&self, mask: SubsetMask) -> f64 {
        self.h_sub[mask.index()]
    }

    /// Subset cardinality for a mask (table helper).
    pub fn cardinality(&self, mask: SubsetMask) -> u32 {
        mask.cardinality()
    }

    /// Normalization constant of the subset row: its own grand-total
    /// (full-mask) estimate, so that normalized Shapley effects sum to
    /// exactly one. Falls back to the variance estimate in the
    /// degenerate case of a non-positive full-mask entry.
    pub fn subset_scale(&self) -> f64 {
        let full = self.h_sub[self.h_sub.len() - 1];
        if full > 0.0 {
            full
        } else {
            self.var_y
        }
    }

    /// Normalization constant of the superset row; see
    /// [`subset_scale`](Self::subset_scale). Under the dependent-case
    /// substitution the full-mask entry is the variance estimate
    /// itself.
    pub fn superset_scale(&self) -> f64 {
        let full = self.h_sup[self.h_sup.len() - 1];
        if full > 0.0 {
            full
        } else {
            self.var_y
        }
    }

    /// Raw superset row, indexed by mask bits (entry 0 is zero).
    pub fn superset_row(&self) -> &[f64] {
        &self.h_sup
    }

    /// Raw subset row, indexed by mask bits (entry 0 is zero).
    pub fn subset_row(&self) -> &[f64] {
        &self.h_sub
    }

    /// Count of negative subset-row entries. Negative values are
    /// legitimate finite-sample behavior of the cross-covariance
    /// estimator; they are flagged in reports but never altered here,
    /// since the inversion must see raw values.
    pub fn negative_subset_entries(&self) -> usize {
        self.h_sub.iter().skip(1).filter(|&&v| v < 0.0).count()
    }
}

/// Complement-index remap of the dependent-case raw estimates.
///
/// `raw[j] = dot(yb, yb - yj) / n` estimates the dual value of the
/// complement of `j`, so the superset row at mask `i` is `raw` at the
/// complement index `2^k - 1 - i`. The full mask has no complement in
/// the table; its dual value is the total variance.
pub fn substitute_superset(raw: &[f64], k: usize, var_y: f64) -> Vec<f64> {
    let full = (1usize << k) - 1;
    assert_eq!(raw.len(), full + 1, "raw row length");
    let mut h_sup = vec![0.0; full + 1];
    for i in 1..full {
        h_sup[i] = raw[full - i];
    }
    h_sup[full] = var_y;
    h_sup
}

/// Build the full value table from an evaluated design.
///
/// Equivalent to [`build_value_table_with`] with
/// [`SupersetEstimator::Auto`].
pub fn build_value_table(
    design: &EvaluatedDesign,
    transform: &InputTransform,
) -> Result<ValueTable> {
    build_value_table_with(design, transform, SupersetEstimator::Auto)
}

/// Build the full value table, choosing how the superset row is
/// estimated.
///
/// Materializes the mixed block for every non-empty mask except the
/// full set (which reuses the B block), in parallel across masks; no
/// more than one block per worker is alive at a time.
pub fn build_value_table_with(
    design: &EvaluatedDesign,
    transform: &InputTransform,
    mode: SupersetEstimator,
) -> Result<ValueTable> {
    let k = design.k();
    if k == 0 || k > MAX_INPUTS {
        return Err(Error::TooManyInputs {
            k,
            limit: MAX_INPUTS,
        });
    }
    let n = design.n();
    let nf = n as f64;
    let full = (1usize << k) - 1;
    let ya = design.ya();
    let yb = design.yb();

    let mean_b: f64 = yb.iter().sum::<f64>() / nf;
    let var_y: f64 = yb.iter().map(|y| (y - mean_b).powi(2)).sum::<f64>() / (nf - 1.0);
    if !(var_y > 0.0) {
        return Err(Error::DegenerateVariance);
    }

    // Per mask: Jansen, Sobol'/Saltelli, and the complement-dual raw
    // estimate, all in absolute units.
    let sums = |yi: &[f64]| -> (f64, f64, f64) {
        let mut sq = 0.0;
        let mut cross = 0.0;
        let mut raw = 0.0;
        for i in 0..n {
            let d = yi[i] - ya[i];
            sq += d * d;
            cross += yb[i] * d;
            raw += yb[i] * (yb[i] - yi[i]);
        }
        (sq / (2.0 * nf), cross / nf, raw / nf)
    };

    let body: Vec<(f64, f64, f64)> = (1..full)
        .into_par_iter()
        .map(|bits| {
            let mask = SubsetMask::from_bits(bits as u32).expect("non-zero");
            let (_, yi) = design.mixed_block(mask, transform)?;
            Ok(sums(&yi))
        })
        .collect::<Result<_>>()?;

    let mut jansen = vec![0.0; full + 1];
    let mut saltelli = vec![0.0; full + 1];
    let mut raw_dual = vec![0.0; full + 1];
    for (i, &(j, s, r)) in body.iter().enumerate() {
        jansen[i + 1] = j;
        saltelli[i + 1] = s;
        raw_dual[i + 1] = r;
    }
    // Full set reuses the B block: yi = yb.
    let (j_full, s_full, r_full) = sums(yb);
    jansen[full] = j_full;
    saltelli[full] = s_full;
    raw_dual[full] = r_full;

    let substitute = match mode {
        SupersetEstimator::Auto => transform.is_dependent(),
        SupersetEstimator::Jansen => false,
        SupersetEstimator::ComplementSubstitute => true,
    };
    let h_sup = if substitute {
        substitute_superset(&raw_dual, k, var_y)
    } else {
        jansen
    };

    Ok(ValueTable {
        k,
        h_sup,
        h_sub: saltelli,
        var_y,
        dependent: transform.is_dependent(),
        superset_substituted: substitute,
        evals: design.evals(),
    })
}
