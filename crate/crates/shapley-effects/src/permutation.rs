//! Shapley effects by summing marginal contributions over all input
//! permutations, with a memoized value-function store.
//!
//! This is the classic permutation form of the Shapley value: walk
//! every ordering of the inputs, accumulate the gain in coalition
//! worth as each input joins the growing prefix, and average. It costs
//! `k! * k` marginal terms, but every term is a difference of two of
//! the `2^k - 1` coalition values, so a memo keyed by subset mask caps
//! model work at one mixed block per mask — the same budget as the
//! Möbius route. The walk itself exists as an independent cross-check:
//! on a shared value table the two routes are exact linear functionals
//! of the same numbers and must agree to rounding.
//!
//! Permutations are generated iteratively with Heap's algorithm (one
//! swap per step, no k!-sized materialization).

use crate::copula::InputTransform;
use crate::error::{Error, Result};
use crate::moebius::ShapleyEffects;
use crate::pick_freeze::EvaluatedDesign;
use crate::subset::SubsetMask;
use crate::value_table::ValueTable;

/// Permutation-walk cutoff: the factorial loop dominates beyond this.
pub const MAX_PERMUTATION_INPUTS: usize = 10;

/// Iterative Heap's algorithm over permutations of `0..k`.
struct HeapWalker {
    a: Vec<usize>,
    c: Vec<usize>,
    i: usize,
    started: bool,
}

impl HeapWalker {
    fn new(k: usize) -> Self {
        HeapWalker {
            a: (0..k).collect(),
            c: vec![0; k],
            i: 0,
            started: false,
        }
    }

    /// Advance to the next permutation; `None` when exhausted. Each
    /// step performs exactly one swap.
    fn next(&mut self) -> Option<&[usize]> {
        let k = self.a.len();
        if !self.started {
            self.started = true;
            return Some(&self.a);
        }
        while self.i < k {
            if self.c[self.i] < self.i {
                if self.i.is_multiple_of(2) {
                    self.a.swap(0, self.i);
                } else {
                    self.a.swap(self.c[self.i], self.i);
                }
                self.c[self.i] += 1;
                self.i = 0;
                return Some(&self.a);
            } else {
                self.c[self.i] = 0;
                self.i += 1;
            }
        }
        None
    }
}

/// Visit every permutation of `0..k` exactly once.
pub fn for_each_permutation<F: FnMut(&[usize])>(k: usize, mut f: F) {
    assert!(k >= 1, "need at least one element");
    let mut walker = HeapWalker::new(k);
    while let Some(p) = walker.next() {
        f(p);
    }
}

/// Memoized per-mask value estimates with hit/miss accounting.
///
/// Stores, per mask, the squared-difference estimate, the
/// cross-covariance estimate, and the complement-dual raw estimate
/// (needed for the dependent-case substitution).
pub struct ValueMemo {
    entries: Vec<Option<(f64, f64, f64)>>,
    hits: u64,
    misses: u64,
    requests: u64,
}

/// Snapshot of memo accounting after a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MemoStats {
    pub requests: u64,
    pub hits: u64,
    pub misses: u64,
    pub entries: usize,
}

impl ValueMemo {
    fn new(k: usize) -> Self {
        ValueMemo {
            entries: vec![None; 1 << k],
            hits: 0,
            misses: 0,
            requests: 0,
        }
    }

    fn stats(&self) -> MemoStats {
        MemoStats {
            requests: self.requests,
            hits: self.hits,
            misses: self.misses,
            entries: self.entries.iter().filter(|e| e.is_some()).count(),
        }
    }

    /// Fill the entry for one mask if absent. Fills do not count as
    /// requests; only walk-level fetches do.
    fn ensure(
        &mut self,
        mask: SubsetMask,
        design: &EvaluatedDesign,
        transform: &InputTransform,
    ) -> Result<(f64, f64, f64)> {
        if let Some(v) = self.entries[mask.index()] {
            return Ok(v);
        }
        self.misses += 1;
        let n = design.n();
        let nf = n as f64;
        let ya = design.ya();
        let yb = design.yb();
        let (_, yi) = design.mixed_block(mask, transform)?;
        let mut sq = 0.0;
        let mut cross = 0.0;
        let mut raw = 0.0;
        for i in 0..n {
            let d = yi[i] - ya[i];
            sq += d * d;
            cross += yb[i] * d;
            raw += yb[i] * (yb[i] - yi[i]);
        }
        let v = (sq / (2.0 * nf), cross / nf, raw / nf);
        self.entries[mask.index()] = Some(v);
        Ok(v)
    }

    /// Fetch `(superset_value, subset_value)` for a mask, computing the
    /// underlying block at most once per distinct mask.
    fn fetch(
        &mut self,
        mask: SubsetMask,
        design: &EvaluatedDesign,
        transform: &InputTransform,
        var_y: f64,
    ) -> Result<(f64, f64)> {
        self.requests += 1;
        if self.entries[mask.index()].is_some() {
            self.hits += 1;
        }
        let (jansen, saltelli, _) = self.ensure(mask, design, transform)?;
        let k = design.k();
        let sup = if !transform.is_dependent() {
            jansen
        } else if mask.is_full(k) {
            var_y
        } else {
            // Substitute estimator: the dual value at `mask` is the raw
            // complement-dual estimate taken at the complement mask.
            let comp = mask.complement(k).expect("not full");
            let (_, _, raw) = self.ensure(comp, design, transform)?;
            raw
        };
        Ok((sup, saltelli))
    }
}

/// Result of a permutation-walk run.
#[derive(Clone, Debug)]
pub struct PermutationRun {
    pub effects: ShapleyEffects,
    /// Classic singleton estimates: subset value of each single input.
    pub first_order: Vec<f64>,
    /// Classic singleton dual estimates: superset value of each single
    /// input.
    pub total: Vec<f64>,
    pub var_y: f64,
    pub evals: u64,
    pub memo: MemoStats,
}

/// Shapley effects via the full permutation walk, memoized.
///
/// Builds value functions lazily along permutation paths: the walk
/// requests `k! * k` prefix values but the memo computes at most
/// `2^k - 1` of them. Under dependent inputs the superset row uses the
/// complement-substitute estimator, exactly as the table route does.
pub fn permutation_shapley(
    design: &EvaluatedDesign,
    transform: &InputTransform,
) -> Result<PermutationRun> {
    let k = design.k();
    if k == 0 || k > MAX_PERMUTATION_INPUTS {
        return Err(Error::PermutationLimit {
            k,
            limit: MAX_PERMUTATION_INPUTS,
        });
    }
    let yb = design.yb();
    let nf = yb.len() as f64;
    let mean: f64 = yb.iter().sum::<f64>() / nf;
    let var_y: f64 = yb.iter().map(|y| (y - mean).powi(2)).sum::<f64>() / (nf - 1.0);
    if !(var_y > 0.0) {
        return Err(Error::DegenerateVariance);
    }

    let mut memo = ValueMemo::new(k);
    let mut acc_sup = vec![0.0; k];
    let mut acc_sub = vec![0.0; k];

    let mut walker = HeapWalker::new(k);
    while let Some(p) = walker.next() {
        let mut bits = 0u32;
        let mut prev = (0.0, 0.0);
        for &q in p {
            bits |= 1 << q;
            let mask = SubsetMask::from_bits(bits).expect("non-empty prefix");
            let value = memo.fetch(mask, design, transform, var_y)?;
            acc_sup[q] += value.0 - prev.0;
            acc_sub[q] += value.1 - prev.1;
            prev = value;
        }
    }

    // Per-row grand totals, fetched from the memo (already present:
    // every permutation path ends at the full mask). Effects are
    // normalized by these so Pareto efficiency is exact; the summary
    // reads below must not distort the walk accounting.
    let full = SubsetMask::full(k);
    let (g_sup, g_sub) = memo.fetch(full, design, transform, var_y)?;
    memo.requests -= 1;
    memo.hits -= 1;
    let sup_scale = if g_sup > 0.0 { g_sup } else { var_y };
    let sub_scale = if g_sub > 0.0 { g_sub } else { var_y };

    let factorial: f64 = (1..=k).map(|i| i as f64).product();
    let effects = ShapleyEffects {
        from_subset: acc_sub.iter().map(|v| v / (factorial * sub_scale)).collect(),
        from_superset: acc_sup
            .iter()
            .map(|v| v / (factorial * sup_scale))
            .collect(),
    };

    let mut first_order = vec![0.0; k];
    let mut total = vec![0.0; k];
    for i in 0..k {
        let single = SubsetMask::singleton(i);
        let (sup, sub) = memo.fetch(single, design, transform, var_y)?;
        memo.requests -= 1;
        memo.hits -= 1;
        first_order[i] = sub / sub_scale;
        total[i] = sup / sup_scale;
    }

    Ok(PermutationRun {
        effects,
        first_order,
        total,
        var_y,
        evals: design.evals(),
        memo: memo.stats(),
    })
}

/// The same permutation walk evaluated against a prebuilt value table.
///
/// Because both routes are exact linear functionals of the same
/// `2^k - 1` numbers, the result must agree with the Möbius route to
/// rounding; this is the algebraic cross-check.
pub fn permutation_shapley_from_table(table: &ValueTable) -> Result<ShapleyEffects> {
    let k = table.k();
    if k > MAX_PERMUTATION_INPUTS {
        return Err(Error::PermutationLimit {
            k,
            limit: MAX_PERMUTATION_INPUTS,
        });
    }
    let mut acc_sup = vec![0.0; k];
    let mut acc_sub = vec![0.0; k];
    let mut walker = HeapWalker::new(k);
    while let Some(p) = walker.next() {
        let mut bits = 0u32;
        let mut prev = (0.0, 0.0);
        for &q in p {
            bits |= 1 << q;
            let mask = SubsetMask::from_bits(bits).expect("non-empty prefix");
            let value = (table.superset(mask), table.subset(mask));
            acc_sup[q] += value.0 - prev.0;
            acc_sub[q] += value.1 - prev.1;
            prev = value;
        }
    }
    let factorial: f64 = (1..=k).map(|i| i as f64).product();
    let sub_scale = factorial * table.subset_scale();
    let sup_scale = factorial * table.superset_scale();
    Ok(ShapleyEffects {
        from_subset: acc_sub.iter().map(|v| v / sub_scale).collect(),
        from_superset: acc_sup.iter().map(|v| v / sup_scale).collect(),
    })
}
