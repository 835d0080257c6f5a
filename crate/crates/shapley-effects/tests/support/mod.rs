//! Independent oracles shared by the integration suites.
//!
//! Everything here deliberately avoids the crate's production lattice
//! code paths: the dense inclusion-matrix solve, the XOR
//! column-generation, and the explicit permutation enumeration are
//! separate transcriptions of the underlying definitions.

#![allow(dead_code, clippy::needless_range_loop)]

/// Tiny deterministic generator for reproducible random tables.
pub struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// A random strictly-positive value row over `2^k` masks with a
/// positive grand total (index = mask bits, entry 0 zero).
pub fn random_value_row(k: usize, rng: &mut SplitMix64) -> Vec<f64> {
    let len = 1usize << k;
    let mut h = vec![0.0; len];
    for entry in h.iter_mut().skip(1) {
        *entry = 0.05 + rng.next_f64();
    }
    // Make the grand total the largest entry so normalization is sane.
    h[len - 1] = 1.0 + rng.next_f64();
    h
}

/// Dense-lattice Möbius inversion: build the full `2^k x 2^k`
/// inclusion relation and solve the unitriangular system
/// `val = zeta(mob)` by forward elimination over ascending masks.
/// Input and output are indexed by mask bits; entry 0 stays zero.
pub fn dense_moebius(values: &[f64]) -> Vec<f64> {
    let len = values.len();
    let mut mob = vec![0.0; len];
    for mask in 0..len {
        let mut acc = values[mask];
        // Subtract every proper submask's inverse (the dense row of
        // the inclusion matrix restricted below the diagonal).
        for sub in 0..mask {
            if sub & mask == sub {
                acc -= mob[sub];
            }
        }
        mob[mask] = acc;
    }
    mob
}

/// Nonzero count of the full-lattice inclusion matrix
/// `Z[j][l] = [j subset of l]` over all `2^k` masks including the
/// empty set. The matrix is Pascal's triangle modulo two.
pub fn inclusion_matrix_nonzeros(k: usize) -> usize {
    let len = 1usize << k;
    let mut count = 0;
    for j in 0..len {
        for l in 0..len {
            if j & l == j {
                count += 1;
            }
        }
    }
    count
}

/// The XOR column-generation inversion: grows the subset-inclusion
/// column of each mask by the Pascal-mod-2 recurrence
/// `sel' = xor([1, sel], [sel, 0])` and applies signed sums. Returns
/// proper Möbius inverses (not pre-divided), indexed by mask bits.
pub fn sierpinski_moebius(values: &[f64]) -> Vec<f64> {
    let len = values.len();
    let full = len - 1;
    let mut mob = vec![0.0; len];
    let mut sel = vec![true];
    for mask in 1..=full {
        let card_mask = (mask as u32).count_ones() as i32;
        let mut acc = 0.0;
        for (offset, &selected) in sel.iter().enumerate() {
            if selected {
                let sub = offset + 1;
                let card_sub = (sub as u32).count_ones() as i32;
                let sign = if (card_mask + card_sub) % 2 == 0 {
                    1.0
                } else {
                    -1.0
                };
                acc += sign * values[sub];
            }
        }
        mob[mask] = acc;

        let mut next = vec![false; sel.len() + 1];
        for t in 0..next.len() {
            let lhs = if t == 0 { true } else { sel[t - 1] };
            let rhs = if t < sel.len() { sel[t] } else { false };
            next[t] = lhs ^ rhs;
        }
        sel = next;
    }
    mob
}

fn permutations_rec(prefix: &mut Vec<usize>, pool: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if pool.is_empty() {
        out.push(prefix.clone());
        return;
    }
    for idx in 0..pool.len() {
        let item = pool.remove(idx);
        prefix.push(item);
        permutations_rec(prefix, pool, out);
        prefix.pop();
        pool.insert(idx, item);
    }
}

/// All permutations of `0..k`, built by straightforward recursive
/// selection (independent of the production Heap generator).
pub fn all_permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    permutations_rec(&mut Vec::new(), &mut (0..k).collect(), &mut out);
    out
}

/// Brute-force Shapley values by literal permutation enumeration of
/// the defining average of marginal contributions, for a value row
/// indexed by mask bits (normalized by the grand total).
pub fn brute_force_shapley(values: &[f64], k: usize) -> Vec<f64> {
    let grand = values[values.len() - 1];
    let mut phi = vec![0.0; k];
    let perms = all_permutations(k);
    for p in &perms {
        let mut bits = 0usize;
        let mut prev = 0.0;
        for &q in p {
            bits |= 1 << q;
            let v = values[bits];
            phi[q] += v - prev;
            prev = v;
        }
    }
    let scale = perms.len() as f64 * grand;
    phi.iter().map(|v| v / scale).collect()
}

/// Shapley values by the subset-weighted combinatorial form: for each
/// input, sum `|a|! (k - |a| - 1)! / k!` weighted marginal
/// contributions over subsets not containing it. A second independent
/// closed form of the same definition.
pub fn subset_weighted_shapley(values: &[f64], k: usize) -> Vec<f64> {
    fn factorial(n: usize) -> f64 {
        (1..=n).map(|i| i as f64).product()
    }
    let grand = values[values.len() - 1];
    let kf = factorial(k);
    let mut phi = vec![0.0; k];
    for (i, slot) in phi.iter_mut().enumerate() {
        let bit = 1usize << i;
        for mask in 0..values.len() {
            if mask & bit != 0 {
                continue;
            }
            let card = (mask as u32).count_ones() as usize;
            let weight = factorial(card) * factorial(k - card - 1) / kf;
            *slot += weight * (values[mask | bit] - values[mask]);
        }
    }
    phi.iter().map(|v| v / grand).collect()
}

/// Largest absolute difference between two equally long slices.
pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
