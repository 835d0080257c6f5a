//! Bitmask coding of input subsets.
//!
//! Every non-empty subset of the model inputs is coded as an integer
//! bitmask: the least significant bit codes the first input, bit `i`
//! codes input `i` (zero-based). The mask value doubles as the index
//! into the value and Möbius tables, so subset inclusion is plain bit
//! arithmetic: `beta` is a subset of `alpha` iff `beta & alpha == beta`.

use std::fmt;

/// Hard cap on the number of inputs a full subset table supports.
///
/// Masks stay comfortably inside integer range and a pair of `2^k`
/// tables stays near half a gigabyte at the cap.
pub const MAX_INPUTS: usize = 25;

/// A non-empty subset of model inputs, coded as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask(u32);

impl SubsetMask {
    /// Wrap raw bits; `None` for the empty set.
    pub fn from_bits(bits: u32) -> Option<Self> {
        (bits != 0).then_some(SubsetMask(bits))
    }

    /// The subset containing only `input` (zero-based).
    pub fn singleton(input: usize) -> Self {
        assert!(input < 32, "input index out of range");
        SubsetMask(1 << input)
    }

    /// Subset from a list of zero-based input indices; `None` if empty.
    pub fn from_inputs(inputs: &[usize]) -> Option<Self> {
        let mut bits = 0u32;
        for &i in inputs {
            assert!(i < 32, "input index out of range");
            bits |= 1 << i;
        }
        Self::from_bits(bits)
    }

    /// The full set of `k` inputs.
    pub fn full(k: usize) -> Self {
        assert!((1..=32).contains(&k), "k out of range");
        SubsetMask(if k == 32 { u32::MAX } else { (1 << k) - 1 })
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// Index into a table of length `2^k`.
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Number of members.
    pub fn cardinality(self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains(self, input: usize) -> bool {
        input < 32 && self.0 & (1 << input) != 0
    }

    pub fn is_full(self, k: usize) -> bool {
        self == Self::full(k)
    }

    /// Complement within `k` inputs; `None` when `self` is the full set.
    pub fn complement(self, k: usize) -> Option<Self> {
        Self::from_bits(self.0 ^ Self::full(k).0)
    }

    /// Zero-based indices of the members, ascending.
    pub fn members(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// All non-empty subsets of `self`, including `self`, in descending
    /// mask order (the standard `sub = (sub - 1) & mask` walk).
    pub fn subsets(self) -> impl Iterator<Item = SubsetMask> {
        let mask = self.0;
        let mut sub = mask;
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = SubsetMask(sub);
            sub = (sub - 1) & mask;
            if sub == 0 {
                done = true;
            }
            Some(out)
        })
    }

    /// All supersets of `self` within `k` inputs, including `self`,
    /// ascending.
    pub fn supersets(self, k: usize) -> impl Iterator<Item = SubsetMask> {
        let mask = self.0;
        let full = Self::full(k).0;
        let mut s = mask;
        let mut exhausted = false;
        std::iter::from_fn(move || {
            if exhausted {
                return None;
            }
            let out = SubsetMask(s);
            if s == full {
                exhausted = true;
            } else {
                s = (s + 1) | mask;
                if s > full {
                    exhausted = true;
                }
            }
            Some(out)
        })
    }

    /// All non-empty masks over `k` inputs, ascending.
    pub fn all_nonempty(k: usize) -> impl Iterator<Item = SubsetMask> {
        let full = Self::full(k).0;
        (1..=full).map(SubsetMask)
    }

    /// All two-member masks over `k` inputs, ascending.
    pub fn all_pairs(k: usize) -> impl Iterator<Item = SubsetMask> {
        Self::all_nonempty(k).filter(|m| m.cardinality() == 2)
    }

    /// One-based member list like `1+3`, the display form used in
    /// reports.
    pub fn label(self) -> String {
        let parts: Vec<String> = self.members().map(|i| (i + 1).to_string()).collect();
        parts.join("+")
    }

    /// Parse a `1+3`-style one-based label.
    pub fn parse_label(s: &str) -> Option<Self> {
        let mut inputs = Vec::new();
        for part in s.split('+') {
            let v: usize = part.trim().parse().ok()?;
            if v == 0 {
                return None;
            }
            inputs.push(v - 1);
        }
        Self::from_inputs(&inputs)
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubsetMask({{{}}})", self.label())
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}
