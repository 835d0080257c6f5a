//! Scrambled Sobol' point sets and the paired pick'n'freeze design.
//!
//! Points come from the classic binary-expansion construction over
//! 32-bit direction numbers, initialized from the published Joe-Kuo
//! "new-joe-kuo-6" parameter set (embedded for the first 100
//! dimensions). Scrambling is a digital shift: each dimension is
//! XOR-ed with a seeded random bit vector, which preserves the net
//! structure while giving independent replicates. Seed 0 means no
//! scramble, so runs with seed 0 are exactly the raw sequence.
//!
//! The generator always draws one extra point and discards the first
//! one: the initial point of the raw sequence is the origin, which
//! inverse-CDF transforms cannot accept.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

const BITS: usize = 32;

/// Direction numbers parsed from the embedded Joe-Kuo table.
struct DirectionTable {
    /// `directions[d][b]` is direction number `b` of dimension `d`,
    /// stored as a 32-bit fixed-point fraction (MSB first).
    directions: Vec<[u32; BITS]>,
}

static TABLE: OnceLock<DirectionTable> = OnceLock::new();

fn direction_table() -> &'static DirectionTable {
    TABLE.get_or_init(|| {
        DirectionTable::parse(include_str!("../data/new-joe-kuo-6.100.txt"))
            .expect("embedded direction-number table is well-formed")
    })
}

/// Number of dimensions covered by the embedded table.
pub fn max_dimensions() -> usize {
    direction_table().directions.len()
}

impl DirectionTable {
    fn parse(text: &str) -> Option<DirectionTable> {
        let mut directions = Vec::new();

        // Dimension 1 is the van der Corput sequence in base 2.
        let mut first = [0u32; BITS];
        for (b, v) in first.iter_mut().enumerate() {
            *v = 1 << (BITS - 1 - b);
        }
        directions.push(first);

        for line in text.lines().skip(1) {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            // d s a m_1 .. m_s
            let s: usize = fields.get(1)?.parse().ok()?;
            let a: u32 = fields.get(2)?.parse().ok()?;
            let m: Vec<u32> = fields
                .get(3..3 + s)?
                .iter()
                .map(|f| f.parse().ok())
                .collect::<Option<_>>()?;

            let mut v = [0u32; BITS];
            for b in 0..BITS {
                if b < s {
                    v[b] = m[b] << (BITS - 1 - b);
                } else {
                    // Recurrence over the primitive polynomial coded by `a`.
                    let mut value = v[b - s] ^ (v[b - s] >> s);
                    for t in 1..s {
                        if (a >> (s - 1 - t)) & 1 == 1 {
                            value ^= v[b - t];
                        }
                    }
                    v[b] = value;
                }
            }
            directions.push(v);
        }
        Some(DirectionTable { directions })
    }
}

/// Raw Sobol' point: coordinate `d` of point `index`, as 32-bit fixed
/// point. Uses the binary expansion of the index directly, so the
/// point set for a given index range does not depend on generation
/// order.
fn raw_coordinate(directions: &[u32; BITS], index: u64) -> u32 {
    let mut x = 0u32;
    let mut i = index;
    let mut b = 0;
    while i != 0 {
        if i & 1 == 1 {
            x ^= directions[b];
        }
        i >>= 1;
        b += 1;
    }
    x
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-dimension digital-shift vectors for a scramble seed.
fn shift_vector(dims: usize, seed: u64) -> Vec<u32> {
    if seed == 0 {
        return vec![0; dims];
    }
    let mut state = seed;
    (0..dims).map(|_| (splitmix64(&mut state) >> 32) as u32).collect()
}

/// A pair of uniform sample blocks on `[0,1)^k` cut from one
/// 2k-dimensional low-discrepancy sequence.
///
/// Block A is columns `1..k` and block B is columns `k+1..2k` of the
/// same point set, which is what the pick'n'freeze estimators require.
/// Identical `(n, k, seed)` reproduce the blocks bit for bit.
#[derive(Clone, Debug)]
pub struct UniformDesign {
    n: usize,
    k: usize,
    block_a: Matrix,
    block_b: Matrix,
    seed: u64,
}

impl UniformDesign {
    /// Wrap externally produced uniform blocks (custom sequences,
    /// column permutations for symmetry checks). Blocks must have the
    /// same shape and entries in `[0, 1)`.
    pub fn from_blocks(block_a: Matrix, block_b: Matrix, seed: u64) -> Result<Self> {
        if block_a.rows() != block_b.rows() || block_a.cols() != block_b.cols() {
            return Err(Error::DimensionMismatch {
                expected: block_a.cols(),
                got: block_b.cols(),
            });
        }
        if block_a.rows() < 2 {
            return Err(Error::SampleTooSmall(block_a.rows()));
        }
        for block in [&block_a, &block_b] {
            for row in block.row_iter() {
                if row.iter().any(|u| !(0.0..1.0).contains(u)) {
                    return Err(Error::InvalidMarginal(
                        "uniform design entries must lie in [0, 1)".to_string(),
                    ));
                }
            }
        }
        Ok(UniformDesign {
            n: block_a.rows(),
            k: block_a.cols(),
            block_a,
            block_b,
            seed,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// First pick'n'freeze block (n rows, k columns).
    pub fn block_a(&self) -> &Matrix {
        &self.block_a
    }

    /// Second pick'n'freeze block (n rows, k columns).
    pub fn block_b(&self) -> &Matrix {
        &self.block_b
    }

    /// Digital nets equidistribute best at power-of-two sample sizes;
    /// front ends warn when this is false.
    pub fn power_of_two(&self) -> bool {
        self.n.is_power_of_two()
    }
}

/// Generate the paired uniform design for `n` samples of a `k`-input
/// model.
///
/// Draws `n + 1` points of the 2k-dimensional sequence and discards
/// the first, so the first retained row has no zero coordinate. Seed 0
/// yields the unscrambled sequence; any other seed applies a
/// reproducible digital shift.
pub fn generate_design(n: usize, k: usize, seed: u64) -> Result<UniformDesign> {
    if n < 2 {
        return Err(Error::SampleTooSmall(n));
    }
    let dims = 2 * k;
    let table = direction_table();
    if k == 0 || dims > table.directions.len() {
        return Err(Error::DimensionUnsupported {
            dim: dims,
            limit: table.directions.len(),
        });
    }

    let shifts = shift_vector(dims, seed);
    let mut block_a = Matrix::zeros(n, k);
    let mut block_b = Matrix::zeros(n, k);
    for i in 0..n {
        // Drop rule: sequence index starts at 1, not 0.
        let index = (i + 1) as u64;
        for d in 0..dims {
            let x = raw_coordinate(&table.directions[d], index) ^ shifts[d];
            let u = x as f64 / (1u64 << BITS) as f64;
            if d < k {
                block_a.set(i, d, u);
            } else {
                block_b.set(i, d - k, u);
            }
        }
    }
    Ok(UniformDesign {
        n,
        k,
        block_a,
        block_b,
        seed,
    })
}
