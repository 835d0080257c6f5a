//! Sobol' g-function in the eight-input parameterization.

use std::sync::Arc;

use crate::error::Result;
use crate::marginals::MarginalSpec;
use crate::matrix::Matrix;
use crate::pick_freeze::{Model, ModelHandle};

/// `Y = prod_i (|4 X_i - 2| + a_i) / (1 + a_i)` on the unit cube.
///
/// Factor coefficients control importance: `a_i = 0` makes an input
/// maximally important, large `a_i` makes it nearly inert. Inputs 1
/// and 2 are exchangeable by construction.
pub struct SobolG {
    a: Vec<f64>,
}

/// The standard coefficient choice: two dominant inputs, one weak,
/// five near-inert.
pub const A_STANDARD: [f64; 8] = [0.0, 0.0, 3.0, 9.0, 9.0, 9.0, 9.0, 9.0];

impl SobolG {
    pub fn new(a: Vec<f64>) -> Self {
        assert!(a.iter().all(|&v| v >= 0.0), "coefficients must be nonnegative");
        SobolG { a }
    }

    pub fn standard() -> Self {
        SobolG::new(A_STANDARD.to_vec())
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.a
    }
}

impl Model for SobolG {
    fn name(&self) -> &str {
        "sobol-g"
    }

    fn dim(&self) -> usize {
        self.a.len()
    }

    fn evaluate(&self, x: &Matrix) -> Result<Vec<f64>> {
        Ok(x.row_iter()
            .map(|r| {
                r.iter()
                    .zip(&self.a)
                    .map(|(&xi, &ai)| ((4.0 * xi - 2.0).abs() + ai) / (1.0 + ai))
                    .product()
            })
            .collect())
    }
}

pub fn handle() -> ModelHandle {
    Arc::new(SobolG::standard())
}

pub fn marginals() -> Vec<MarginalSpec> {
    (0..A_STANDARD.len())
        .map(|_| MarginalSpec::uniform(0.0, 1.0).expect("valid bounds"))
        .collect()
}
