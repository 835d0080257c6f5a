//! Ishigami test function with an inert fourth input.

use std::sync::Arc;

use crate::error::Result;
use crate::marginals::MarginalSpec;
use crate::matrix::Matrix;
use crate::pick_freeze::{Model, ModelHandle};

/// `Y = sin(X1) (1 + X3^4 / 10) + 7 sin^2(X2)`, with `X4` ignored.
///
/// The classic strongly nonlinear benchmark: one pure first-order
/// input (X2), one input active only through an interaction (X3), and
/// a deliberate dummy (X4) that a correct estimator must score at
/// exactly zero.
pub struct Ishigami;

pub const DIM: usize = 4;

impl Model for Ishigami {
    fn name(&self) -> &str {
        "ishigami"
    }

    fn dim(&self) -> usize {
        DIM
    }

    fn evaluate(&self, x: &Matrix) -> Result<Vec<f64>> {
        Ok(x.row_iter()
            .map(|r| r[0].sin() * (1.0 + 0.1 * r[2].powi(4)) + 7.0 * r[1].sin().powi(2))
            .collect())
    }
}

pub fn handle() -> ModelHandle {
    Arc::new(Ishigami)
}

/// All four inputs uniform on `(-pi, pi)`.
pub fn marginals() -> Vec<MarginalSpec> {
    let pi = std::f64::consts::PI;
    (0..DIM)
        .map(|_| MarginalSpec::uniform(-pi, pi).expect("valid bounds"))
        .collect()
}
