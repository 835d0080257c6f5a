//! Fifteen-input smooth test function of Oakley and O'Hagan.
//!
//! `Y = a1.x + a2.sin(x) + a3.cos(x) + x' M x` with standard normal
//! inputs and published coefficient vectors and matrix. The function
//! has interactions up to second order only, which makes it a good
//! check for the relation between first-order, total, and Shapley
//! effects in moderate dimension.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::marginals::MarginalSpec;
use crate::matrix::Matrix;
use crate::pick_freeze::{Model, ModelHandle};

pub const DIM: usize = 15;

/// Coefficients of the quadratic-plus-trigonometric form.
#[derive(Clone, Debug)]
pub struct OakleyCoefficients {
    pub a1: Vec<f64>,
    pub a2: Vec<f64>,
    pub a3: Vec<f64>,
    /// Row-major 15-by-15 matrix.
    pub m: Vec<f64>,
}

impl OakleyCoefficients {
    /// Parse the plain-text coefficient format: one line per input with
    /// `a1_i a2_i a3_i M_i1 .. M_i15`, comments starting with `#`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut a1 = Vec::new();
        let mut a2 = Vec::new();
        let mut a3 = Vec::new();
        let mut m = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let values: Vec<f64> = line
                .split_whitespace()
                .map(|f| f.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| {
                    Error::InvalidMarginal(format!("bad coefficient value: {e}"))
                })?;
            if values.len() != 3 + DIM {
                return Err(Error::InvalidMarginal(format!(
                    "coefficient line must have {} columns, got {}",
                    3 + DIM,
                    values.len()
                )));
            }
            a1.push(values[0]);
            a2.push(values[1]);
            a3.push(values[2]);
            m.extend_from_slice(&values[3..]);
        }
        if a1.len() != DIM {
            return Err(Error::InvalidMarginal(format!(
                "coefficient file must have {DIM} rows, got {}",
                a1.len()
            )));
        }
        Ok(OakleyCoefficients { a1, a2, a3, m })
    }

    /// The published coefficient set, embedded with the crate.
    pub fn published() -> &'static OakleyCoefficients {
        static CACHE: OnceLock<OakleyCoefficients> = OnceLock::new();
        CACHE.get_or_init(|| {
            OakleyCoefficients::parse(include_str!("../../data/oakley_ohagan.txt"))
                .expect("embedded coefficient file is well-formed")
        })
    }
}

pub struct OakleyOHagan {
    coefficients: OakleyCoefficients,
}

impl OakleyOHagan {
    pub fn published() -> Self {
        OakleyOHagan {
            coefficients: OakleyCoefficients::published().clone(),
        }
    }

    pub fn with_coefficients(coefficients: OakleyCoefficients) -> Self {
        OakleyOHagan { coefficients }
    }
}

impl Model for OakleyOHagan {
    fn name(&self) -> &str {
        "oakley"
    }

    fn dim(&self) -> usize {
        DIM
    }

    fn evaluate(&self, x: &Matrix) -> Result<Vec<f64>> {
        let c = &self.coefficients;
        Ok(x.row_iter()
            .map(|r| {
                let mut y = 0.0;
                for i in 0..DIM {
                    y += c.a1[i] * r[i] + c.a2[i] * r[i].sin() + c.a3[i] * r[i].cos();
                }
                for i in 0..DIM {
                    let mut mx = 0.0;
                    for j in 0..DIM {
                        mx += c.m[i * DIM + j] * r[j];
                    }
                    y += r[i] * mx;
                }
                y
            })
            .collect())
    }
}

pub fn handle() -> ModelHandle {
    Arc::new(OakleyOHagan::published())
}

/// All fifteen inputs standard normal.
pub fn marginals() -> Vec<MarginalSpec> {
    (0..DIM)
        .map(|_| MarginalSpec::normal(0.0, 1.0).expect("valid parameters"))
        .collect()
}
