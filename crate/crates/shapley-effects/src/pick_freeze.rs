//! Paired-block evaluation and on-demand mixed blocks.
//!
//! The pick'n'freeze design evaluates the simulator on two independent
//! sample blocks A and B, then on mixed blocks that freeze one subset
//! of columns at the B values. Mixed blocks are produced lazily, one
//! subset at a time, so peak memory stays at one block regardless of
//! how many subsets an analysis touches. A shared atomic counter
//! tracks model evaluations.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::copula::InputTransform;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::qmc::UniformDesign;
use crate::subset::SubsetMask;

/// A deterministic, vectorized simulator.
///
/// Implementations must be pure: the same input block always yields
/// the same output vector, bit for bit. That determinism is what lets
/// the design identify inert inputs exactly rather than up to noise.
pub trait Model: Send + Sync {
    fn name(&self) -> &str;

    /// Number of inputs.
    fn dim(&self) -> usize;

    /// Evaluate a block of rows; returns one output per row.
    fn evaluate(&self, x: &Matrix) -> Result<Vec<f64>>;
}

/// Shared handle to a simulator.
pub type ModelHandle = Arc<dyn Model>;

/// The two base blocks, evaluated, plus everything needed to
/// materialize mixed blocks later.
pub struct EvaluatedDesign {
    model: ModelHandle,
    design: UniformDesign,
    xa: Matrix,
    xb: Matrix,
    ya: Vec<f64>,
    yb: Vec<f64>,
    evals: AtomicU64,
}

/// Run the model on both transformed base blocks.
///
/// Counts `2n` evaluations. Non-finite outputs are reported with the
/// offending row index.
pub fn evaluate_base(
    model: &ModelHandle,
    design: UniformDesign,
    transform: &InputTransform,
) -> Result<EvaluatedDesign> {
    if model.dim() != design.k() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            got: design.k(),
        });
    }
    if transform.k() != design.k() {
        return Err(Error::DimensionMismatch {
            expected: design.k(),
            got: transform.k(),
        });
    }
    let xa = transform.transform(design.block_a())?;
    let xb = transform.transform(design.block_b())?;
    let ya = run_model(model, &xa)?;
    let yb = run_model(model, &xb)?;
    let evals = AtomicU64::new(2 * design.n() as u64);
    Ok(EvaluatedDesign {
        model: Arc::clone(model),
        design,
        xa,
        xb,
        ya,
        yb,
        evals,
    })
}

fn run_model(model: &ModelHandle, x: &Matrix) -> Result<Vec<f64>> {
    let y = model.evaluate(x)?;
    debug_assert_eq!(y.len(), x.rows());
    for (row, v) in y.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFiniteOutput {
                model: model.name().to_string(),
                row,
            });
        }
    }
    Ok(y)
}

impl EvaluatedDesign {
    pub fn n(&self) -> usize {
        self.design.n()
    }

    pub fn k(&self) -> usize {
        self.design.k()
    }

    pub fn model(&self) -> &ModelHandle {
        &self.model
    }

    pub fn design(&self) -> &UniformDesign {
        &self.design
    }

    pub fn xa(&self) -> &Matrix {
        &self.xa
    }

    pub fn xb(&self) -> &Matrix {
        &self.xb
    }

    pub fn ya(&self) -> &[f64] {
        &self.ya
    }

    pub fn yb(&self) -> &[f64] {
        &self.yb
    }

    /// Model evaluations so far, including the two base blocks.
    pub fn evals(&self) -> u64 {
        self.evals.load(Ordering::Relaxed)
    }

    /// Materialize and evaluate the mixed block for one subset.
    ///
    /// Independent inputs: the block equals A with the columns in
    /// `mask` replaced by B's columns, so columns outside the mask are
    /// bitwise identical to A. Dependent inputs: rows come from
    /// [`InputTransform::conditional_mix`]. The full set short-circuits
    /// to `(xb, yb)` without spending model evaluations; in both the
    /// independent and the dependent case the conditional mix of the
    /// full set is exactly the transformed B block, so the shortcut
    /// never changes results.
    pub fn mixed_block(
        &self,
        mask: SubsetMask,
        transform: &InputTransform,
    ) -> Result<(Matrix, Vec<f64>)> {
        if mask.is_full(self.k()) {
            return Ok((self.xb.clone(), self.yb.clone()));
        }
        let xi = if transform.is_dependent() {
            let mut xi = Matrix::zeros(self.n(), self.k());
            for i in 0..self.n() {
                let row = transform.conditional_mix(
                    self.design.block_a().row(i),
                    self.design.block_b().row(i),
                    mask,
                    i,
                )?;
                xi.row_mut(i).copy_from_slice(&row);
            }
            xi
        } else {
            let mut xi = self.xa.clone();
            for j in mask.members() {
                xi.copy_column_from(&self.xb, j);
            }
            xi
        };
        let yi = run_model(&self.model, &xi)?;
        self.evals.fetch_add(self.n() as u64, Ordering::Relaxed);
        Ok((xi, yi))
    }
}

impl std::fmt::Debug for EvaluatedDesign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EvaluatedDesign")
            .field("model", &self.model.name())
            .field("n", &self.n())
            .field("k", &self.k())
            .field("evals", &self.evals())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::marginals::MarginalSpec;
    use crate::models;
    use crate::qmc::generate_design;

    struct ConstModel(f64);

    impl Model for ConstModel {
        fn name(&self) -> &str {
            "const"
        }
        fn dim(&self) -> usize {
            3
        }
        fn evaluate(&self, x: &Matrix) -> Result<Vec<f64>> {
            Ok(vec![self.0; x.rows()])
        }
    }

    fn unit_transform(k: usize) -> InputTransform {
        InputTransform::independent(vec![MarginalSpec::uniform(0.0, 1.0).unwrap(); k]).unwrap()
    }

    #[test]
    fn constant_model_fills_both_blocks() {
        let model: ModelHandle = Arc::new(ConstModel(4.25));
        let t = unit_transform(3);
        let design = generate_design(16, 3, 0).unwrap();
        let d = evaluate_base(&model, design, &t).unwrap();
        assert!(d.ya().iter().all(|&y| y == 4.25));
        assert!(d.yb().iter().all(|&y| y == 4.25));
        assert_eq!(d.evals(), 32);
    }

    #[test]
    fn full_set_shortcut_returns_b_block() {
        let setup = models::by_name("ishigami").unwrap();
        let t = InputTransform::independent(setup.marginals).unwrap();
        let design = generate_design(64, 4, 0).unwrap();
        let d = evaluate_base(&setup.model, design, &t).unwrap();
        let before = d.evals();
        let (xi, yi) = d.mixed_block(SubsetMask::full(4), &t).unwrap();
        assert_eq!(&xi, d.xb());
        assert_eq!(yi, d.yb());
        assert_eq!(d.evals(), before, "shortcut must not spend evaluations");
    }

    #[test]
    fn freezing_keeps_unmixed_columns_from_a() {
        let setup = models::by_name("ishigami").unwrap();
        let t = InputTransform::independent(setup.marginals).unwrap();
        let design = generate_design(32, 4, 0).unwrap();
        let d = evaluate_base(&setup.model, design, &t).unwrap();
        let mask = SubsetMask::from_inputs(&[1]).unwrap();
        let (xi, _) = d.mixed_block(mask, &t).unwrap();
        for i in 0..32 {
            for j in 0..4 {
                let expect = if j == 1 { d.xb() } else { d.xa() };
                assert_eq!(xi.get(i, j), expect.get(i, j));
            }
        }
    }

    #[test]
    fn dummy_only_mask_reproduces_ya_exactly() {
        let setup = models::by_name("ishigami").unwrap();
        let t = InputTransform::independent(setup.marginals).unwrap();
        let design = generate_design(128, 4, 0).unwrap();
        let d = evaluate_base(&setup.model, design, &t).unwrap();
        // Input 4 is inert; freezing only it cannot change the output.
        let (_, yi) = d.mixed_block(SubsetMask::singleton(3), &t).unwrap();
        assert_eq!(yi, d.ya());
    }

    #[test]
    fn evaluation_counter_tracks_blocks() {
        let setup = models::by_name("ishigami").unwrap();
        let t = InputTransform::independent(setup.marginals).unwrap();
        let n = 16;
        let design = generate_design(n, 4, 0).unwrap();
        let d = evaluate_base(&setup.model, design, &t).unwrap();
        assert_eq!(d.evals(), 2 * n as u64);
        d.mixed_block(SubsetMask::singleton(0), &t).unwrap();
        assert_eq!(d.evals(), 3 * n as u64);
        d.mixed_block(SubsetMask::from_inputs(&[0, 2]).unwrap(), &t)
            .unwrap();
        assert_eq!(d.evals(), 4 * n as u64);
    }

    #[test]
    fn ishigami_output_variance_near_analytic_value() {
        let setup = models::by_name("ishigami").unwrap();
        let t = InputTransform::independent(setup.marginals).unwrap();
        let design = generate_design(1024, 4, 0).unwrap();
        let d = evaluate_base(&setup.model, design, &t).unwrap();
        let n = d.yb().len() as f64;
        let mean: f64 = d.yb().iter().sum::<f64>() / n;
        let var: f64 = d.yb().iter().map(|y| (y - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let truth = crate::analytic::ishigami_total_variance();
        assert!((truth - 13.84).abs() < 0.01);
        assert!(
            (var - truth).abs() / truth < 0.10,
            "sample variance {var} vs analytic {truth}"
        );
    }

    struct BadModel;

    impl Model for BadModel {
        fn name(&self) -> &str {
            "bad"
        }
        fn dim(&self) -> usize {
            2
        }
        fn evaluate(&self, x: &Matrix) -> Result<Vec<f64>> {
            Ok((0..x.rows())
                .map(|i| if i == 3 { f64::NAN } else { 1.0 })
                .collect())
        }
    }

    #[test]
    fn non_finite_output_reports_row() {
        let model: ModelHandle = Arc::new(BadModel);
        let t = unit_transform(2);
        let design = generate_design(8, 2, 0).unwrap();
        let err = evaluate_base(&model, design, &t).unwrap_err();
        match err {
            Error::NonFiniteOutput { row, .. } => assert_eq!(row, 3),
            other => panic!("unexpected {other:?}"),
        }
    }
}
