//! Gaussian-copula dependence and the triangular conditional-mixing
//! transform.
//!
//! Dependence is specified as a Spearman rank-correlation matrix and
//! realized with a Gaussian copula: rank correlations are converted to
//! Pearson correlations of the underlying normal scores via
//! `rho_P = 2 sin(pi rho_S / 6)`, the scores are correlated through
//! the lower-triangular Cholesky factor of that matrix, and each
//! coordinate is pushed through its marginal inverse CDF. The
//! triangular factor is what makes conditional sampling work: fixing a
//! group of coordinates pins down the leading innovations, and the
//! remaining coordinates can be redrawn conditionally from fresh
//! innovations.
//!
//! [`InputTransform::conditional_mix`] is the pick'n'freeze mixing rule
//! under dependence. Inputs in the frozen group take the exact values
//! the plain transform assigns to the B row; inputs outside the group
//! are sampled from their conditional distribution given those values,
//! using the A row as the source of fresh innovations. With an
//! identity correlation matrix this reduces to coordinate-wise mixing
//! of the two rows.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::marginals::MarginalSpec;
use crate::matrix::Matrix;
use crate::norm;
use crate::subset::SubsetMask;

/// Spearman rank-correlation matrix (identity for independence).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DependenceSpec {
    k: usize,
    /// Row-major k-by-k Spearman matrix.
    spearman: Vec<f64>,
}

impl DependenceSpec {
    /// Independent inputs.
    pub fn independent(k: usize) -> Self {
        let mut spearman = vec![0.0; k * k];
        for i in 0..k {
            spearman[i * k + i] = 1.0;
        }
        DependenceSpec { k, spearman }
    }

    /// Validate and wrap a full Spearman matrix.
    pub fn from_spearman(k: usize, spearman: Vec<f64>) -> Result<Self> {
        if spearman.len() != k * k {
            return Err(Error::InvalidCorrelation(format!(
                "expected {k}x{k} matrix, got {} entries",
                spearman.len()
            )));
        }
        for i in 0..k {
            if spearman[i * k + i] != 1.0 {
                return Err(Error::InvalidCorrelation(format!(
                    "diagonal entry ({i},{i}) must be 1"
                )));
            }
            for j in 0..k {
                let v = spearman[i * k + j];
                if !v.is_finite() || v.abs() > 1.0 {
                    return Err(Error::InvalidCorrelation(format!(
                        "entry ({i},{j}) = {v} outside [-1, 1]"
                    )));
                }
                if (v - spearman[j * k + i]).abs() > 1e-12 {
                    return Err(Error::InvalidCorrelation(format!(
                        "matrix not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(DependenceSpec { k, spearman })
    }

    /// Set one off-diagonal pair (zero-based indices).
    pub fn with_pair(mut self, i: usize, j: usize, rho: f64) -> Result<Self> {
        if i >= self.k || j >= self.k || i == j {
            return Err(Error::InvalidCorrelation(format!(
                "pair ({i},{j}) out of range for k={}",
                self.k
            )));
        }
        if !rho.is_finite() || rho.abs() >= 1.0 {
            return Err(Error::InvalidCorrelation(format!(
                "pair correlation {rho} must lie strictly inside (-1, 1)"
            )));
        }
        self.spearman[i * self.k + j] = rho;
        self.spearman[j * self.k + i] = rho;
        Ok(self)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn spearman(&self, i: usize, j: usize) -> f64 {
        self.spearman[i * self.k + j]
    }

    pub fn is_identity(&self) -> bool {
        (0..self.k).all(|i| {
            (0..self.k).all(|j| self.spearman[i * self.k + j] == if i == j { 1.0 } else { 0.0 })
        })
    }

    /// Pearson correlation of the underlying normal scores.
    fn to_pearson(&self) -> Vec<f64> {
        self.spearman
            .iter()
            .map(|&r| {
                if r == 1.0 || r == -1.0 || r == 0.0 {
                    r
                } else {
                    2.0 * (PI * r / 6.0).sin()
                }
            })
            .collect()
    }
}

/// Lower-triangular Cholesky factor of a symmetric positive-definite
/// matrix, row-major. `None` when the matrix is not positive definite.
fn cholesky_lower(k: usize, a: &[f64]) -> Option<Vec<f64>> {
    let mut l = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..=i {
            let mut sum = a[i * k + j];
            for t in 0..j {
                sum -= l[i * k + t] * l[j * k + t];
            }
            if i == j {
                if sum <= 1e-12 {
                    return None;
                }
                l[i * k + i] = sum.sqrt();
            } else {
                l[i * k + j] = sum / l[j * k + j];
            }
        }
    }
    Some(l)
}

/// Cached factorization for one conditioning order.
struct ReorderedFactor {
    /// Coordinates of the frozen group first (ascending), then the
    /// complement (ascending).
    perm: Vec<usize>,
    /// Lower Cholesky factor of the permuted Pearson matrix.
    chol: Vec<f64>,
}

/// Map from the unit hypercube into physical input space.
///
/// Immutable after construction except for an internal factor cache,
/// which fills idempotently and is safe to share across threads.
pub struct InputTransform {
    marginals: Vec<MarginalSpec>,
    dependence: DependenceSpec,
    pearson: Vec<f64>,
    /// Cholesky factor of the full Pearson matrix in natural coordinate
    /// order; `None` for independent inputs.
    chol_full: Option<Vec<f64>>,
    factor_cache: RwLock<HashMap<u32, Arc<ReorderedFactor>>>,
}

impl InputTransform {
    pub fn new(marginals: Vec<MarginalSpec>, dependence: DependenceSpec) -> Result<Self> {
        let k = marginals.len();
        if dependence.k() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                got: dependence.k(),
            });
        }
        for m in &marginals {
            m.validate()?;
        }
        let pearson = dependence.to_pearson();
        let chol_full = if dependence.is_identity() {
            None
        } else {
            Some(
                cholesky_lower(k, &pearson).ok_or_else(|| Error::NotPositiveDefinite {
                    context: "full correlation matrix".to_string(),
                })?,
            )
        };
        Ok(InputTransform {
            marginals,
            dependence,
            pearson,
            chol_full,
            factor_cache: RwLock::new(HashMap::new()),
        })
    }

    /// Independent inputs with the given marginals.
    pub fn independent(marginals: Vec<MarginalSpec>) -> Result<Self> {
        let k = marginals.len();
        Self::new(marginals, DependenceSpec::independent(k))
    }

    pub fn k(&self) -> usize {
        self.marginals.len()
    }

    pub fn marginals(&self) -> &[MarginalSpec] {
        &self.marginals
    }

    pub fn dependence(&self) -> &DependenceSpec {
        &self.dependence
    }

    pub fn is_dependent(&self) -> bool {
        self.chol_full.is_some()
    }

    /// Pearson correlation of the underlying normal scores.
    pub fn pearson(&self, i: usize, j: usize) -> f64 {
        self.pearson[i * self.k() + j]
    }

    /// Transform one row of uniforms into physical inputs.
    pub fn transform_row(&self, u_row: &[f64], out: &mut [f64], row: usize) -> Result<()> {
        let k = self.k();
        debug_assert_eq!(u_row.len(), k);
        debug_assert_eq!(out.len(), k);
        match &self.chol_full {
            None => {
                for j in 0..k {
                    let x = self.marginals[j].quantile(u_row[j]);
                    if !x.is_finite() {
                        return Err(Error::UniformOutOfDomain { row, col: j });
                    }
                    out[j] = x;
                }
            }
            Some(chol) => {
                let mut scores = vec![0.0; k];
                for j in 0..k {
                    let z = norm::phi_inv(u_row[j]);
                    if !z.is_finite() {
                        return Err(Error::UniformOutOfDomain { row, col: j });
                    }
                    scores[j] = z;
                }
                for j in 0..k {
                    let mut s = 0.0;
                    for t in 0..=j {
                        s += chol[j * k + t] * scores[t];
                    }
                    let x = self.marginals[j].from_score(s);
                    if !x.is_finite() {
                        return Err(Error::UniformOutOfDomain { row, col: j });
                    }
                    out[j] = x;
                }
            }
        }
        Ok(())
    }

    /// Transform a whole block of uniforms row-wise.
    pub fn transform(&self, u: &Matrix) -> Result<Matrix> {
        let mut out = Matrix::zeros(u.rows(), u.cols());
        for i in 0..u.rows() {
            let mut row = vec![0.0; u.cols()];
            self.transform_row(u.row(i), &mut row, i)?;
            out.row_mut(i).copy_from_slice(&row);
        }
        Ok(out)
    }

    fn factor(&self, mask: SubsetMask) -> Result<Arc<ReorderedFactor>> {
        if let Some(f) = self.factor_cache.read().unwrap().get(&mask.bits()) {
            return Ok(Arc::clone(f));
        }
        let k = self.k();
        let mut perm: Vec<usize> = mask.members().collect();
        perm.extend((0..k).filter(|i| !mask.contains(*i)));
        let mut reordered = vec![0.0; k * k];
        for (a, &pa) in perm.iter().enumerate() {
            for (b, &pb) in perm.iter().enumerate() {
                reordered[a * k + b] = self.pearson[pa * k + pb];
            }
        }
        let chol = cholesky_lower(k, &reordered).ok_or_else(|| Error::NotPositiveDefinite {
            context: format!("correlation matrix reordered for group {{{mask}}}"),
        })?;
        let factor = Arc::new(ReorderedFactor { perm, chol });
        let mut cache = self.factor_cache.write().unwrap();
        Ok(Arc::clone(
            cache.entry(mask.bits()).or_insert(factor),
        ))
    }

    /// Pick'n'freeze mixing of two uniform rows.
    ///
    /// Inputs in `mask` take exactly the physical values that
    /// [`transform_row`](Self::transform_row) assigns to `ub_row`;
    /// inputs outside `mask` are drawn from their Gaussian-copula
    /// conditional distribution given those values, with `ua_row`
    /// providing the innovations. Independent case: columns in `mask`
    /// from `ub_row`, the rest from `ua_row`.
    pub fn conditional_mix(
        &self,
        ua_row: &[f64],
        ub_row: &[f64],
        mask: SubsetMask,
        row: usize,
    ) -> Result<Vec<f64>> {
        let k = self.k();
        let chol = match &self.chol_full {
            None => {
                // Degenerate copula: coordinate-wise mixing.
                let mut out = vec![0.0; k];
                for j in 0..k {
                    let u = if mask.contains(j) { ub_row[j] } else { ua_row[j] };
                    let x = self.marginals[j].quantile(u);
                    if !x.is_finite() {
                        return Err(Error::UniformOutOfDomain { row, col: j });
                    }
                    out[j] = x;
                }
                return Ok(out);
            }
            Some(c) => c,
        };

        // Correlated scores of the B row, identical operation order to
        // transform_row so the frozen values match bit for bit.
        let mut zb = vec![0.0; k];
        for j in 0..k {
            let z = norm::phi_inv(ub_row[j]);
            if !z.is_finite() {
                return Err(Error::UniformOutOfDomain { row, col: j });
            }
            zb[j] = z;
        }
        let mut zcorr_b = vec![0.0; k];
        for j in 0..k {
            let mut s = 0.0;
            for t in 0..=j {
                s += chol[j * k + t] * zb[t];
            }
            zcorr_b[j] = s;
        }

        let m = mask.cardinality() as usize;
        let factor = self.factor(mask)?;
        let perm = &factor.perm;
        let l = &factor.chol;

        // Innovations that reproduce the frozen group: solve the
        // leading triangular block against the B scores.
        let mut w = vec![0.0; m];
        for a in 0..m {
            let mut s = zcorr_b[perm[a]];
            for t in 0..a {
                s -= l[a * k + t] * w[t];
            }
            w[a] = s / l[a * k + a];
        }

        let mut out = vec![0.0; k];
        for &j in perm.iter().take(m) {
            let x = self.marginals[j].from_score(zcorr_b[j]);
            if !x.is_finite() {
                return Err(Error::UniformOutOfDomain { row, col: j });
            }
            out[j] = x;
        }
        for a in m..k {
            let j = perm[a];
            let mut s = 0.0;
            for t in 0..m {
                s += l[a * k + t] * w[t];
            }
            for t in m..=a {
                let zj = norm::phi_inv(ua_row[perm[t]]);
                if !zj.is_finite() {
                    return Err(Error::UniformOutOfDomain { row, col: perm[t] });
                }
                s += l[a * k + t] * zj;
            }
            let x = self.marginals[j].from_score(s);
            if !x.is_finite() {
                return Err(Error::UniformOutOfDomain { row, col: j });
            }
            out[j] = x;
        }
        Ok(out)
    }
}

impl std::fmt::Debug for InputTransform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("InputTransform")
            .field("k", &self.k())
            .field("dependent", &self.is_dependent())
            .finish()
    }
}
