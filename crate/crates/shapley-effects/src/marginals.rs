//! Marginal input distributions and their inverse CDFs.
//!
//! Uniform samples are mapped into physical input space column by
//! column through the inverse CDF of each marginal. Truncation is a
//! restricted inverse CDF, `u' = F(lo) + u * (F(hi) - F(lo))`, which
//! keeps the stratification of a low-discrepancy design intact instead
//! of rejecting points.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norm;

/// Distribution family of one input.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum MarginalFamily {
    /// Uniform on `[a, b)`.
    Uniform { a: f64, b: f64 },
    /// Normal with mean and standard deviation.
    Normal { mean: f64, sd: f64 },
    /// Lognormal parameterized on the log scale.
    LogNormal { mu_log: f64, sigma_log: f64 },
}

/// Optional one- or two-sided bound on the physical value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

/// One input's marginal distribution, possibly truncated.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarginalSpec {
    #[serde(flatten)]
    pub family: MarginalFamily,
    #[serde(default, skip_serializing_if = "Truncation::is_none")]
    pub truncation: Truncation,
}

impl Truncation {
    fn is_none(&self) -> bool {
        self.lower.is_none() && self.upper.is_none()
    }
}

impl MarginalSpec {
    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidMarginal(format!(
                "uniform bounds must satisfy a < b, got a={a}, b={b}"
            )));
        }
        Ok(MarginalSpec {
            family: MarginalFamily::Uniform { a, b },
            truncation: Truncation::default(),
        })
    }

    pub fn normal(mean: f64, sd: f64) -> Result<Self> {
        if !(sd > 0.0) || !mean.is_finite() || !sd.is_finite() {
            return Err(Error::InvalidMarginal(format!(
                "normal sd must be positive, got mean={mean}, sd={sd}"
            )));
        }
        Ok(MarginalSpec {
            family: MarginalFamily::Normal { mean, sd },
            truncation: Truncation::default(),
        })
    }

    pub fn lognormal(mu_log: f64, sigma_log: f64) -> Result<Self> {
        if !(sigma_log > 0.0) || !mu_log.is_finite() || !sigma_log.is_finite() {
            return Err(Error::InvalidMarginal(format!(
                "lognormal sigma must be positive, got mu={mu_log}, sigma={sigma_log}"
            )));
        }
        Ok(MarginalSpec {
            family: MarginalFamily::LogNormal { mu_log, sigma_log },
            truncation: Truncation::default(),
        })
    }

    /// Restrict the support. The remaining probability mass must be
    /// nonzero.
    pub fn truncated(mut self, lower: Option<f64>, upper: Option<f64>) -> Result<Self> {
        self.truncation = Truncation { lower, upper };
        let (flo, fhi) = self.truncation_cdf_bounds();
        if !(fhi - flo > 0.0) {
            return Err(Error::InvalidMarginal(format!(
                "truncation to [{lower:?}, {upper:?}] leaves no probability mass"
            )));
        }
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let rebuilt = match self.family {
            MarginalFamily::Uniform { a, b } => Self::uniform(a, b)?,
            MarginalFamily::Normal { mean, sd } => Self::normal(mean, sd)?,
            MarginalFamily::LogNormal { mu_log, sigma_log } => Self::lognormal(mu_log, sigma_log)?,
        };
        rebuilt.truncated(self.truncation.lower, self.truncation.upper)?;
        Ok(())
    }

    fn truncation_cdf_bounds(&self) -> (f64, f64) {
        let flo = self.truncation.lower.map_or(0.0, |lo| self.cdf_raw(lo));
        let fhi = self.truncation.upper.map_or(1.0, |hi| self.cdf_raw(hi));
        (flo, fhi)
    }

    /// CDF of the untruncated family.
    pub fn cdf_raw(&self, x: f64) -> f64 {
        match self.family {
            MarginalFamily::Uniform { a, b } => ((x - a) / (b - a)).clamp(0.0, 1.0),
            MarginalFamily::Normal { mean, sd } => norm::phi((x - mean) / sd),
            MarginalFamily::LogNormal { mu_log, sigma_log } => {
                if x <= 0.0 {
                    0.0
                } else {
                    norm::phi((x.ln() - mu_log) / sigma_log)
                }
            }
        }
    }

    /// CDF including the truncation restriction.
    pub fn cdf(&self, x: f64) -> f64 {
        let (flo, fhi) = self.truncation_cdf_bounds();
        ((self.cdf_raw(x) - flo) / (fhi - flo)).clamp(0.0, 1.0)
    }

    fn quantile_raw(&self, u: f64) -> f64 {
        match self.family {
            MarginalFamily::Uniform { a, b } => a + u * (b - a),
            MarginalFamily::Normal { mean, sd } => mean + sd * norm::phi_inv(u),
            MarginalFamily::LogNormal { mu_log, sigma_log } => {
                (mu_log + sigma_log * norm::phi_inv(u)).exp()
            }
        }
    }

    /// Restricted inverse CDF: maps `u` in `[0,1)` to the (truncated)
    /// physical value. Unbounded families return non-finite values at
    /// the boundary of the unit interval; callers decide whether that
    /// is a domain error.
    pub fn quantile(&self, u: f64) -> f64 {
        if self.truncation.is_none() {
            return self.quantile_raw(u);
        }
        let (flo, fhi) = self.truncation_cdf_bounds();
        self.quantile_raw(flo + u * (fhi - flo))
    }

    /// Physical value for a standard normal score. Equivalent to
    /// `quantile(phi(z))` but skips the uniform round trip for
    /// untruncated normal and lognormal marginals, which keeps the
    /// Gaussian-copula path exact in the tails.
    pub fn from_score(&self, z: f64) -> f64 {
        match (self.family, self.truncation.is_none()) {
            (MarginalFamily::Normal { mean, sd }, true) => mean + sd * z,
            (MarginalFamily::LogNormal { mu_log, sigma_log }, true) => {
                (mu_log + sigma_log * z).exp()
            }
            _ => self.quantile(norm::phi(z)),
        }
    }
}
