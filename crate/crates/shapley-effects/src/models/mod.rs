//! Benchmark simulators and their input specifications.

pub mod fire_spread;
pub mod ishigami;
pub mod oakley;
pub mod sobol_g;

use crate::error::{Error, Result};
use crate::marginals::MarginalSpec;
use crate::pick_freeze::ModelHandle;

/// A registered model together with its default input marginals.
pub struct ModelSetup {
    pub model: ModelHandle,
    pub marginals: Vec<MarginalSpec>,
    pub description: &'static str,
}

/// Names accepted by [`by_name`].
pub const NAMES: [&str; 4] = ["ishigami", "sobol-g", "oakley", "fire-spread"];

/// Look up a benchmark model by its registry name.
pub fn by_name(name: &str) -> Result<ModelSetup> {
    match name {
        "ishigami" => Ok(ModelSetup {
            model: ishigami::handle(),
            marginals: ishigami::marginals(),
            description: "sin(X1)(1 + X3^4/10) + 7 sin^2(X2) with an inert X4; 4 uniform inputs",
        }),
        "sobol-g" => Ok(ModelSetup {
            model: sobol_g::handle(),
            marginals: sobol_g::marginals(),
            description: "product-form g-function; 8 uniform inputs, two dominant",
        }),
        "oakley" => Ok(ModelSetup {
            model: oakley::handle(),
            marginals: oakley::marginals(),
            description: "linear + trigonometric + quadratic form; 15 standard normal inputs",
        }),
        "fire-spread" => Ok(ModelSetup {
            model: fire_spread::handle(),
            marginals: fire_spread::marginals(),
            description: "rate-of-spread chain; 10 lognormal/normal inputs, optional m_d-U rank correlation",
        }),
        other => Err(Error::UnknownModel(other.to_string())),
    }
}
