//! One-call orchestration: design, evaluation, estimation, report.

use std::collections::BTreeMap;

use crate::copula::InputTransform;
use crate::error::Result;
use crate::moebius;
use crate::permutation;
use crate::pick_freeze::{evaluate_base, ModelHandle};
use crate::qmc::generate_design;
use crate::report::{Algorithm, ShapleyReport};
use crate::subset::SubsetMask;
use crate::value_table::{build_value_table_with, SupersetEstimator};

/// Which Shapley-Owen group effects to compute.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum OwenSelection {
    /// None requested.
    #[default]
    None,
    /// Every two-input group.
    AllPairs,
    /// An explicit list of groups.
    Groups(Vec<SubsetMask>),
}

impl OwenSelection {
    fn masks(&self, k: usize) -> Vec<SubsetMask> {
        match self {
            OwenSelection::None => Vec::new(),
            OwenSelection::AllPairs => SubsetMask::all_pairs(k).collect(),
            OwenSelection::Groups(list) => list.clone(),
        }
    }
}

/// Knobs for a single run.
#[derive(Clone, Debug)]
pub struct AnalysisOptions {
    pub algorithm: Algorithm,
    pub superset: SupersetEstimator,
    pub owen: OwenSelection,
    /// Attach the full per-mask value and Möbius tables to the report
    /// (`2^k` entries per row; lattice algorithm only).
    pub include_tables: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            algorithm: Algorithm::Moebius,
            superset: SupersetEstimator::Auto,
            owen: OwenSelection::None,
            include_tables: false,
        }
    }
}

/// Run one full analysis: generate the design, evaluate the model,
/// estimate every value function, and fold the results into a report.
pub fn run_shapley(
    model: &ModelHandle,
    transform: &InputTransform,
    n: usize,
    seed: u64,
    options: &AnalysisOptions,
) -> Result<ShapleyReport> {
    let k = model.dim();
    let design = generate_design(n, k, seed)?;
    let mut warnings = Vec::new();
    if !design.power_of_two() {
        warnings.push(format!(
            "sample size {n} is not a power of two; digital nets equidistribute best at powers of two"
        ));
    }
    let evaluated = evaluate_base(model, design, transform)?;

    match options.algorithm {
        Algorithm::Moebius => {
            let table = build_value_table_with(&evaluated, transform, options.superset)?;
            let inverses = moebius::moebius_invert(&table);
            let effects = moebius::shapley_effects(&inverses);
            let (first_order, total) = moebius::first_and_total(&inverses);
            let mut owen = BTreeMap::new();
            for mask in options.owen.masks(k) {
                owen.insert(mask.label(), moebius::shapley_owen(&inverses, mask));
            }
            let tables = options.include_tables.then(|| crate::report::LatticeTables {
                value_subset: table.subset_row().to_vec(),
                value_superset: table.superset_row().to_vec(),
                moebius_subset: inverses.subset_row().to_vec(),
                moebius_superset: inverses.superset_row().to_vec(),
            });
            Ok(ShapleyReport {
                model: model.name().to_string(),
                n,
                k,
                seed,
                algorithm: Algorithm::Moebius,
                var_y: table.var_y(),
                evals: table.evals(),
                phi_subset: effects.from_subset,
                phi_superset: effects.from_superset,
                first_order,
                total,
                owen,
                dependent: table.dependent(),
                superset_substituted: table.superset_substituted(),
                negative_subset_entries: table.negative_subset_entries(),
                warnings,
                tables,
            })
        }
        Algorithm::Permutation => {
            let run = permutation::permutation_shapley(&evaluated, transform)?;
            if options.owen != OwenSelection::None {
                warnings.push(
                    "shapley-owen effects have no permutation representation; \
                     use the moebius algorithm"
                        .to_string(),
                );
            }
            if options.include_tables {
                warnings.push(
                    "full lattice tables are only produced by the moebius algorithm".to_string(),
                );
            }
            let negatives = run.first_order.iter().filter(|&&v| v < 0.0).count();
            Ok(ShapleyReport {
                model: model.name().to_string(),
                n,
                k,
                seed,
                algorithm: Algorithm::Permutation,
                var_y: run.var_y,
                evals: run.evals,
                phi_subset: run.effects.from_subset,
                phi_superset: run.effects.from_superset,
                first_order: run.first_order,
                total: run.total,
                owen: BTreeMap::new(),
                dependent: transform.is_dependent(),
                superset_substituted: transform.is_dependent(),
                negative_subset_entries: negatives,
                warnings,
                tables: None,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    #[test]
    fn moebius_report_is_consistent() {
        let setup = models::by_name("ishigami").unwrap();
        let t = InputTransform::independent(setup.marginals).unwrap();
        let options = AnalysisOptions {
            owen: OwenSelection::AllPairs,
            ..Default::default()
        };
        let report = run_shapley(&setup.model, &t, 256, 0, &options).unwrap();
        assert_eq!(report.k, 4);
        assert_eq!(report.owen.len(), 6);
        let sum: f64 = report.phi_subset.iter().sum();
        assert!((sum - 1.0).abs() < 1e-10);
        assert!(report.warnings.is_empty());
        // Singleton consistency between report fields.
        assert!((report.owen.get("1+3").unwrap()).is_finite());
    }

    #[test]
    fn permutation_report_matches_moebius_phi() {
        let setup = models::by_name("ishigami").unwrap();
        let t = InputTransform::independent(setup.marginals).unwrap();
        let a = run_shapley(&setup.model, &t, 128, 0, &AnalysisOptions::default()).unwrap();
        let b = run_shapley(
            &setup.model,
            &t,
            128,
            0,
            &AnalysisOptions {
                algorithm: Algorithm::Permutation,
                ..Default::default()
            },
        )
        .unwrap();
        for i in 0..4 {
            assert!((a.phi_subset[i] - b.phi_subset[i]).abs() < 1e-10);
            assert!((a.phi_superset[i] - b.phi_superset[i]).abs() < 1e-10);
        }
        assert_eq!(a.evals, b.evals);
    }

    #[test]
    fn non_power_of_two_warns() {
        let setup = models::by_name("ishigami").unwrap();
        let t = InputTransform::independent(setup.marginals).unwrap();
        let report = run_shapley(&setup.model, &t, 100, 0, &AnalysisOptions::default()).unwrap();
        assert_eq!(report.warnings.len(), 1);
        assert!(report.warnings[0].contains("power of two"));
    }
}
