//! Structured emission: the nested JSON report, the flat CSV, and the
//! sweep table. All output is byte-deterministic for a fixed
//! experiment specification.

use std::collections::BTreeMap;

use serde::Serialize;

use shapley_effects::{
    exact_shapley, gfunction_game, ishigami_game, models, quadratic_risk, Algorithm,
    ShapleyReport,
};

use crate::config::Experiment;

/// Five-number summary per input over replicates.
#[derive(Serialize)]
pub struct Summary {
    pub mean: Vec<f64>,
    pub min: Vec<f64>,
    pub q1: Vec<f64>,
    pub median: Vec<f64>,
    pub q3: Vec<f64>,
    pub max: Vec<f64>,
}

fn quantile(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = p * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let w = pos - lo as f64;
    sorted[lo] * (1.0 - w) + sorted[hi] * w
}

fn summarize(rows: &[&Vec<f64>]) -> Summary {
    let k = rows[0].len();
    let mut mean = vec![0.0; k];
    let mut min = vec![0.0; k];
    let mut q1 = vec![0.0; k];
    let mut median = vec![0.0; k];
    let mut q3 = vec![0.0; k];
    let mut max = vec![0.0; k];
    for i in 0..k {
        let mut values: Vec<f64> = rows.iter().map(|r| r[i]).collect();
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        mean[i] = values.iter().sum::<f64>() / values.len() as f64;
        min[i] = values[0];
        q1[i] = quantile(&values, 0.25);
        median[i] = quantile(&values, 0.5);
        q3[i] = quantile(&values, 0.75);
        max[i] = values[values.len() - 1];
    }
    Summary {
        mean,
        min,
        q1,
        median,
        q3,
        max,
    }
}

/// Replicate-aggregated view of one algorithm's results.
#[derive(Serialize)]
pub struct Aggregate {
    pub algorithm: Algorithm,
    pub replicates: usize,
    pub var_y_mean: f64,
    pub evals_total: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_subset: Option<Summary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_superset: Option<Summary>,
    pub first_order_mean: Vec<f64>,
    pub total_mean: Vec<f64>,
    pub owen_mean: BTreeMap<String, f64>,
    /// Mean summed squared error against the analytic effects, when an
    /// oracle exists for the model (independent inputs only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadratic_risk: Option<f64>,
}

/// Exact per-input effects when the model has a closed-form game.
pub fn oracle_phi(model_name: &str) -> Option<Vec<f64>> {
    let game = match model_name {
        "ishigami" => ishigami_game(),
        "sobol-g" => gfunction_game(&models::sobol_g::A_STANDARD),
        _ => return None,
    };
    Some(exact_shapley(&game).ok()?.phi)
}

pub fn aggregate(
    experiment: &Experiment,
    algorithm: Algorithm,
    reports: &[ShapleyReport],
) -> Aggregate {
    let subset_rows: Vec<&Vec<f64>> = reports.iter().map(|r| &r.phi_subset).collect();
    let superset_rows: Vec<&Vec<f64>> = reports.iter().map(|r| &r.phi_superset).collect();
    let k = reports[0].k;

    let mut first_order_mean = vec![0.0; k];
    let mut total_mean = vec![0.0; k];
    for r in reports {
        for i in 0..k {
            first_order_mean[i] += r.first_order[i] / reports.len() as f64;
            total_mean[i] += r.total[i] / reports.len() as f64;
        }
    }

    let mut owen_mean = BTreeMap::new();
    for r in reports {
        for (label, value) in &r.owen {
            *owen_mean.entry(label.clone()).or_insert(0.0) += value / reports.len() as f64;
        }
    }

    let dependent = reports[0].dependent;
    let quadratic = if dependent {
        None
    } else {
        oracle_phi(&experiment.model_name).map(|truth| {
            let estimates: Vec<Vec<f64>> =
                reports.iter().map(|r| r.phi_subset.clone()).collect();
            quadratic_risk(&estimates, &truth)
        })
    };

    Aggregate {
        algorithm,
        replicates: reports.len(),
        var_y_mean: reports.iter().map(|r| r.var_y).sum::<f64>() / reports.len() as f64,
        evals_total: reports.iter().map(|r| r.evals).sum(),
        phi_subset: experiment
            .estimator
            .includes_subset()
            .then(|| summarize(&subset_rows)),
        phi_superset: experiment
            .estimator
            .includes_superset()
            .then(|| summarize(&superset_rows)),
        first_order_mean,
        total_mean,
        owen_mean,
        quadratic_risk: quadratic,
    }
}

/// The nested machine-readable run document.
#[derive(Serialize)]
pub struct RunDocument {
    pub model: String,
    pub n: usize,
    pub seed: u64,
    pub replicate_count: usize,
    pub aggregates: Vec<Aggregate>,
    pub replicates: Vec<ShapleyReport>,
}

pub fn render_run_json(document: &RunDocument) -> String {
    let mut text = serde_json::to_string_pretty(document).expect("serializable document");
    text.push('\n');
    text
}

/// Flat CSV: one row per input per replicate per selected estimator,
/// plus one row per requested group effect.
pub fn render_run_csv(experiment: &Experiment, runs: &[(Algorithm, Vec<ShapleyReport>)]) -> String {
    let mut out = String::new();
    out.push_str("model,algorithm,estimator,replicate,seed,n,input,shapley,first_order,total,var_y,evals\n");
    for (algorithm, reports) in runs {
        for (replicate, report) in reports.iter().enumerate() {
            let mut push_row = |estimator: &str, input: String, phi: f64, s: String, t: String| {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                    report.model,
                    algorithm,
                    estimator,
                    replicate,
                    report.seed,
                    report.n,
                    input,
                    phi,
                    s,
                    t,
                    report.var_y,
                    report.evals
                ));
            };
            for i in 0..report.k {
                let s = report.first_order[i].to_string();
                let t = report.total[i].to_string();
                if experiment.estimator.includes_subset() {
                    push_row(
                        "subset",
                        (i + 1).to_string(),
                        report.phi_subset[i],
                        s.clone(),
                        t.clone(),
                    );
                }
                if experiment.estimator.includes_superset() {
                    push_row(
                        "superset",
                        (i + 1).to_string(),
                        report.phi_superset[i],
                        s.clone(),
                        t.clone(),
                    );
                }
            }
            for (label, value) in &report.owen {
                push_row("owen", label.clone(), *value, String::new(), String::new());
            }
        }
    }
    out
}

/// One grid point of a correlation sweep.
#[derive(Serialize)]
pub struct SweepPoint {
    pub rho: f64,
    pub aggregate: Aggregate,
}

/// Sweep table: normalized and absolute views per grid value.
pub fn render_sweep_csv(points: &[SweepPoint]) -> String {
    let mut out = String::new();
    out.push_str("rho,input,estimator,phi_normalized,phi_absolute,var_y_mean,replicates\n");
    for point in points {
        let agg = &point.aggregate;
        let mut rows = |estimator: &str, summary: &Option<Summary>| {
            if let Some(summary) = summary {
                for (i, mean) in summary.mean.iter().enumerate() {
                    out.push_str(&format!(
                        "{},{},{},{},{},{},{}\n",
                        point.rho,
                        i + 1,
                        estimator,
                        mean,
                        mean * agg.var_y_mean,
                        agg.var_y_mean,
                        agg.replicates
                    ));
                }
            }
        };
        rows("subset", &agg.phi_subset);
        rows("superset", &agg.phi_superset);
    }
    out
}

pub fn render_sweep_json(points: &[SweepPoint]) -> String {
    let mut text = serde_json::to_string_pretty(points).expect("serializable sweep");
    text.push('\n');
    text
}
