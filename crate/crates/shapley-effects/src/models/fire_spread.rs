//! Rothermel-style fire-spread rate simulator.
//!
//! The output is the steady-state rate of spread in ft/min, computed
//! from ten uncertain fuel and environment inputs through the classic
//! chain of empirical subequations (reaction intensity, propagating
//! flux ratio, wind and slope factors, heat sink).
//!
//! Unit convention: the input distributions describe physical values
//! in SI-flavored units (cm, cm^-1, kcal/kg, g/cm^3, km/h), while the
//! empirical formulas expect imperial units. The model converts at the
//! start of the chain with exact standard factors. One subtlety: the
//! fuel-loading logistic is written against fuel depth in feet with an
//! explicit factor of 30.48 inside the exponential, which is exactly
//! the depth re-expressed in centimeters; the midpoint of the logistic
//! therefore sits at a physically sensible 15 cm.

use std::sync::Arc;

use crate::copula::DependenceSpec;
use crate::error::{Error, Result};
use crate::marginals::MarginalSpec;
use crate::matrix::Matrix;
use crate::pick_freeze::{Model, ModelHandle};

pub const DIM: usize = 10;

/// Input order: fuel depth, area-to-volume ratio, heat content,
/// particle density, live moisture, dead moisture, mineral content,
/// wind speed, slope tangent, dead-to-total loading.
pub const INPUT_NAMES: [&str; DIM] = [
    "delta", "sigma", "h", "rho_p", "m_l", "m_d", "s_t", "u", "tan_phi", "p",
];

/// Index of the dead-fuel moisture input.
pub const M_D: usize = 5;
/// Index of the wind-speed input.
pub const U: usize = 7;

const CM_PER_FT: f64 = 30.48;
const BTU_LB_PER_KCAL_KG: f64 = 1.8;
const LB_FT3_PER_G_CM3: f64 = 62.42796;
const FT_MIN_PER_KM_H: f64 = 54.68066;

/// Every intermediate of the equation chain, exposed for diagnostics
/// and for value-by-value comparison against independent
/// transcriptions.
#[derive(Clone, Copy, Debug)]
pub struct FireIntermediates {
    pub fuel_loading: f64,
    pub gamma_max: f64,
    pub beta_op: f64,
    pub a: f64,
    pub theta_star: f64,
    pub theta: f64,
    pub moisture_damping: f64,
    pub mineral_damping: f64,
    pub c: f64,
    pub b: f64,
    pub e: f64,
    pub net_fuel_loading: f64,
    pub bulk_density: f64,
    pub heating_number: f64,
    pub heat_of_preignition: f64,
    pub packing_ratio: f64,
    pub gamma: f64,
    pub flux_ratio: f64,
    pub wind_factor: f64,
    pub slope_factor: f64,
    pub reaction_intensity: f64,
    pub spread_rate: f64,
}

/// One row of the chain; SI-flavored inputs per [`INPUT_NAMES`].
/// Returns the name of the first quantity that violates a positivity
/// requirement.
pub fn intermediates(x: &[f64]) -> std::result::Result<FireIntermediates, &'static str> {
    let [delta_cm, sigma_cm, h_kcal, rho_si, m_l, m_d, s_t, u_kmh, tan_phi, p] =
        *x else {
            return Err("input row length");
        };

    if !(delta_cm > 0.0) {
        return Err("fuel depth");
    }
    if !(sigma_cm > 0.0) {
        return Err("area-to-volume ratio");
    }
    if !(rho_si > 0.0) {
        return Err("particle density");
    }
    if !(m_l > 0.0) {
        return Err("live moisture content");
    }
    if !(s_t > 0.0) {
        return Err("mineral content");
    }
    if !(u_kmh >= 0.0) {
        return Err("wind speed");
    }

    let delta = delta_cm / CM_PER_FT;
    let sigma = sigma_cm * CM_PER_FT;
    let heat = h_kcal * BTU_LB_PER_KCAL_KG;
    let rho_p = rho_si * LB_FT3_PER_G_CM3;
    let u = u_kmh * FT_MIN_PER_KM_H;

    // 30.48 * delta(ft) is the depth in centimeters.
    let fuel_loading = 0.2048 / (1.0 + ((15.0 - CM_PER_FT * delta) / 2.0).exp());
    let sigma15 = sigma.powf(1.5);
    let gamma_max = sigma15 / (495.0 + 0.0594 * sigma15);
    let beta_op = 3.348 * sigma.powf(-0.8189);
    let a = 133.0 * sigma.powf(-0.7913);

    let theta_star = (301.4 - 305.87 * (m_l - m_d) + 2260.0 * m_d) / (2260.0 * m_l);
    let theta = theta_star.clamp(0.0, 1.0);
    let moisture_damping =
        (-7.3 * p * m_d - (7.3 * theta + 2.13) * (1.0 - p) * m_l).exp();
    let mineral_damping = 0.174 * s_t.powf(-0.19);

    let c = 7.47 * (-0.133 * sigma.powf(0.55)).exp();
    let b = 0.02526 * sigma.powf(0.54);
    let e = 0.715 * (-3.59e-4 * sigma).exp();

    let net_fuel_loading = fuel_loading * (1.0 - s_t);
    let bulk_density = fuel_loading / delta;
    let heating_number = (-138.0 / sigma).exp();
    let heat_of_preignition = 130.87 + 1054.43 * m_d;
    let packing_ratio = bulk_density / rho_p;

    let ratio = packing_ratio / beta_op;
    if !(ratio > 0.0) {
        return Err("packing ratio");
    }
    let gamma = gamma_max * ratio.powf(a) * (a * (1.0 - ratio)).exp();
    let flux_ratio =
        ((0.792 + 0.681 * sigma.sqrt()) * (packing_ratio + 0.1)).exp() / (192.0 + 0.2595 * sigma);
    let wind_factor = c * u.powf(b) * ratio.powf(-e);
    let slope_factor = 5.275 * packing_ratio.powf(-0.3) * tan_phi * tan_phi;

    let reaction_intensity = gamma * net_fuel_loading * heat * moisture_damping * mineral_damping;
    let heat_sink = bulk_density * heating_number * heat_of_preignition;
    if !(heat_sink > 0.0) {
        return Err("heat sink");
    }
    let spread_rate = reaction_intensity * flux_ratio * (1.0 + wind_factor + slope_factor) / heat_sink;

    Ok(FireIntermediates {
        fuel_loading,
        gamma_max,
        beta_op,
        a,
        theta_star,
        theta,
        moisture_damping,
        mineral_damping,
        c,
        b,
        e,
        net_fuel_loading,
        bulk_density,
        heating_number,
        heat_of_preignition,
        packing_ratio,
        gamma,
        flux_ratio,
        wind_factor,
        slope_factor,
        reaction_intensity,
        spread_rate,
    })
}

pub struct FireSpread;

impl Model for FireSpread {
    fn name(&self) -> &str {
        "fire-spread"
    }

    fn dim(&self) -> usize {
        DIM
    }

    fn evaluate(&self, x: &Matrix) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(x.rows());
        for (row, r) in x.row_iter().enumerate() {
            match intermediates(r) {
                Ok(v) => out.push(v.spread_rate),
                Err(quantity) => {
                    return Err(Error::NonPositiveIntermediate { quantity, row });
                }
            }
        }
        Ok(out)
    }
}

pub fn handle() -> ModelHandle {
    Arc::new(FireSpread)
}

/// The ten input marginals with their truncations, in SI-flavored
/// units.
pub fn marginals() -> Vec<MarginalSpec> {
    let spec = |m: Result<MarginalSpec>| m.expect("valid marginal");
    vec![
        // delta: fuel depth [cm]
        spec(MarginalSpec::lognormal(2.19, 0.517)),
        // sigma: area-to-volume ratio [1/cm], > 3/0.6
        spec(
            MarginalSpec::lognormal(3.31, 0.294)
                .and_then(|m| m.truncated(Some(3.0 / 0.6), None)),
        ),
        // h: heat content [kcal/kg]
        spec(MarginalSpec::lognormal(8.48, 0.063)),
        // rho_p: particle density [g/cm^3]
        spec(MarginalSpec::lognormal(-0.592, 0.219)),
        // m_l: live moisture [g/g], > 0
        spec(MarginalSpec::normal(1.18, 0.377).and_then(|m| m.truncated(Some(0.0), None))),
        // m_d: dead moisture [g/g]
        spec(MarginalSpec::normal(0.19, 0.047)),
        // s_t: mineral content [g/g], > 0
        spec(MarginalSpec::normal(0.049, 0.011).and_then(|m| m.truncated(Some(0.0), None))),
        // u: wind speed [km/h]
        spec(MarginalSpec::lognormal(2.9534, 0.5569)),
        // tan_phi: slope, > 0
        spec(MarginalSpec::normal(0.38, 0.186).and_then(|m| m.truncated(Some(0.0), None))),
        // p: dead-to-total loading, < 1
        spec(MarginalSpec::lognormal(-2.19, 0.66).and_then(|m| m.truncated(None, Some(1.0)))),
    ]
}

/// Named dependence scenarios linking dead-fuel moisture and wind:
/// `none`, `weak` (rank -0.3), `strong` (rank -0.8).
pub fn scenario(name: &str) -> Result<DependenceSpec> {
    let base = DependenceSpec::independent(DIM);
    match name {
        "none" => Ok(base),
        "weak" => base.with_pair(M_D, U, -0.3),
        "strong" => base.with_pair(M_D, U, -0.8),
        other => Err(Error::InvalidCorrelation(format!(
            "unknown dependence scenario '{other}' (expected none, weak, or strong)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Median-ish row in SI units.
    fn median_row() -> [f64; DIM] {
        [
            (2.19f64).exp(),
            (3.31f64).exp(),
            (8.48f64).exp(),
            (-0.592f64).exp(),
            1.18,
            0.19,
            0.049,
            (2.9534f64).exp(),
            0.38,
            (-2.19f64).exp(),
        ]
    }

    #[test]
    fn positive_rate_at_median_inputs() {
        let v = intermediates(&median_row()).unwrap();
        assert!(v.spread_rate > 0.0);
        assert!(v.reaction_intensity > 0.0);
        assert!(v.flux_ratio > 0.0);
    }

    #[test]
    fn theta_clamps_to_unit_interval() {
        let mut row = median_row();
        // Wet dead fuel, dry live fuel pushes theta* above one.
        row[M_D] = 0.5;
        row[4] = 0.3;
        let v = intermediates(&row).unwrap();
        assert!(v.theta_star > 1.0);
        assert_eq!(v.theta, 1.0);

        // Very moist live fuel pushes theta* below zero.
        row[M_D] = 0.0;
        row[4] = 4.0;
        let v = intermediates(&row).unwrap();
        assert!(v.theta_star < 0.0);
        assert_eq!(v.theta, 0.0);
    }

    #[test]
    fn wind_increases_spread_rate() {
        let mut row = median_row();
        let r0 = intermediates(&row).unwrap().spread_rate;
        row[U] *= 2.0;
        let r1 = intermediates(&row).unwrap().spread_rate;
        row[U] *= 2.0;
        let r2 = intermediates(&row).unwrap().spread_rate;
        assert!(r0 < r1 && r1 < r2, "{r0} {r1} {r2}");
    }

    #[test]
    fn positivity_violation_names_quantity() {
        let mut row = median_row();
        row[6] = 0.0;
        assert_eq!(intermediates(&row).unwrap_err(), "mineral content");

        let x = Matrix::from_vec(1, DIM, row.to_vec());
        let err = FireSpread.evaluate(&x).unwrap_err();
        match err {
            Error::NonPositiveIntermediate { quantity, row } => {
                assert_eq!(quantity, "mineral content");
                assert_eq!(row, 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn block_matches_rowwise() {
        let rows = [median_row(), {
            let mut r = median_row();
            r[0] *= 2.0;
            r[U] *= 0.5;
            r
        }];
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        let block = FireSpread
            .evaluate(&Matrix::from_vec(2, DIM, flat))
            .unwrap();
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(block[i], intermediates(r).unwrap().spread_rate);
        }
    }

    #[test]
    fn scenarios() {
        assert!(scenario("none").unwrap().is_identity());
        assert_eq!(scenario("weak").unwrap().spearman(M_D, U), -0.3);
        assert_eq!(scenario("strong").unwrap().spearman(U, M_D), -0.8);
        assert!(scenario("extreme").is_err());
    }
}
