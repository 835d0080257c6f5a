//! Second, independent transcription of the fire-spread equation
//! chain, compared against the production model value by value per
//! intermediate.
//!
//! The oracle below is deliberately structured differently from the
//! library code: straight-line arithmetic, conversions applied inline,
//! no shared helpers.

use shapley_effects::models::fire_spread::{self, FireIntermediates};
use shapley_effects::{generate_design, InputTransform};

/// Independent transcription. Inputs in the library's SI-flavored
/// units; returns the same intermediate set.
#[allow(clippy::too_many_arguments)]
fn oracle(
    delta_cm: f64,
    sigma_per_cm: f64,
    heat_kcal_per_kg: f64,
    density_g_per_cm3: f64,
    live_moisture: f64,
    dead_moisture: f64,
    mineral: f64,
    wind_km_per_h: f64,
    slope_tangent: f64,
    dead_fraction: f64,
) -> FireIntermediates {
    // Imperial working values.
    let depth_ft = delta_cm * (1.0 / 30.48);
    let savr = sigma_per_cm * 30.48; // 1/ft
    let heat = heat_kcal_per_kg * 1.8; // Btu/lb
    let density = density_g_per_cm3 * 62.42796; // lb/ft^3
    let wind = wind_km_per_h * 54.68066; // ft/min

    let w0 = 0.2048 / (1.0 + f64::exp((15.0 - 30.48 * depth_ft) / 2.0));
    let gmax = savr.powf(1.5) / (495.0 + 0.0594 * savr.powf(1.5));
    let bop = 3.348 / savr.powf(0.8189);
    let albini = 133.0 / savr.powf(0.7913);

    let th_star =
        (301.4 - 305.87 * (live_moisture - dead_moisture) + 2260.0 * dead_moisture)
            / (2260.0 * live_moisture);
    #[allow(clippy::manual_clamp)] // transcription avoids the library's clamp call
    let th = if th_star < 0.0 {
        0.0
    } else if th_star > 1.0 {
        1.0
    } else {
        th_star
    };
    let mu_m = f64::exp(
        -7.3 * dead_fraction * dead_moisture
            - (7.3 * th + 2.13) * (1.0 - dead_fraction) * live_moisture,
    );
    let mu_s = 0.174 / mineral.powf(0.19);

    let c = 7.47 * f64::exp(-0.133 * savr.powf(0.55));
    let b = 0.02526 * savr.powf(0.54);
    let e = 0.715 * f64::exp(-0.000359 * savr);

    let wn = w0 * (1.0 - mineral);
    let rho_b = w0 / depth_ft;
    let eps = f64::exp(-138.0 / savr);
    let q_ig = 130.87 + 1054.43 * dead_moisture;
    let beta = rho_b / density;

    let g = gmax * (beta / bop).powf(albini) * f64::exp(albini * (1.0 - beta / bop));
    let xi = f64::exp((0.792 + 0.681 * savr.sqrt()) * (beta + 0.1)) / (192.0 + 0.2595 * savr);
    let psi_w = c * wind.powf(b) * (beta / bop).powf(-e);
    let psi_s = 5.275 * beta.powf(-0.3) * slope_tangent.powi(2);

    let i_r = g * wn * heat * mu_m * mu_s;
    let r = i_r * xi * (1.0 + psi_w + psi_s) / (rho_b * eps * q_ig);

    FireIntermediates {
        fuel_loading: w0,
        gamma_max: gmax,
        beta_op: bop,
        a: albini,
        theta_star: th_star,
        theta: th,
        moisture_damping: mu_m,
        mineral_damping: mu_s,
        c,
        b,
        e,
        net_fuel_loading: wn,
        bulk_density: rho_b,
        heating_number: eps,
        heat_of_preignition: q_ig,
        packing_ratio: beta,
        gamma: g,
        flux_ratio: xi,
        wind_factor: psi_w,
        slope_factor: psi_s,
        reaction_intensity: i_r,
        spread_rate: r,
    }
}

fn assert_close(label: &str, got: f64, want: f64) {
    let rel = (got - want).abs() / want.abs().max(1e-30);
    assert!(rel < 1e-10, "{label}: {got} vs {want} (rel {rel:.2e})");
}

fn compare(row: &[f64]) {
    let got = fire_spread::intermediates(row).unwrap();
    let want = oracle(
        row[0], row[1], row[2], row[3], row[4], row[5], row[6], row[7], row[8], row[9],
    );
    assert_close("fuel loading", got.fuel_loading, want.fuel_loading);
    assert_close("maximum reaction velocity", got.gamma_max, want.gamma_max);
    assert_close("optimum packing ratio", got.beta_op, want.beta_op);
    assert_close("packing exponent", got.a, want.a);
    assert_close("moisture ratio", got.theta_star, want.theta_star);
    assert_close("clamped moisture ratio", got.theta, want.theta);
    assert_close("moisture damping", got.moisture_damping, want.moisture_damping);
    assert_close("mineral damping", got.mineral_damping, want.mineral_damping);
    assert_close("wind coefficient c", got.c, want.c);
    assert_close("wind exponent b", got.b, want.b);
    assert_close("wind damping e", got.e, want.e);
    assert_close("net fuel loading", got.net_fuel_loading, want.net_fuel_loading);
    assert_close("bulk density", got.bulk_density, want.bulk_density);
    assert_close("heating number", got.heating_number, want.heating_number);
    assert_close(
        "heat of preignition",
        got.heat_of_preignition,
        want.heat_of_preignition,
    );
    assert_close("packing ratio", got.packing_ratio, want.packing_ratio);
    assert_close("reaction velocity", got.gamma, want.gamma);
    assert_close("flux ratio", got.flux_ratio, want.flux_ratio);
    assert_close("wind factor", got.wind_factor, want.wind_factor);
    assert_close("slope factor", got.slope_factor, want.slope_factor);
    assert_close(
        "reaction intensity",
        got.reaction_intensity,
        want.reaction_intensity,
    );
    assert_close("spread rate", got.spread_rate, want.spread_rate);
}

#[test]
fn matches_at_median_inputs() {
    compare(&[
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
    ]);
}

#[test]
fn matches_on_sampled_inputs() {
    let marginals = fire_spread::marginals();
    let t = InputTransform::independent(marginals).unwrap();
    let design = generate_design(64, 10, 7).unwrap();
    let x = t.transform(design.block_a()).unwrap();
    for i in 0..x.rows() {
        compare(x.row(i));
    }
}

#[test]
fn matches_in_theta_clamp_regions() {
    let mut high = [
        9.0, 28.0, 4800.0, 0.55, 0.3, 0.5, 0.049, 19.0, 0.38, 0.11,
    ];
    compare(&high); // theta* > 1
    high[4] = 4.0;
    high[5] = 0.001;
    compare(&high); // theta* < 0
}
