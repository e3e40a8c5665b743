// Scratch probe: full trajectory campaigns at reduced counts (removed later).
use cavity_cooling::ensemble::run_ensemble;
use cavity_cooling::geometry::well;
use cavity_cooling::grid::CoefficientGrid;
use cavity_cooling::params::{mhz_to_angular, CS133_MASS, CS_D2_WAVELENGTH};
use cavity_cooling::trajectory::TrajectoryConfig;
use cavity_cooling::{SystemParams, TrapVariant};
use std::time::Instant;

fn params(variant: TrapVariant, s0_mhz: f64, n_e: f64, probe_mhz: f64) -> SystemParams {
    SystemParams::with_commensurate_fort(
        mhz_to_angular(30.0),
        mhz_to_angular(s0_mhz),
        mhz_to_angular(4.0),
        mhz_to_angular(5.2),
        mhz_to_angular(-probe_mhz),
        mhz_to_angular(-probe_mhz),
        n_e,
        CS_D2_WAVELENGTH,
        (32, 30),
        20e-6,
        CS133_MASS,
        4,
        variant,
    )
    .unwrap()
}

fn campaign(
    label: &str,
    p: &SystemParams,
    well_idx: usize,
    z0_lf: f64,
    t_max: f64,
    n: usize,
    seed: u64,
) {
    let w = well(p, well_idx).unwrap();
    let t0 = Instant::now();
    let grid = CoefficientGrid::build(p, &w, 201, 61, 3.0 * p.waist).unwrap();
    let t_grid = t0.elapsed();
    let tpl = TrajectoryConfig {
        initial_position: [0.0, 0.0, z0_lf * p.lambda_fort],
        initial_velocity: [-0.10, 0.0, 0.0],
        dt: 2e-8,
        t_max,
        z_bounds: w.z_bounds,
        rho_max: 3.0 * p.waist,
        sample_stride: 0,
        seed: 0,
    };
    let t0 = Instant::now();
    let (stats, _) = run_ensemble(n, &tpl, &grid, seed, &[]);
    let t_run = t0.elapsed();
    let tau = stats
        .tail_fit
        .as_ref()
        .map(|f| format!("{:.1} +- {:.1} ms (tail {:.1} ms, {} pts)", f.tau * 1e3, f.stderr * 1e3, f.t_tail * 1e3, f.n_points))
        .unwrap_or_else(|e| format!("fit failed: {e}"));
    let vrms_eq = stats.equilibrated_v_rms(0.2 * t_max);
    let frac_10ms = stats
        .per_trajectory
        .iter()
        .filter(|t| t.trapping_time >= 10e-3)
        .count() as f64
        / n as f64;
    println!(
        "{label}: grid {t_grid:?}, run {t_run:?}\n  tau = {tau}\n  untrapped(<1ms) = {:.2}, frac>=10ms = {frac_10ms:.2}, mean trap = {:.1} ms, v_rms_eq = {:?} cm/s",
        stats.fraction_untrapped,
        stats.mean_trapping_time() * 1e3,
        vrms_eq.map(|v| (v * 1e3).round() / 10.0),
    );
}

fn main() {
    let which: Vec<String> = std::env::args().skip(1).collect();
    let all = which.is_empty();
    let has = |s: &str| all || which.iter().any(|w| w == s);

    if has("10") {
        let p = params(TrapVariant::OppositeShift, 10.0, 0.001, -28.0);
        campaign("10MHz  (expect tau ~ 25 ms)", &p, 5, 2.125, 0.15, 96, 20260810);
    }
    if has("adverse") {
        let p = params(TrapVariant::OppositeShift, 50.0, 0.01, -5.0);
        campaign("adverse (expect tau ~ 1.6 ms)", &p, 3, 1.125, 0.05, 96, 20260810);
    }
    if has("equal") {
        let p = params(TrapVariant::EqualShift, 50.0, 0.01, -35.0);
        campaign("equal-shift (expect tau ~ 28 ms, all >= 10 ms)", &p, 1, 0.125, 0.25, 96, 20260810);
    }
    if has("50") {
        let p = params(TrapVariant::OppositeShift, 50.0, 0.01, -10.0);
        campaign("50MHz  (expect tau ~ 250 ms, vrms ~ 8 cm/s)", &p, 5, 2.125, 0.8, 96, 20260810);
    }
}
