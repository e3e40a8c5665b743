// Scratch probe: solver vs time-domain oracles (removed before ship).
use cavity_cooling::coefficients::CoefficientEngine;
use cavity_cooling::params::{mhz_to_angular, CS133_MASS, CS_D2_WAVELENGTH};
use cavity_cooling::testkit;
use cavity_cooling::{SystemParams, TrapVariant};
use std::time::Instant;

fn params(s0_mhz: f64, n_e: f64, probe_mhz: f64) -> SystemParams {
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
        TrapVariant::OppositeShift,
    )
    .unwrap()
}

fn main() {
    let p = params(50.0, 0.01, -10.0);
    let engine = CoefficientEngine::new(p.clone());

    // Steady-state photons: solver vs vacuum evolution.
    let z = 2.25 * p.lambda_fort;
    let t0 = Instant::now();
    let ss = engine.steady_state(z, 0.0).unwrap();
    println!("solver photons {:.8e}  ({:?})", ss.mean_photons, t0.elapsed());
    let t0 = Instant::now();
    let n_oracle = testkit::photons_by_evolution(&p, z, 0.0, 40.0);
    println!("evolved photons {:.8e}  ({:?})", n_oracle, t0.elapsed());

    // Friction and diffusion at a few positions.
    for z_lf in [2.10f64, 2.2, 2.32, 2.45] {
        let z = z_lf * p.lambda_fort;
        let s = engine.sample_axial(z, 0.0).unwrap();
        let t0 = Instant::now();
        let beta_oracle = testkit::dragged_friction_zz(&p, z, 0.0, 1e-3, 30.0);
        let t_beta = t0.elapsed();
        let t0 = Instant::now();
        let m2 = p.mass * p.mass;
        let d_oracle = testkit::diffusion_zz_time_domain(&p, z, 0.0) / m2;
        let t_d = t0.elapsed();
        println!(
            "z={z_lf}: beta {:.6e} vs {:.6e} (rel {:.2e}, {t_beta:?}) | D {:.6e} vs {:.6e} (rel {:.2e}, {t_d:?})",
            s.beta_zz(),
            beta_oracle,
            (s.beta_zz() - beta_oracle).abs() / beta_oracle.abs(),
            s.d_zz(),
            d_oracle,
            (s.d_zz() - d_oracle).abs() / d_oracle.abs(),
        );
    }
}
