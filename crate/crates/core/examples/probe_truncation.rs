// Scratch probe: photon-number convergence vs cutoff (not shipped; removed later).
use cavity_cooling::coefficients::CoefficientEngine;
use cavity_cooling::params::{mhz_to_angular, CS133_MASS, CS_D2_WAVELENGTH};
use cavity_cooling::{SystemParams, TrapVariant};

fn params(s0_mhz: f64, n_e: f64, probe_mhz: f64, n_max: usize) -> SystemParams {
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
        n_max,
        TrapVariant::OppositeShift,
    )
    .unwrap()
}

fn main() {
    for (s0, probe) in [(50.0, -10.0), (10.0, -28.0)] {
        for z_lf in [2.1, 2.25, 2.4] {
            for n_e in [0.01, 0.1] {
                let mut photons = Vec::new();
                for n_max in [3usize, 4, 5, 6] {
                    let p = params(s0, n_e, probe, n_max);
                    let e = CoefficientEngine::new(p.clone());
                    let ss = e.steady_state(z_lf * p.lambda_fort, 0.0).unwrap();
                    photons.push(ss.mean_photons);
                }
                println!(
                    "S0={s0} probe={probe} z={z_lf} N_e={n_e}: n={photons:?} 3->4 {:.3e} 4->5 {:.3e}",
                    (photons[1] - photons[0]).abs() / photons[1],
                    (photons[2] - photons[1]).abs() / photons[2],
                );
            }
        }
    }
}
