// Scratch probe: well-averaged coefficients across the 8 well classes (removed later).
use cavity_cooling::averages::{well_average_vrms, AverageWindow};
use cavity_cooling::coefficients::CoefficientEngine;
use cavity_cooling::geometry::well;
use cavity_cooling::params::{mhz_to_angular, CS133_MASS, CS_D2_WAVELENGTH};
use cavity_cooling::{SystemParams, TrapVariant};

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
    let vd = (0.7 * cavity_cooling::HBAR * mhz_to_angular(5.2) / (2.0 * CS133_MASS)).sqrt();
    println!("v_D^z = {:.4} cm/s", vd * 100.0);
    // Sampling-density sensitivity of the near-threshold well.
    for n_samples in [41, 101, 201, 401] {
        let p = params(10.0, 0.001, 15.0);
        let w = well(&p, 3).unwrap();
        let engine = CoefficientEngine::new(p.clone());
        let avg = well_average_vrms(&engine, &w, AverageWindow::FullWell, n_samples).unwrap();
        println!(
            "well3 +15MHz n={n_samples}: beta_bar={:.4e} 1/s, D_bar={:.4e}, vrms={:?}",
            avg.beta_zz,
            avg.d_zz_total,
            avg.v_rms_z.map(|v| v * 100.0)
        );
    }
    for (s0, n_e, probes, window) in [
        (10.0, 0.001, vec![-28.0, -23.0, 15.0], AverageWindow::FullWell),
        (50.0, 0.01, vec![-10.0, -5.0, 100.0], AverageWindow::CenteredFraction(0.1)),
    ] {
        for probe in probes {
            print!("S0={s0:>4} Ne={n_e:<6} probe={probe:>5}: ");
            for n in 1..=8 {
                let p = params(s0, n_e, probe);
                let w = well(&p, n).unwrap();
                let engine = CoefficientEngine::new(p.clone());
                let avg = well_average_vrms(&engine, &w, window, 201).unwrap();
                match avg.v_rms_z {
                    Some(v) => print!("{n}:{:.1} ", v * 100.0),
                    None => print!("{n}:-- "),
                }
            }
            println!();
        }
    }
}
