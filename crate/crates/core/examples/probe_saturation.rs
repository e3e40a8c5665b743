// Scratch probe: saturation scan shape (removed later).
use cavity_cooling::averages::{saturation_scan, AverageWindow};
use cavity_cooling::geometry::well;
use cavity_cooling::params::{mhz_to_angular, CS133_MASS, CS_D2_WAVELENGTH};
use cavity_cooling::{SystemParams, TrapVariant};

fn main() {
    let p = SystemParams::with_commensurate_fort(
        mhz_to_angular(30.0),
        mhz_to_angular(10.0),
        mhz_to_angular(4.0),
        mhz_to_angular(5.2),
        mhz_to_angular(28.0),
        mhz_to_angular(28.0),
        0.001,
        CS_D2_WAVELENGTH,
        (32, 30),
        20e-6,
        CS133_MASS,
        4,
        TrapVariant::OppositeShift,
    )
    .unwrap();
    let w = well(&p, 5).unwrap();
    let list = [1e-4, 2e-4, 1e-3, 3e-3, 0.01, 0.03, 0.1];
    let t0 = std::time::Instant::now();
    let scan = saturation_scan(&p, &w, &list, AverageWindow::FullWell, 201).unwrap();
    for pt in &scan {
        println!(
            "N_e={:<7} n_max={} beta={:.5e}  D={:.5e}  vrms={:?}",
            pt.drive_photons,
            pt.n_max,
            pt.beta_zz,
            pt.d_zz_total,
            pt.v_rms_z.map(|v| (v * 1e3).round() / 10.0)
        );
    }
    println!("elapsed {:?}", t0.elapsed());
    let b0 = scan[0].beta_zz;
    println!("beta(2e-4)/beta(1e-4) = {:.4}", scan[1].beta_zz / b0);
    for pt in &scan {
        let lin = b0 * pt.drive_photons / 1e-4;
        println!(
            "N_e={:<7}: beta/linear = {:.4}",
            pt.drive_photons,
            pt.beta_zz / lin
        );
    }
}
