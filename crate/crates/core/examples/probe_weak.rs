// Scratch probe: weak-driving single-excitation reduction (removed later).
use cavity_cooling::coefficients::CoefficientEngine;
use cavity_cooling::params::{mhz_to_angular, CS133_MASS, CS_D2_WAVELENGTH};
use cavity_cooling::{SystemParams, TrapVariant};

fn params(n_max: usize) -> SystemParams {
    SystemParams::with_commensurate_fort(
        mhz_to_angular(30.0),
        mhz_to_angular(50.0),
        mhz_to_angular(4.0),
        mhz_to_angular(5.2),
        mhz_to_angular(10.0),
        mhz_to_angular(10.0),
        1e-4,
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
    for z_lf in [2.1, 2.2, 2.25, 2.4] {
        let p1 = params(1);
        let p3 = params(3);
        let a = CoefficientEngine::new(p1.clone())
            .sample_axial(z_lf * p1.lambda_fort, 0.0)
            .unwrap();
        let b = CoefficientEngine::new(p3.clone())
            .sample_axial(z_lf * p3.lambda_fort, 0.0)
            .unwrap();
        println!(
            "z={z_lf}: beta {:.6e} vs {:.6e} (rel {:.2e}) | D {:.6e} vs {:.6e} (rel {:.2e})",
            a.beta_zz(),
            b.beta_zz(),
            (a.beta_zz() - b.beta_zz()).abs() / b.beta_zz().abs(),
            a.d_zz(),
            b.d_zz(),
            (a.d_zz() - b.d_zz()).abs() / b.d_zz().abs(),
        );
    }
}
