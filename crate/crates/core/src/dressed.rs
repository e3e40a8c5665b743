//! Closed-form dressed-state analytics in the single-excitation manifold:
//! transition frequencies, mixing angle, effective decay and excitation
//! rates, the steady-state dressed population, and the Sisyphus estimate of
//! the axial friction coefficient.
//!
//! For the opposite-shift trap the manifold Hamiltonian relative to the
//! ground level is [[0, g], [g, 2 S_F]] in the {|g,1>, |e,0>} basis. For
//! the equal-shift trap both levels move together, so the same formulas
//! apply with S_F = 0 everywhere (the transition structure becomes
//! periodic with the QED wavelength).

use crate::geometry::{coupling, fort_shift, Position};
use crate::params::{SystemParams, TrapVariant};

/// Transition frequencies (relative to the bare atomic line) and mixing of
/// the lower dressed state at given local fields.
#[derive(Debug, Clone, Copy)]
pub struct Manifold {
    /// Delta_+ = S + sqrt(g^2 + S^2), rad/s.
    pub delta_plus: f64,
    /// Delta_- = S - sqrt(g^2 + S^2), rad/s.
    pub delta_minus: f64,
    /// |psi_-> = sin(theta) |g,1> + cos(theta) |e,0>.
    pub sin_theta: f64,
    pub cos_theta: f64,
}

/// Dressed frequencies Delta_+- = S +- sqrt(g^2 + S^2).
pub fn dressed_frequencies(g: f64, s: f64) -> (f64, f64) {
    let u = g.hypot(s);
    (s + u, s - u)
}

/// Mixing angle of the lower dressed state,
/// sin(theta) = g / sqrt(g^2 + (sqrt(g^2+S^2) - S)^2).
///
/// The decoupled limit g -> 0 (S > 0) is taken by continuity:
/// (sin, cos) -> (1, 0), identifying |psi_-> with the pure cavity photon.
pub fn mixing_angle(g: f64, s: f64) -> (f64, f64) {
    let u = g.hypot(s);
    if u == 0.0 || (g == 0.0 && s > 0.0) {
        return (1.0, 0.0);
    }
    let lower_gap = u - s; // = g^2 / (u + s), >= 0
    let norm = g.hypot(lower_gap);
    if norm == 0.0 {
        // g = 0 with s < 0: |psi_-> is the bare excited state.
        return (0.0, -1.0);
    }
    (g / norm, -lower_gap / norm)
}

impl Manifold {
    pub fn new(g: f64, s: f64) -> Self {
        let (delta_plus, delta_minus) = dressed_frequencies(g, s);
        let (sin_theta, cos_theta) = mixing_angle(g, s);
        Self {
            delta_plus,
            delta_minus,
            sin_theta,
            cos_theta,
        }
    }
}

/// Everything the dressed picture says about one position.
#[derive(Debug, Clone, Copy)]
pub struct DressedPoint {
    pub z: f64,
    pub rho: f64,
    pub delta_plus: f64,
    pub delta_minus: f64,
    pub sin_theta: f64,
    pub cos_theta: f64,
    /// Decay rate of |psi_->: sin^2 kappa + cos^2 Gamma/2, rad/s.
    pub gamma_minus: f64,
    /// Excitation rate E0 |sin(theta)|, rad/s.
    pub omega_minus: f64,
    /// Steady-state population of |psi_->.
    pub n_minus: f64,
    /// Analytic axial derivative of Delta_-, rad/(s m).
    pub d_delta_minus_dz: f64,
    /// Analytic axial derivative of n_-, 1/m.
    pub d_n_minus_dz: f64,
    /// Sisyphus friction estimate R = -(hbar / m gamma_-) dn_-/dz dDelta_-/dz, 1/s.
    pub sisyphus_rate: f64,
}

/// Effective fields entering the dressed formulas: the equal-shift trap
/// drops the differential level shift.
fn effective_fort(params: &SystemParams, s: f64, ds_dz: f64) -> (f64, f64) {
    match params.trap_variant {
        TrapVariant::OppositeShift => (s, ds_dz),
        TrapVariant::EqualShift => (0.0, 0.0),
    }
}

/// Dressed decay and excitation rates at local fields.
pub fn dressed_rates(params: &SystemParams, g: f64, s: f64) -> (f64, f64) {
    let (s_eff, _) = effective_fort(params, s, 0.0);
    let (sin_t, cos_t) = mixing_angle(g, s_eff);
    let gamma_minus = sin_t * sin_t * params.kappa + cos_t * cos_t * params.gamma / 2.0;
    let omega_minus = params.drive_amplitude() * sin_t.abs();
    (gamma_minus, omega_minus)
}

/// Steady-state population of the lower dressed state,
/// n_- = Omega_-^2 / ((Delta_- - Delta_p)^2 + gamma_-^2).
pub fn dressed_population(params: &SystemParams, g: f64, s: f64) -> f64 {
    let (s_eff, _) = effective_fort(params, s, 0.0);
    let m = Manifold::new(g, s_eff);
    let (gamma_minus, omega_minus) = dressed_rates(params, g, s);
    let det = m.delta_minus - params.probe_detuning();
    omega_minus * omega_minus / (det * det + gamma_minus * gamma_minus)
}

/// Full dressed-state evaluation at an on-axis position, including the
/// analytic z-derivatives feeding the Sisyphus rate.
pub fn dressed_point(params: &SystemParams, z: f64) -> DressedPoint {
    dressed_point_at(params, &Position::on_axis(z))
}

/// As [`dressed_point`] at a general position (radial structure enters
/// through the Gaussian envelopes of both fields).
pub fn dressed_point_at(params: &SystemParams, pos: &Position) -> DressedPoint {
    let gf = coupling(pos, params);
    let sf = fort_shift(pos, params);
    let (s_eff, ds_eff) = effective_fort(params, sf.value, sf.grad[2]);
    let g = gf.value;
    let dg = gf.grad[2];

    let u = g.hypot(s_eff);
    let m = Manifold::new(g, s_eff);
    let e0 = params.drive_amplitude();

    // Derivative chain. With u = sqrt(g^2 + s^2) and w = u + s:
    //   sin^2 = w^2 / (w^2 + g^2),
    //   d(sin^2)/dz = 2 w (w' g^2 - w g g') / (w^2 + g^2)^2.
    // A guard covers the measure-zero point where both fields vanish.
    let tiny = 1e-300;
    let du = if u > tiny { (g * dg + s_eff * ds_eff) / u } else { 0.0 };
    let w = u + s_eff;
    let dw = du + ds_eff;
    let denom = w * w + g * g;
    let dsin2 = if denom > tiny {
        2.0 * w * (dw * g * g - w * g * dg) / (denom * denom)
    } else {
        0.0
    };

    let sin2 = m.sin_theta * m.sin_theta;
    let gamma_minus = sin2 * params.kappa + (1.0 - sin2) * params.gamma / 2.0;
    let dgamma = (params.kappa - params.gamma / 2.0) * dsin2;
    let omega_sq = e0 * e0 * sin2;
    let domega_sq = e0 * e0 * dsin2;

    let det = m.delta_minus - params.probe_detuning();
    let ddelta_minus = ds_eff - du;
    let lorentz = det * det + gamma_minus * gamma_minus;
    let n_minus = if lorentz > tiny { omega_sq / lorentz } else { 0.0 };
    let dn_minus = if lorentz > tiny {
        (domega_sq * lorentz - omega_sq * (2.0 * det * ddelta_minus + 2.0 * gamma_minus * dgamma))
            / (lorentz * lorentz)
    } else {
        0.0
    };

    let sisyphus_rate = if gamma_minus > 0.0 {
        -crate::HBAR / (params.mass * gamma_minus) * dn_minus * ddelta_minus
    } else {
        0.0
    };

    DressedPoint {
        z: pos.z,
        rho: pos.rho(),
        delta_plus: m.delta_plus,
        delta_minus: m.delta_minus,
        sin_theta: m.sin_theta,
        cos_theta: m.cos_theta,
        gamma_minus,
        omega_minus: e0 * m.sin_theta.abs(),
        n_minus,
        d_delta_minus_dz: ddelta_minus,
        d_n_minus_dz: dn_minus,
        sisyphus_rate,
    }
}

/// Sisyphus rate R(z) over an on-axis grid.
pub fn sisyphus_rate(params: &SystemParams, z_values: &[f64]) -> Vec<f64> {
    z_values
        .iter()
        .map(|&z| dressed_point(params, z).sisyphus_rate)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{angular_to_mhz, mhz_to_angular, CS133_MASS, CS_D2_WAVELENGTH};
    use nalgebra::Matrix2;

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

    #[test]
    fn frequency_limits() {
        let s = mhz_to_angular(20.0);
        let (dp, dm) = dressed_frequencies(0.0, s);
        assert!((dp - 2.0 * s).abs() < 1e-6 && dm.abs() < 1e-6);
        let g = mhz_to_angular(30.0);
        let (dp, dm) = dressed_frequencies(g, 0.0);
        assert!((dp - g).abs() < 1e-6 && (dm + g).abs() < 1e-6);
        assert!(dp >= dm);
    }

    #[test]
    fn paper_anchor_lower_dressed_frequency() {
        // g0/2pi = 30 MHz, S0/2pi = 50 MHz: Delta_-/2pi = 50 - sqrt(3400)
        // = -8.3095 MHz.
        let (_, dm) = dressed_frequencies(mhz_to_angular(30.0), mhz_to_angular(50.0));
        assert!((angular_to_mhz(dm) + 8.309_518_948_453_007).abs() < 1e-9);
    }

    #[test]
    fn mixing_angle_limits() {
        // Resonant case: equal mixing with the sign convention
        // cos(theta) = -1/sqrt(2).
        let (s, c) = mixing_angle(1.0, 0.0);
        assert!((s - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((c + std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        // Decoupled limit by continuity.
        let (s, c) = mixing_angle(0.0, 1.0);
        assert_eq!((s, c), (1.0, 0.0));
        let (s, _) = mixing_angle(1e-6, 1.0);
        assert!((s - 1.0).abs() < 1e-6);
        // Normalization everywhere.
        for (g, sv) in [(0.3, 0.9), (-0.7, 0.2), (2.0, -0.4), (0.0, 0.0)] {
            let (si, co) = mixing_angle(g, sv);
            assert!((si * si + co * co - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn mixing_angle_is_manifold_eigenvector() {
        // (sin, cos) must be an eigenvector of [[0, g], [g, 2S]] with
        // eigenvalue S - sqrt(g^2 + S^2).
        for (g_mhz, s_mhz) in [(30.0, 50.0), (10.0, 3.0), (-17.0, 40.0), (5.0, -12.0)] {
            let g = mhz_to_angular(g_mhz);
            let s = mhz_to_angular(s_mhz);
            let (si, co) = mixing_angle(g, s);
            let h = Matrix2::new(0.0, g, g, 2.0 * s);
            let v = nalgebra::Vector2::new(si, co);
            let lambda = s - g.hypot(s);
            let res = h * v - v * lambda;
            assert!(res.norm() < 1e-9 * g.abs().max(s.abs()), "g={g_mhz} S={s_mhz}");
        }
    }

    #[test]
    fn rates_limits() {
        let p = params(TrapVariant::OppositeShift, 50.0, 0.01, -10.0);
        // Photon-like dressed state when decoupled.
        let (gm, om) = dressed_rates(&p, 0.0, mhz_to_angular(50.0));
        assert!((gm - p.kappa).abs() < 1e-9);
        assert!((om - p.drive_amplitude()).abs() < 1e-9);
        // Equal mixing on bare resonance.
        let (gm, _) = dressed_rates(&p, mhz_to_angular(30.0), 0.0);
        assert!((gm - (p.kappa + p.gamma / 2.0) / 2.0).abs() < 1e-9);
        // kappa = Gamma/2 makes the decay rate position-independent.
        let mut p2 = p.clone();
        p2.kappa = p2.gamma / 2.0;
        for g_mhz in [0.0, 7.0, 19.0, 30.0] {
            let (gm, _) = dressed_rates(&p2, mhz_to_angular(g_mhz), mhz_to_angular(21.0));
            assert!((gm - p2.kappa).abs() < 1e-9);
        }
    }

    #[test]
    fn population_limits() {
        let mut p = params(TrapVariant::OppositeShift, 50.0, 0.01, -10.0);
        let g = mhz_to_angular(20.0);
        let s = mhz_to_angular(30.0);
        // On dressed resonance n_- = (Omega_-/gamma_-)^2.
        let (_, dm) = dressed_frequencies(g, s);
        p.delta_a = -dm;
        p.delta_c = p.delta_a;
        let (gm, om) = dressed_rates(&p, g, s);
        let n = dressed_population(&p, g, s);
        assert!((n - om * om / (gm * gm)).abs() < 1e-12 * n.abs().max(1e-30));
        // No drive, no population.
        p.drive_photons = 0.0;
        assert_eq!(dressed_population(&p, g, s), 0.0);
        // Monotone decrease in |Delta_- - Delta_p| at fixed excitation rate.
        // N_e is adjusted so that E0 stays constant while the probe moves
        // (the N_e normalization ties E0 to Delta_c).
        let e0 = mhz_to_angular(1.0);
        let mut last = f64::INFINITY;
        for off_mhz in [0.0, 2.0, 5.0, 11.0, 23.0] {
            p.delta_a = -(dm - mhz_to_angular(off_mhz));
            p.delta_c = p.delta_a;
            p.drive_photons = e0 * e0 / (p.kappa * p.kappa + p.delta_c * p.delta_c);
            let n = dressed_population(&p, g, s);
            assert!(n < last, "off={off_mhz}: {n} !< {last}");
            last = n;
        }
    }

    #[test]
    fn spectral_consistency_with_full_hamiltonian() {
        // Delta_+- must equal the single-excitation eigenvalue gaps of the
        // built n_max = 1, E0 = 0 Hamiltonian relative to the ground level,
        // after removing the common probe-frame offset delta_a.
        use crate::operators::{basis_index, build_operators, hamiltonian};
        let mut p = params(TrapVariant::OppositeShift, 50.0, 0.0, -10.0);
        p.photon_cutoff = 1;
        let ops = build_operators(1);
        let g = mhz_to_angular(22.0);
        let s = mhz_to_angular(41.0);
        let h = hamiltonian(&p, &ops, g, s);
        let ig1 = basis_index(false, 1, 1);
        let ie0 = basis_index(true, 0, 1);
        let ig0 = basis_index(false, 0, 1);
        let block = Matrix2::new(
            h[(ig1, ig1)].re,
            h[(ig1, ie0)].re,
            h[(ie0, ig1)].re,
            h[(ie0, ie0)].re,
        );
        let eig = block.symmetric_eigenvalues();
        let ground = h[(ig0, ig0)].re;
        let mut gaps = [eig[0] - ground - p.delta_a, eig[1] - ground - p.delta_a];
        gaps.sort_by(f64::total_cmp);
        let (dp, dm) = dressed_frequencies(g, s);
        assert!((gaps[0] - dm).abs() < 1e-12 * dm.abs());
        assert!((gaps[1] - dp).abs() < 1e-12 * dp.abs());
    }

    #[test]
    fn analytic_z_derivatives_match_finite_differences() {
        // Fourth-order central differences with step lambdaF/1e4; the
        // second-order stencil is not accurate to 1e-6 where the Lorentzian
        // in n_- is sharp.
        let fd4 = |f: &dyn Fn(f64) -> f64, z: f64, h: f64| {
            (-f(z + 2.0 * h) + 8.0 * f(z + h) - 8.0 * f(z - h) + f(z - 2.0 * h)) / (12.0 * h)
        };
        for variant in [TrapVariant::OppositeShift, TrapVariant::EqualShift] {
            let p = params(variant, 50.0, 0.001, -10.0);
            let h = p.lambda_fort / 1e4;
            let delta = |z: f64| dressed_point(&p, z).delta_minus;
            let pop = |z: f64| dressed_point(&p, z).n_minus;
            for z_lf in [2.05, 2.2, 2.25, 2.33, 2.45] {
                let z = z_lf * p.lambda_fort;
                let c = dressed_point(&p, z);
                let fd_delta = fd4(&delta, z, h);
                let fd_n = fd4(&pop, z, h);
                let tol_d = 1e-6 * c.d_delta_minus_dz.abs().max(p.g0 * p.k_qed() * 1e-6);
                assert!(
                    (c.d_delta_minus_dz - fd_delta).abs() <= tol_d,
                    "{variant:?} z={z_lf}: dDelta {} vs FD {}",
                    c.d_delta_minus_dz,
                    fd_delta
                );
                let tol_n = 1e-6 * c.d_n_minus_dz.abs().max(1e-12);
                assert!(
                    (c.d_n_minus_dz - fd_n).abs() <= tol_n,
                    "{variant:?} z={z_lf}: dn {} vs FD {}",
                    c.d_n_minus_dz,
                    fd_n
                );
            }
        }
    }

    #[test]
    fn radial_trend_opposite_shift() {
        // Moving off axis at a coupled FORT anti-node: Delta_+ decreases,
        // Delta_- increases toward zero.
        let p = params(TrapVariant::OppositeShift, 50.0, 0.001, -10.0);
        let z = 2.25 * p.lambda_fort;
        let mut last_plus = f64::INFINITY;
        let mut last_minus = f64::NEG_INFINITY;
        for i in 0..20 {
            let rho = i as f64 / 19.0 * 2.0 * p.waist;
            let d = dressed_point_at(&p, &Position::new(rho, 0.0, z));
            assert!(d.delta_plus < last_plus || i == 0);
            assert!(d.delta_minus > last_minus || i == 0);
            assert!(d.delta_minus <= 1e-9);
            last_plus = d.delta_plus;
            last_minus = d.delta_minus;
        }
    }

    #[test]
    fn equal_shift_structure_is_qed_periodic() {
        let p = params(TrapVariant::EqualShift, 50.0, 0.01, -35.0);
        for i in 0..40 {
            let z = (0.3 + i as f64 * 0.25) * p.lambda0;
            let a = dressed_point(&p, z);
            let b = dressed_point(&p, z + p.lambda0);
            assert!((a.delta_minus - b.delta_minus).abs() <= 1e-12 * p.g0);
            assert!((a.gamma_minus - b.gamma_minus).abs() <= 1e-12 * p.kappa);
        }
        // And Delta_- = -|g| on axis.
        let z = 0.3 * p.lambda0;
        let d = dressed_point(&p, z);
        let g = coupling(&Position::on_axis(z), &p).value;
        assert!((d.delta_minus + g.abs()).abs() < 1e-9);
    }
}
