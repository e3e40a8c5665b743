//! System parameters: all physical constants and knobs in one place.
//!
//! All frequencies are stored as angular frequencies (rad/s). Front ends
//! that speak ordinary MHz convert at the boundary with [`mhz_to_angular`]
//! and [`angular_to_mhz`].

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

/// Cs-133 atomic mass, kg.
pub const CS133_MASS: f64 = 2.2069e-25;

/// Cs D2 wavelength, m (the cavity-QED mode).
pub const CS_D2_WAVELENGTH: f64 = 852.4e-9;

/// Convert an ordinary frequency in MHz to an angular frequency in rad/s.
pub fn mhz_to_angular(f_mhz: f64) -> f64 {
    f_mhz * 2.0 * PI * 1.0e6
}

/// Convert an angular frequency in rad/s to an ordinary frequency in MHz.
pub fn angular_to_mhz(omega: f64) -> f64 {
    omega / (2.0 * PI * 1.0e6)
}

/// How the FORT shifts the two atomic levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TrapVariant {
    /// Ground state shifts down by `S_F`, excited state shifts up by `S_F`.
    OppositeShift,
    /// Both levels shift down by `S_F`; the FORT force becomes
    /// state-independent.
    EqualShift,
}

#[derive(Debug, Error)]
pub enum ParamError {
    #[error("rate must be nonnegative: {name} = {value}")]
    NegativeRate { name: &'static str, value: f64 },
    #[error("photon cutoff must be >= 1, got {0}")]
    BadCutoff(usize),
    #[error("drive photon number must be nonnegative, got {0}")]
    NegativeDrive(f64),
    #[error("lengths must be positive: {name} = {value}")]
    BadLength { name: &'static str, value: f64 },
    #[error("cavity halfwave counts must be >= 1, got ({0}, {1})")]
    BadHalfwaves(usize, usize),
    #[error(
        "cavity is not commensurate: n0*lambda0 = {qed} differs from nF*lambdaF = {fort} \
         by more than 1e-12 relative"
    )]
    NotCommensurate { qed: f64, fort: f64 },
    #[error("polarization factors must be nonnegative, got {0:?}")]
    BadPolarization([f64; 3]),
    #[error("mass must be positive, got {0}")]
    BadMass(f64),
}

/// Physical constants and knobs of the driven atom-cavity-FORT system.
///
/// Invariants enforced by [`SystemParams::validate`]:
/// - all rates nonnegative, `photon_cutoff >= 1`, `drive_photons >= 0`;
/// - the cavity is commensurate: `n0 * lambda0 == nF * lambdaF` to 1e-12
///   relative (construct with [`SystemParams::with_commensurate_fort`] to
///   get this by construction).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemParams {
    /// Maximum atom-cavity coupling rate g0, rad/s.
    pub g0: f64,
    /// Maximum FORT shift S0, rad/s.
    pub s0: f64,
    /// Cavity field decay rate kappa, rad/s.
    pub kappa: f64,
    /// Atomic (full) spontaneous decay rate Gamma, rad/s.
    pub gamma: f64,
    /// Cavity-probe detuning, omega_c - omega_p, rad/s.
    pub delta_c: f64,
    /// Atom-probe detuning, omega_a - omega_p, rad/s. The probe detuning of
    /// the figures is `Delta_p = -delta_a`.
    pub delta_a: f64,
    /// Drive strength expressed as the empty-cavity photon number N_e.
    pub drive_photons: f64,
    /// Wavelength of the cavity-QED mode, m.
    pub lambda0: f64,
    /// Wavelength of the FORT mode, m.
    pub lambda_fort: f64,
    /// Half-wave counts (n0, nF): cavity length L = n0 lambda0/2 = nF lambdaF/2.
    pub halfwaves: (usize, usize),
    /// Gaussian mode waist w0 shared by both beams, m.
    pub waist: f64,
    /// Atomic mass, kg.
    pub mass: f64,
    /// Fock-space truncation: photon numbers 0..=photon_cutoff are kept.
    pub photon_cutoff: usize,
    /// Level-shift structure of the trap.
    pub trap_variant: TrapVariant,
    /// Spontaneous-emission pattern factors (N_x, N_y, N_z).
    pub polarization_factors: [f64; 3],
}

impl SystemParams {
    /// Paper-style constructor: given `lambda0` and the half-wave counts,
    /// derives the commensurate FORT wavelength `lambdaF = n0 lambda0 / nF`.
    #[allow(clippy::too_many_arguments)]
    pub fn with_commensurate_fort(
        g0: f64,
        s0: f64,
        kappa: f64,
        gamma: f64,
        delta_c: f64,
        delta_a: f64,
        drive_photons: f64,
        lambda0: f64,
        halfwaves: (usize, usize),
        waist: f64,
        mass: f64,
        photon_cutoff: usize,
        trap_variant: TrapVariant,
    ) -> Result<Self, ParamError> {
        let lambda_fort = halfwaves.0 as f64 * lambda0 / halfwaves.1 as f64;
        let p = Self {
            g0,
            s0,
            kappa,
            gamma,
            delta_c,
            delta_a,
            drive_photons,
            lambda0,
            lambda_fort,
            halfwaves,
            waist,
            mass,
            photon_cutoff,
            trap_variant,
            polarization_factors: [3.0 / 10.0, 3.0 / 10.0, 2.0 / 5.0],
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        for (name, value) in [
            ("g0", self.g0),
            ("s0", self.s0),
            ("kappa", self.kappa),
            ("gamma", self.gamma),
        ] {
            if value < 0.0 || !value.is_finite() {
                return Err(ParamError::NegativeRate { name, value });
            }
        }
        if self.photon_cutoff < 1 {
            return Err(ParamError::BadCutoff(self.photon_cutoff));
        }
        if self.drive_photons < 0.0 || !self.drive_photons.is_finite() {
            return Err(ParamError::NegativeDrive(self.drive_photons));
        }
        for (name, value) in [
            ("lambda0", self.lambda0),
            ("lambda_fort", self.lambda_fort),
            ("waist", self.waist),
        ] {
            if value <= 0.0 || !value.is_finite() {
                return Err(ParamError::BadLength { name, value });
            }
        }
        let (n0, nf) = self.halfwaves;
        if n0 < 1 || nf < 1 {
            return Err(ParamError::BadHalfwaves(n0, nf));
        }
        let qed = n0 as f64 * self.lambda0;
        let fort = nf as f64 * self.lambda_fort;
        if (qed - fort).abs() > 1e-12 * qed.max(fort) {
            return Err(ParamError::NotCommensurate { qed, fort });
        }
        if self.polarization_factors.iter().any(|&n| n < 0.0) {
            return Err(ParamError::BadPolarization(self.polarization_factors));
        }
        if self.mass <= 0.0 || !self.mass.is_finite() {
            return Err(ParamError::BadMass(self.mass));
        }
        Ok(())
    }

    /// Wave vector of the cavity-QED mode, 2 pi / lambda0.
    pub fn k_qed(&self) -> f64 {
        2.0 * PI / self.lambda0
    }

    /// Wave vector of the FORT mode, 2 pi / lambdaF.
    pub fn k_fort(&self) -> f64 {
        2.0 * PI / self.lambda_fort
    }

    /// Cavity length L = n0 lambda0 / 2.
    pub fn cavity_length(&self) -> f64 {
        self.halfwaves.0 as f64 * self.lambda0 / 2.0
    }

    /// Probe detuning Delta_p = -(omega_a - omega_p), rad/s.
    pub fn probe_detuning(&self) -> f64 {
        -self.delta_a
    }

    /// Drive amplitude E0 = sqrt(N_e (kappa^2 + Delta_c^2)), rad/s.
    ///
    /// N_e is the photon number the probe would sustain in an empty cavity.
    pub fn drive_amplitude(&self) -> f64 {
        (self.drive_photons * (self.kappa * self.kappa + self.delta_c * self.delta_c)).sqrt()
    }

    /// Hilbert-space dimension 2 (photon_cutoff + 1).
    pub fn dim(&self) -> usize {
        2 * (self.photon_cutoff + 1)
    }
}
