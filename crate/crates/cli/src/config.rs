//! Run configuration: human-unit parameters (MHz, nm, µm, ms), named
//! presets for the figure-reproduction scenarios, TOML parsing with strict
//! key checking, and conversion to the angular-unit [`SystemParams`].

use anyhow::{bail, Context, Result};
use cavity_cooling::params::{mhz_to_angular, CS133_MASS, CS_D2_WAVELENGTH};
use cavity_cooling::{SystemParams, TrapVariant};
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const PRESETS: [&str; 4] = [
    "paper-10MHz",
    "paper-50MHz",
    "paper-50MHz-equalshift",
    "paper-adverse",
];

/// Fully resolved run configuration, in human units. This is what the
/// manifest records and what a re-ingested manifest restores.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Preset this config was derived from, if any.
    pub preset: Option<String>,
    pub params: ParamsConfig,
    pub grid: GridConfig,
    pub sweep: SweepConfig,
    pub saturation: SaturationConfig,
    pub simulate: SimulateConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    /// Maximum coupling g0/2pi, MHz.
    pub g0_mhz: f64,
    /// Maximum FORT shift S0/2pi, MHz.
    pub s0_mhz: f64,
    /// Cavity field decay kappa/2pi, MHz.
    pub kappa_mhz: f64,
    /// Atomic decay Gamma/2pi, MHz.
    pub gamma_mhz: f64,
    /// Probe detuning Delta_p/2pi = -(omega_a - omega_p)/2pi, MHz.
    pub probe_detuning_mhz: f64,
    /// Cavity detuning Delta_c/2pi, MHz; defaults to the atomic detuning
    /// (cavity tuned to the atom).
    pub cavity_detuning_mhz: Option<f64>,
    /// Drive strength as the empty-cavity photon number N_e.
    pub drive_photons: f64,
    /// QED wavelength, nm.
    pub lambda0_nm: f64,
    /// Half-wave counts (n0, nF).
    pub halfwaves: (usize, usize),
    /// Mode waist, µm.
    pub waist_um: f64,
    /// Atomic mass, kg.
    pub mass_kg: f64,
    /// Photon cutoff n_max.
    pub photon_cutoff: usize,
    pub trap_variant: TrapVariant,
    /// Spontaneous-emission pattern factors (N_x, N_y, N_z).
    pub polarization_factors: [f64; 3],
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub nz: usize,
    pub nrho: usize,
    /// Radial extent of grid and escape cylinder, units of the waist.
    pub rho_max_w0: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Sweep range along z, units of lambdaF.
    pub zmin_lambda_f: f64,
    pub zmax_lambda_f: f64,
    pub nz: usize,
    /// Radial offsets to sweep, µm (coefficients subcommand).
    pub rho_um: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SaturationConfig {
    /// Well index for the averages.
    pub well: usize,
    /// Drive strengths to scan, ascending.
    pub drive_photons: Vec<f64>,
    /// Axial averaging window as a fraction of lambdaF centered on the
    /// anti-node; None averages over the full well.
    pub window_fraction: Option<f64>,
    /// On-axis samples per average.
    pub n_samples: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    /// Well index the ensemble lives in.
    pub well: usize,
    /// Number of trajectories.
    pub n_trajectories: usize,
    /// Base seed; trajectory k derives its stream from (seed, k).
    pub seed: u64,
    /// Time step, ns.
    pub dt_ns: f64,
    /// Trajectory cap, ms.
    pub t_max_ms: f64,
    /// Initial axial position, units of lambdaF.
    pub initial_z_lambda_f: f64,
    /// Initial velocity (vx, vy, vz), cm/s.
    pub initial_velocity_cm_s: [f64; 3],
    /// Initial transverse offset along y, units of the waist.
    pub initial_y_w0: f64,
    /// Indices of trajectories whose time series are written out.
    pub series_trajectories: Vec<usize>,
    /// Record every k-th step in the series files.
    pub sample_stride: usize,
}

/// Overlay structure: every key optional, unknown keys rejected. A TOML
/// config file parses into this and patches the preset (or built-in
/// default) it names.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverlay {
    pub preset: Option<String>,
    pub params: Option<ParamsOverlay>,
    pub grid: Option<GridOverlay>,
    pub sweep: Option<SweepOverlay>,
    pub saturation: Option<SaturationOverlay>,
    pub simulate: Option<SimulateOverlay>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsOverlay {
    pub g0_mhz: Option<f64>,
    pub s0_mhz: Option<f64>,
    pub kappa_mhz: Option<f64>,
    pub gamma_mhz: Option<f64>,
    pub probe_detuning_mhz: Option<f64>,
    pub cavity_detuning_mhz: Option<f64>,
    pub drive_photons: Option<f64>,
    pub lambda0_nm: Option<f64>,
    pub halfwaves: Option<(usize, usize)>,
    pub waist_um: Option<f64>,
    pub mass_kg: Option<f64>,
    pub photon_cutoff: Option<usize>,
    pub trap_variant: Option<TrapVariant>,
    pub polarization_factors: Option<[f64; 3]>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridOverlay {
    pub nz: Option<usize>,
    pub nrho: Option<usize>,
    pub rho_max_w0: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepOverlay {
    pub zmin_lambda_f: Option<f64>,
    pub zmax_lambda_f: Option<f64>,
    pub nz: Option<usize>,
    pub rho_um: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SaturationOverlay {
    pub well: Option<usize>,
    pub drive_photons: Option<Vec<f64>>,
    pub window_fraction: Option<f64>,
    pub n_samples: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateOverlay {
    pub well: Option<usize>,
    pub n_trajectories: Option<usize>,
    pub seed: Option<u64>,
    pub dt_ns: Option<f64>,
    pub t_max_ms: Option<f64>,
    pub initial_z_lambda_f: Option<f64>,
    pub initial_velocity_cm_s: Option<[f64; 3]>,
    pub initial_y_w0: Option<f64>,
    pub series_trajectories: Option<Vec<usize>>,
    pub sample_stride: Option<usize>,
}

fn base_config() -> RunConfig {
    RunConfig {
        preset: None,
        params: ParamsConfig {
            g0_mhz: 30.0,
            s0_mhz: 50.0,
            kappa_mhz: 4.0,
            gamma_mhz: 5.2,
            probe_detuning_mhz: -10.0,
            cavity_detuning_mhz: None,
            drive_photons: 0.01,
            lambda0_nm: CS_D2_WAVELENGTH * 1e9,
            halfwaves: (32, 30),
            waist_um: 20.0,
            mass_kg: CS133_MASS,
            photon_cutoff: 4,
            trap_variant: TrapVariant::OppositeShift,
            polarization_factors: [0.3, 0.3, 0.4],
        },
        grid: GridConfig {
            nz: 201,
            nrho: 61,
            rho_max_w0: 3.0,
        },
        sweep: SweepConfig {
            zmin_lambda_f: 2.0,
            zmax_lambda_f: 2.5,
            nz: 101,
            rho_um: vec![0.0],
        },
        saturation: SaturationConfig {
            well: 5,
            drive_photons: vec![1e-4, 2e-4, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1],
            window_fraction: None,
            n_samples: 201,
        },
        simulate: SimulateConfig {
            well: 5,
            n_trajectories: 150,
            seed: 20260810,
            dt_ns: 20.0,
            t_max_ms: 800.0,
            initial_z_lambda_f: 2.125,
            initial_velocity_cm_s: [-10.0, 0.0, 0.0],
            initial_y_w0: 0.0,
            series_trajectories: vec![],
            sample_stride: 0,
        },
    }
}

/// The named figure-reproduction scenarios.
pub fn preset(name: &str) -> Result<RunConfig> {
    let mut c = base_config();
    c.preset = Some(name.to_string());
    match name {
        "paper-50MHz" => {}
        "paper-10MHz" => {
            c.params.s0_mhz = 10.0;
            c.params.drive_photons = 0.001;
            c.params.probe_detuning_mhz = -28.0;
            c.simulate.t_max_ms = 150.0;
            c.simulate.well = 5;
            c.simulate.initial_z_lambda_f = 2.125;
            c.saturation.well = 5;
        }
        "paper-adverse" => {
            c.params.probe_detuning_mhz = -5.0;
            c.simulate.well = 3;
            c.simulate.initial_z_lambda_f = 1.125;
            c.simulate.t_max_ms = 50.0;
            c.sweep.zmin_lambda_f = 1.0;
            c.sweep.zmax_lambda_f = 1.5;
        }
        "paper-50MHz-equalshift" => {
            c.params.trap_variant = TrapVariant::EqualShift;
            c.params.probe_detuning_mhz = -35.0;
            c.simulate.well = 1;
            c.simulate.initial_z_lambda_f = 0.125;
            c.simulate.t_max_ms = 250.0;
            c.sweep.zmin_lambda_f = 0.0;
            c.sweep.zmax_lambda_f = 0.5;
        }
        other => bail!(
            "unknown preset '{other}'; available: {}",
            PRESETS.join(", ")
        ),
    }
    Ok(c)
}

impl RunConfig {
    /// Apply a parsed overlay on top of this config.
    pub fn apply(&mut self, o: &ConfigOverlay) {
        if let Some(p) = &o.params {
            macro_rules! patch {
                ($($f:ident),*) => { $( if let Some(v) = p.$f.clone() { self.params.$f = v; } )* };
            }
            patch!(
                g0_mhz,
                s0_mhz,
                kappa_mhz,
                gamma_mhz,
                probe_detuning_mhz,
                drive_photons,
                lambda0_nm,
                halfwaves,
                waist_um,
                mass_kg,
                photon_cutoff,
                trap_variant,
                polarization_factors
            );
            if p.cavity_detuning_mhz.is_some() {
                self.params.cavity_detuning_mhz = p.cavity_detuning_mhz;
            }
        }
        if let Some(g) = &o.grid {
            macro_rules! patch {
                ($($f:ident),*) => { $( if let Some(v) = g.$f { self.grid.$f = v; } )* };
            }
            patch!(nz, nrho, rho_max_w0);
        }
        if let Some(s) = &o.sweep {
            macro_rules! patch {
                ($($f:ident),*) => { $( if let Some(v) = s.$f.clone() { self.sweep.$f = v; } )* };
            }
            patch!(zmin_lambda_f, zmax_lambda_f, nz, rho_um);
        }
        if let Some(s) = &o.saturation {
            macro_rules! patch {
                ($($f:ident),*) => { $( if let Some(v) = s.$f.clone() { self.saturation.$f = v; } )* };
            }
            patch!(well, drive_photons, n_samples);
            if s.window_fraction.is_some() {
                self.saturation.window_fraction = s.window_fraction;
            }
        }
        if let Some(s) = &o.simulate {
            macro_rules! patch {
                ($($f:ident),*) => { $( if let Some(v) = s.$f.clone() { self.simulate.$f = v; } )* };
            }
            patch!(
                well,
                n_trajectories,
                seed,
                dt_ns,
                t_max_ms,
                initial_z_lambda_f,
                initial_velocity_cm_s,
                initial_y_w0,
                series_trajectories,
                sample_stride
            );
        }
    }

    /// Convert to angular-unit system parameters, validating on the way.
    pub fn system_params(&self) -> Result<SystemParams> {
        let p = &self.params;
        let delta_a = mhz_to_angular(-p.probe_detuning_mhz);
        let delta_c = p
            .cavity_detuning_mhz
            .map(mhz_to_angular)
            .unwrap_or(delta_a);
        let mut sp = SystemParams::with_commensurate_fort(
            mhz_to_angular(p.g0_mhz),
            mhz_to_angular(p.s0_mhz),
            mhz_to_angular(p.kappa_mhz),
            mhz_to_angular(p.gamma_mhz),
            delta_c,
            delta_a,
            p.drive_photons,
            p.lambda0_nm * 1e-9,
            p.halfwaves,
            p.waist_um * 1e-6,
            p.mass_kg,
            p.photon_cutoff,
            p.trap_variant,
        )
        .context("invalid physical parameters")?;
        sp.polarization_factors = p.polarization_factors;
        sp.validate().context("invalid physical parameters")?;
        Ok(sp)
    }

    pub fn validate(&self) -> Result<()> {
        self.system_params()?;
        let nf = self.params.halfwaves.1;
        for (what, well) in [
            ("simulate.well", self.simulate.well),
            ("saturation.well", self.saturation.well),
        ] {
            if well == 0 || well > nf {
                bail!("{what} = {well} out of range 1..={nf}");
            }
        }
        if self.sweep.zmin_lambda_f >= self.sweep.zmax_lambda_f {
            bail!("sweep range is empty: zmin >= zmax");
        }
        if self.sweep.nz < 2 || self.grid.nz < 2 || self.grid.nrho < 2 {
            bail!("sweeps and grids need at least 2 nodes per axis");
        }
        if self.simulate.dt_ns <= 0.0 || self.simulate.t_max_ms <= 0.0 {
            bail!("simulate.dt_ns and simulate.t_max_ms must be positive");
        }
        if self.simulate.n_trajectories == 0 {
            bail!("simulate.n_trajectories must be >= 1");
        }
        if !self
            .saturation
            .drive_photons
            .windows(2)
            .all(|w| w[0] < w[1])
        {
            bail!("saturation.drive_photons must be strictly ascending");
        }
        Ok(())
    }
}

/// Load a config: preset and/or file (TOML overlay, or a manifest.json from
/// an earlier run), in that order.
pub fn load(preset_name: Option<&str>, file: Option<&Path>) -> Result<RunConfig> {
    let mut cfg = match preset_name {
        Some(name) => preset(name)?,
        None => base_config(),
    };
    if let Some(path) = file {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        if path.extension().and_then(|e| e.to_str()) == Some("json") {
            let manifest: crate::manifest::RunManifest = serde_json::from_str(&text)
                .with_context(|| format!("cannot parse manifest {}", path.display()))?;
            cfg = manifest.config;
        } else {
            let overlay: ConfigOverlay = toml::from_str(&text)
                .with_context(|| format!("cannot parse config {}", path.display()))?;
            if preset_name.is_none() {
                if let Some(name) = &overlay.preset {
                    cfg = preset(name)?;
                }
            }
            cfg.apply(&overlay);
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_resolve_to_paper_values() {
        let c = preset("paper-50MHz").unwrap();
        assert_eq!(c.params.s0_mhz, 50.0);
        assert_eq!(c.params.drive_photons, 0.01);
        assert_eq!(c.params.probe_detuning_mhz, -10.0);
        assert_eq!(c.params.g0_mhz, 30.0);
        assert_eq!(c.params.kappa_mhz, 4.0);
        assert_eq!(c.params.gamma_mhz, 5.2);
        assert_eq!(c.params.waist_um, 20.0);
        assert_eq!(c.params.lambda0_nm, 852.4);
        // Default mass is Cs-133.
        assert_eq!(c.params.mass_kg, CS133_MASS);
        let sp = c.system_params().unwrap();
        // Delta_a defaults to Delta_c (cavity tuned to the atom), and
        // Delta_p = -Delta_a.
        assert_eq!(sp.delta_a, sp.delta_c);
        assert_eq!(sp.probe_detuning(), mhz_to_angular(-10.0));
    }

    #[test]
    fn overlay_patches_and_rejects_unknown_keys() {
        let mut c = preset("paper-10MHz").unwrap();
        let overlay: ConfigOverlay = toml::from_str(
            r#"
            [params]
            drive_photons = 0.002
            [simulate]
            n_trajectories = 7
            "#,
        )
        .unwrap();
        c.apply(&overlay);
        assert_eq!(c.params.drive_photons, 0.002);
        assert_eq!(c.simulate.n_trajectories, 7);
        assert_eq!(c.params.s0_mhz, 10.0);

        let bad: Result<ConfigOverlay, _> = toml::from_str("[params]\nnot_a_key = 1.0\n");
        assert!(bad.is_err());
    }

    #[test]
    fn validation_catches_inconsistencies() {
        let mut c = preset("paper-50MHz").unwrap();
        c.simulate.well = 31;
        assert!(c.validate().is_err());
        let mut c = preset("paper-50MHz").unwrap();
        c.saturation.drive_photons = vec![0.01, 0.01];
        assert!(c.validate().is_err());
        let mut c = preset("paper-50MHz").unwrap();
        c.params.kappa_mhz = -4.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn unknown_preset_is_an_error() {
        assert!(preset("paper-7MHz").is_err());
    }
}
