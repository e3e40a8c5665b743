//! Precomputed coefficient tables over (z, rho) and their bilinear
//! interpolation. A grid covers one trapping well plus a lambdaF/4 margin
//! on each side axially and [0, rho_max] radially; the position dependence
//! of the Langevin coefficients enters only through (z, rho).

use crate::coefficients::{CoefficientEngine, CoefficientError};
use crate::geometry::WellDescriptor;
use crate::params::SystemParams;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
#[error("coefficient solve failed at grid node (z = {z:.6e} m, rho = {rho:.6e} m): {source}")]
pub struct GridBuildError {
    pub z: f64,
    pub rho: f64,
    #[source]
    pub source: CoefficientError,
}

/// Per-node coefficient reduction used by the stochastic integrator.
#[derive(Debug, Clone, Copy, Default)]
pub struct GridNode {
    /// Mean axial force, N.
    pub f0_z: f64,
    /// Mean radial force (along +rho), N.
    pub f0_rho: f64,
    /// Axial friction, 1/s.
    pub beta_zz: f64,
    /// Axial velocity diffusion from the regression theorem, m^2/s^3.
    pub d_zz: f64,
    /// Spontaneous-emission velocity diffusion diagonal, m^2/s^3.
    pub d_se: [f64; 3],
    /// <a^dag a>
    pub photons: f64,
    /// <sigma^+ sigma^->
    pub excitation: f64,
}

/// Interpolated coefficients at a query point.
pub type LocalCoefficients = GridNode;

/// Descriptive metadata carried with every grid.
#[derive(Debug, Clone, Serialize)]
pub struct GridMetadata {
    pub nz: usize,
    pub nrho: usize,
    pub z_range: (f64, f64),
    pub rho_max: f64,
    pub n_max: usize,
    pub well_index: usize,
    /// Unix seconds at build time.
    pub built_unix: u64,
    pub build_seconds: f64,
}

#[derive(Debug, Clone)]
pub struct CoefficientGrid {
    z0: f64,
    dz: f64,
    nz: usize,
    drho: f64,
    nrho: usize,
    /// z-major: nodes[iz * nrho + ir].
    nodes: Vec<GridNode>,
    pub params: SystemParams,
    pub meta: GridMetadata,
}

impl CoefficientGrid {
    /// Tabulates the axial coefficient reduction over the well plus a
    /// lambdaF/4 margin. Node values are exactly what a direct
    /// [`CoefficientEngine::sample_axial`] call returns; no smoothing.
    pub fn build(
        params: &SystemParams,
        well: &WellDescriptor,
        nz: usize,
        nrho: usize,
        rho_max: f64,
    ) -> Result<Self, GridBuildError> {
        assert!(nz >= 2 && nrho >= 2, "grid needs at least 2 nodes per axis");
        let start = std::time::Instant::now();
        let margin = params.lambda_fort / 4.0;
        let z_lo = well.z_bounds.0 - margin;
        let z_hi = well.z_bounds.1 + margin;
        let dz = (z_hi - z_lo) / (nz - 1) as f64;
        let drho = rho_max / (nrho - 1) as f64;

        let engine = CoefficientEngine::new(params.clone());
        let nodes: Result<Vec<GridNode>, GridBuildError> = (0..nz * nrho)
            .into_par_iter()
            .map(|idx| {
                let iz = idx / nrho;
                let ir = idx % nrho;
                let z = z_lo + iz as f64 * dz;
                let rho = ir as f64 * drho;
                let s = engine
                    .sample_axial(z, rho)
                    .map_err(|source| GridBuildError { z, rho, source })?;
                Ok(GridNode {
                    f0_z: s.force[2],
                    f0_rho: s.force[0],
                    beta_zz: s.beta_zz(),
                    d_zz: s.d_zz(),
                    d_se: s.d_se,
                    photons: s.photons,
                    excitation: s.excitation,
                })
            })
            .collect();
        let nodes = nodes?;
        let built_unix = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Ok(Self {
            z0: z_lo,
            dz,
            nz,
            drho,
            nrho,
            nodes,
            params: params.clone(),
            meta: GridMetadata {
                nz,
                nrho,
                z_range: (z_lo, z_hi),
                rho_max,
                n_max: params.photon_cutoff,
                well_index: well.index,
                built_unix,
                build_seconds: start.elapsed().as_secs_f64(),
            },
        })
    }

    /// Synthetic grid from a closure; used for controlled integrator tests.
    pub fn from_fn(
        params: &SystemParams,
        z_range: (f64, f64),
        rho_max: f64,
        nz: usize,
        nrho: usize,
        f: impl Fn(f64, f64) -> GridNode,
    ) -> Self {
        assert!(nz >= 2 && nrho >= 2);
        let dz = (z_range.1 - z_range.0) / (nz - 1) as f64;
        let drho = rho_max / (nrho - 1) as f64;
        let mut nodes = Vec::with_capacity(nz * nrho);
        for iz in 0..nz {
            for ir in 0..nrho {
                nodes.push(f(z_range.0 + iz as f64 * dz, ir as f64 * drho));
            }
        }
        Self {
            z0: z_range.0,
            dz,
            nz,
            drho,
            nrho,
            nodes,
            params: params.clone(),
            meta: GridMetadata {
                nz,
                nrho,
                z_range,
                rho_max,
                n_max: params.photon_cutoff,
                well_index: 0,
                built_unix: 0,
                build_seconds: 0.0,
            },
        }
    }

    /// Copy with all noise tables zeroed; the deterministic-skeleton grid.
    pub fn zero_noise(&self) -> Self {
        let mut g = self.clone();
        for n in &mut g.nodes {
            n.d_zz = 0.0;
            n.d_se = [0.0; 3];
        }
        g
    }

    pub fn z_range(&self) -> (f64, f64) {
        (self.z0, self.z0 + self.dz * (self.nz - 1) as f64)
    }

    pub fn rho_max(&self) -> f64 {
        self.drho * (self.nrho - 1) as f64
    }

    pub fn node(&self, iz: usize, ir: usize) -> &GridNode {
        &self.nodes[iz * self.nrho + ir]
    }

    pub fn z_at(&self, iz: usize) -> f64 {
        self.z0 + iz as f64 * self.dz
    }

    pub fn rho_at(&self, ir: usize) -> f64 {
        ir as f64 * self.drho
    }

    /// Bilinear interpolation. `None` outside the table; the integrator
    /// treats that as a loss event, never as a lookup.
    pub fn interpolate(&self, z: f64, rho: f64) -> Option<LocalCoefficients> {
        let fz = (z - self.z0) / self.dz;
        let fr = rho / self.drho;
        if !(0.0..=(self.nz - 1) as f64).contains(&fz) || !(0.0..=(self.nrho - 1) as f64).contains(&fr)
        {
            return None;
        }
        let iz = (fz as usize).min(self.nz - 2);
        let ir = (fr as usize).min(self.nrho - 2);
        let tz = fz - iz as f64;
        let tr = fr - ir as f64;
        let w00 = (1.0 - tz) * (1.0 - tr);
        let w01 = (1.0 - tz) * tr;
        let w10 = tz * (1.0 - tr);
        let w11 = tz * tr;
        let n00 = self.node(iz, ir);
        let n01 = self.node(iz, ir + 1);
        let n10 = self.node(iz + 1, ir);
        let n11 = self.node(iz + 1, ir + 1);
        let mix = |f: fn(&GridNode) -> f64| {
            w00 * f(n00) + w01 * f(n01) + w10 * f(n10) + w11 * f(n11)
        };
        Some(GridNode {
            f0_z: mix(|n| n.f0_z),
            f0_rho: mix(|n| n.f0_rho),
            beta_zz: mix(|n| n.beta_zz),
            d_zz: mix(|n| n.d_zz),
            d_se: [
                mix(|n| n.d_se[0]),
                mix(|n| n.d_se[1]),
                mix(|n| n.d_se[2]),
            ],
            photons: mix(|n| n.photons),
            excitation: mix(|n| n.excitation),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::well;
    use crate::params::{mhz_to_angular, CS133_MASS, CS_D2_WAVELENGTH};
    use crate::TrapVariant;

    fn params() -> SystemParams {
        SystemParams::with_commensurate_fort(
            mhz_to_angular(30.0),
            mhz_to_angular(50.0),
            mhz_to_angular(4.0),
            mhz_to_angular(5.2),
            mhz_to_angular(10.0),
            mhz_to_angular(10.0),
            0.01,
            CS_D2_WAVELENGTH,
            (32, 30),
            20e-6,
            CS133_MASS,
            4,
            TrapVariant::OppositeShift,
        )
        .unwrap()
    }

    #[test]
    fn node_values_equal_direct_samples() {
        let p = params();
        let w = well(&p, 5).unwrap();
        let g = CoefficientGrid::build(&p, &w, 5, 4, 3.0 * p.waist).unwrap();
        let engine = CoefficientEngine::new(p.clone());
        for (iz, ir) in [(0usize, 0usize), (2, 1), (4, 3)] {
            let s = engine.sample_axial(g.z_at(iz), g.rho_at(ir)).unwrap();
            let n = g.node(iz, ir);
            assert_eq!(n.beta_zz, s.beta_zz());
            assert_eq!(n.d_zz, s.d_zz());
            assert_eq!(n.f0_z, s.force[2]);
            assert_eq!(n.photons, s.photons);
            // Interpolation at a node reproduces the node exactly.
            let q = g.interpolate(g.z_at(iz), g.rho_at(ir)).unwrap();
            assert_eq!(q.beta_zz, n.beta_zz);
        }
    }

    #[test]
    fn interpolation_rejects_out_of_bounds() {
        let p = params();
        let w = well(&p, 5).unwrap();
        let g = CoefficientGrid::build(&p, &w, 4, 3, 2.0 * p.waist).unwrap();
        let (zlo, zhi) = g.z_range();
        assert!(g.interpolate(zlo - 1e-9, 0.0).is_none());
        assert!(g.interpolate(zhi + 1e-9, 0.0).is_none());
        assert!(g.interpolate((zlo + zhi) / 2.0, g.rho_max() + 1e-9).is_none());
        assert!(g.interpolate((zlo + zhi) / 2.0, 0.5 * g.rho_max()).is_some());
    }

    #[test]
    fn interpolation_is_bilinear() {
        // On a grid filled with an affine function of (z, rho) the
        // interpolation is exact everywhere.
        let p = params();
        let g = CoefficientGrid::from_fn(&p, (0.0, 1e-6), 2e-6, 7, 5, |z, r| GridNode {
            f0_z: 3.0 * z - 2.0 * r + 1e-9,
            ..Default::default()
        });
        for (z, r) in [(0.13e-6, 0.77e-6), (0.5e-6, 1.99e-6), (0.98e-6, 0.01e-6)] {
            let q = g.interpolate(z, r).unwrap();
            let expect = 3.0 * z - 2.0 * r + 1e-9;
            assert!((q.f0_z - expect).abs() < 1e-18);
        }
    }
}
