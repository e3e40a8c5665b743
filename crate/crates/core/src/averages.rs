//! Per-well averaged friction and diffusion, the resulting equilibrium rms
//! velocity estimate v_rms = sqrt(D_bar / beta_bar), and the drive-strength
//! (saturation) scan.

use crate::coefficients::{CoefficientEngine, CoefficientError};
use crate::geometry::WellDescriptor;
use crate::params::SystemParams;
use rayon::prelude::*;
use serde::Serialize;

/// Averaging window along the axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum AverageWindow {
    /// The whole well (shallow traps, where the atom samples everything).
    FullWell,
    /// A window of the given fraction of lambdaF centered on the anti-node
    /// (deep traps; the paper uses lambdaF/10).
    CenteredFraction(f64),
}

impl AverageWindow {
    pub fn bounds(&self, well: &WellDescriptor, lambda_fort: f64) -> (f64, f64) {
        match self {
            AverageWindow::FullWell => well.z_bounds,
            AverageWindow::CenteredFraction(frac) => {
                let half = frac * lambda_fort / 2.0;
                (well.antinode_z - half, well.antinode_z + half)
            }
        }
    }
}

/// Well-averaged coefficients on the axis.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct WellAverages {
    pub well_index: usize,
    /// Averaged beta_zz, 1/s.
    pub beta_zz: f64,
    /// Averaged D_zz including the spontaneous-emission part, m^2/s^3.
    pub d_zz_total: f64,
    /// sqrt(D_bar / beta_bar) when beta_bar > 0; None marks "no cooling,
    /// v_rms undefined" (not cooling to zero).
    pub v_rms_z: Option<f64>,
}

/// Average beta_zz and total D_zz over `n_samples` uniform on-axis points
/// in the window, and form the rms-velocity estimate.
pub fn well_average_vrms(
    engine: &CoefficientEngine,
    well: &WellDescriptor,
    window: AverageWindow,
    n_samples: usize,
) -> Result<WellAverages, CoefficientError> {
    assert!(n_samples >= 2);
    let (z_lo, z_hi) = window.bounds(well, engine.params.lambda_fort);
    let samples: Result<Vec<(f64, f64)>, CoefficientError> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let z = z_lo + (z_hi - z_lo) * i as f64 / (n_samples - 1) as f64;
            let s = engine.sample_axial(z, 0.0)?;
            Ok((s.beta_zz(), s.d_zz_total()))
        })
        .collect();
    let samples = samples?;
    let n = samples.len() as f64;
    let beta_zz = samples.iter().map(|s| s.0).sum::<f64>() / n;
    let d_zz_total = samples.iter().map(|s| s.1).sum::<f64>() / n;
    let v_rms_z = (beta_zz > 0.0).then(|| (d_zz_total / beta_zz).sqrt());
    Ok(WellAverages {
        well_index: well.index,
        beta_zz,
        d_zz_total,
        v_rms_z,
    })
}

/// One row of the saturation scan.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SaturationPoint {
    pub drive_photons: f64,
    pub beta_zz: f64,
    pub d_zz_total: f64,
    pub v_rms_z: Option<f64>,
    /// Photon cutoff used at this drive.
    pub n_max: usize,
}

/// Well-averaged coefficients as a function of the drive strength N_e.
///
/// The steady state holds visibly more than N_e photons near dressed
/// resonance at strong drive, so the photon cutoff is raised with the
/// drive; the configured cutoff applies below N_e = 0.03.
pub fn saturation_scan(
    params: &SystemParams,
    well: &WellDescriptor,
    drive_list: &[f64],
    window: AverageWindow,
    n_samples: usize,
) -> Result<Vec<SaturationPoint>, CoefficientError> {
    let mut out = Vec::with_capacity(drive_list.len());
    for &n_e in drive_list {
        let mut p = params.clone();
        p.drive_photons = n_e;
        if n_e >= 0.03 {
            p.photon_cutoff = p.photon_cutoff.max(6);
        }
        let engine = CoefficientEngine::new(p.clone());
        let avg = well_average_vrms(&engine, well, window, n_samples)?;
        out.push(SaturationPoint {
            drive_photons: n_e,
            beta_zz: avg.beta_zz,
            d_zz_total: avg.d_zz_total,
            v_rms_z: avg.v_rms_z,
            n_max: p.photon_cutoff,
        });
    }
    Ok(out)
}
