//! Spatial structure of the two standing waves: the FORT shift `S_F(r)`,
//! the cavity-QED coupling `g(r)`, their analytic gradients, and the
//! well/anti-node atlas of the commensurate cavity.
//!
//! Coordinates: `z` runs along the cavity axis with `z = 0` at the left
//! cavity boundary; `rho = sqrt(x^2 + y^2)` is the distance from the axis.

use crate::params::SystemParams;
use serde::{Deserialize, Serialize};

/// A point in the cavity frame, meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Position {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// On-axis point at height `z`.
    pub fn on_axis(z: f64) -> Self {
        Self { x: 0.0, y: 0.0, z }
    }

    pub fn rho(&self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Whether the point lies between the mirrors. Evaluating the fields
    /// outside is permitted (trajectories may overshoot) but callers can
    /// flag it with this.
    pub fn is_inside_cavity(&self, params: &SystemParams) -> bool {
        self.z >= 0.0 && self.z <= params.cavity_length()
    }
}

/// A scalar field value together with its Cartesian gradient.
#[derive(Debug, Clone, Copy)]
pub struct FieldValue {
    /// Field amplitude, rad/s.
    pub value: f64,
    /// Gradient (d/dx, d/dy, d/dz), rad/(s m).
    pub grad: [f64; 3],
}

/// FORT AC-Stark shift S_F = S0 sin^2(kF z) exp(-2 rho^2 / w0^2) and its
/// gradient.
pub fn fort_shift(pos: &Position, params: &SystemParams) -> FieldValue {
    let kf = params.k_fort();
    let w0sq = params.waist * params.waist;
    let rho_sq = pos.x * pos.x + pos.y * pos.y;
    let env = (-2.0 * rho_sq / w0sq).exp();
    let s = (kf * pos.z).sin();
    let value = params.s0 * s * s * env;
    let dz = params.s0 * kf * (2.0 * kf * pos.z).sin() * env;
    let radial = -4.0 / w0sq * value;
    FieldValue {
        value,
        grad: [radial * pos.x, radial * pos.y, dz],
    }
}

/// Cavity coupling g = g0 sin(k z) exp(-rho^2 / w0^2) and its gradient.
///
/// Both beams share the waist `w0` (the Rayleigh ranges match to ~1%, which
/// we approximate as exact).
pub fn coupling(pos: &Position, params: &SystemParams) -> FieldValue {
    let k = params.k_qed();
    let w0sq = params.waist * params.waist;
    let rho_sq = pos.x * pos.x + pos.y * pos.y;
    let env = (-rho_sq / w0sq).exp();
    let value = params.g0 * (k * pos.z).sin() * env;
    let dz = params.g0 * k * (k * pos.z).cos() * env;
    let radial = -2.0 / w0sq * value;
    FieldValue {
        value,
        grad: [radial * pos.x, radial * pos.y, dz],
    }
}

/// Both local field amplitudes, values only.
pub fn local_fields(pos: &Position, params: &SystemParams) -> (f64, f64) {
    (coupling(pos, params).value, fort_shift(pos, params).value)
}

/// One FORT anti-node (the bottom of one trapping well).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WellDescriptor {
    /// 1-based index along the axis.
    pub index: usize,
    /// Anti-node position z_n = (n/2 - 1/4) lambdaF, m.
    pub antinode_z: f64,
    /// Axial bounds [z_n - lambdaF/4, z_n + lambdaF/4], m.
    pub z_bounds: (f64, f64),
    /// On-axis cavity coupling at the anti-node, rad/s.
    pub g_at_antinode: f64,
}

impl WellDescriptor {
    pub fn width(&self) -> f64 {
        self.z_bounds.1 - self.z_bounds.0
    }
}

/// All `nF` FORT anti-nodes with the cavity coupling evaluated on axis.
///
/// For the default cavity (L = 15 lambdaF = 16 lambda0) the multiset of
/// |g(z_n)|/g0 values contains exactly 8 distinct magnitudes.
pub fn well_atlas(params: &SystemParams) -> Vec<WellDescriptor> {
    let lf = params.lambda_fort;
    (1..=params.halfwaves.1)
        .map(|n| {
            let z = (n as f64 / 2.0 - 0.25) * lf;
            WellDescriptor {
                index: n,
                antinode_z: z,
                z_bounds: (z - lf / 4.0, z + lf / 4.0),
                g_at_antinode: coupling(&Position::on_axis(z), params).value,
            }
        })
        .collect()
}

/// The well with the given 1-based index.
pub fn well(params: &SystemParams, index: usize) -> Option<WellDescriptor> {
    if index == 0 || index > params.halfwaves.1 {
        return None;
    }
    Some(well_atlas(params)[index - 1])
}

#[cfg(test)]
mod tests {
    use super::*;
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
    fn fort_extrema_and_nodes() {
        let p = params();
        let lf = p.lambda_fort;
        // Axial anti-node on axis: S_F = S0, gradient = 0.
        let at = fort_shift(&Position::on_axis(lf / 4.0), &p);
        assert!((at.value - p.s0).abs() < 1e-9 * p.s0);
        for c in at.grad {
            assert!(c.abs() < 1e-6 * p.s0 * p.k_fort());
        }
        // Node at the boundary.
        let node = fort_shift(&Position::on_axis(0.0), &p);
        assert_eq!(node.value, 0.0);
        // Gaussian envelope at rho = w0.
        let off = fort_shift(&Position::new(p.waist, 0.0, lf / 4.0), &p);
        assert!((off.value - p.s0 * (-2.0f64).exp()).abs() < 1e-12 * p.s0);
    }

    #[test]
    fn coupling_antinode_node_envelope() {
        let p = params();
        let l0 = p.lambda0;
        let anti = coupling(&Position::on_axis(l0 / 4.0), &p);
        assert!((anti.value - p.g0).abs() < 1e-9 * p.g0);
        let node = coupling(&Position::on_axis(l0 / 2.0), &p);
        assert!(node.value.abs() < 1e-9 * p.g0);
        assert!((node.grad[2].abs() - p.g0 * p.k_qed()).abs() < 1e-6 * p.g0 * p.k_qed());
        let off = coupling(&Position::new(p.waist, 0.0, l0 / 4.0), &p);
        assert!((off.value - p.g0 * (-1.0f64).exp()).abs() < 1e-12 * p.g0);
    }

    #[test]
    fn analytic_gradients_match_finite_differences() {
        let p = params();
        let h = 1e-10;
        let pts = [
            Position::new(3e-6, -2e-6, 1.3 * p.lambda_fort),
            Position::new(-8e-6, 5e-6, 7.05 * p.lambda_fort),
            Position::new(1e-6, 1e-6, 0.4 * p.lambda_fort),
            Position::new(0.0, 12e-6, 11.22 * p.lambda_fort),
        ];
        for pos in pts {
            for (field, scale) in [
                (fort_shift as fn(&Position, &SystemParams) -> FieldValue, p.s0),
                (coupling, p.g0),
            ] {
                let f = field(&pos, &p);
                for axis in 0..3 {
                    let mut lo = pos;
                    let mut hi = pos;
                    match axis {
                        0 => {
                            lo.x -= h;
                            hi.x += h;
                        }
                        1 => {
                            lo.y -= h;
                            hi.y += h;
                        }
                        _ => {
                            lo.z -= h;
                            hi.z += h;
                        }
                    }
                    let fd = (field(&hi, &p).value - field(&lo, &p).value) / (2.0 * h);
                    let tol = 1e-6 * f.grad[axis].abs().max(1e-4 * scale * p.k_qed());
                    assert!(
                        (fd - f.grad[axis]).abs() <= tol,
                        "axis {axis}: fd {fd:.6e} vs analytic {:.6e}",
                        f.grad[axis]
                    );
                }
            }
        }
    }

    #[test]
    fn axial_to_radial_gradient_scale_is_k_w0() {
        // At rho = w0/2 the largest axial slope of g exceeds the radial
        // slope by about k w0 (~ 150 for the defaults).
        let p = params();
        let mut max_dz: f64 = 0.0;
        let mut max_drho: f64 = 0.0;
        for i in 0..400 {
            let z = i as f64 / 400.0 * p.lambda0;
            let f = coupling(&Position::new(p.waist / 2.0, 0.0, z), &p);
            max_dz = max_dz.max(f.grad[2].abs());
            max_drho = max_drho.max(f.grad[0].abs());
        }
        let ratio = max_dz / max_drho;
        let kw0 = p.k_qed() * p.waist;
        assert!((kw0 - 147.4).abs() < 1.0);
        assert!(ratio > 0.66 * kw0 && ratio < 1.5 * kw0, "ratio {ratio}");
    }

    #[test]
    fn atlas_has_two_dark_antinodes_and_eight_classes() {
        let p = params();
        let atlas = well_atlas(&p);
        assert_eq!(atlas.len(), 30);
        // Wells 8 and 23 sit where the QED mode has a node.
        let dark: Vec<usize> = atlas
            .iter()
            .filter(|w| w.g_at_antinode.abs() < 1e-9 * p.g0)
            .map(|w| w.index)
            .collect();
        assert_eq!(dark, vec![8, 23]);
        // 8 quantitatively different wells.
        let mut classes: Vec<f64> = Vec::new();
        for w in &atlas {
            let v = (w.g_at_antinode / p.g0).abs();
            if !classes.iter().any(|c| (c - v).abs() < 1e-6) {
                classes.push(v);
            }
        }
        assert_eq!(classes.len(), 8);
    }

    #[test]
    fn atlas_is_mirror_symmetric() {
        let p = params();
        let atlas = well_atlas(&p);
        for n in 1..=30usize {
            let a = atlas[n - 1].g_at_antinode.abs();
            let b = atlas[31 - n - 1].g_at_antinode.abs();
            assert!((a - b).abs() < 1e-6 * p.g0, "wells {n}/{}", 31 - n);
        }
    }
}
