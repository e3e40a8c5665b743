//! Stochastic integration of the quasiclassical equations of motion
//!
//!   dr = v dt
//!   dv_z = (F0_z/m) dt - beta_zz v_z dt + sqrt(2 (D_zz + D_se,z)) dW_z
//!   dv_x = (F0_rho/m)(x/rho) dt + sqrt(2 D_se,x) dW_x   (same for y)
//!
//! on a precomputed coefficient grid. Radial friction and cavity-induced
//! radial diffusion are omitted (they are smaller by ~(k w0)^2); radial
//! motion keeps the mean force and the spontaneous-emission noise.
//!
//! The deterministic part is advanced semi-implicitly (velocity first,
//! position with the updated velocity); the explicit variant inflates the
//! energy of a harmonic oscillation at rate omega^2 dt per unit time, which
//! at the 600 kHz axial frequency would forge a heating rate comparable to
//! the physical friction.

use crate::grid::CoefficientGrid;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

/// Why a trajectory ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExitReason {
    /// Left the axial well interval.
    AxialExit,
    /// Crossed the radial escape cylinder.
    RadialExit,
    /// Survived until t_max.
    TimeCap,
}

impl ExitReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExitReason::AxialExit => "axial",
            ExitReason::RadialExit => "radial",
            ExitReason::TimeCap => "time-cap",
        }
    }
}

/// One trajectory's controls. Identical configs (and grid) replay
/// identically.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrajectoryConfig {
    /// Initial position (x, y, z), m.
    pub initial_position: [f64; 3],
    /// Initial velocity (vx, vy, vz), m/s.
    pub initial_velocity: [f64; 3],
    /// Time step, s.
    pub dt: f64,
    /// Wall-clock cap on the trajectory, s.
    pub t_max: f64,
    /// Axial well bounds, m.
    pub z_bounds: (f64, f64),
    /// Radial escape distance, m.
    pub rho_max: f64,
    /// Record every `sample_stride`-th step into the time series; 0 records
    /// nothing.
    pub sample_stride: usize,
    /// RNG stream seed.
    pub seed: u64,
}

/// Phase-space state of the atom.
#[derive(Debug, Clone, Copy)]
pub struct AtomState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub vx: f64,
    pub vy: f64,
    pub vz: f64,
}

impl AtomState {
    pub fn rho(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

/// One recorded point of a trajectory time series.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SamplePoint {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub v_z: f64,
    /// Interpolated <a^dag a> at the atom's position.
    pub photons: f64,
}

impl SamplePoint {
    pub fn rho(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

#[derive(Debug, Clone)]
pub struct TrajectoryResult {
    /// Time spent inside the well (and radial cylinder), s.
    pub trapping_time: f64,
    pub exit_reason: ExitReason,
    /// rms of v_z over the whole trapped interval, m/s.
    pub v_rms_z: f64,
    /// rms of v_z restricted to t > 1 ms, when the trajectory lasted that
    /// long; the short-time value is dominated by the initial condition.
    pub v_rms_z_post_1ms: Option<f64>,
    pub series: Vec<SamplePoint>,
}

/// One Euler-Maruyama step. Draw order is fixed (x, y, z) so that seeded
/// streams replay identically.
pub fn step(
    state: &mut AtomState,
    local: &crate::grid::LocalCoefficients,
    mass: f64,
    dt: f64,
    rng: &mut ChaCha8Rng,
) {
    let sqrt_dt = dt.sqrt();
    let xi_x: f64 = StandardNormal.sample(rng);
    let xi_y: f64 = StandardNormal.sample(rng);
    let xi_z: f64 = StandardNormal.sample(rng);

    let rho = state.rho();
    // The radial unit vector is zero on the axis by symmetry.
    let (ux, uy) = if rho > 0.0 {
        (state.x / rho, state.y / rho)
    } else {
        (0.0, 0.0)
    };
    let a_rho = local.f0_rho / mass;
    state.vx += a_rho * ux * dt + (2.0 * local.d_se[0]).sqrt() * sqrt_dt * xi_x;
    state.vy += a_rho * uy * dt + (2.0 * local.d_se[1]).sqrt() * sqrt_dt * xi_y;
    state.vz += (local.f0_z / mass - local.beta_zz * state.vz) * dt
        + (2.0 * (local.d_zz + local.d_se[2])).sqrt() * sqrt_dt * xi_z;

    state.x += state.vx * dt;
    state.y += state.vy * dt;
    state.z += state.vz * dt;
}

/// Integrate one trajectory until it leaves the well, escapes radially, or
/// reaches t_max.
pub fn simulate_trajectory(config: &TrajectoryConfig, grid: &CoefficientGrid) -> TrajectoryResult {
    assert!(config.dt > 0.0, "dt must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut state = AtomState {
        x: config.initial_position[0],
        y: config.initial_position[1],
        z: config.initial_position[2],
        vx: config.initial_velocity[0],
        vy: config.initial_velocity[1],
        vz: config.initial_velocity[2],
    };
    let mass = grid.params.mass;
    let mut series = Vec::new();
    let mut sum_vz2 = 0.0f64;
    let mut n_steps = 0u64;
    let mut sum_vz2_post = 0.0f64;
    let mut n_post = 0u64;
    let mut t = 0.0f64;
    let mut k = 0u64;

    let exit_reason = loop {
        if t >= config.t_max {
            break ExitReason::TimeCap;
        }
        if state.z < config.z_bounds.0 || state.z > config.z_bounds.1 {
            break ExitReason::AxialExit;
        }
        let rho = state.rho();
        if rho >= config.rho_max {
            break ExitReason::RadialExit;
        }
        let Some(local) = grid.interpolate(state.z, rho) else {
            // Outside the table: a loss event. Attribute it to whichever
            // bound is closer to being violated.
            let (zlo, zhi) = grid.z_range();
            if state.z < zlo || state.z > zhi {
                break ExitReason::AxialExit;
            }
            break ExitReason::RadialExit;
        };
        if config.sample_stride > 0 && k % config.sample_stride as u64 == 0 {
            series.push(SamplePoint {
                t,
                x: state.x,
                y: state.y,
                z: state.z,
                v_z: state.vz,
                photons: local.photons,
            });
        }
        step(&mut state, &local, mass, config.dt, &mut rng);
        t += config.dt;
        k += 1;
        sum_vz2 += state.vz * state.vz;
        n_steps += 1;
        if t > 1e-3 {
            sum_vz2_post += state.vz * state.vz;
            n_post += 1;
        }
    };

    let v_rms_z = if n_steps > 0 {
        (sum_vz2 / n_steps as f64).sqrt()
    } else {
        config.initial_velocity[2].abs()
    };
    let v_rms_z_post_1ms = (n_post > 0).then(|| (sum_vz2_post / n_post as f64).sqrt());
    TrajectoryResult {
        trapping_time: t.min(config.t_max),
        exit_reason,
        v_rms_z,
        v_rms_z_post_1ms,
        series,
    }
}
