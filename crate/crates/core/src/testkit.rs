//! Test-only reference implementations: time-domain integration of the
//! master equation used as an independent check of the algebraic
//! steady-state, friction and diffusion solvers.
//!
//! The propagation here never touches the trace-constrained LU machinery:
//! density matrices are evolved by the exact action of `exp(L h)` computed
//! from a truncated Taylor series with `h ||L||_1 <= 1`, which converges to
//! machine precision without stability limits.

use crate::geometry::{coupling, fort_shift, Position};
use crate::liouville::{liouvillian_partials, liouvillian_with_ops, unvectorize, vectorize};
use crate::operators::{build_operators, hamiltonian_gradient, OperatorMatrix, Operators};
use crate::params::SystemParams;
use crate::{C64, HBAR};
use nalgebra::{DMatrix, DVector};

/// Max-column-sum norm, an upper bound on the spectral radius.
pub fn one_norm(m: &DMatrix<C64>) -> f64 {
    (0..m.ncols())
        .map(|c| m.column(c).iter().map(|v| v.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// y = exp(h L) x by Taylor series. Requires `h * ||L||_1` of order one.
pub fn expm_apply(l: &DMatrix<C64>, x: &DVector<C64>, h: f64) -> DVector<C64> {
    let mut term = x.clone();
    let mut acc = x.clone();
    for m in 1..200 {
        term = l * &term * C64::new(h / m as f64, 0.0);
        acc += &term;
        if term.norm() <= 1e-16 * acc.norm() {
            break;
        }
    }
    acc
}

/// One exact step together with the exact integral over the step:
/// `end = exp(h L) x`, `integral = int_0^h exp(tau L) x dtau`,
/// sharing the Taylor terms (the integral series is h^(m+1)/(m+1)! L^m x).
pub fn expm_apply_with_integral(
    l: &DMatrix<C64>,
    x: &DVector<C64>,
    h: f64,
) -> (DVector<C64>, DVector<C64>) {
    let mut term = x.clone();
    let mut end = x.clone();
    let mut integral = x * C64::new(h, 0.0);
    for m in 1..200 {
        term = l * &term * C64::new(h / m as f64, 0.0);
        end += &term;
        integral += &term * C64::new(h / (m + 1) as f64, 0.0);
        if term.norm() <= 1e-16 * end.norm() {
            break;
        }
    }
    (end, integral)
}

/// Affine Liouvillian pieces for fast reassembly along a drag path.
pub struct LiouvillePieces {
    pub ops: Operators,
    pub l_zero: DMatrix<C64>,
    pub dl_dg: DMatrix<C64>,
    pub dl_ds: DMatrix<C64>,
}

impl LiouvillePieces {
    pub fn new(params: &SystemParams) -> Self {
        let ops = build_operators(params.photon_cutoff);
        let l_zero = liouvillian_with_ops(params, &ops, 0.0, 0.0).matrix;
        let (dg, ds) = liouvillian_partials(params, &ops);
        Self {
            ops,
            l_zero,
            dl_dg: dg.matrix,
            dl_ds: ds.matrix,
        }
    }

    pub fn at(&self, g: f64, s: f64) -> DMatrix<C64> {
        &self.l_zero + &self.dl_dg * C64::new(g, 0.0) + &self.dl_ds * C64::new(s, 0.0)
    }
}

/// Slowest dissipative scale of the problem; settling times are expressed
/// in units of its inverse.
pub fn relaxation_rate(params: &SystemParams) -> f64 {
    params.kappa.min(params.gamma / 2.0)
}

/// Steady state by brute-force evolution from the maximally mixed state
/// over `periods / relaxation_rate`.
pub fn steady_state_by_evolution(
    params: &SystemParams,
    z: f64,
    rho: f64,
    periods: f64,
) -> DMatrix<C64> {
    let pieces = LiouvillePieces::new(params);
    let pos = Position::new(rho, 0.0, z);
    let l = pieces.at(coupling(&pos, params).value, fort_shift(&pos, params).value);
    let d = params.dim();
    let mixed = DMatrix::<C64>::identity(d, d) * C64::new(1.0 / d as f64, 0.0);
    let mut state = vectorize(&mixed);
    let t_total = periods / relaxation_rate(params);
    let h = (1.0 / one_norm(&l)).min(t_total);
    let steps = (t_total / h).ceil() as usize;
    for _ in 0..steps {
        state = expm_apply(&l, &state, h);
    }
    unvectorize(&state, d)
}

fn force_operator_z(params: &SystemParams, ops: &Operators, pos: &Position) -> OperatorMatrix {
    let g = coupling(pos, params);
    let s = fort_shift(pos, params);
    let grad_h = hamiltonian_gradient(params, ops, g.grad, s.grad);
    &grad_h[2] * C64::new(-HBAR, 0.0)
}

fn expectation(rho: &DMatrix<C64>, op: &OperatorMatrix) -> C64 {
    (op * rho).trace()
}

/// Momentum diffusion (D_p)_zz from direct time-domain integration of the
/// force autocorrelation,
/// `Re int_0^T Tr[F exp(L tau) (dF rho0)] dtau` with `T = 20 / min(kappa, Gamma/2)`.
pub fn diffusion_zz_time_domain(params: &SystemParams, z: f64, rho: f64) -> f64 {
    let pieces = LiouvillePieces::new(params);
    let pos = Position::new(rho, 0.0, z);
    let l = pieces.at(coupling(&pos, params).value, fort_shift(&pos, params).value);
    let rho0 = steady_state_by_evolution(params, z, rho, 40.0);
    let f_z = force_operator_z(params, &pieces.ops, &pos);
    let f_mean = expectation(&rho0, &f_z).re;
    let x0 = &f_z * &rho0 - &rho0 * C64::new(f_mean, 0.0);

    let t_total = 20.0 / relaxation_rate(params);
    let h = 1.0 / one_norm(&l);
    let steps = (t_total / h).ceil() as usize;
    let mut x = vectorize(&x0);
    let mut integral = DVector::<C64>::zeros(x.len());
    for _ in 0..steps {
        let (end, step_integral) = expm_apply_with_integral(&l, &x, h);
        integral += step_integral;
        x = end;
    }
    let d = params.dim();
    expectation(&unvectorize(&integral, d), &f_z).re
}

/// Axial friction coefficient from the dragged-atom experiment: evolve the
/// master equation along a staircase path z(t) = z0 -+ v (T - t) for both
/// signs of v, read the force at the common end point z0, and identify
/// beta = -(F(+v) - F(-v)) / (2 m v). The even-in-v static force cancels
/// exactly; the staircase bias is O(h * relaxation_rate) and the settling
/// error is e^(-periods).
pub fn dragged_friction_zz(
    params: &SystemParams,
    z0: f64,
    rho: f64,
    v: f64,
    periods: f64,
) -> f64 {
    let pieces = LiouvillePieces::new(params);
    let pos_end = Position::new(rho, 0.0, z0);
    let f_z_end = force_operator_z(params, &pieces.ops, &pos_end);
    let gamma = relaxation_rate(params);
    let t_total = periods / gamma;
    // Step short enough that the staircase bias h*gamma stays below 0.5%,
    // and short enough for the Taylor series.
    let l_ref = pieces.at(
        coupling(&pos_end, params).value,
        fort_shift(&pos_end, params).value,
    );
    let h = (1.0 / one_norm(&l_ref)).min(0.005 / gamma);
    let steps = (t_total / h).ceil() as usize;
    let d = params.dim();
    let mixed = DMatrix::<C64>::identity(d, d) * C64::new(1.0 / d as f64, 0.0);

    let mut forces = [0.0f64; 2];
    for (slot, sign) in [(0usize, 1.0f64), (1, -1.0)] {
        let vel = sign * v;
        let z_start = z0 - vel * (steps as f64) * h;
        let mut state = vectorize(&mixed);
        for k in 0..steps {
            let z_mid = z_start + vel * (k as f64 + 0.5) * h;
            let pos = Position::new(rho, 0.0, z_mid);
            let l = pieces.at(coupling(&pos, params).value, fort_shift(&pos, params).value);
            state = expm_apply(&l, &state, h);
        }
        forces[slot] = expectation(&unvectorize(&state, d), &f_z_end).re;
    }
    -(forces[0] - forces[1]) / (2.0 * params.mass * v)
}

/// <a^dag a> after evolving from the vacuum for `periods / relaxation_rate`;
/// the long-time transmission oracle.
pub fn photons_by_evolution(params: &SystemParams, z: f64, rho: f64, periods: f64) -> f64 {
    let pieces = LiouvillePieces::new(params);
    let pos = Position::new(rho, 0.0, z);
    let l = pieces.at(coupling(&pos, params).value, fort_shift(&pos, params).value);
    let d = params.dim();
    let mut vac = DMatrix::<C64>::zeros(d, d);
    vac[(0, 0)] = C64::new(1.0, 0.0);
    let mut state = vectorize(&vac);
    let t_total = periods / relaxation_rate(params);
    let h = 1.0 / one_norm(&l);
    let steps = (t_total / h).ceil() as usize;
    for _ in 0..steps {
        state = expm_apply(&l, &state, h);
    }
    expectation(&unvectorize(&state, d), &pieces.ops.number).re
}
