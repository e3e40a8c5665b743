//! Operators on the truncated atom (x) photon Hilbert space and the system
//! Hamiltonian.
//!
//! Basis ordering is fixed and atom-major: the first `n_max + 1` states are
//! |g, 0>, |g, 1>, ..., |g, n_max>, followed by |e, 0>, ..., |e, n_max>.
//! Serialized matrices are therefore comparable across runs.
//!
//! All Hamiltonians are expressed in angular-frequency units (H / hbar,
//! rad/s).

use crate::params::{SystemParams, TrapVariant};
use crate::C64;
use nalgebra::DMatrix;

/// Dense complex operator on the truncated space.
pub type OperatorMatrix = DMatrix<C64>;

/// Index of |atom, n> in the fixed basis: `excited` selects the e-block.
pub fn basis_index(excited: bool, n: usize, n_max: usize) -> usize {
    debug_assert!(n <= n_max);
    if excited {
        n_max + 1 + n
    } else {
        n
    }
}

/// The elementary operators of the problem.
pub struct Operators {
    pub a: OperatorMatrix,
    pub a_dagger: OperatorMatrix,
    pub sigma_minus: OperatorMatrix,
    pub sigma_plus: OperatorMatrix,
    /// Photon number a^dag a.
    pub number: OperatorMatrix,
    /// Atomic excitation projector sigma^+ sigma^-.
    pub excitation: OperatorMatrix,
    /// Jaynes-Cummings exchange a^dag sigma^- + sigma^+ a.
    pub exchange: OperatorMatrix,
    /// Cavity quadrature a^dag + a (the drive couples to this).
    pub quadrature: OperatorMatrix,
    /// sigma^+ sigma^- - 1/2 (the opposite-shift FORT couples to this).
    pub half_inversion: OperatorMatrix,
    pub n_max: usize,
}

/// Build all elementary operators for the given photon cutoff.
pub fn build_operators(n_max: usize) -> Operators {
    assert!(n_max >= 1, "photon cutoff must be >= 1");
    let d = 2 * (n_max + 1);
    let mut a = DMatrix::<C64>::zeros(d, d);
    for atom in [false, true] {
        for n in 1..=n_max {
            let row = basis_index(atom, n - 1, n_max);
            let col = basis_index(atom, n, n_max);
            a[(row, col)] = C64::new((n as f64).sqrt(), 0.0);
        }
    }
    let mut sigma_minus = DMatrix::<C64>::zeros(d, d);
    for n in 0..=n_max {
        let row = basis_index(false, n, n_max);
        let col = basis_index(true, n, n_max);
        sigma_minus[(row, col)] = C64::new(1.0, 0.0);
    }
    let a_dagger = a.adjoint();
    let sigma_plus = sigma_minus.adjoint();
    let number = &a_dagger * &a;
    let excitation = &sigma_plus * &sigma_minus;
    let exchange = &a_dagger * &sigma_minus + &sigma_plus * &a;
    let quadrature = &a_dagger + &a;
    let half_inversion = &excitation - DMatrix::<C64>::identity(d, d) * C64::new(0.5, 0.0);
    Operators {
        a,
        a_dagger,
        sigma_minus,
        sigma_plus,
        number,
        excitation,
        exchange,
        quadrature,
        half_inversion,
        n_max,
    }
}

impl Operators {
    pub fn dim(&self) -> usize {
        2 * (self.n_max + 1)
    }

    /// The operator multiplying the FORT shift in the Hamiltonian:
    /// `2 (sigma^+ sigma^- - 1/2)` for the opposite-shift trap, `-1` for
    /// the equal-shift trap.
    pub fn fort_coupling(&self, variant: TrapVariant) -> OperatorMatrix {
        match variant {
            TrapVariant::OppositeShift => &self.half_inversion * C64::new(2.0, 0.0),
            TrapVariant::EqualShift => {
                DMatrix::<C64>::identity(self.dim(), self.dim()) * C64::new(-1.0, 0.0)
            }
        }
    }
}

/// Hamiltonian (in rad/s) at local field amplitudes `g_local`, `s_local`:
///
/// opposite shift:
///   H = Delta_c a^dag a + Delta_a sigma^+ sigma^- + 2 S (sigma^+ sigma^- - 1/2)
///       + E0 (a^dag + a) + g (a^dag sigma^- + sigma^+ a)
///
/// equal shift: the FORT term is replaced by `-S * 1`.
pub fn hamiltonian(
    params: &SystemParams,
    ops: &Operators,
    g_local: f64,
    s_local: f64,
) -> OperatorMatrix {
    let e0 = params.drive_amplitude();
    let mut h = &ops.number * C64::new(params.delta_c, 0.0)
        + &ops.excitation * C64::new(params.delta_a, 0.0)
        + &ops.quadrature * C64::new(e0, 0.0)
        + &ops.exchange * C64::new(g_local, 0.0);
    h += ops.fort_coupling(params.trap_variant) * C64::new(s_local, 0.0);
    h
}

/// The three Cartesian gradient components of the Hamiltonian at a point
/// with field gradients `grad_g`, `grad_s` (rad/(s m)). In newton units the
/// force operator is `F_i = -hbar * grad_h[i]`.
pub fn hamiltonian_gradient(
    params: &SystemParams,
    ops: &Operators,
    grad_g: [f64; 3],
    grad_s: [f64; 3],
) -> [OperatorMatrix; 3] {
    let fort = ops.fort_coupling(params.trap_variant);
    [0, 1, 2].map(|i| &fort * C64::new(grad_s[i], 0.0) + &ops.exchange * C64::new(grad_g[i], 0.0))
}
