//! The master-equation generator as a pre-multiplication matrix on
//! column-vectorized density matrices, its partial derivatives with respect
//! to the two local field amplitudes, and the trace-constrained linear
//! solver shared by the coefficient calculations.
//!
//! Vectorization is column-major: `vec(rho)[c*d + r] = rho[(r, c)]`, so
//! `vec(A rho B) = (B^T kron A) vec(rho)`.

use crate::operators::{build_operators, hamiltonian, Operators};
use crate::params::{SystemParams, TrapVariant};
use crate::C64;
use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("steady-state kernel is not one-dimensional (truncation or parameter pathology)")]
    DegenerateSteadyState,
    #[error("linear solve residual {residual:.3e} exceeds {bound:.3e}")]
    NoConvergence { residual: f64, bound: f64 },
    #[error("trace-constrained system is rank-deficient")]
    SingularSolve,
}

/// A linear map on vectorized density matrices.
#[derive(Debug, Clone)]
pub struct Superoperator {
    pub matrix: DMatrix<C64>,
    /// True for generators that annihilate the trace (Liouvillians and
    /// their field partials), false for general maps.
    pub trace_annihilating: bool,
}

/// vec(rho) in the column-major convention.
pub fn vectorize(rho: &DMatrix<C64>) -> DVector<C64> {
    DVector::from_column_slice(rho.as_slice())
}

/// Inverse of [`vectorize`] for a d x d matrix.
pub fn unvectorize(v: &DVector<C64>, d: usize) -> DMatrix<C64> {
    DMatrix::from_column_slice(d, d, v.as_slice())
}

/// rho -> A rho as a matrix on vec(rho).
pub fn spre(a: &DMatrix<C64>) -> DMatrix<C64> {
    DMatrix::<C64>::identity(a.nrows(), a.ncols()).kronecker(a)
}

/// rho -> rho B as a matrix on vec(rho).
pub fn spost(b: &DMatrix<C64>) -> DMatrix<C64> {
    b.transpose().kronecker(&DMatrix::<C64>::identity(b.nrows(), b.ncols()))
}

/// rho -> A rho B as a matrix on vec(rho).
pub fn sandwich(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    b.transpose().kronecker(a)
}

/// rho -> -i [h, rho] as a matrix on vec(rho).
pub fn commutator_map(h: &DMatrix<C64>) -> DMatrix<C64> {
    (spre(h) - spost(h)) * C64::new(0.0, -1.0)
}

impl Superoperator {
    pub fn dim_squared(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        let d = rho.nrows();
        unvectorize(&(&self.matrix * vectorize(rho)), d)
    }

    /// Frobenius norm of the matrix.
    pub fn norm(&self) -> f64 {
        self.matrix.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest residual of the trace functional acting from the left,
    /// max_col |sum_diag-entries of column|. Zero for a trace-annihilating
    /// generator.
    pub fn trace_functional_residual(&self) -> f64 {
        let dsq = self.matrix.nrows();
        let d = (dsq as f64).sqrt().round() as usize;
        (0..dsq)
            .map(|col| {
                (0..d)
                    .map(|i| self.matrix[(i * d + i, col)])
                    .sum::<C64>()
                    .norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Liouvillian of the quasiclassical master equation
///
/// d rho / dt = -i[H, rho] - kappa {a^dag a, rho} + 2 kappa a rho a^dag
///              - (Gamma/2) {s+ s-, rho} + Gamma s- rho s+
///
/// at local field amplitudes `(g_local, s_local)`.
pub fn liouvillian(params: &SystemParams, g_local: f64, s_local: f64) -> Superoperator {
    let ops = build_operators(params.photon_cutoff);
    liouvillian_with_ops(params, &ops, g_local, s_local)
}

/// As [`liouvillian`], reusing prebuilt operators.
pub fn liouvillian_with_ops(
    params: &SystemParams,
    ops: &Operators,
    g_local: f64,
    s_local: f64,
) -> Superoperator {
    let h = hamiltonian(params, ops, g_local, s_local);
    let mut m = commutator_map(&h);
    m += dissipator(&ops.a, 2.0 * params.kappa);
    m += dissipator(&ops.sigma_minus, params.gamma);
    Superoperator {
        matrix: m,
        trace_annihilating: true,
    }
}

/// Lindblad dissipator rate * (c rho c^dag - 1/2 {c^dag c, rho}) in
/// vectorized form.
fn dissipator(c: &DMatrix<C64>, rate: f64) -> DMatrix<C64> {
    let cdag = c.adjoint();
    let cdc = &cdag * c;
    let half = C64::new(0.5, 0.0);
    (sandwich(c, &cdag) - spre(&cdc) * half - spost(&cdc) * half) * C64::new(rate, 0.0)
}

/// Partial derivatives of the Liouvillian with respect to the local field
/// amplitudes. The Liouvillian is affine in both, so these are constant:
///
/// dL/dg: rho -> -i [a^dag s- + s+ a, rho]
/// dL/dS: rho -> -i [2 (s+ s- - 1/2), rho]  (opposite shift)
///         rho -> 0                          (equal shift; identity commutes)
pub fn liouvillian_partials(params: &SystemParams, ops: &Operators) -> (Superoperator, Superoperator) {
    let dg = commutator_map(&ops.exchange);
    let ds = match params.trap_variant {
        TrapVariant::OppositeShift => commutator_map(&(&ops.half_inversion * C64::new(2.0, 0.0))),
        TrapVariant::EqualShift => DMatrix::<C64>::zeros(dg.nrows(), dg.ncols()),
    };
    (
        Superoperator { matrix: dg, trace_annihilating: true },
        Superoperator { matrix: ds, trace_annihilating: true },
    )
}

/// Trace-constrained solver around one LU factorization of the bordered
/// matrix
///
/// ```text
/// [ L       vec(1) ] [ x      ]   [ b ]
/// [ vec(1)^T   0   ] [ lambda ] = [ c ]
/// ```
///
/// With `b = 0, c = 1` the solution is the unit-trace steady state; with a
/// traceless `b` and `c = 0` it is the unique traceless solution of
/// `L x = b` (the right-hand sides of the friction and diffusion solves are
/// traceless, so the solution is unique on that subspace).
pub struct ConstrainedSolver {
    lu: nalgebra::LU<C64, nalgebra::Dyn, nalgebra::Dyn>,
    liouvillian: DMatrix<C64>,
    d: usize,
}

impl ConstrainedSolver {
    pub fn new(liouvillian: &Superoperator) -> Result<Self, SolveError> {
        let dsq = liouvillian.matrix.nrows();
        let d = (dsq as f64).sqrt().round() as usize;
        let mut bordered = DMatrix::<C64>::zeros(dsq + 1, dsq + 1);
        bordered.view_mut((0, 0), (dsq, dsq)).copy_from(&liouvillian.matrix);
        for i in 0..d {
            bordered[(i * d + i, dsq)] = C64::new(1.0, 0.0);
            bordered[(dsq, i * d + i)] = C64::new(1.0, 0.0);
        }
        let lu = bordered.lu();
        Ok(Self {
            lu,
            liouvillian: liouvillian.matrix.clone(),
            d,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    fn solve_bordered(&self, rhs: &DVector<C64>, trace: f64) -> Result<DMatrix<C64>, SolveError> {
        let dsq = self.d * self.d;
        let mut full = DVector::<C64>::zeros(dsq + 1);
        full.rows_mut(0, dsq).copy_from(rhs);
        full[dsq] = C64::new(trace, 0.0);
        let sol = self.lu.solve(&full).ok_or(SolveError::SingularSolve)?;
        if sol.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(SolveError::SingularSolve);
        }
        Ok(unvectorize(&DVector::from_column_slice(&sol.as_slice()[0..dsq]), self.d))
    }

    /// Unit-trace steady state, `L rho0 = 0`.
    ///
    /// The residual bound is `||L vec(rho0)|| <= 1e-10 ||L||_F`. When the
    /// bound fails, the kernel dimension is estimated from the singular
    /// values of L to distinguish a degenerate steady state from plain
    /// non-convergence.
    pub fn steady_state(&self) -> Result<DMatrix<C64>, SolveError> {
        let rho = match self.solve_bordered(&DVector::zeros(self.d * self.d), 1.0) {
            Ok(r) => r,
            Err(_) => return Err(self.classify_failure(f64::INFINITY, 0.0)),
        };
        let residual = (&self.liouvillian * vectorize(&rho)).norm();
        let norm_l = self.liouvillian.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let bound = 1e-10 * norm_l;
        if residual > bound {
            return Err(self.classify_failure(residual, bound));
        }
        // Guard against round-off: the solve of a Hermiticity-preserving
        // system returns rho Hermitian to machine precision; symmetrize.
        let herm = (&rho + rho.adjoint()) * C64::new(0.5, 0.0);
        Ok(herm)
    }

    fn classify_failure(&self, residual: f64, bound: f64) -> SolveError {
        let svd = self.liouvillian.clone().svd(false, false);
        let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        let near_null = svd
            .singular_values
            .iter()
            .filter(|&&s| s < 1e-10 * smax)
            .count();
        if near_null > 1 {
            SolveError::DegenerateSteadyState
        } else {
            SolveError::NoConvergence { residual, bound }
        }
    }

    /// Unique traceless solution of `L x = rhs` for a traceless `rhs`.
    pub fn solve_traceless(&self, rhs: &DMatrix<C64>) -> Result<DMatrix<C64>, SolveError> {
        let x = self.solve_bordered(&vectorize(rhs), 0.0)?;
        let residual = (&self.liouvillian * vectorize(&x) - vectorize(rhs)).norm();
        let scale = vectorize(rhs).norm().max(1e-300);
        if residual > 1e-8 * scale {
            return Err(SolveError::NoConvergence {
                residual,
                bound: 1e-8 * scale,
            });
        }
        Ok(x)
    }
}
