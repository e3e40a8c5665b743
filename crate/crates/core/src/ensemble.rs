//! Ensembles of trajectories with identical initial conditions: per-atom
//! seeds derived from a base seed, order-independent reduction, survival
//! statistics and the fitted lifetime.

use crate::grid::CoefficientGrid;
use crate::survival::{fit_survival_tail, survival_function, SurvivalError, TailFit};
use crate::trajectory::{simulate_trajectory, ExitReason, TrajectoryConfig, TrajectoryResult};
use rayon::prelude::*;
use serde::Serialize;

/// Trajectories shorter than this count as "not really trapped"; the paper
/// describes roughly half the atoms leaving within a millisecond.
pub const UNTRAPPED_THRESHOLD: f64 = 1e-3;

/// Deterministic per-trajectory seed from (base, index): a SplitMix64
/// finalizer over the combined words.
pub fn derive_seed(seed_base: u64, index: u64) -> u64 {
    let mut z = seed_base
        .wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x2545_F491_4F6C_DD1D);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Reduced record of one ensemble member.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TrajectorySummary {
    pub index: usize,
    pub trapping_time: f64,
    pub v_rms_z: f64,
    pub v_rms_z_post_1ms: Option<f64>,
    pub exit_reason: ExitReason,
}

#[derive(Debug, Clone)]
pub struct EnsembleStats {
    pub per_trajectory: Vec<TrajectorySummary>,
    /// Empirical survival function over all members.
    pub survival: Vec<(f64, f64)>,
    /// Exponential tail fit, when the tail is populated enough.
    pub tail_fit: Result<TailFit, String>,
    /// Fraction of atoms with trapping_time < 1 ms.
    pub fraction_untrapped: f64,
    pub t_max: f64,
    pub seed_base: u64,
}

impl EnsembleStats {
    /// Mean v_rms over members trapped at least `min_time`, using the
    /// post-1 ms value when available (the full-interval value is dominated
    /// by the initial condition for short trajectories).
    pub fn equilibrated_v_rms(&self, min_time: f64) -> Option<f64> {
        let vals: Vec<f64> = self
            .per_trajectory
            .iter()
            .filter(|t| t.trapping_time >= min_time)
            .filter_map(|t| t.v_rms_z_post_1ms)
            .collect();
        if vals.is_empty() {
            return None;
        }
        Some(vals.iter().sum::<f64>() / vals.len() as f64)
    }

    pub fn mean_trapping_time(&self) -> f64 {
        let n = self.per_trajectory.len().max(1);
        self.per_trajectory.iter().map(|t| t.trapping_time).sum::<f64>() / n as f64
    }
}

/// Run `n` trajectories from the shared template; member `k` uses the seed
/// derived from `(seed_base, k)` and (when requested) records its series.
/// Members run in parallel; the reduction is order-independent.
pub fn run_ensemble(
    n: usize,
    template: &TrajectoryConfig,
    grid: &CoefficientGrid,
    seed_base: u64,
    record_series_for: &[usize],
) -> (EnsembleStats, Vec<(usize, TrajectoryResult)>) {
    assert!(n >= 1);
    let results: Vec<(usize, TrajectoryResult)> = (0..n)
        .into_par_iter()
        .map(|k| {
            let mut cfg = template.clone();
            cfg.seed = derive_seed(seed_base, k as u64);
            if !record_series_for.contains(&k) {
                cfg.sample_stride = 0;
            }
            (k, simulate_trajectory(&cfg, grid))
        })
        .collect();

    let per_trajectory: Vec<TrajectorySummary> = results
        .iter()
        .map(|(k, r)| TrajectorySummary {
            index: *k,
            trapping_time: r.trapping_time,
            v_rms_z: r.v_rms_z,
            v_rms_z_post_1ms: r.v_rms_z_post_1ms,
            exit_reason: r.exit_reason,
        })
        .collect();
    let times: Vec<f64> = per_trajectory.iter().map(|t| t.trapping_time).collect();
    let survival = survival_function(&times);
    let tail_fit = fit_survival_tail(&times, template.t_max, None).map_err(|e| e.to_string());
    let fraction_untrapped = per_trajectory
        .iter()
        .filter(|t| t.trapping_time < UNTRAPPED_THRESHOLD)
        .count() as f64
        / n as f64;
    let flagged: Vec<(usize, TrajectoryResult)> = results
        .into_iter()
        .filter(|(k, _)| record_series_for.contains(k))
        .collect();
    (
        EnsembleStats {
            per_trajectory,
            survival,
            tail_fit,
            fraction_untrapped,
            t_max: template.t_max,
            seed_base,
        },
        flagged,
    )
}

/// Convenience wrapper mirroring [`fit_survival_tail`] on ensemble data.
pub fn refit_tail(
    stats: &EnsembleStats,
    t_tail: Option<f64>,
) -> Result<TailFit, SurvivalError> {
    let times: Vec<f64> = stats
        .per_trajectory
        .iter()
        .map(|t| t.trapping_time)
        .collect();
    fit_survival_tail(&times, stats.t_max, t_tail)
}
