//! Trapping-time statistics: the empirical survival function P(T) and the
//! exponential fit of its tail.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SurvivalError {
    #[error("only {found} trajectories above the tail threshold {threshold:.3e} s (need >= {need})")]
    InsufficientTail {
        found: usize,
        need: usize,
        threshold: f64,
    },
    #[error("tail fit failed: {0}")]
    TailFitFailed(String),
}

/// Empirical survival probability P(T) = #(trapping_time > T) / n at the
/// sorted event times. P(0) = 1 and P is nonincreasing.
pub fn survival_function(times: &[f64]) -> Vec<(f64, f64)> {
    let n = times.len();
    let mut sorted: Vec<f64> = times.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut out = Vec::with_capacity(n + 1);
    out.push((0.0, 1.0));
    let mut i = 0;
    while i < n {
        let t = sorted[i];
        // Step past ties.
        while i < n && sorted[i] == t {
            i += 1;
        }
        out.push((t, (n - i) as f64 / n as f64));
    }
    out
}

/// Result of the exponential tail fit P(T) ~ exp(-T / tau).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TailFit {
    /// Fitted lifetime, s.
    pub tau: f64,
    /// Standard error of tau from the fit covariance, s.
    pub stderr: f64,
    /// Tail threshold actually used, s.
    pub t_tail: f64,
    /// Number of fit points.
    pub n_points: usize,
}

/// Tail threshold: max(1 ms, 30th percentile of the trapped-only times),
/// where "trapped" means living at least 1 ms. The choice is a convention
/// (the tail must exclude the prompt-loss peak); callers may override it.
pub fn default_tail_threshold(times: &[f64]) -> f64 {
    let mut trapped: Vec<f64> = times.iter().copied().filter(|&t| t >= 1e-3).collect();
    if trapped.is_empty() {
        return 1e-3;
    }
    trapped.sort_by(f64::total_cmp);
    let idx = ((trapped.len() as f64) * 0.3) as usize;
    trapped[idx.min(trapped.len() - 1)].max(1e-3)
}

/// Least-squares line fit of log P(T) against T over the tail T >= t_tail,
/// using the survival values at real exit events strictly below the time
/// cap (capped trajectories still support P(T), they are just not event
/// points). tau = -1 / slope.
pub fn fit_survival_tail(
    times: &[f64],
    t_cap: f64,
    t_tail: Option<f64>,
) -> Result<TailFit, SurvivalError> {
    let threshold = t_tail.unwrap_or_else(|| default_tail_threshold(times));
    let above = times.iter().filter(|&&t| t > threshold).count();
    if above < 20 {
        return Err(SurvivalError::InsufficientTail {
            found: above,
            need: 20,
            threshold,
        });
    }
    let sf = survival_function(times);
    let pts: Vec<(f64, f64)> = sf
        .iter()
        .filter(|&&(t, p)| t >= threshold && t < t_cap && p > 0.0)
        .map(|&(t, p)| (t, p.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(SurvivalError::TailFitFailed(format!(
            "only {} usable tail points",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mean_t = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx = pts.iter().map(|p| (p.0 - mean_t).powi(2)).sum::<f64>();
    let sxy = pts
        .iter()
        .map(|p| (p.0 - mean_t) * (p.1 - mean_y))
        .sum::<f64>();
    if sxx == 0.0 {
        return Err(SurvivalError::TailFitFailed("degenerate abscissa".into()));
    }
    let slope = sxy / sxx;
    if slope >= 0.0 {
        return Err(SurvivalError::TailFitFailed(format!(
            "nonnegative slope {slope:.3e}; tail is not decaying"
        )));
    }
    let resid_ss: f64 = pts
        .iter()
        .map(|p| {
            let fit = mean_y + slope * (p.0 - mean_t);
            (p.1 - fit).powi(2)
        })
        .sum();
    let dof = (pts.len().max(3) - 2) as f64;
    let slope_var = resid_ss / dof / sxx;
    let tau = -1.0 / slope;
    let stderr = slope_var.sqrt() * tau * tau;
    Ok(TailFit {
        tau,
        stderr,
        t_tail: threshold,
        n_points: pts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Exp};

    #[test]
    fn survival_is_monotone_and_normalized() {
        let times = [3.0, 1.0, 2.0, 2.0, 5.0];
        let sf = survival_function(&times);
        assert_eq!(sf[0], (0.0, 1.0));
        for w in sf.windows(2) {
            assert!(w[1].0 > w[0].0);
            assert!(w[1].1 <= w[0].1);
        }
        assert_eq!(sf.last().unwrap().1, 0.0);
    }

    #[test]
    fn recovers_synthetic_exponential_lifetime() {
        // tau = 25 ms, n = 1000: the fit must land within 3 standard errors.
        let tau_true = 25e-3;
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let exp = Exp::new(1.0 / tau_true).unwrap();
        let times: Vec<f64> = (0..1000).map(|_| exp.sample(&mut rng)).collect();
        let fit = fit_survival_tail(&times, f64::INFINITY, Some(1e-3)).unwrap();
        assert!(
            (fit.tau - tau_true).abs() < 3.0 * fit.stderr.max(1e-3),
            "tau {} +- {}",
            fit.tau,
            fit.stderr
        );
        assert!(fit.tau > 0.0 && fit.stderr > 0.0);
    }

    #[test]
    fn insufficient_tail_is_reported() {
        let times: Vec<f64> = (0..30).map(|i| 1e-4 * i as f64).collect();
        match fit_survival_tail(&times, 1.0, Some(0.5)) {
            Err(SurvivalError::InsufficientTail { found, .. }) => assert_eq!(found, 0),
            other => panic!("expected InsufficientTail, got {other:?}"),
        }
    }

    #[test]
    fn capped_times_support_but_do_not_anchor_the_fit() {
        // Half the sample is censored at the cap; the fit should still
        // recover tau from the uncensored tail.
        let tau_true = 30e-3;
        let cap = 40e-3;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let exp = Exp::new(1.0 / tau_true).unwrap();
        let times: Vec<f64> = (0..2000)
            .map(|_| {
                let t: f64 = exp.sample(&mut rng);
                t.min(cap)
            })
            .collect();
        let fit = fit_survival_tail(&times, cap, Some(2e-3)).unwrap();
        assert!(
            (fit.tau - tau_true).abs() < 0.15 * tau_true,
            "tau {} vs {}",
            fit.tau,
            tau_true
        );
    }
}
