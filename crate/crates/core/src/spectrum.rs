//! Spectral diagnostics of trajectory time series: the dominant frequency
//! of an oscillating coordinate, for comparing axial and radial secular
//! frequencies against the trap curvature.

use rustfft::{num_complex::Complex, FftPlanner};

/// Dominant frequency (Hz) of a uniformly sampled series restricted to the
/// band [f_lo, f_hi]. Hann-windowed periodogram with 4x zero padding and a
/// parabolic refinement of the peak bin. Returns None when the series is
/// too short or the band holds no bins.
pub fn dominant_frequency(samples: &[f64], dt: f64, f_lo: f64, f_hi: f64) -> Option<f64> {
    let n = samples.len();
    if n < 16 || dt <= 0.0 {
        return None;
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    let padded = (4 * n).next_power_of_two();
    let mut buf: Vec<Complex<f64>> = Vec::with_capacity(padded);
    for (i, &s) in samples.iter().enumerate() {
        // Hann window.
        let w = 0.5 * (1.0 - (2.0 * std::f64::consts::PI * i as f64 / (n - 1) as f64).cos());
        buf.push(Complex::new((s - mean) * w, 0.0));
    }
    buf.resize(padded, Complex::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(padded).process(&mut buf);

    let df = 1.0 / (padded as f64 * dt);
    let lo_bin = (f_lo / df).ceil().max(1.0) as usize;
    let hi_bin = ((f_hi / df).floor() as usize).min(padded / 2 - 1);
    if lo_bin >= hi_bin {
        return None;
    }
    let power: Vec<f64> = (lo_bin..=hi_bin).map(|i| buf[i].norm_sqr()).collect();
    let (imax, _) = power
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))?;
    let peak_bin = lo_bin + imax;
    // Parabolic interpolation on log power around the peak.
    let refine = if peak_bin > lo_bin && peak_bin < hi_bin {
        let l = buf[peak_bin - 1].norm_sqr().max(1e-300).ln();
        let c = buf[peak_bin].norm_sqr().max(1e-300).ln();
        let r = buf[peak_bin + 1].norm_sqr().max(1e-300).ln();
        let denom = l - 2.0 * c + r;
        if denom.abs() > 1e-12 {
            0.5 * (l - r) / denom
        } else {
            0.0
        }
    } else {
        0.0
    };
    Some((peak_bin as f64 + refine) * df)
}
