use std::f64::consts::TAU;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::moments::MomentSeries;
use crate::error::{Error, Result};

pub const MIN_SERIES_LEN: usize = 64;
pub const ZERO_PAD_FACTOR: usize = 8;
pub const MIN_PEAK_SHARPNESS: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PeriodMethod {
    SpectralPeak,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodEstimate {
    pub period: f64,
    pub method: PeriodMethod,
    /// Peak power over median power in the searched band.
    pub peak_sharpness: f64,
}

/// Dominant period of the mean-displacement series.
pub fn estimate_period(series: &MomentSeries) -> Result<PeriodEstimate> {
    estimate_signal_period(&series.mean_displacement)
}

/// Dominant period of an evenly sampled signal.
///
/// The signal is mean-detrended, Hann-tapered and zero-padded 8x; the largest
/// periodogram bin with period in `(2, n)` is refined by a parabola through it
/// and its two neighbours.
pub fn estimate_signal_period(signal: &[f64]) -> Result<PeriodEstimate> {
    let n = signal.len();
    if n < MIN_SERIES_LEN {
        return Err(Error::domain(format!(
            "series of length {n} is shorter than {MIN_SERIES_LEN}"
        )));
    }
    let mean = signal.iter().sum::<f64>() / n as f64;
    let len = n * ZERO_PAD_FACTOR;
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    for (i, (b, v)) in buf.iter_mut().zip(signal).enumerate() {
        let w = 0.5 * (1.0 - (TAU * i as f64 / (n - 1) as f64).cos());
        *b = Complex64::new((v - mean) * w, 0.0);
    }
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);
    let power: Vec<f64> = buf.iter().map(|c| c.norm_sqr()).collect();

    // periods strictly inside (2, n)
    let k_lo = ZERO_PAD_FACTOR + 1;
    let k_hi = len / 2 - 1;
    let band = &power[k_lo..=k_hi];
    let (offset, &peak) = band
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("band is non-empty for n >= 64");
    let k = k_lo + offset;

    let mut sorted = band.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    let sharpness = if median > 0.0 {
        peak / median
    } else if peak > 0.0 {
        f64::INFINITY
    } else {
        0.0
    };
    if sharpness.is_nan() || sharpness < MIN_PEAK_SHARPNESS {
        return Err(Error::NoOscillation {
            sharpness,
            threshold: MIN_PEAK_SHARPNESS,
        });
    }

    let (a, b, c) = (power[k - 1], power[k], power[k + 1]);
    let denom = a - 2.0 * b + c;
    let shift = if denom != 0.0 {
        (0.5 * (a - c) / denom).clamp(-0.5, 0.5)
    } else {
        0.0
    };
    let period = len as f64 / (k as f64 + shift);
    Ok(PeriodEstimate {
        period,
        method: PeriodMethod::SpectralPeak,
        peak_sharpness: sharpness,
    })
}

/// `r + 2(1−r)²`, the field multiplier of the averaged electric walk.
pub fn effective_field_factor(r: f64) -> f64 {
    r + 2.0 * (1.0 - r).powi(2)
}

/// `T = 2π / (φ (r + 2(1−r)²))`.
pub fn predicted_period(phi: f64, r: f64) -> Result<f64> {
    if phi.is_nan() || phi <= 0.0 {
        return Err(Error::domain(format!(
            "field magnitude must be positive, got {phi}"
        )));
    }
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::domain(format!("r must lie in [0, 1], got {r}")));
    }
    Ok(TAU / (phi * effective_field_factor(r)))
}
