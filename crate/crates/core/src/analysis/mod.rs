//! Observables extracted from walk data: circular position moments, the
//! log-parabola Gaussian fit, the spreading exponent and the Bloch period.

mod fit;
mod moments;
mod period;

pub use fit::{
    fit_gaussian_logparabola, fit_gaussian_logparabola_with, fit_scaling_exponent, GaussianFit,
    Regime, ScalingFit, DEFAULT_SUPPORT_THRESHOLD, MIN_FIT_POINTS,
};
pub use moments::{
    circular_mean_displacement, circular_variance, moment_series, wrap_signed, CircularMean,
    MomentSeries, DEGENERATE_RESULTANT,
};
pub use period::{
    effective_field_factor, estimate_period, estimate_signal_period, predicted_period,
    PeriodEstimate, PeriodMethod, MIN_PEAK_SHARPNESS, MIN_SERIES_LEN, ZERO_PAD_FACTOR,
};
