//! Defective-step intervals and the averaged, gauge-transformed step operator.
//!
//! An interval of `l = (1−r)⁻¹` steps has exactly one step without the field.
//! Products are written right to left: factor `t = 0` acts first and the defect
//! position `j` counts from the right, zero-based.

use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::dense::{dense_of, DenseOperator, OperatorKind};
use crate::analysis::effective_field_factor;
use crate::config::WalkConfig;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalSpec {
    pub l: usize,
    pub j: usize,
}

impl IntervalSpec {
    pub fn new(l: usize, j: usize) -> Result<Self> {
        if l < 2 {
            return Err(Error::domain(format!(
                "interval length must be >= 2, got {l}"
            )));
        }
        if j >= l {
            return Err(Error::domain(format!(
                "defect position {j} outside interval of length {l}"
            )));
        }
        Ok(IntervalSpec { l, j })
    }

    /// `r = 1 − 1/l`.
    pub fn r(&self) -> f64 {
        1.0 - 1.0 / self.l as f64
    }
}

/// `l = (1−r)⁻¹`, which must be an integer `>= 2`.
pub fn interval_length(r: f64) -> Result<usize> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::domain(format!(
            "r = {r} has no finite defect interval"
        )));
    }
    let inv = 1.0 / (1.0 - r);
    let l = inv.round();
    if (inv - l).abs() > 1e-9 * l || l < 2.0 {
        return Err(Error::domain(format!(
            "(1 - r)^-1 = {inv} is not an integer >= 2"
        )));
    }
    Ok(l as usize)
}

/// Sign convention for the spin-rotation coefficients `n_{t,j}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DefectConvention {
    /// `(t+1)(1−r)` before the defect, `0` at it, `−(l−t)(1−r)` after it.
    /// For `l = 6, j = 2` this gives `(+1, +2, 0, −3, −2, −1)/6`; the mean over
    /// `j` is the averaged coefficient `n̄_t`.
    Nominal,
    /// `−(t+1)(1−r)` before the defect, `(l−1−t)(1−r)` from it on. This one
    /// reproduces the defective interval exactly away from the cycle seam.
    Exact,
}

/// `n_{t,j}` as an exact rational.
pub fn defect_phase_coefficient(
    t: usize,
    j: usize,
    l: usize,
    convention: DefectConvention,
) -> Ratio<i64> {
    let (t, j, l) = (t as i64, j as i64, l as i64);
    let num = match convention {
        DefectConvention::Nominal if t < j => t + 1,
        DefectConvention::Nominal if t == j => 0,
        DefectConvention::Nominal => -(l - t),
        DefectConvention::Exact if t < j => -(t + 1),
        DefectConvention::Exact => l - 1 - t,
    };
    Ratio::new(num, l)
}

/// `n̄_t = −2(1−r)²(t − ((1−r)⁻¹ − 1)/2) = −(2t − l + 1)/l²`.
pub fn averaged_phase_coefficient(t: i64, l: usize) -> Ratio<i64> {
    let l = l as i64;
    Ratio::new(-(2 * t - l + 1), l * l)
}

/// Mean of `n_{t,j}` over the `l` defect positions.
pub fn mean_defect_coefficient(t: usize, l: usize, convention: DefectConvention) -> Ratio<i64> {
    let sum = (0..l).fold(Ratio::from_integer(0), |acc, j| {
        acc + defect_phase_coefficient(t, j, l, convention)
    });
    sum / Ratio::from_integer(l as i64)
}

fn to_f64(x: Ratio<i64>) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// `U(t, j) = (I⊗C) S Φ_E^r e^{i n φ Ω_z}` for a given coefficient `n`.
fn rotated_step(config: &WalkConfig, r: f64, n: f64) -> Result<DenseOperator> {
    let u = dense_of(OperatorKind::Walk, config)?;
    let pe = dense_of(OperatorKind::PhaseE { alpha: r }, config)?;
    let rot = dense_of(
        OperatorKind::SpinRotationZ {
            beta: n * config.phi(),
        },
        config,
    )?;
    Ok(&(&u * &pe) * &rot)
}

/// The literal product: `UΦ_E` at every step except a bare `U` at position `j`.
pub fn exact_interval_operator(spec: IntervalSpec, config: &WalkConfig) -> Result<DenseOperator> {
    let u = dense_of(OperatorKind::Walk, config)?;
    let u_pe = &u * &dense_of(OperatorKind::PhaseE { alpha: 1.0 }, config)?;
    let mut acc = DenseOperator::identity(config.d);
    for t in 0..spec.l {
        acc = (if t == spec.j { &u } else { &u_pe }) * &acc;
    }
    Ok(acc)
}

/// The interval rewritten with the field spread evenly, `Π_t U(t, j)`.
pub fn rewritten_interval_operator(
    spec: IntervalSpec,
    config: &WalkConfig,
    convention: DefectConvention,
) -> Result<DenseOperator> {
    let r = spec.r();
    let mut acc = DenseOperator::identity(config.d);
    for t in 0..spec.l {
        let n = to_f64(defect_phase_coefficient(t, spec.j, spec.l, convention));
        acc = &rotated_step(config, r, n)? * &acc;
    }
    Ok(acc)
}

/// `n̄_t` as a float; zero when `r = 1` (no defects at all).
pub fn averaged_coefficient_value(t: i64, r: f64) -> Result<f64> {
    if r == 1.0 {
        return Ok(0.0);
    }
    Ok(to_f64(averaged_phase_coefficient(t, interval_length(r)?)))
}

/// `Ū(t) = (I⊗C) S Φ_E^r e^{i n̄_t φ Ω_z}`.
pub fn averaged_step_operator(t: i64, r: f64, config: &WalkConfig) -> Result<DenseOperator> {
    let n = averaged_coefficient_value(t, r)?;
    rotated_step(config, r, n)
}

/// `(1/l) Σ_j U(t, j)`, the arithmetic mean of the rewritten step over defect positions.
pub fn mean_defect_step_operator(
    t: usize,
    l: usize,
    config: &WalkConfig,
    convention: DefectConvention,
) -> Result<DenseOperator> {
    let spec = IntervalSpec::new(l, 0)?;
    let mut acc = DenseOperator::zeros(config.d);
    for j in 0..l {
        let n = to_f64(defect_phase_coefficient(t, j, l, convention));
        acc = &acc + &rotated_step(config, spec.r(), n)?;
    }
    Ok(acc.scale(Complex64::new(1.0 / l as f64, 0.0)))
}

/// `Ũ = (I⊗C) S Φ_E^{r + 2(1−r)²}`.
pub fn effective_operator(r: f64, config: &WalkConfig) -> Result<DenseOperator> {
    let u = dense_of(OperatorKind::Walk, config)?;
    let pe = dense_of(
        OperatorKind::PhaseE {
            alpha: effective_field_factor(r),
        },
        config,
    )?;
    Ok(&u * &pe)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaugeCheck {
    /// `‖V_t† Ū(t) V_{t−1} − Ũ e^{iχΩ_z}‖_max` over seam-free columns.
    pub residual: f64,
    /// The same difference restricted to the columns that cross the seam.
    pub seam_residual: f64,
    /// Fitted position-independent spin rotation angle.
    pub chi: f64,
}

/// Compares the gauge-transformed averaged step with the effective electric
/// step, allowing a residual spin rotation `e^{iχΩ_z}`.
pub fn gauge_equivalence_check(t: i64, r: f64, config: &WalkConfig) -> Result<GaugeCheck> {
    let cfg = WalkConfig {
        r,
        ..config.clone()
    };
    let ubar = averaged_step_operator(t, r, &cfg)?;
    let v_t = dense_of(OperatorKind::Gauge { t }, &cfg)?;
    let v_prev = dense_of(OperatorKind::Gauge { t: t - 1 }, &cfg)?;
    let g = &(&v_t.adjoint() * &ubar) * &v_prev;
    let target = effective_operator(r, &cfg)?;

    // Ũ e^{iχΩ_z} multiplies column (x, σ) by e^{±iχ}; fit χ from the
    // seam-free entry ratios weighted by |Ũ|².
    let d = cfg.d;
    let (gm, tm) = (g.matrix(), target.matrix());
    let mut acc = Complex64::new(0.0, 0.0);
    for col in 2..2 * (d - 1) {
        let spin = if col % 2 == 0 { 1 } else { -1 };
        for row in 0..2 * d {
            let tv = tm[(row, col)];
            if tv.norm() > 1e-3 {
                let ratio = gm[(row, col)] / tv;
                acc += if spin > 0 { ratio } else { ratio.conj() } * tv.norm_sqr();
            }
        }
    }
    let chi = acc.arg();
    let rot = dense_of(OperatorKind::SpinRotationZ { beta: chi }, &cfg)?;
    let diff = &g - &(&target * &rot);
    Ok(GaugeCheck {
        residual: diff.max_abs_seam_free(1).unwrap_or(0.0),
        seam_residual: diff.max_abs_seam(1),
        chi,
    })
}
