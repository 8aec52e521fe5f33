use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::dense::{check_d, commutator, dense_of, DenseOperator, OperatorKind};
use crate::config::{FieldKind, WalkConfig};
use crate::error::Result;

pub(crate) fn oracle_config(d: usize, q: u32, theta: f64, r: f64) -> WalkConfig {
    WalkConfig {
        d,
        q,
        theta,
        r,
        field: FieldKind::Electric,
        steps: 0,
        realizations: 1,
        master_seed: 0,
    }
}

/// `−2i sinθ Σ_x |x⟩⟨x| ⊗ sin(φx) σ_x`.
pub fn phase_b_coin_closed_form(config: &WalkConfig) -> Result<DenseOperator> {
    check_d(config.d)?;
    let d = config.d;
    let phi = config.phi();
    let k = Complex64::new(0.0, -2.0 * config.theta.sin());
    let mut m = DenseOperator::zeros(d).matrix().clone();
    for x in 0..d {
        let v = k * (phi * x as f64).sin();
        m[(2 * x, 2 * x + 1)] = v;
        m[(2 * x + 1, 2 * x)] = v;
    }
    DenseOperator::from_matrix(m)
}

/// Residual of `[Φ_B, C]` against its closed form.
pub fn check_phase_b_coin(config: &WalkConfig) -> Result<f64> {
    let comm = commutator(
        &dense_of(OperatorKind::PhaseB, config)?,
        &dense_of(OperatorKind::Coin, config)?,
    )?;
    Ok((&comm - &phase_b_coin_closed_form(config)?).max_abs())
}

/// `‖[Φ_E, C]‖_max`.
pub fn check_phase_e_coin(config: &WalkConfig) -> Result<f64> {
    let comm = commutator(
        &dense_of(OperatorKind::PhaseE { alpha: 1.0 }, config)?,
        &dense_of(OperatorKind::Coin, config)?,
    )?;
    Ok(comm.max_abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepCommutatorCheck {
    /// `‖[Φ_E,S] − (e^{iφΩ_z} − I) S Φ_E‖_max`.
    pub exact_residual: f64,
    /// `‖[Φ_E,S] − iφ Ω_z S Φ_E‖_max`.
    pub first_order_residual: f64,
}

pub fn check_electric_step_commutator(d: usize, q: u32) -> Result<StepCommutatorCheck> {
    let cfg = oracle_config(d, q, std::f64::consts::FRAC_PI_4, 1.0);
    let phi = cfg.phi();
    let pe = dense_of(OperatorKind::PhaseE { alpha: 1.0 }, &cfg)?;
    let s = dense_of(OperatorKind::Step, &cfg)?;
    let comm = commutator(&pe, &s)?;
    let s_pe = &s * &pe;
    let rot = dense_of(OperatorKind::SpinRotationZ { beta: phi }, &cfg)?;
    let exact = &(&rot - &DenseOperator::identity(d)) * &s_pe;
    let omega = dense_of(OperatorKind::OmegaZ, &cfg)?;
    let first = (&omega * &s_pe).scale(Complex64::new(0.0, phi));
    Ok(StepCommutatorCheck {
        exact_residual: (&comm - &exact).max_abs(),
        first_order_residual: (&comm - &first).max_abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwapCheck {
    /// `‖UΦ_E − Φ_E U e^{+iφΩ_z}‖_max`, the rule with its nominal sign.
    pub residual: f64,
    /// `‖UΦ_E − Φ_E U e^{−iφΩ_z}‖_max`; this relation holds exactly.
    pub exact_sign_residual: f64,
    /// `‖UΦ_E − Φ_E U (I − iφΩ_z)‖_max`, first-order truncation of the exact relation.
    pub first_order_residual: f64,
}

pub fn check_swap_rule(d: usize, q: u32, theta: f64) -> Result<SwapCheck> {
    let cfg = oracle_config(d, q, theta, 1.0);
    let phi = cfg.phi();
    let u = dense_of(OperatorKind::Walk, &cfg)?;
    let pe = dense_of(OperatorKind::PhaseE { alpha: 1.0 }, &cfg)?;
    let lhs = &u * &pe;
    let pe_u = &pe * &u;
    let with = |beta: f64| -> Result<f64> {
        let rot = dense_of(OperatorKind::SpinRotationZ { beta }, &cfg)?;
        Ok((&lhs - &(&pe_u * &rot)).max_abs())
    };
    let omega = dense_of(OperatorKind::OmegaZ, &cfg)?;
    let lin = &DenseOperator::identity(d) - &omega.scale(Complex64::new(0.0, phi));
    Ok(SwapCheck {
        residual: with(phi)?,
        exact_sign_residual: with(-phi)?,
        first_order_residual: (&lhs - &(&pe_u * &lin)).max_abs(),
    })
}
