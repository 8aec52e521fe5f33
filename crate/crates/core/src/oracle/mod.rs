//! Dense-matrix checks at small `d`.
//!
//! Every operator here is built entry by entry from its definition, never by
//! calling the kernels in [`crate::state`], so agreement between the two is a
//! real cross-check.

mod dense;
mod identities;
mod interval;
mod report;

pub use dense::{commutator, dense_of, gauge_rate, DenseOperator, OperatorKind, MAX_DENSE_D};
pub use identities::{
    check_electric_step_commutator, check_phase_b_coin, check_phase_e_coin, check_swap_rule,
    phase_b_coin_closed_form, StepCommutatorCheck, SwapCheck,
};
pub use interval::{
    averaged_coefficient_value, averaged_phase_coefficient, averaged_step_operator,
    defect_phase_coefficient, effective_operator, exact_interval_operator, gauge_equivalence_check,
    interval_length, mean_defect_coefficient, mean_defect_step_operator,
    rewritten_interval_operator, DefectConvention, GaugeCheck, IntervalSpec,
};
pub use report::{
    kernel_agreement, run_verification, CheckResult, ChiRecord, ScalingResult, VerifyReport,
    EXACT_TOLERANCE, FIELD_OFF_TOLERANCE, KERNEL_TOLERANCE, SCALING_BAND, VERIFY_DS, VERIFY_LS,
};

/// Config helper for the dense checks: electric field, given `d`, `q`, `θ`, `r`.
pub fn oracle_config(d: usize, q: u32, theta: f64, r: f64) -> crate::WalkConfig {
    identities::oracle_config(d, q, theta, r)
}
