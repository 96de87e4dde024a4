//! Numeric layer: parameter binding, state-space realization, fixed-step
//! integration, the first-order closed-form solution, and the empirical
//! property tests that cross-validate symbolic verdicts.
//!
//! Everything here is deterministic: fixed grids, no adaptivity, no
//! randomness. Superposition and shift identities are therefore exact up to
//! rounding, and the corresponding tolerances can sit far below any real
//! violation.

mod closed_form;
mod eval;
mod property;
mod signal;
mod simulate;
mod state_space;

pub use closed_form::{demonstrate_fixed_y0_shift_failure, solve_first_order_closed_form};
pub use eval::{eval_coefficient, eval_pointwise};
pub use property::{
    empirical_shift_test, empirical_superposition_test, zero_input_zero_output_test,
    PropertyConfig, PropertyKind, PropertyReport,
};
pub use signal::TestSignal;
pub use simulate::{simulate, Trajectory};
pub use state_space::{realize_system, to_state_space, InputPlan, Realization, StateSpace};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::analyzer::CanonicalError;

/// Map from parameter name to bound value. `BTreeMap` keeps every
/// serialization and report deterministic.
pub type ParameterBinding = BTreeMap<String, f64>;

/// Build a binding from pairs (test convenience).
pub fn binding(pairs: &[(&str, f64)]) -> ParameterBinding {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), *v))
        .collect()
}

/// Restrict a binding to the parameters a definition actually mentions.
pub fn filter_binding(binding: &ParameterBinding, sys: &crate::system::SystemDef) -> ParameterBinding {
    let mut names = std::collections::BTreeSet::new();
    sys.rhs().any_node(&mut |e| {
        if let crate::expr::SignalExpr::Param(name) = e {
            names.insert(name.clone());
        }
        false
    });
    binding
        .iter()
        .filter(|(k, _)| names.contains(k.as_str()))
        .map(|(k, v)| (k.clone(), *v))
        .collect()
}

/// Denominators smaller than this (in magnitude) count as singular.
pub const SINGULAR_EPS: f64 = 1e-12;
/// Any sample beyond this magnitude aborts a simulation.
pub const BLOWUP_LIMIT: f64 = 1e12;
/// Default integration step.
pub const DEFAULT_DT: f64 = 1e-3;
/// Default horizon.
pub const DEFAULT_T_END: f64 = 5.0;
/// Tolerance for same-grid identities (superposition, shift).
pub const TOL_GRID_IDENTITY: f64 = 1e-6;
/// Tolerance for cross-method comparisons (integrator vs closed form).
pub const TOL_CROSS_METHOD: f64 = 1e-4;
/// A genuine violation must exceed this margin to count as demonstrated.
pub const VIOLATION_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericError {
    #[error("no binding for parameter `{0}`")]
    MissingParameter(String),
    #[error("binding names unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("denominator `{0}` evaluates to ~0")]
    SingularDenominator(String),
    #[error("coefficient `{0}` depends on time")]
    TimeDependentCoefficient(String),
    #[error("input derivative order {m} exceeds output order {n}; simulation refused")]
    ImproperSystem { m: usize, n: usize },
    #[error("leading coefficient evaluates to ~0")]
    SingularLeadingCoefficient,
    #[error("sample magnitude exceeded {BLOWUP_LIMIT:e} at t = {t}")]
    NumericalBlowup { t: f64 },
    #[error("coefficient `a` must be nonzero")]
    ZeroCoefficientA,
    #[error("signal quiet prefix {actual} is shorter than the delay {required}")]
    QuietPrefixTooShort { required: f64, actual: f64 },
    #[error("delta = {delta} is not an integer multiple of dt = {dt}")]
    DeltaNotOnGrid { delta: f64, dt: f64 },
    #[error("cannot realize numerically: {0}")]
    NotRealizable(String),
    #[error("invalid grid: dt must be positive and t_end at least dt")]
    InvalidGrid,
}

impl From<CanonicalError> for NumericError {
    fn from(e: CanonicalError) -> Self {
        NumericError::NotRealizable(e.to_string())
    }
}
