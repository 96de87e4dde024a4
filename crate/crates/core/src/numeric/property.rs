//! Empirical property tests: superposition, shift equivariance, and the
//! zero-in-zero-out corollary, run against the realized model on a shared
//! fixed grid.

use serde::Serialize;

use crate::system::SystemDef;

use super::eval::check_binding_covers;
use super::simulate::{simulate_driven, Trajectory};
use super::state_space::{realize_system, Realization};
use super::{NumericError, ParameterBinding, TestSignal};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PropertyKind {
    Superposition,
    Shift,
    ZeroInZeroOut,
    ClosedFormAgreement,
    ShiftFailureDemo,
}

/// Everything needed to reproduce one check.
#[derive(Clone, Debug, Serialize)]
pub struct PropertyConfig {
    pub signals: Vec<String>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub delta: Option<f64>,
    pub binding: ParameterBinding,
    pub dt: f64,
    pub t_end: f64,
}

/// Outcome of one check. For every kind except [`PropertyKind::ShiftFailureDemo`],
/// `passed` means `max_abs_error <= tolerance`; the demo inverts the sense
/// (it passes when the violation it sets out to exhibit actually appears).
#[derive(Clone, Debug, Serialize)]
pub struct PropertyReport {
    pub property: PropertyKind,
    pub max_abs_error: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub configuration: PropertyConfig,
}

fn run(
    realization: &Realization,
    binding: &ParameterBinding,
    signal: &TestSignal,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory, NumericError> {
    simulate_driven(
        &realization.ss,
        |t| realization.drive(binding, signal, t),
        t_end,
        dt,
    )
}

/// Simulate `x1`, `x2`, and `alpha*x1 + beta*x2` on one grid and measure
/// how far the third response sits from the scaled sum of the first two.
#[allow(clippy::too_many_arguments)]
pub fn empirical_superposition_test(
    sys: &SystemDef,
    binding: &ParameterBinding,
    x1: &TestSignal,
    x2: &TestSignal,
    alpha: f64,
    beta: f64,
    t_end: f64,
    dt: f64,
    tol: f64,
) -> Result<PropertyReport, NumericError> {
    check_binding_covers(binding, sys)?;
    let realization = realize_system(sys, binding)?;
    let y1 = run(&realization, binding, x1, t_end, dt)?;
    let y2 = run(&realization, binding, x2, t_end, dt)?;
    let combined = TestSignal::combined(alpha, x1, beta, x2);
    let y3 = run(&realization, binding, &combined, t_end, dt)?;

    let mut max_abs_error: f64 = 0.0;
    for k in 0..y3.len() {
        let want = alpha * y1.samples[k] + beta * y2.samples[k];
        max_abs_error = max_abs_error.max((y3.samples[k] - want).abs());
    }
    Ok(PropertyReport {
        property: PropertyKind::Superposition,
        max_abs_error,
        tolerance: tol,
        passed: max_abs_error <= tol,
        configuration: PropertyConfig {
            signals: vec![x1.to_string(), x2.to_string()],
            alpha: Some(alpha),
            beta: Some(beta),
            delta: None,
            binding: binding.clone(),
            dt,
            t_end,
        },
    })
}

/// Simulate `x` and its delayed copy, then compare the delayed response
/// against the delayed reading of the original response on the overlap.
/// The input must be quiet for at least `delta` so that delaying it hides
/// no history, and `delta` must sit on the grid.
pub fn empirical_shift_test(
    sys: &SystemDef,
    binding: &ParameterBinding,
    x: &TestSignal,
    delta: f64,
    t_end: f64,
    dt: f64,
    tol: f64,
) -> Result<PropertyReport, NumericError> {
    check_binding_covers(binding, sys)?;
    if !(delta > 0.0) {
        return Err(NumericError::InvalidGrid);
    }
    let offset = delta / dt;
    if (offset - offset.round()).abs() > 1e-9 {
        return Err(NumericError::DeltaNotOnGrid { delta, dt });
    }
    let offset = offset.round() as usize;
    let quiet = x.quiet_prefix();
    if quiet < delta {
        return Err(NumericError::QuietPrefixTooShort {
            required: delta,
            actual: quiet,
        });
    }

    let realization = realize_system(sys, binding)?;
    let base = run(&realization, binding, x, t_end, dt)?;
    let delayed = run(&realization, binding, &x.delayed(delta), t_end, dt)?;

    let mut max_abs_error: f64 = 0.0;
    for k in offset..delayed.len() {
        max_abs_error = max_abs_error.max((delayed.samples[k] - base.samples[k - offset]).abs());
    }
    Ok(PropertyReport {
        property: PropertyKind::Shift,
        max_abs_error,
        tolerance: tol,
        passed: max_abs_error <= tol,
        configuration: PropertyConfig {
            signals: vec![x.to_string()],
            alpha: None,
            beta: None,
            delta: Some(delta),
            binding: binding.clone(),
            dt,
            t_end,
        },
    })
}

/// Zero input from zero state must produce exactly zero output — bitwise,
/// not approximately: every RK4 stage multiplies zeros.
pub fn zero_input_zero_output_test(
    sys: &SystemDef,
    binding: &ParameterBinding,
    t_end: f64,
    dt: f64,
) -> Result<PropertyReport, NumericError> {
    check_binding_covers(binding, sys)?;
    let realization = realize_system(sys, binding)?;
    let traj = run(&realization, binding, &TestSignal::Zero, t_end, dt)?;
    let max_abs_error = traj.max_abs();
    Ok(PropertyReport {
        property: PropertyKind::ZeroInZeroOut,
        max_abs_error,
        tolerance: 0.0,
        passed: max_abs_error == 0.0,
        configuration: PropertyConfig {
            signals: vec![TestSignal::Zero.to_string()],
            alpha: None,
            beta: None,
            delta: None,
            binding: binding.clone(),
            dt,
            t_end,
        },
    })
}
