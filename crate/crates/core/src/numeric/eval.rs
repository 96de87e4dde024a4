//! Pointwise evaluation of symbolic expressions under a parameter binding.

use crate::expr::{Func, SignalExpr, SignalKind};
use crate::rational::rational_to_f64;

use super::{NumericError, ParameterBinding, TestSignal, SINGULAR_EPS};

/// Evaluate a signal-free, time-free coefficient.
pub fn eval_coefficient(expr: &SignalExpr, binding: &ParameterBinding) -> Result<f64, NumericError> {
    match expr {
        SignalExpr::Const(c) => Ok(rational_to_f64(c)),
        SignalExpr::Param(name) => binding
            .get(name)
            .copied()
            .ok_or_else(|| NumericError::MissingParameter(name.clone())),
        SignalExpr::Time => Err(NumericError::TimeDependentCoefficient(expr.to_string())),
        SignalExpr::Signal(_) | SignalExpr::Deriv(_, _) | SignalExpr::Integ(_) => Err(
            NumericError::NotRealizable(format!("`{expr}` is not a constant coefficient")),
        ),
        SignalExpr::Recip(child) => {
            let denom = eval_coefficient(child, binding)?;
            if denom.abs() <= SINGULAR_EPS {
                return Err(NumericError::SingularDenominator(child.to_string()));
            }
            Ok(1.0 / denom)
        }
        SignalExpr::Apply(func, child) => {
            let v = eval_coefficient(child, binding)?;
            Ok(apply_func(*func, v))
        }
        SignalExpr::Sum(items) => items
            .iter()
            .map(|e| eval_coefficient(e, binding))
            .sum::<Result<f64, _>>(),
        SignalExpr::Product(items) => items
            .iter()
            .map(|e| eval_coefficient(e, binding))
            .product::<Result<f64, _>>(),
    }
}

/// Evaluate a `y`-free expression at time `t`, reading the input signal from
/// its closed form. Derivatives and integrals of the input have no pointwise
/// value and are refused.
pub fn eval_pointwise(
    expr: &SignalExpr,
    binding: &ParameterBinding,
    input: &TestSignal,
    t: f64,
) -> Result<f64, NumericError> {
    match expr {
        SignalExpr::Const(c) => Ok(rational_to_f64(c)),
        SignalExpr::Param(name) => binding
            .get(name)
            .copied()
            .ok_or_else(|| NumericError::MissingParameter(name.clone())),
        SignalExpr::Time => Ok(t),
        SignalExpr::Signal(r) if r.kind == SignalKind::Input && r.is_plain() => {
            Ok(input.eval(t))
        }
        SignalExpr::Signal(_) | SignalExpr::Deriv(_, _) | SignalExpr::Integ(_) => Err(
            NumericError::NotRealizable(format!("`{expr}` has no pointwise value")),
        ),
        SignalExpr::Recip(child) => {
            let denom = eval_pointwise(child, binding, input, t)?;
            if denom.abs() <= SINGULAR_EPS {
                return Err(NumericError::SingularDenominator(child.to_string()));
            }
            Ok(1.0 / denom)
        }
        SignalExpr::Apply(func, child) => {
            let v = eval_pointwise(child, binding, input, t)?;
            Ok(apply_func(*func, v))
        }
        SignalExpr::Sum(items) => items
            .iter()
            .map(|e| eval_pointwise(e, binding, input, t))
            .sum::<Result<f64, _>>(),
        SignalExpr::Product(items) => items
            .iter()
            .map(|e| eval_pointwise(e, binding, input, t))
            .product::<Result<f64, _>>(),
    }
}

fn apply_func(func: Func, v: f64) -> f64 {
    match func {
        Func::Sin => v.sin(),
        Func::Exp => v.exp(),
        Func::Abs => v.abs(),
        Func::Sq => v * v,
    }
}

/// Every parameter in the binding must occur in the definition and vice
/// versa; catches typos like binding `c` for a system over `a, b`.
pub fn check_binding_covers(
    binding: &ParameterBinding,
    sys: &crate::system::SystemDef,
) -> Result<(), NumericError> {
    let mut names = std::collections::BTreeSet::new();
    sys.rhs().any_node(&mut |e| {
        if let SignalExpr::Param(name) = e {
            names.insert(name.clone());
        }
        false
    });
    for name in &names {
        if !binding.contains_key(name) {
            return Err(NumericError::MissingParameter(name.clone()));
        }
    }
    for key in binding.keys() {
        if !names.contains(key) {
            return Err(NumericError::UnknownParameter(key.clone()));
        }
    }
    Ok(())
}
