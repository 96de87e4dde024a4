//! State-space realization.
//!
//! A bound canonical form `sum a_i y^(i) = sum b_j x^(j)` with `m <= n`
//! realizes in controllable canonical form: companion `A`, unit last-entry
//! `B`, numerator taps in `C`, and a direct term `D` exactly when `m = n`.
//! No input derivatives are ever taken numerically — improper systems
//! (`m > n`) are refused.

use crate::analyzer::{classify, canonicalize, CanonicalForm, MonomialClass, Verdict};
use crate::expr::{poly_of, SignalExpr};
use crate::system::SystemDef;

use super::eval::{eval_coefficient, eval_pointwise};
use super::{NumericError, ParameterBinding, TestSignal, SINGULAR_EPS};

/// `x' = A x + B u`, `y = C x + D u`. Matrices are dense row-major; the
/// state dimension is small (the canonical order), so plain vectors beat a
/// matrix library here.
#[derive(Clone, Debug, PartialEq)]
pub struct StateSpace {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub d: f64,
}

impl StateSpace {
    pub fn dim(&self) -> usize {
        self.b.len()
    }

    /// State derivative `A x + B u` written into `out`.
    pub(crate) fn dynamics(&self, state: &[f64], u: f64, out: &mut [f64]) {
        for i in 0..state.len() {
            let mut acc = 0.0;
            for (coeff, s) in self.a[i].iter().zip(state.iter()) {
                acc += coeff * s;
            }
            out[i] = acc + self.b[i] * u;
        }
    }

    pub fn output(&self, state: &[f64], u: f64) -> f64 {
        let mut acc = self.d * u;
        for (coeff, s) in self.c.iter().zip(state.iter()) {
            acc += coeff * s;
        }
        acc
    }
}

/// Controllable canonical form from monic-izable denominator/numerator
/// coefficient lists (index = derivative order).
fn realize_ccf(den: &[f64], num: &[f64]) -> Result<StateSpace, NumericError> {
    let n = den.len() - 1;
    let lead = den[n];
    if lead.abs() <= SINGULAR_EPS {
        return Err(NumericError::SingularLeadingCoefficient);
    }
    if num.len() > den.len() {
        return Err(NumericError::ImproperSystem {
            m: num.len() - 1,
            n,
        });
    }
    let alpha: Vec<f64> = den[..n].iter().map(|c| c / lead).collect();
    let mut beta: Vec<f64> = num.iter().map(|c| c / lead).collect();
    beta.resize(n + 1, 0.0);
    let d = beta[n];
    // Remove the direct path from the numerator taps.
    let c: Vec<f64> = (0..n).map(|j| beta[j] - d * alpha[j]).collect();
    let mut a = vec![vec![0.0; n]; n];
    for i in 0..n.saturating_sub(1) {
        a[i][i + 1] = 1.0;
    }
    if n > 0 {
        for j in 0..n {
            a[n - 1][j] = -alpha[j];
        }
    }
    let mut b = vec![0.0; n];
    if n > 0 {
        b[n - 1] = 1.0;
    }
    Ok(StateSpace { a, b, c, d })
}

/// Bind a canonical form and realize it. Trailing input coefficients that
/// vanish under the binding are trimmed before the properness check.
pub fn to_state_space(
    cf: &CanonicalForm,
    binding: &ParameterBinding,
) -> Result<StateSpace, NumericError> {
    let den: Vec<f64> = cf
        .a()
        .iter()
        .map(|c| eval_coefficient(c, binding))
        .collect::<Result<_, _>>()?;
    let mut num: Vec<f64> = cf
        .b()
        .iter()
        .map(|c| eval_coefficient(c, binding))
        .collect::<Result<_, _>>()?;
    while num.last().map(|c| c.abs() <= SINGULAR_EPS).unwrap_or(false) {
        num.pop();
    }
    realize_ccf(&den, &num)
}

/// How the realized model is driven.
#[derive(Clone, Debug)]
pub enum InputPlan {
    /// The input channel is the test signal itself.
    Direct,
    /// The input channel is a synthesized forcing term: the sum of the
    /// definition's `y`-free terms evaluated pointwise. This is how
    /// non-LTI definitions (offsets, time-varying gains, static
    /// nonlinearities) are exercised numerically.
    Forcing(Vec<SignalExpr>),
}

/// A runnable model: state space plus its driving plan.
#[derive(Clone, Debug)]
pub struct Realization {
    pub ss: StateSpace,
    pub plan: InputPlan,
}

impl Realization {
    /// The effective input sample at time `t`.
    pub fn drive(
        &self,
        binding: &ParameterBinding,
        signal: &TestSignal,
        t: f64,
    ) -> Result<f64, NumericError> {
        match &self.plan {
            InputPlan::Direct => Ok(signal.eval(t)),
            InputPlan::Forcing(terms) => {
                let mut acc = 0.0;
                for term in terms {
                    acc += eval_pointwise(term, binding, signal, t)?;
                }
                Ok(acc)
            }
        }
    }
}

/// Realize any definition the numeric layer can exercise.
///
/// LTI definitions go through the canonical form. Everything else is split
/// into constant-coefficient linear `y` terms (which become the dynamics)
/// plus arbitrary `y`-free terms (which become a pointwise forcing input);
/// that covers offsets, time-varying input gains, and static input
/// nonlinearities. Time-varying or nonlinear *feedback* has no such
/// realization and is refused.
pub fn realize_system(
    sys: &SystemDef,
    binding: &ParameterBinding,
) -> Result<Realization, NumericError> {
    if classify(sys).verdict == Verdict::Lti {
        let cf = canonicalize(sys)?;
        let ss = to_state_space(&cf, binding)?;
        return Ok(Realization {
            ss,
            plan: InputPlan::Direct,
        });
    }

    // (1 - c0) y - sum_{i>=1} c_i y^(i) = G(t), driven by u = G.
    let mut y_coeffs: Vec<f64> = vec![0.0];
    let mut forcing: Vec<SignalExpr> = Vec::new();
    let poly = poly_of(sys.rhs());
    let classes = crate::analyzer::classify_poly(&poly);
    for (class, (atoms, coeff)) in classes.into_iter().zip(poly.iter()) {
        let term = crate::expr::Poly::term_expr(atoms, coeff);
        match class {
            MonomialClass::LinearInY { coeff, order } => {
                if order < 0 {
                    return Err(NumericError::NotRealizable(
                        "integral feedback outside the LTI path".into(),
                    ));
                }
                let value = eval_coefficient(&coeff, binding)?;
                let order = order as usize;
                if y_coeffs.len() <= order {
                    y_coeffs.resize(order + 1, 0.0);
                }
                y_coeffs[order] += value;
            }
            _ if term.mentions_signal(crate::expr::SignalKind::Output) => {
                return Err(NumericError::NotRealizable(format!(
                    "feedback term `{term}` is not constant-coefficient linear"
                )));
            }
            _ => forcing.push(term),
        }
    }

    let mut den: Vec<f64> = y_coeffs.iter().map(|c| -c).collect();
    den[0] += 1.0;
    while den.len() > 1 && den.last().map(|c| c.abs() <= SINGULAR_EPS).unwrap_or(false) {
        den.pop();
    }
    let ss = realize_ccf(&den, &[1.0])?;
    Ok(Realization {
        ss,
        plan: InputPlan::Forcing(forcing),
    })
}
