//! Counterexample construction for negative verdicts.
//!
//! Templates are fixed rather than searched: additivity with the constant
//! inputs 3 and 4 for affine offsets, scaling by 2 for nonlinear terms, a
//! unit shift for time-varying coefficients. Every candidate witness is
//! verified (`lhs` and `rhs` must normalize differently) before it is
//! returned; if a template produces equal sides — scaling cannot expose
//! `abs`, for instance — the next template in the chain is tried.

use num::rational::BigRational;
use num::{One, Zero};
use thiserror::Error;

use crate::expr::{
    expr_equal, normalize, retag_signals, shift_signals, substitute, substitute_raw,
    substitute_time, SignalExpr, SignalKind, SignalTag,
};
use crate::numeric::TestSignal;
use crate::rational::rat_int;
use crate::system::SystemDef;

use super::{Defect, LinearityReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    Superposition,
    Shift,
    ZeroInZeroOut,
}

impl WitnessKind {
    pub fn as_str(self) -> &'static str {
        match self {
            WitnessKind::Superposition => "Superposition",
            WitnessKind::Shift => "Shift",
            WitnessKind::ZeroInZeroOut => "ZeroInZeroOut",
        }
    }
}

/// A concrete configuration under which the two sides of the defining
/// property disagree. `lhs_expr` / `rhs_expr` are the symbolically unequal
/// sides; `alpha`, `beta`, `delta` and the signal descriptors say how to
/// reproduce the disagreement numerically (the symbolic sides may keep the
/// scale symbolic where that is clearer).
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub kind: WitnessKind,
    pub x1: TestSignal,
    pub x2: Option<TestSignal>,
    pub alpha: BigRational,
    pub beta: BigRational,
    pub delta: Option<BigRational>,
    pub lhs_expr: SignalExpr,
    pub rhs_expr: SignalExpr,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WitnessError {
    #[error("the system is LTI; no counterexample exists")]
    VerdictIsLti,
    #[error("no counterexample template produced unequal sides")]
    SearchFailed,
}

fn subst_both(rhs: &SignalExpr, x_repl: &SignalExpr, y_repl: &SignalExpr) -> SignalExpr {
    normalize(&substitute_raw(
        &substitute_raw(rhs, SignalKind::Input, x_repl),
        SignalKind::Output,
        y_repl,
    ))
}

/// Additivity with constant inputs: compare `S[x1+x2, y1+y2]` against
/// `S[x1,y1] + S[x2,y2]`.
fn additivity(rhs: &SignalExpr, v1: i64, v2: i64) -> Witness {
    let tagged_sum = SignalExpr::Signal(crate::expr::SignalRef::tagged(
        SignalKind::Output,
        SignalTag::One,
    )) + SignalExpr::Signal(crate::expr::SignalRef::tagged(
        SignalKind::Output,
        SignalTag::Two,
    ));
    let lhs = subst_both(
        rhs,
        &(SignalExpr::int(v1) + SignalExpr::int(v2)),
        &tagged_sum,
    );
    let copy = |v: i64, tag: SignalTag| {
        retag_signals(&substitute(rhs, SignalKind::Input, &SignalExpr::int(v)), tag)
    };
    let rhs_expr = normalize(&(copy(v1, SignalTag::One) + copy(v2, SignalTag::Two)));
    Witness {
        kind: WitnessKind::Superposition,
        x1: TestSignal::constant(v1 as f64),
        x2: Some(TestSignal::constant(v2 as f64)),
        alpha: BigRational::one(),
        beta: BigRational::one(),
        delta: None,
        lhs_expr: lhs,
        rhs_expr,
    }
}

/// Homogeneity with a symbolic scale: `S[alpha*x, alpha*y]` vs `alpha*S[x,y]`.
fn symbolic_scaling(rhs: &SignalExpr) -> Witness {
    let alpha = SignalExpr::param("alpha");
    let lhs = subst_both(
        rhs,
        &(alpha.clone() * SignalExpr::input()),
        &(alpha.clone() * SignalExpr::output()),
    );
    let rhs_expr = normalize(&(alpha * rhs.clone()));
    Witness {
        kind: WitnessKind::Superposition,
        x1: TestSignal::constant(1.0),
        x2: None,
        alpha: rat_int(2),
        beta: BigRational::zero(),
        delta: None,
        lhs_expr: lhs,
        rhs_expr,
    }
}

/// Homogeneity with the concrete scale 2 and unit input: `S[2*1, 2*y]` vs
/// `2*S[1, y]`.
fn concrete_scaling(rhs: &SignalExpr) -> Witness {
    let lhs = subst_both(
        rhs,
        &SignalExpr::int(2),
        &(SignalExpr::int(2) * SignalExpr::output()),
    );
    let rhs_expr = normalize(
        &(SignalExpr::int(2) * substitute(rhs, SignalKind::Input, &SignalExpr::one())),
    );
    Witness {
        kind: WitnessKind::Superposition,
        x1: TestSignal::constant(1.0),
        x2: None,
        alpha: rat_int(2),
        beta: BigRational::zero(),
        delta: None,
        lhs_expr: lhs,
        rhs_expr,
    }
}

/// Unit shift: plugging the shifted signals into `S` keeps the explicit `t`
/// fixed, while the shifted solution replaces `t` by `t + 1` throughout.
fn unit_shift(rhs: &SignalExpr) -> Witness {
    let shifted = shift_signals(rhs);
    let lhs = normalize(&shifted);
    let rhs_expr = normalize(&substitute_time(
        &shifted,
        &(SignalExpr::Time + SignalExpr::one()),
    ));
    Witness {
        kind: WitnessKind::Shift,
        x1: TestSignal::constant(1.0),
        x2: None,
        alpha: BigRational::one(),
        beta: BigRational::zero(),
        delta: Some(rat_int(1)),
        lhs_expr: lhs,
        rhs_expr,
    }
}

/// Fallback corollary: `S[0, 0]` must vanish for any linear system.
fn zero_in_zero_out(rhs: &SignalExpr) -> Witness {
    let lhs = subst_both(rhs, &SignalExpr::zero(), &SignalExpr::zero());
    Witness {
        kind: WitnessKind::ZeroInZeroOut,
        x1: TestSignal::Zero,
        x2: None,
        alpha: BigRational::one(),
        beta: BigRational::zero(),
        delta: None,
        lhs_expr: lhs,
        rhs_expr: SignalExpr::zero(),
    }
}

/// Build a verified witness for a non-LTI report.
///
/// The returned witness always satisfies
/// `!expr_equal(&w.lhs_expr, &w.rhs_expr)`; [`WitnessError::SearchFailed`]
/// would mean a template chain is incomplete and is treated as a bug.
pub fn find_counterexample(
    sys: &SystemDef,
    report: &LinearityReport,
) -> Result<Witness, WitnessError> {
    if report.verdict.is_lti() {
        return Err(WitnessError::VerdictIsLti);
    }
    let rhs = sys.rhs();
    let first = report.defects.first().ok_or(WitnessError::SearchFailed)?;
    let candidates: Vec<Witness> = match first {
        Defect::AffineOffset(_) => {
            if sys.has_feedback() {
                vec![symbolic_scaling(rhs), zero_in_zero_out(rhs)]
            } else {
                vec![additivity(rhs, 3, 4), zero_in_zero_out(rhs)]
            }
        }
        Defect::NonlinearTerm(_) => vec![
            concrete_scaling(rhs),
            additivity(rhs, 3, -4),
            zero_in_zero_out(rhs),
        ],
        Defect::TimeVaryingCoeff(_) => vec![unit_shift(rhs)],
    };
    candidates
        .into_iter()
        .find(|w| !expr_equal(&w.lhs_expr, &w.rhs_expr))
        .ok_or(WitnessError::SearchFailed)
}
