//! Symbolic decision procedure.
//!
//! A normalized definition is linear time-invariant exactly when every
//! additive term is linear in a single signal atom with a time-free
//! coefficient. That structural criterion drives the verdict; the
//! superposition / shift definitions are then used to *explain* it — as a
//! derivation trace for positive verdicts, or a concrete counterexample
//! witness for negative ones.

mod canonical;
mod classify;
mod report;
mod trace;
mod unroll;
mod witness;

pub use canonical::{canonicalize, check_equivalence, CanonicalError, CanonicalForm};
pub(crate) use classify::classify_poly;
pub use classify::MonomialClass;
pub use report::report_to_json;
pub use unroll::{unroll_zero_order, UnrollError};
pub use witness::{find_counterexample, Witness, WitnessError, WitnessKind};

use crate::expr::{poly_of, SignalExpr};
use crate::system::SystemDef;

/// Four-way verdict: the two failure modes are independent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Lti,
    NotLinear,
    NotTimeInvariant,
    NotLinearAndNotTimeInvariant,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Lti => "LTI",
            Verdict::NotLinear => "NotLinear",
            Verdict::NotTimeInvariant => "NotTimeInvariant",
            Verdict::NotLinearAndNotTimeInvariant => "NotLinearAndNotTimeInvariant",
        }
    }

    pub fn from_str(s: &str) -> Option<Verdict> {
        match s {
            "LTI" => Some(Verdict::Lti),
            "NotLinear" => Some(Verdict::NotLinear),
            "NotTimeInvariant" => Some(Verdict::NotTimeInvariant),
            "NotLinearAndNotTimeInvariant" => Some(Verdict::NotLinearAndNotTimeInvariant),
            _ => None,
        }
    }

    pub fn is_lti(self) -> bool {
        self == Verdict::Lti
    }

    /// Linearity fails (possibly alongside time-invariance).
    pub fn violates_linearity(self) -> bool {
        matches!(
            self,
            Verdict::NotLinear | Verdict::NotLinearAndNotTimeInvariant
        )
    }

    pub fn violates_time_invariance(self) -> bool {
        matches!(
            self,
            Verdict::NotTimeInvariant | Verdict::NotLinearAndNotTimeInvariant
        )
    }
}

/// One offending term, carried verbatim for reporting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Defect {
    AffineOffset(SignalExpr),
    NonlinearTerm(SignalExpr),
    TimeVaryingCoeff(SignalExpr),
}

impl Defect {
    pub fn kind(&self) -> &'static str {
        match self {
            Defect::AffineOffset(_) => "AffineOffset",
            Defect::NonlinearTerm(_) => "NonlinearTerm",
            Defect::TimeVaryingCoeff(_) => "TimeVaryingCoeff",
        }
    }

    pub fn term(&self) -> &SignalExpr {
        match self {
            Defect::AffineOffset(t) | Defect::NonlinearTerm(t) | Defect::TimeVaryingCoeff(t) => t,
        }
    }
}

/// One derivation step: `before` rewrites to `after` under `rule`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: &'static str,
    pub before: SignalExpr,
    pub after: SignalExpr,
}

/// Complete symbolic result for one definition.
///
/// Invariants: `verdict` is [`Verdict::Lti`] exactly when `defects` is empty;
/// the derivation trace is non-empty exactly for LTI verdicts; a witness is
/// attached (by [`analyze`]) exactly for non-LTI verdicts.
#[derive(Clone, Debug)]
pub struct LinearityReport {
    pub verdict: Verdict,
    pub defects: Vec<Defect>,
    pub proof_trace: Vec<TraceStep>,
    pub witness: Option<Witness>,
}

/// Classify a definition. The verdict and defects are filled in; the witness
/// slot stays empty (see [`analyze`] and [`find_counterexample`]).
pub fn classify(sys: &SystemDef) -> LinearityReport {
    let classes = classify::classify_poly(&poly_of(sys.rhs()));
    let mut defects = Vec::new();
    for class in &classes {
        match class {
            MonomialClass::ConstantOffset(term) => {
                defects.push(Defect::AffineOffset(term.clone()))
            }
            MonomialClass::NonlinearTerm(term) => {
                defects.push(Defect::NonlinearTerm(term.clone()))
            }
            MonomialClass::TimeVaryingCoeff(term) => {
                defects.push(Defect::TimeVaryingCoeff(term.clone()))
            }
            MonomialClass::LinearInX { .. } | MonomialClass::LinearInY { .. } => {}
        }
    }
    let not_linear = defects
        .iter()
        .any(|d| matches!(d, Defect::AffineOffset(_) | Defect::NonlinearTerm(_)));
    let not_ti = defects
        .iter()
        .any(|d| matches!(d, Defect::TimeVaryingCoeff(_)));
    let verdict = match (not_linear, not_ti) {
        (false, false) => Verdict::Lti,
        (true, false) => Verdict::NotLinear,
        (false, true) => Verdict::NotTimeInvariant,
        (true, true) => Verdict::NotLinearAndNotTimeInvariant,
    };
    let proof_trace = if verdict.is_lti() {
        trace::build_lti_trace(sys)
    } else {
        Vec::new()
    };
    LinearityReport {
        verdict,
        defects,
        proof_trace,
        witness: None,
    }
}

/// Classify and, for non-LTI verdicts, attach the counterexample witness.
pub fn analyze(sys: &SystemDef) -> LinearityReport {
    let mut report = classify(sys);
    if !report.verdict.is_lti() {
        match find_counterexample(sys, &report) {
            Ok(w) => report.witness = Some(w),
            Err(e) => {
                // Every defect class has a verified template; reaching this
                // is a bug, not an input condition.
                debug_assert!(false, "witness search failed: {e}");
            }
        }
    }
    report
}
