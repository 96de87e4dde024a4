//! A parsed system definition `y = S[x, y]`.

use crate::expr::{normalize, SignalExpr, SignalKind};

/// Right-hand side of a definition plus bookkeeping. The stored expression
/// is always normalized and `has_feedback` is recomputed from it, never
/// trusted from the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemDef {
    rhs: SignalExpr,
    has_feedback: bool,
    source_text: String,
}

impl SystemDef {
    pub fn new(rhs: SignalExpr, source_text: impl Into<String>) -> Self {
        let rhs = normalize(&rhs);
        let has_feedback = rhs.mentions_signal(SignalKind::Output);
        SystemDef {
            rhs,
            has_feedback,
            source_text: source_text.into(),
        }
    }

    /// Build from an expression alone; the source text is the canonical
    /// rendering.
    pub fn from_rhs(rhs: SignalExpr) -> Self {
        let rhs = normalize(&rhs);
        let source_text = format!("y = {rhs}");
        let has_feedback = rhs.mentions_signal(SignalKind::Output);
        SystemDef {
            rhs,
            has_feedback,
            source_text,
        }
    }

    pub fn rhs(&self) -> &SignalExpr {
        &self.rhs
    }

    pub fn has_feedback(&self) -> bool {
        self.has_feedback
    }

    pub fn source_text(&self) -> &str {
        &self.source_text
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feedback_flag_recomputed_from_rhs() {
        let s = SystemDef::new(
            SignalExpr::deriv(SignalExpr::output(), 1) + SignalExpr::input(),
            "y = D[y,1] + x",
        );
        assert!(s.has_feedback());
        let s2 = SystemDef::new(SignalExpr::param("a") * SignalExpr::input(), "y = a*x");
        assert!(!s2.has_feedback());
        // Terms in y that cancel under normalization leave no feedback.
        let s3 = SystemDef::new(
            SignalExpr::output() - SignalExpr::output() + SignalExpr::input(),
            "",
        );
        assert!(!s3.has_feedback());
    }
}
