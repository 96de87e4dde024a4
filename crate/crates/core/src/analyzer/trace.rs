//! Derivation traces for positive verdicts.
//!
//! For a definition `y = S[x, y]` whose terms are all linear with constant
//! coefficients, the trace walks the superposition argument: assume two
//! solutions `(x1, y1)` and `(x2, y2)`, substitute the scaled sum into `S`,
//! expand by linearity of `D` and `I`, regroup into `alpha*S[x1,y1] +
//! beta*S[x2,y2]`, and discharge both copies with the solution hypotheses —
//! no solving required. Two closing steps record shift-equivariance (no
//! explicit `t` anywhere, so shifting every signal shifts the equation) and
//! the zero-in-zero-out corollary.

use crate::expr::{
    expr_equal, normalize, retag_signals, shift_signals, substitute_raw, SignalExpr, SignalKind,
    SignalRef, SignalTag,
};
use crate::system::SystemDef;

use super::TraceStep;

fn tagged(kind: SignalKind, tag: SignalTag) -> SignalExpr {
    SignalExpr::Signal(SignalRef::tagged(kind, tag))
}

/// `alpha*<one> + beta*<two>`, left unnormalized for display.
fn scaled_pair(one: SignalExpr, two: SignalExpr) -> SignalExpr {
    SignalExpr::param("alpha") * one + SignalExpr::param("beta") * two
}

pub(super) fn build_lti_trace(sys: &SystemDef) -> Vec<TraceStep> {
    let rhs = sys.rhs().clone();
    let mut steps = Vec::new();

    // Superposed inputs (and, with feedback, the superposed output) plugged
    // into S without any rewriting.
    let x_combo = scaled_pair(
        tagged(SignalKind::Input, SignalTag::One),
        tagged(SignalKind::Input, SignalTag::Two),
    );
    let y_combo = scaled_pair(
        tagged(SignalKind::Output, SignalTag::One),
        tagged(SignalKind::Output, SignalTag::Two),
    );
    let substituted = substitute_raw(
        &substitute_raw(&rhs, SignalKind::Input, &x_combo),
        SignalKind::Output,
        &y_combo,
    );
    steps.push(TraceStep {
        rule: "substitute-superposed-solutions",
        before: rhs.clone(),
        after: substituted.clone(),
    });

    // Derivatives and integrals distribute over the scaled sums.
    let expanded = normalize(&substituted);
    steps.push(TraceStep {
        rule: "expand-by-linearity",
        before: substituted,
        after: expanded.clone(),
    });

    // Collect the alpha-terms and beta-terms back into two copies of S.
    let copy_one = retag_signals(&rhs, SignalTag::One);
    let copy_two = retag_signals(&rhs, SignalTag::Two);
    let regrouped = scaled_pair(copy_one, copy_two);
    debug_assert!(expr_equal(&expanded, &regrouped));
    steps.push(TraceStep {
        rule: "regroup-scaled-copies",
        before: expanded,
        after: regrouped.clone(),
    });

    // S[x1,y1] = y1 and S[x2,y2] = y2 by hypothesis, so the scaled sum of
    // outputs is itself a solution.
    let conclusion = scaled_pair(
        tagged(SignalKind::Output, SignalTag::One),
        tagged(SignalKind::Output, SignalTag::Two),
    );
    steps.push(TraceStep {
        rule: "apply-solution-hypotheses",
        before: regrouped,
        after: conclusion,
    });

    // No coefficient mentions t, so evaluating every signal at t+delta
    // reproduces the defining equation at t+delta.
    let shifted = shift_signals(&rhs);
    steps.push(TraceStep {
        rule: "shift-time-argument",
        before: shifted,
        after: SignalExpr::Signal(SignalRef {
            kind: SignalKind::Output,
            tag: SignalTag::Plain,
            shifted: true,
        }),
    });

    // Corollary: the zero pair solves the system.
    let zeroed_raw = substitute_raw(
        &substitute_raw(&rhs, SignalKind::Input, &SignalExpr::zero()),
        SignalKind::Output,
        &SignalExpr::zero(),
    );
    debug_assert!(normalize(&zeroed_raw).is_zero());
    steps.push(TraceStep {
        rule: "zero-input-zero-output",
        before: zeroed_raw,
        after: SignalExpr::zero(),
    });

    steps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyzer::classify;
    use crate::parser::parse_system;

    #[test]
    fn first_order_feedback_trace_has_the_full_derivation() {
        let sys = parse_system("y = a*D[y,1] + b*x").unwrap();
        let report = classify(&sys);
        let rules: Vec<&str> = report.proof_trace.iter().map(|s| s.rule).collect();
        assert_eq!(
            rules,
            vec![
                "substitute-superposed-solutions",
                "expand-by-linearity",
                "regroup-scaled-copies",
                "apply-solution-hypotheses",
                "shift-time-argument",
                "zero-input-zero-output",
            ]
        );
        // The regrouped form really equals the expansion.
        let expand = &report.proof_trace[1];
        let regroup = &report.proof_trace[2];
        assert!(expr_equal(&expand.after, &regroup.after));
        // The derivation ends at the scaled sum of outputs.
        assert_eq!(
            report.proof_trace[3].after.to_string(),
            "alpha*y1 + beta*y2"
        );
        // Expansion shows the distributed derivative.
        assert_eq!(
            expand.after.to_string(),
            "a*alpha*D[y1,1] + a*beta*D[y2,1] + alpha*b*x1 + b*beta*x2"
        );
    }

    #[test]
    fn shift_step_displays_shifted_signals() {
        let sys = parse_system("y = a*D[y,1] + b*x").unwrap();
        let report = classify(&sys);
        let shift = &report.proof_trace[4];
        assert_eq!(
            shift.before.to_string(),
            "a*D[y(t+delta),1] + b*x(t+delta)"
        );
        assert_eq!(shift.after.to_string(), "y(t+delta)");
    }

    #[test]
    fn integral_systems_trace_through_linearity_of_integration() {
        let sys = parse_system("y = D[y,1] + I[x]").unwrap();
        let report = classify(&sys);
        let expand = &report.proof_trace[1];
        assert_eq!(
            expand.after.to_string(),
            "alpha*D[y1,1] + alpha*I[x1] + beta*D[y2,1] + beta*I[x2]"
        );
    }
}
