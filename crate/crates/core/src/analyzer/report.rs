//! JSON serialization of analysis results.
//!
//! Stable shape:
//!
//! ```json
//! {
//!   "verdict": "NotLinear",
//!   "defects": [{"kind": "AffineOffset", "term": "b"}],
//!   "proof_trace": [{"rule": "...", "before": "...", "after": "..."}],
//!   "witness": {"kind": "Superposition", "x1": "const:v=3", "x2": "const:v=4",
//!               "alpha": "1", "beta": "1", "delta": null,
//!               "lhs": "7*a + b", "rhs": "7*a + 2*b"},
//!   "canonical": {"a": ["1"], "b": ["2"]}
//! }
//! ```
//!
//! `witness` is `null` for LTI verdicts and `canonical` is only present for
//! them. Coefficients, scalars, and expressions serialize as exact strings
//! (`-1/2`, never floats).

use serde_json::{json, Value};

use crate::rational::format_rational;

use super::{CanonicalForm, LinearityReport, Witness};

fn witness_json(w: &Witness) -> Value {
    json!({
        "kind": w.kind.as_str(),
        "x1": w.x1.to_string(),
        "x2": w.x2.as_ref().map(|s| s.to_string()),
        "alpha": format_rational(&w.alpha),
        "beta": format_rational(&w.beta),
        "delta": w.delta.as_ref().map(format_rational),
        "lhs": w.lhs_expr.to_string(),
        "rhs": w.rhs_expr.to_string(),
    })
}

/// Assemble the documented JSON value for a report, with the canonical form
/// attached when one exists.
pub fn report_to_json(report: &LinearityReport, canonical: Option<&CanonicalForm>) -> Value {
    let defects: Vec<Value> = report
        .defects
        .iter()
        .map(|d| {
            json!({
                "kind": d.kind(),
                "term": d.term().to_string(),
            })
        })
        .collect();
    let trace: Vec<Value> = report
        .proof_trace
        .iter()
        .map(|s| {
            json!({
                "rule": s.rule,
                "before": s.before.to_string(),
                "after": s.after.to_string(),
            })
        })
        .collect();
    let mut out = json!({
        "verdict": report.verdict.as_str(),
        "defects": defects,
        "proof_trace": trace,
        "witness": report.witness.as_ref().map(witness_json),
    });
    if let Some(cf) = canonical {
        let coeffs = |cs: &[crate::expr::SignalExpr]| -> Vec<Value> {
            cs.iter().map(|c| Value::String(c.to_string())).collect()
        };
        out["canonical"] = json!({
            "a": coeffs(cf.a()),
            "b": coeffs(cf.b()),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyzer::{analyze, canonicalize};
    use crate::parser::parse_system;

    #[test]
    fn non_lti_report_shape() {
        let sys = parse_system("y = a*x + b").unwrap();
        let report = analyze(&sys);
        let v = report_to_json(&report, None);
        assert_eq!(v["verdict"], "NotLinear");
        assert_eq!(v["defects"][0]["kind"], "AffineOffset");
        assert_eq!(v["defects"][0]["term"], "b");
        assert_eq!(v["witness"]["lhs"], "7*a + b");
        assert_eq!(v["witness"]["rhs"], "7*a + 2*b");
        assert_eq!(v["witness"]["alpha"], "1");
        assert!(v["proof_trace"].as_array().unwrap().is_empty());
        assert!(v.get("canonical").is_none());
    }

    #[test]
    fn lti_report_shape_with_canonical_form() {
        let sys = parse_system("y = D[y,1] + I[x]").unwrap();
        let report = analyze(&sys);
        let cf = canonicalize(&sys).unwrap();
        let v = report_to_json(&report, Some(&cf));
        assert_eq!(v["verdict"], "LTI");
        assert!(v["witness"].is_null());
        assert_eq!(v["canonical"]["a"][0], "0");
        assert_eq!(v["canonical"]["a"][2], "1");
        assert_eq!(v["canonical"]["b"][0], "-1");
        assert!(!v["proof_trace"].as_array().unwrap().is_empty());
    }

    #[test]
    fn exact_rationals_serialize_as_strings() {
        let sys = parse_system("y = 0.5*y + x").unwrap();
        let cf = canonicalize(&sys).unwrap();
        let report = analyze(&sys);
        let v = report_to_json(&report, Some(&cf));
        assert_eq!(v["canonical"]["b"][0], "2");
    }
}
