//! Built-in example systems and the harness that checks them end to end.
//!
//! Each entry records the expected verdict (and, for positive verdicts, the
//! expected canonical coefficients). Running the corpus classifies every
//! entry, canonicalizes where applicable, and cross-checks the verdict
//! numerically: positive verdicts must pass superposition, shift, and
//! zero-in-zero-out; linearity violations must fail superposition; shift
//! violations must fail the shift test. The rendered table is plain
//! deterministic text, so two runs are byte-identical.

use crate::analyzer::{analyze, canonicalize, Verdict};
use crate::numeric::{
    binding, empirical_shift_test, empirical_superposition_test, filter_binding,
    zero_input_zero_output_test, ParameterBinding, TestSignal, DEFAULT_DT, DEFAULT_T_END,
    TOL_GRID_IDENTITY,
};
use crate::parser::parse_system;

/// One corpus system with its expectations.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub id: String,
    pub dsl: String,
    pub expected: Verdict,
    pub note: String,
    /// Expected canonical coefficients, rendered (`a`, `b`), for entries
    /// where the canonical form is pinned.
    pub expected_canonical: Option<(Vec<String>, Vec<String>)>,
}

impl CorpusEntry {
    fn new(id: &str, dsl: &str, expected: Verdict, note: &str) -> CorpusEntry {
        CorpusEntry {
            id: id.into(),
            dsl: dsl.into(),
            expected,
            note: note.into(),
            expected_canonical: None,
        }
    }

    fn with_canonical(mut self, a: &[&str], b: &[&str]) -> CorpusEntry {
        self.expected_canonical = Some((
            a.iter().map(|s| s.to_string()).collect(),
            b.iter().map(|s| s.to_string()).collect(),
        ));
        self
    }
}

/// The built-in systems: every worked example plus the two verdict-taxonomy
/// probes (`t*x` is linear but not shift-equivariant; `sq(x)` is the
/// reverse).
pub fn builtin_corpus() -> Vec<CorpusEntry> {
    vec![
        CorpusEntry::new("gain", "y = a*x", Verdict::Lti, "pure input gain")
            .with_canonical(&["1"], &["a"]),
        CorpusEntry::new(
            "affine",
            "y = a*x + b",
            Verdict::NotLinear,
            "gain plus offset; describes a line, violates additivity",
        ),
        CorpusEntry::new(
            "algebraic-feedback",
            "y = a*y + b*x",
            Verdict::Lti,
            "zero-order feedback; unrolls to a pure gain",
        )
        .with_canonical(&["1"], &["b/(1 - a)"]),
        CorpusEntry::new(
            "first-order",
            "y = a*D[y,1] + b*x",
            Verdict::Lti,
            "first-order differential feedback",
        )
        .with_canonical(&["-1/a", "1"], &["-b/a"]),
        CorpusEntry::new(
            "feedback-offset",
            "y = D[y,1] + x + a",
            Verdict::NotLinear,
            "differential feedback with a constant offset",
        ),
        CorpusEntry::new(
            "integral-feedback",
            "y = D[y,1] + I[y] + x",
            Verdict::Lti,
            "derivative and integral of the output",
        )
        .with_canonical(&["1", "-1", "1"], &["0", "-1"]),
        CorpusEntry::new(
            "pure-differential",
            "y = -D[y,2] + D[y,1] - D[x,1]",
            Verdict::Lti,
            "same dynamics as integral-feedback, written with derivatives only",
        )
        .with_canonical(&["1", "-1", "1"], &["0", "-1"]),
        CorpusEntry::new(
            "integral-input",
            "y = D[y,1] + I[x]",
            Verdict::Lti,
            "integral of the input; canonical form is implicit (a0 = 0)",
        )
        .with_canonical(&["0", "-1", "1"], &["-1"]),
        CorpusEntry::new(
            "time-varying-gain",
            "y = t*x",
            Verdict::NotTimeInvariant,
            "linear at every instant, but the gain moves with t",
        ),
        CorpusEntry::new(
            "squared-input",
            "y = sq(x)",
            Verdict::NotLinear,
            "static nonlinearity",
        ),
    ]
}

/// Parameter values used for the numeric cross-checks.
pub fn corpus_binding() -> ParameterBinding {
    binding(&[("a", -1.0), ("b", 2.0)])
}

/// Result of running one entry.
#[derive(Clone, Debug)]
pub struct CorpusOutcome {
    pub entry: CorpusEntry,
    pub verdict: Option<Verdict>,
    pub verdict_ok: bool,
    /// `None` when the entry pins no canonical form.
    pub canonical_ok: Option<bool>,
    /// `None` when no numeric check applies (it always does today, but a
    /// parse failure leaves nothing to run).
    pub numeric_ok: Option<bool>,
}

impl CorpusOutcome {
    pub fn all_ok(&self) -> bool {
        self.verdict_ok
            && self.canonical_ok.unwrap_or(true)
            && self.numeric_ok.unwrap_or(true)
    }
}

/// Does the numeric behavior agree with the symbolic verdict?
fn numeric_consistent(sys: &crate::system::SystemDef, verdict: Verdict) -> bool {
    let b = filter_binding(&corpus_binding(), sys);
    let x1 = TestSignal::step_at(1.0);
    let x2 = TestSignal::sine_burst(1.0, 1.0);
    let superposition = empirical_superposition_test(
        sys,
        &b,
        &x1,
        &x2,
        2.0,
        -3.0,
        DEFAULT_T_END,
        DEFAULT_DT,
        TOL_GRID_IDENTITY,
    );
    let shift = empirical_shift_test(
        sys,
        &b,
        &x1,
        0.5,
        DEFAULT_T_END,
        DEFAULT_DT,
        TOL_GRID_IDENTITY,
    );
    if verdict.is_lti() {
        let zero = zero_input_zero_output_test(sys, &b, DEFAULT_T_END, DEFAULT_DT);
        return matches!(&superposition, Ok(r) if r.passed)
            && matches!(&shift, Ok(r) if r.passed)
            && matches!(&zero, Ok(r) if r.passed);
    }
    if verdict.violates_linearity()
        && !matches!(&superposition, Ok(r) if !r.passed && r.max_abs_error > crate::numeric::VIOLATION_THRESHOLD)
    {
        return false;
    }
    if verdict.violates_time_invariance()
        && !matches!(&shift, Ok(r) if !r.passed && r.max_abs_error > crate::numeric::VIOLATION_THRESHOLD)
    {
        return false;
    }
    true
}

/// Run one entry: verdict, pinned canonical form, numeric cross-check.
pub fn run_entry(entry: &CorpusEntry) -> CorpusOutcome {
    let sys = match parse_system(&entry.dsl) {
        Ok(sys) => sys,
        Err(_) => {
            return CorpusOutcome {
                entry: entry.clone(),
                verdict: None,
                verdict_ok: false,
                canonical_ok: None,
                numeric_ok: None,
            }
        }
    };
    let report = analyze(&sys);
    let verdict_ok = report.verdict == entry.expected;
    let canonical_ok = entry.expected_canonical.as_ref().map(|(want_a, want_b)| {
        match canonicalize(&sys) {
            Ok(cf) => {
                let got_a: Vec<String> = cf.a().iter().map(|c| c.to_string()).collect();
                let got_b: Vec<String> = cf.b().iter().map(|c| c.to_string()).collect();
                got_a == *want_a && got_b == *want_b
            }
            Err(_) => false,
        }
    });
    let numeric_ok = Some(numeric_consistent(&sys, report.verdict));
    CorpusOutcome {
        entry: entry.clone(),
        verdict: Some(report.verdict),
        verdict_ok,
        canonical_ok,
        numeric_ok,
    }
}

pub fn run_corpus(entries: &[CorpusEntry]) -> Vec<CorpusOutcome> {
    entries.iter().map(run_entry).collect()
}

/// Fixed-width table, one row per entry plus a summary line.
pub fn render_table(outcomes: &[CorpusOutcome]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<20} {:<34} {:<30} {:<30} {:<9} {:<10} {}\n",
        "id", "system", "expected", "verdict", "canonical", "numeric", "status"
    ));
    for o in outcomes {
        let verdict = o
            .verdict
            .map(|v| v.as_str().to_string())
            .unwrap_or_else(|| "parse error".into());
        let canonical = match o.canonical_ok {
            None => "-",
            Some(true) => "ok",
            Some(false) => "MISMATCH",
        };
        let numeric = match o.numeric_ok {
            None => "-",
            Some(true) => "consistent",
            Some(false) => "DISAGREES",
        };
        let status = if o.all_ok() { "ok" } else { "FAIL" };
        out.push_str(&format!(
            "{:<20} {:<34} {:<30} {:<30} {:<9} {:<10} {}\n",
            o.entry.id, o.entry.dsl, o.entry.expected.as_str(), verdict, canonical, numeric, status
        ));
    }
    let good = outcomes.iter().filter(|o| o.all_ok()).count();
    out.push_str(&format!(
        "{good}/{} entries as expected\n",
        outcomes.len()
    ));
    out
}

/// Parse a corpus file: one `<dsl> => <verdict>` per line, `#` comments and
/// blank lines ignored.
pub fn parse_corpus_file(text: &str) -> Result<Vec<CorpusEntry>, String> {
    let mut entries = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (dsl, verdict) = line
            .rsplit_once("=>")
            .ok_or_else(|| format!("line {}: expected `<system> => <verdict>`", lineno + 1))?;
        let expected = Verdict::from_str(verdict.trim())
            .ok_or_else(|| format!("line {}: unknown verdict `{}`", lineno + 1, verdict.trim()))?;
        entries.push(CorpusEntry::new(
            &format!("line-{}", lineno + 1),
            dsl.trim(),
            expected,
            "",
        ));
    }
    Ok(entries)
}
