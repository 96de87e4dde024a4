//! Canonical pure-differential form and representation equivalence.
//!
//! Every constant-coefficient linear definition rewrites to
//! `sum_i a_i * D^i[y] = sum_j b_j * D^j[x]`: integrals are eliminated by
//! differentiating the whole equation once per nesting level, then the
//! coefficients are read off and scaled so the leading `y` coefficient is 1.
//! Two definitions are equivalent exactly when their scaled coefficient
//! sequences match. `a_0` may legitimately be zero — such implicit forms
//! cannot be solved for `y`, but they still describe a system.

use std::collections::BTreeMap;

use num::One;
use thiserror::Error;

use crate::expr::{differentiate, expr_equal, normalize, poly_of, Poly, SignalExpr};
use crate::system::SystemDef;

use super::classify::{classify_poly, MonomialClass};
use super::{classify, Verdict};

/// Coefficients of `sum a_i D^i[y] = sum b_j D^j[x]`, leading-normalized
/// (`a.last()` is the constant 1 after construction). `b` may be empty when
/// the input does not appear at all.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    a: Vec<SignalExpr>,
    b: Vec<SignalExpr>,
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum CanonicalError {
    #[error("canonical form is only defined for LTI definitions")]
    NotLti,
    /// Every `y` term cancelled: the "definition" constrains only `x` (or
    /// nothing), e.g. `y = y + x`.
    #[error("definition is degenerate; no output term survives")]
    Degenerate,
}

impl CanonicalForm {
    /// Output-side coefficients `a_0 ..= a_n`.
    pub fn a(&self) -> &[SignalExpr] {
        &self.a
    }

    /// Input-side coefficients `b_0 ..= b_m` (empty when `x` is absent).
    pub fn b(&self) -> &[SignalExpr] {
        &self.b
    }

    /// Order of the output side.
    pub fn n(&self) -> usize {
        self.a.len() - 1
    }

    /// Order of the input side, if any input term exists.
    pub fn m(&self) -> Option<usize> {
        if self.b.is_empty() {
            None
        } else {
            Some(self.b.len() - 1)
        }
    }

    /// The implicit case: the bare-`y` coefficient vanished, so the
    /// equation cannot be solved for `y`.
    pub fn is_implicit(&self) -> bool {
        self.a[0].is_zero()
    }

    /// `sum a_i D^i[y] - sum b_j D^j[x]` as one expression (equals zero
    /// along every trajectory of the system).
    pub fn equation_expr(&self) -> SignalExpr {
        let mut terms = Vec::new();
        for (i, coeff) in self.a.iter().enumerate() {
            let atom = if i == 0 {
                SignalExpr::output()
            } else {
                SignalExpr::deriv(SignalExpr::output(), i as u32)
            };
            terms.push(coeff.clone() * atom);
        }
        for (j, coeff) in self.b.iter().enumerate() {
            let atom = if j == 0 {
                SignalExpr::input()
            } else {
                SignalExpr::deriv(SignalExpr::input(), j as u32)
            };
            terms.push(-(coeff.clone() * atom));
        }
        normalize(&SignalExpr::sum(terms))
    }

    /// Render back to a definition `y = y - (equation)`; canonicalizing the
    /// result reproduces this form.
    pub fn to_system(&self) -> SystemDef {
        SystemDef::from_rhs(SignalExpr::output() - self.equation_expr())
    }
}

/// Divide `p` by the (nonzero) polynomial `d`. Exact when `d` is a single
/// term or equals `±p`; otherwise the quotient stays formal via a
/// reciprocal factor.
fn divide(p: &Poly, d: &Poly) -> Poly {
    if p.is_zero() {
        return Poly::zero();
    }
    if p == d {
        return Poly::one();
    }
    let negated = d.clone().neg();
    if *p == negated {
        let mut out = Poly::one();
        out.scale(&-num::BigRational::one());
        return out;
    }
    let factor = poly_of(&SignalExpr::recip(d.clone().into_expr()));
    p.mul(&factor)
}

/// Rewrite an LTI definition as `sum a_i D^i[y] = sum b_j D^j[x]` with the
/// leading output coefficient scaled to 1.
pub fn canonicalize(sys: &SystemDef) -> Result<CanonicalForm, CanonicalError> {
    if classify(sys).verdict != Verdict::Lti {
        return Err(CanonicalError::NotLti);
    }
    // Everything on one side: E = y - rhs vanishes along trajectories.
    let mut equation = normalize(&(SignalExpr::output() - sys.rhs().clone()));
    // One whole-equation differentiation per remaining integral level.
    while equation.contains_integral() {
        equation = differentiate(&equation)
            .expect("LTI definitions contain no nonlinear function heads");
    }

    let mut a_parts: BTreeMap<i32, Poly> = BTreeMap::new();
    let mut b_parts: BTreeMap<i32, Poly> = BTreeMap::new();
    let poly = poly_of(&equation);
    for class in classify_poly(&poly) {
        match class {
            MonomialClass::LinearInY { coeff, order } => {
                debug_assert!(order >= 0, "integral survived elimination");
                a_parts
                    .entry(order)
                    .or_insert_with(Poly::zero)
                    .add_assign(poly_of(&coeff));
            }
            MonomialClass::LinearInX { coeff, order } => {
                debug_assert!(order >= 0, "integral survived elimination");
                // E carries x-terms negated relative to the b side.
                b_parts
                    .entry(order)
                    .or_insert_with(Poly::zero)
                    .add_assign(poly_of(&coeff).neg());
            }
            other => unreachable!("non-linear term {other:?} in an LTI equation"),
        }
    }
    a_parts.retain(|_, p| !p.is_zero());
    b_parts.retain(|_, p| !p.is_zero());

    let n = *a_parts.keys().max().ok_or(CanonicalError::Degenerate)?;
    let m = b_parts.keys().max().copied();
    let leading = a_parts.get(&n).cloned().expect("n taken from keys");

    let collect = |parts: &BTreeMap<i32, Poly>, top: i32| -> Vec<SignalExpr> {
        (0..=top)
            .map(|k| {
                parts
                    .get(&k)
                    .map(|p| divide(p, &leading).into_expr())
                    .unwrap_or_else(SignalExpr::zero)
            })
            .collect()
    };
    let a = collect(&a_parts, n);
    let b = match m {
        Some(m) => collect(&b_parts, m),
        None => Vec::new(),
    };
    debug_assert!(a.last().map(SignalExpr::is_one).unwrap_or(false));
    Ok(CanonicalForm { a, b })
}

/// Two LTI definitions are equivalent when their leading-normalized
/// canonical forms agree coefficient by coefficient.
pub fn check_equivalence(s1: &SystemDef, s2: &SystemDef) -> Result<bool, CanonicalError> {
    let c1 = canonicalize(s1)?;
    let c2 = canonicalize(s2)?;
    let same = |lhs: &[SignalExpr], rhs: &[SignalExpr]| {
        lhs.len() == rhs.len() && lhs.iter().zip(rhs).all(|(l, r)| expr_equal(l, r))
    };
    Ok(same(c1.a(), c2.a()) && same(c1.b(), c2.b()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_system;

    fn canon(text: &str) -> CanonicalForm {
        canonicalize(&parse_system(text).unwrap()).unwrap()
    }

    fn strings(coeffs: &[SignalExpr]) -> Vec<String> {
        coeffs.iter().map(|c| c.to_string()).collect()
    }

    #[test]
    fn integral_of_output_eliminates_to_second_order() {
        // y = D[y,1] + I[y] + x  =>  y'' - y' + y = -x'
        let cf = canon("y = D[y,1] + I[y] + x");
        assert_eq!(strings(cf.a()), ["1", "-1", "1"]);
        assert_eq!(strings(cf.b()), ["0", "-1"]);
        assert_eq!(cf.n(), 2);
        assert_eq!(cf.m(), Some(1));
        assert!(!cf.is_implicit());
    }

    #[test]
    fn integral_of_input_leaves_an_implicit_form() {
        // y = D[y,1] + I[x]  =>  y'' - y' = -x, with no zeroth-order y term
        let cf = canon("y = D[y,1] + I[x]");
        assert_eq!(strings(cf.a()), ["0", "-1", "1"]);
        assert_eq!(strings(cf.b()), ["-1"]);
        assert!(cf.is_implicit());
    }

    #[test]
    fn symbolic_coefficients_stay_formal_quotients() {
        // y = a*D[y,1] + b*x  =>  y - a*y' = b*x, scaled by -1/a
        let cf = canon("y = a*D[y,1] + b*x");
        assert_eq!(strings(cf.a()), ["-1/a", "1"]);
        assert_eq!(strings(cf.b()), ["-b/a"]);
    }

    #[test]
    fn zero_order_feedback_scales_exactly() {
        let cf = canon("y = a*y + b*x");
        assert_eq!(strings(cf.a()), ["1"]);
        assert_eq!(strings(cf.b()), ["b/(1 - a)"]);
        let cf = canon("y = 0.5*y + x");
        assert_eq!(strings(cf.a()), ["1"]);
        assert_eq!(strings(cf.b()), ["2"]);
    }

    #[test]
    fn zero_system_has_trivial_form() {
        let cf = canon("y = 0");
        assert_eq!(strings(cf.a()), ["1"]);
        assert!(cf.b().is_empty());
        assert_eq!(cf.n(), 0);
        assert_eq!(cf.m(), None);
    }

    #[test]
    fn equivalent_representations_agree() {
        let s1 = parse_system("y = D[y,1] + I[y] + x").unwrap();
        let s2 = parse_system("y = -D[y,2] + D[y,1] - D[x,1]").unwrap();
        assert!(check_equivalence(&s1, &s2).unwrap());
        assert!(check_equivalence(&s2, &s1).unwrap());
        assert!(check_equivalence(&s1, &s1).unwrap());
    }

    #[test]
    fn inequivalent_systems_disagree() {
        let s1 = parse_system("y = a*x").unwrap();
        let s2 = parse_system("y = a*D[y,1] + b*x").unwrap();
        assert!(!check_equivalence(&s1, &s2).unwrap());
    }

    #[test]
    fn non_lti_inputs_are_refused() {
        let affine = parse_system("y = a*x + b").unwrap();
        assert_eq!(canonicalize(&affine), Err(CanonicalError::NotLti));
        assert!(matches!(
            check_equivalence(&affine, &affine),
            Err(CanonicalError::NotLti)
        ));
    }

    #[test]
    fn degenerate_definitions_are_refused() {
        let sys = parse_system("y = y + x").unwrap();
        assert_eq!(canonicalize(&sys), Err(CanonicalError::Degenerate));
    }

    #[test]
    fn round_trip_through_a_system_is_stable() {
        for text in [
            "y = a*D[y,1] + b*x",
            "y = D[y,1] + I[y] + x",
            "y = D[y,1] + I[x]",
            "y = a*y + b*x",
            "y = a*x",
        ] {
            let cf = canon(text);
            let back = cf.to_system();
            let cf2 = canonicalize(&back).unwrap();
            assert_eq!(cf, cf2, "canonical form drifted for {text}");
        }
    }

    #[test]
    fn rational_rescaling_is_invisible() {
        // The same dynamics written with every term multiplied by 2.
        let s1 = parse_system("y = D[y,1] + I[x]").unwrap();
        let cf1 = canonicalize(&s1).unwrap();
        let doubled = SystemDef::from_rhs(
            SignalExpr::output() - SignalExpr::int(2) * cf1.equation_expr(),
        );
        assert!(check_equivalence(&s1, &doubled).unwrap());
    }
}
