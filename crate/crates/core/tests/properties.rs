//! Property tests over generated expressions and definitions.

use proptest::prelude::*;

use lti_core::expr::{differentiate, expr_equal, normalize, substitute, Func, SignalExpr, SignalKind};
use lti_core::parser::{format_system, parse_system};
use lti_core::system::SystemDef;

fn leaf() -> impl Strategy<Value = SignalExpr> {
    prop_oneof![
        (-6i64..=6).prop_map(SignalExpr::int),
        ((-9i64..=9), (1i64..=4)).prop_map(|(n, d)| SignalExpr::ratio(n, d)),
        prop_oneof![Just("a"), Just("b"), Just("k2")].prop_map(SignalExpr::param),
        Just(SignalExpr::Time),
        Just(SignalExpr::input()),
        Just(SignalExpr::output()),
        (prop_oneof![Just(SignalKind::Input), Just(SignalKind::Output)], 1u32..=3)
            .prop_map(|(k, o)| SignalExpr::deriv(SignalExpr::signal(k), o)),
        prop_oneof![Just(SignalKind::Input), Just(SignalKind::Output)]
            .prop_map(|k| SignalExpr::integ(SignalExpr::signal(k))),
    ]
}

fn func() -> impl Strategy<Value = Func> {
    prop_oneof![Just(Func::Sin), Just(Func::Exp), Just(Func::Abs), Just(Func::Sq)]
}

/// Arbitrary trees, including shapes the parser cannot produce (derivatives
/// of compounds, nested integrals, reciprocals of anything).
fn arb_expr() -> impl Strategy<Value = SignalExpr> {
    leaf().prop_recursive(3, 48, 4, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(SignalExpr::Sum),
            prop::collection::vec(inner.clone(), 2..3).prop_map(SignalExpr::Product),
            (inner.clone(), 1u32..=2).prop_map(|(e, o)| SignalExpr::deriv(e, o)),
            inner.clone().prop_map(SignalExpr::integ),
            inner.clone().prop_map(SignalExpr::recip),
            (func(), inner).prop_map(|(f, e)| SignalExpr::apply(f, e)),
        ]
    })
}

/// Expressions shaped like parser output: derivatives and integrals wrap
/// signals only, and divisors cannot normalize to zero.
fn grammar_expr() -> impl Strategy<Value = SignalExpr> {
    let divisor = prop_oneof![
        (1i64..=6).prop_map(SignalExpr::int),
        prop_oneof![Just("a"), Just("b")].prop_map(SignalExpr::param),
        prop_oneof![Just("a"), Just("b")]
            .prop_map(|p| SignalExpr::one() - SignalExpr::param(p)),
    ];
    let base = prop_oneof![
        leaf(),
        divisor.prop_map(SignalExpr::recip),
    ];
    base.prop_recursive(3, 40, 4, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(SignalExpr::Sum),
            prop::collection::vec(inner.clone(), 2..3).prop_map(SignalExpr::Product),
            (func(), inner).prop_map(|(f, e)| SignalExpr::apply(f, e)),
        ]
    })
}

proptest! {
    #[test]
    fn normalize_is_idempotent(e in arb_expr()) {
        let once = normalize(&e);
        let twice = normalize(&once);
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn normalize_preserves_equality_classes(e in arb_expr()) {
        prop_assert!(expr_equal(&e, &normalize(&e)));
    }

    #[test]
    fn derivative_of_integral_is_identity(e in arb_expr()) {
        prop_assume!(!e.contains_integral());
        let d = differentiate(&SignalExpr::integ(e.clone())).unwrap();
        prop_assert!(expr_equal(&d, &e), "derivative {} of integral of {}", d, e);
    }

    #[test]
    fn identity_substitution_is_identity(e in arb_expr()) {
        prop_assert!(expr_equal(&substitute(&e, SignalKind::Input, &SignalExpr::input()), &e));
        prop_assert!(expr_equal(&substitute(&e, SignalKind::Output, &SignalExpr::output()), &e));
    }

    #[test]
    fn expr_equal_is_reflexive_and_symmetric(e1 in arb_expr(), e2 in arb_expr()) {
        prop_assert!(expr_equal(&e1, &e1));
        prop_assert_eq!(expr_equal(&e1, &e2), expr_equal(&e2, &e1));
    }

    #[test]
    fn equal_normal_forms_imply_transitivity(e in arb_expr(), scale in 1i64..=3) {
        // a = e, b = e written redundantly, c = b written redundantly:
        // equality must chain.
        let b = SignalExpr::sum(vec![e.clone(), SignalExpr::int(scale) * SignalExpr::zero()]);
        let c = SignalExpr::product(vec![SignalExpr::one(), b.clone()]);
        prop_assert!(expr_equal(&e, &b));
        prop_assert!(expr_equal(&b, &c));
        prop_assert!(expr_equal(&e, &c));
    }

    #[test]
    fn parse_format_round_trip(rhs in grammar_expr()) {
        let sys = SystemDef::from_rhs(rhs);
        let text = format_system(&sys);
        let reparsed = parse_system(&text)
            .unwrap_or_else(|e| panic!("canonical text failed to reparse: {text:?}: {e}"));
        prop_assert!(
            expr_equal(reparsed.rhs(), sys.rhs()),
            "round trip changed {} to {}",
            sys.rhs(),
            reparsed.rhs()
        );
        // and canonical text is a fixed point
        prop_assert_eq!(format_system(&reparsed), text);
    }

    #[test]
    fn parser_never_panics_and_positions_stay_in_range(s in "[ -~]{0,40}") {
        if let Err(e) = parse_system(&s) {
            prop_assert!(e.position <= s.len() + 1);
        }
    }
}
