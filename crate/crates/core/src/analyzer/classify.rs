//! Per-term classification of a normalized right-hand side.
//!
//! After normalization a definition is a sum of monomials. Exactly one
//! [`MonomialClass`] applies to each: a term is *linear* when it carries a
//! single signal atom reached only through derivatives / integrals, its
//! remaining factors form the coefficient, and the coefficient decides
//! between constant-coefficient linear, time-varying, offset, or nonlinear.

use crate::expr::{Poly, SignalExpr, SignalKind};

/// Classification of one additive term. The `coeff` of the linear variants
/// never mentions a signal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonomialClass {
    /// Signal-free term (nonzero, or it would have been dropped).
    ConstantOffset(SignalExpr),
    /// `coeff * D^order[x]`; negative order counts integral depth.
    LinearInX { coeff: SignalExpr, order: i32 },
    /// `coeff * D^order[y]`.
    LinearInY { coeff: SignalExpr, order: i32 },
    /// Linear in a signal but with a time-dependent coefficient.
    TimeVaryingCoeff(SignalExpr),
    /// Anything else: products of signals, nonlinear function heads,
    /// reciprocals of signals.
    NonlinearTerm(SignalExpr),
}

/// What one atomic factor contributes to its term.
enum AtomProfile {
    /// Signal-free. `time_dependent` marks explicit `t` content.
    ConstLike { time_dependent: bool },
    /// A single signal reached through a pure derivative/integral chain.
    Linear {
        kind: SignalKind,
        order: i32,
        time_dependent: bool,
    },
    Nonlinear,
}

fn profile_atom(atom: &SignalExpr) -> AtomProfile {
    match atom {
        SignalExpr::Signal(r) => AtomProfile::Linear {
            kind: r.kind,
            order: 0,
            time_dependent: false,
        },
        SignalExpr::Time => AtomProfile::ConstLike {
            time_dependent: true,
        },
        SignalExpr::Param(_) | SignalExpr::Const(_) => AtomProfile::ConstLike {
            time_dependent: false,
        },
        SignalExpr::Deriv(child, order) => match profile_child(child) {
            AtomProfile::Linear {
                kind,
                order: inner,
                time_dependent,
            } => AtomProfile::Linear {
                kind,
                order: inner + *order as i32,
                time_dependent,
            },
            other => other,
        },
        SignalExpr::Integ(child) => match profile_child(child) {
            AtomProfile::Linear {
                kind,
                order,
                time_dependent,
            } => AtomProfile::Linear {
                kind,
                order: order - 1,
                time_dependent,
            },
            // Integrating anything signal-free accumulates over time.
            AtomProfile::ConstLike { .. } => AtomProfile::ConstLike {
                time_dependent: true,
            },
            AtomProfile::Nonlinear => AtomProfile::Nonlinear,
        },
        SignalExpr::Recip(child) | SignalExpr::Apply(_, child) => {
            if child.mentions_any_signal() {
                AtomProfile::Nonlinear
            } else {
                AtomProfile::ConstLike {
                    time_dependent: child.mentions_time(),
                }
            }
        }
        SignalExpr::Sum(_) | SignalExpr::Product(_) => profile_child(atom),
    }
}

/// Profile of a derivative/integral operand, which may be an opaque product
/// (or, for hand-built trees, an arbitrary expression).
fn profile_child(child: &SignalExpr) -> AtomProfile {
    match child {
        SignalExpr::Product(items) => {
            let mut linear: Option<AtomProfile> = None;
            let mut time_dependent = false;
            for item in items {
                match profile_atom(item) {
                    AtomProfile::ConstLike { time_dependent: td } => time_dependent |= td,
                    AtomProfile::Linear { .. } if linear.is_some() => {
                        return AtomProfile::Nonlinear
                    }
                    p @ AtomProfile::Linear { .. } => linear = Some(p),
                    AtomProfile::Nonlinear => return AtomProfile::Nonlinear,
                }
            }
            match linear {
                Some(AtomProfile::Linear { kind, order, time_dependent: td }) => {
                    AtomProfile::Linear {
                        kind,
                        order,
                        time_dependent: td || time_dependent,
                    }
                }
                _ => AtomProfile::ConstLike { time_dependent },
            }
        }
        SignalExpr::Sum(_) => {
            // Sums under an operator only arise from hand-built trees; be
            // conservative rather than mislabel.
            if child.mentions_any_signal() {
                AtomProfile::Nonlinear
            } else {
                AtomProfile::ConstLike {
                    time_dependent: child.mentions_time(),
                }
            }
        }
        other => profile_atom(other),
    }
}

/// Classify every term of a normalized polynomial, in canonical term order.
pub(crate) fn classify_poly(poly: &Poly) -> Vec<MonomialClass> {
    let mut classes = Vec::new();
    for (atoms, coeff) in poly.iter() {
        let term = Poly::term_expr(atoms, coeff);
        let mut signal: Option<(SignalKind, i32, bool)> = None;
        let mut coeff_atoms: Vec<SignalExpr> = Vec::new();
        let mut time_dependent = false;
        let mut nonlinear = false;
        for atom in atoms {
            match profile_atom(atom) {
                AtomProfile::ConstLike { time_dependent: td } => {
                    time_dependent |= td;
                    coeff_atoms.push(atom.clone());
                }
                AtomProfile::Linear {
                    kind,
                    order,
                    time_dependent: td,
                } => {
                    if signal.is_some() {
                        nonlinear = true;
                        break;
                    }
                    signal = Some((kind, order, td));
                }
                AtomProfile::Nonlinear => {
                    nonlinear = true;
                    break;
                }
            }
        }
        let class = if nonlinear {
            MonomialClass::NonlinearTerm(term)
        } else {
            match signal {
                None => MonomialClass::ConstantOffset(term),
                Some((kind, order, chain_td)) => {
                    if time_dependent || chain_td {
                        MonomialClass::TimeVaryingCoeff(term)
                    } else {
                        let coeff = Poly::term_expr(&coeff_atoms, coeff);
                        match kind {
                            SignalKind::Input => MonomialClass::LinearInX { coeff, order },
                            SignalKind::Output => MonomialClass::LinearInY { coeff, order },
                        }
                    }
                }
            }
        };
        classes.push(class);
    }
    classes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::poly_of;
    use crate::parser::parse_system;

    fn classes(text: &str) -> Vec<MonomialClass> {
        let sys = parse_system(text).unwrap();
        classify_poly(&poly_of(sys.rhs()))
    }

    #[test]
    fn first_order_feedback_terms_are_linear() {
        let cs = classes("y = a*D[y,1] + b*x");
        assert_eq!(cs.len(), 2);
        assert!(matches!(
            &cs[0],
            MonomialClass::LinearInY { order: 1, .. }
        ));
        assert!(matches!(
            &cs[1],
            MonomialClass::LinearInX { order: 0, .. }
        ));
    }

    #[test]
    fn offsets_and_nonlinearities_are_flagged() {
        let cs = classes("y = a*x + b");
        assert!(matches!(&cs[1], MonomialClass::ConstantOffset(_)));
        let cs = classes("y = sq(x)");
        assert!(matches!(&cs[0], MonomialClass::NonlinearTerm(_)));
        let cs = classes("y = x*y");
        assert!(matches!(&cs[0], MonomialClass::NonlinearTerm(_)));
        let cs = classes("y = sin(x)");
        assert!(matches!(&cs[0], MonomialClass::NonlinearTerm(_)));
    }

    #[test]
    fn time_varying_gain_is_distinguished() {
        let cs = classes("y = t*x");
        assert!(matches!(&cs[0], MonomialClass::TimeVaryingCoeff(_)));
        // sin of a parameter is a legitimate constant coefficient
        let cs = classes("y = sin(a)*x");
        assert!(matches!(&cs[0], MonomialClass::LinearInX { order: 0, .. }));
        // sin of time is not
        let cs = classes("y = sin(t)*x");
        assert!(matches!(&cs[0], MonomialClass::TimeVaryingCoeff(_)));
    }

    #[test]
    fn integrals_lower_the_order() {
        let cs = classes("y = I[x] + D[y,2]");
        assert!(matches!(
            &cs[0],
            MonomialClass::LinearInY { order: 2, .. }
        ));
        assert!(matches!(
            &cs[1],
            MonomialClass::LinearInX { order: -1, .. }
        ));
    }

    #[test]
    fn coefficients_exclude_signals() {
        let cs = classes("y = 3*a*b*D[x,1]");
        match &cs[0] {
            MonomialClass::LinearInX { coeff, order: 1 } => {
                assert!(!coeff.mentions_any_signal());
                assert_eq!(coeff.to_string(), "3*a*b");
            }
            other => panic!("unexpected class {other:?}"),
        }
    }
}
