//! Zero-order feedback elimination.
//!
//! When the output appears on the right-hand side only as a bare term
//! `c*y`, the feedback is algebraic: `y = c*y + X` solves to
//! `y = X / (1 - c)`. Derivatives or integrals of `y` make this an actual
//! differential equation and are rejected.

use thiserror::Error;

use crate::expr::{poly_of, Poly, SignalExpr, SignalKind};
use crate::system::SystemDef;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum UnrollError {
    /// `y` occurs under a derivative, an integral, or inside a nonlinear
    /// term; solving for `y` would require more than algebra.
    #[error("output appears beyond zeroth order; feedback cannot be unrolled algebraically")]
    NotZeroOrder,
    /// The bare-`y` coefficient is exactly 1, so `1 - c` vanishes.
    #[error("feedback coefficient is exactly 1; the definition does not determine y")]
    SingularUnroll,
}

/// Rewrite `y = c*y + X` (with `y`-free `c` and `X`) as the feedback-free
/// `y = X/(1-c)`. Rational coefficients divide exactly; symbolic ones stay
/// a formal quotient.
pub fn unroll_zero_order(sys: &SystemDef) -> Result<SystemDef, UnrollError> {
    let poly = poly_of(sys.rhs());
    let mut y_coeff = Poly::zero();
    let mut input_side = Poly::zero();
    for (atoms, coeff) in poly.iter() {
        let mut bare_y = 0usize;
        let mut rest: Vec<SignalExpr> = Vec::new();
        for atom in atoms {
            match atom {
                SignalExpr::Signal(r) if r.kind == SignalKind::Output && r.is_plain() => {
                    bare_y += 1;
                }
                other if other.mentions_signal(SignalKind::Output) => {
                    return Err(UnrollError::NotZeroOrder);
                }
                other => rest.push(other.clone()),
            }
        }
        match bare_y {
            0 => input_side.add_assign(Poly::term(rest, coeff.clone())),
            1 => y_coeff.add_assign(Poly::term(rest, coeff.clone())),
            _ => return Err(UnrollError::NotZeroOrder), // y*y and friends
        }
    }

    // denominator 1 - c
    let mut denom = Poly::one();
    denom.add_assign(y_coeff.neg());
    if denom.is_zero() {
        return Err(UnrollError::SingularUnroll);
    }
    let factor = poly_of(&SignalExpr::recip(denom.into_expr()));
    let unrolled = input_side.mul(&factor);
    Ok(SystemDef::from_rhs(unrolled.into_expr()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::expr_equal;
    use crate::parser::{format_system, parse_system};

    #[test]
    fn symbolic_unroll_matches_the_quotient_formula() {
        let sys = parse_system("y = a*y + b*x").unwrap();
        let unrolled = unroll_zero_order(&sys).unwrap();
        assert!(!unrolled.has_feedback());
        let expected = parse_system("y = b*x/(1 - a)").unwrap();
        assert!(expr_equal(unrolled.rhs(), expected.rhs()));
        assert_eq!(format_system(&unrolled), "y = b*x/(1 - a)");
    }

    #[test]
    fn rational_coefficients_divide_exactly() {
        let sys = parse_system("y = 0.5*y + x").unwrap();
        let unrolled = unroll_zero_order(&sys).unwrap();
        assert_eq!(format_system(&unrolled), "y = 2*x");
        assert!(expr_equal(
            unrolled.rhs(),
            parse_system("y = 2*x").unwrap().rhs()
        ));
    }

    #[test]
    fn differential_feedback_is_rejected() {
        let sys = parse_system("y = a*D[y,1] + b*x").unwrap();
        assert_eq!(unroll_zero_order(&sys), Err(UnrollError::NotZeroOrder));
        let sys = parse_system("y = I[y] + x").unwrap();
        assert_eq!(unroll_zero_order(&sys), Err(UnrollError::NotZeroOrder));
        let sys = parse_system("y = y*y + x").unwrap();
        assert_eq!(unroll_zero_order(&sys), Err(UnrollError::NotZeroOrder));
    }

    #[test]
    fn unit_coefficient_is_singular() {
        let sys = parse_system("y = y + x").unwrap();
        assert_eq!(unroll_zero_order(&sys), Err(UnrollError::SingularUnroll));
        // 0.5*y + 0.5*y accumulates to exactly 1 as well
        let sys = parse_system("y = 0.5*y + 0.5*y + x").unwrap();
        assert_eq!(unroll_zero_order(&sys), Err(UnrollError::SingularUnroll));
    }

    #[test]
    fn feedback_free_systems_pass_through() {
        let sys = parse_system("y = a*x + b").unwrap();
        let unrolled = unroll_zero_order(&sys).unwrap();
        assert!(expr_equal(unrolled.rhs(), sys.rhs()));
    }
}
