//! Time differentiation and signal substitution.

use num::rational::BigRational;
use num::One;
use thiserror::Error;

use super::normalize::{normalize, poly_of, Poly};
use super::{SignalExpr, SignalKind, SignalRef, SignalTag};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CalculusError {
    /// Differentiating through a nonlinear function head (`sin`, `exp`,
    /// `abs`) of a time- or signal-dependent argument is out of scope.
    #[error("cannot differentiate through `{0}`")]
    UnsupportedDifferentiation(String),
}

/// Time derivative of the whole expression, in normal form.
///
/// Rules: `D[sig,k] -> D[sig,k+1]`, `I[e] -> e`, constants and parameters
/// vanish, `t -> 1`, and products of time-varying factors expand by the
/// product rule. A function head applied to a time- or signal-dependent
/// argument cannot be differentiated and reports
/// [`CalculusError::UnsupportedDifferentiation`]; note the argument only
/// has to be *reached* — `I[sin(x)]` differentiates fine (to `sin(x)`).
pub fn differentiate(expr: &SignalExpr) -> Result<SignalExpr, CalculusError> {
    Ok(differentiate_poly(&poly_of(expr))?.into_expr())
}

fn differentiate_poly(p: &Poly) -> Result<Poly, CalculusError> {
    let mut out = Poly::zero();
    for (atoms, coeff) in p.iter() {
        let varying: Vec<usize> = atoms
            .iter()
            .enumerate()
            .filter(|(_, a)| a.mentions_any_signal() || a.mentions_time())
            .map(|(i, _)| i)
            .collect();
        // Product rule over the time-varying factors; time-constant factors
        // ride along untouched.
        for &index in &varying {
            let datom = deriv_atom(&atoms[index])?;
            let rest: Vec<SignalExpr> = atoms
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != index)
                .map(|(_, a)| a.clone())
                .collect();
            out.add_assign(Poly::term(rest, coeff.clone()).mul(&datom));
        }
    }
    Ok(out)
}

fn deriv_atom(atom: &SignalExpr) -> Result<Poly, CalculusError> {
    match atom {
        SignalExpr::Time => Ok(Poly::one()),
        SignalExpr::Signal(r) => Ok(Poly::atom(SignalExpr::Deriv(
            Box::new(SignalExpr::Signal(*r)),
            1,
        ))),
        SignalExpr::Deriv(child, order) => Ok(poly_of(&SignalExpr::Deriv(
            child.clone(),
            order + 1,
        ))),
        SignalExpr::Integ(child) => Ok(poly_of(child)),
        SignalExpr::Recip(child) => {
            // d/dt (1/e) = -e' / e^2
            let de = differentiate_poly(&poly_of(child))?;
            let recip = Poly::atom(SignalExpr::Recip(child.clone()));
            let mut out = de.mul(&recip).mul(&recip);
            out.scale(&-BigRational::one());
            Ok(out)
        }
        SignalExpr::Apply(func, child) => Err(CalculusError::UnsupportedDifferentiation(
            format!("{}({child})", func.name()),
        )),
        // Atoms are never sums, products, or constants.
        other => Ok(Poly::atom(other.clone())),
    }
}

fn rewrite(expr: &SignalExpr, subst: &impl Fn(&SignalExpr) -> Option<SignalExpr>) -> SignalExpr {
    if let Some(replaced) = subst(expr) {
        return replaced;
    }
    match expr {
        SignalExpr::Const(_)
        | SignalExpr::Param(_)
        | SignalExpr::Time
        | SignalExpr::Signal(_) => expr.clone(),
        SignalExpr::Deriv(child, order) => {
            SignalExpr::Deriv(Box::new(rewrite(child, subst)), *order)
        }
        SignalExpr::Integ(child) => SignalExpr::Integ(Box::new(rewrite(child, subst))),
        SignalExpr::Recip(child) => SignalExpr::Recip(Box::new(rewrite(child, subst))),
        SignalExpr::Apply(func, child) => {
            SignalExpr::Apply(*func, Box::new(rewrite(child, subst)))
        }
        SignalExpr::Sum(items) => {
            SignalExpr::Sum(items.iter().map(|e| rewrite(e, subst)).collect())
        }
        SignalExpr::Product(items) => {
            SignalExpr::Product(items.iter().map(|e| rewrite(e, subst)).collect())
        }
    }
}

/// Replace every plain occurrence of `target` (including under `D`/`I`) by
/// `replacement` and normalize. When the replacement is a linear combination
/// of signal atoms the derivative / integral operators distribute over it
/// during normalization; otherwise the substitution stays syntactic.
pub fn substitute(
    expr: &SignalExpr,
    target: SignalKind,
    replacement: &SignalExpr,
) -> SignalExpr {
    normalize(&substitute_raw(expr, target, replacement))
}

/// Substitution without the trailing normalization; derivation traces use
/// this to show the mechanically substituted form before expansion.
pub(crate) fn substitute_raw(
    expr: &SignalExpr,
    target: SignalKind,
    replacement: &SignalExpr,
) -> SignalExpr {
    rewrite(expr, &|e| match e {
        SignalExpr::Signal(r) if r.kind == target && r.is_plain() => Some(replacement.clone()),
        _ => None,
    })
}

/// Re-tag every plain signal (`x -> x1`, `y -> y1`, ...), used when naming
/// the two hypothesized solutions of a superposition derivation.
pub(crate) fn retag_signals(expr: &SignalExpr, tag: SignalTag) -> SignalExpr {
    rewrite(expr, &|e| match e {
        SignalExpr::Signal(r) if r.is_plain() => Some(SignalExpr::Signal(SignalRef {
            kind: r.kind,
            tag,
            shifted: false,
        })),
        _ => None,
    })
}

/// Mark every signal occurrence as evaluated at `t + delta`.
pub(crate) fn shift_signals(expr: &SignalExpr) -> SignalExpr {
    rewrite(expr, &|e| match e {
        SignalExpr::Signal(r) if !r.shifted => Some(SignalExpr::Signal(SignalRef {
            shifted: true,
            ..*r
        })),
        _ => None,
    })
}

/// Replace the time variable itself (coefficient occurrences of `t`), e.g.
/// with `t + delta` when checking shift equivariance.
pub(crate) fn substitute_time(expr: &SignalExpr, replacement: &SignalExpr) -> SignalExpr {
    rewrite(expr, &|e| match e {
        SignalExpr::Time => Some(replacement.clone()),
        _ => None,
    })
}
