//! Normalization to a canonical sum-of-monomials form.
//!
//! Every expression is rewritten as a polynomial over *atoms* — signal
//! references, parameters, `t`, and opaque derivative / integral /
//! reciprocal / function nodes — with exact rational coefficients. Products
//! distribute over sums, constants fold, like monomials combine, and both
//! factor lists and term lists are sorted by the structural ordering on
//! [`SignalExpr`], so the output is deterministic and normalization is
//! idempotent.
//!
//! Derivative and integral nodes are pushed through the linear structure
//! (sums and time-constant factors). `D[.,k]` additionally merges nested
//! derivatives and collapses a derivative of an integral one order at a
//! time; anything that would require the product rule or differentiating a
//! nonlinear function head is kept as an opaque atom. Those stronger (and
//! fallible) rewrites belong to [`differentiate`](super::differentiate).

use std::collections::BTreeMap;

use num::rational::BigRational;
use num::{One, Signed, Zero};

use super::{Func, SignalExpr};

/// A monomial is the sorted list of non-constant atomic factors.
pub(crate) type Monomial = Vec<SignalExpr>;

/// Polynomial over atoms with rational coefficients. Zero-coefficient terms
/// are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn constant(c: BigRational) -> Poly {
        let mut p = Poly::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn one() -> Poly {
        Poly::constant(BigRational::one())
    }

    pub fn atom(a: SignalExpr) -> Poly {
        let mut p = Poly::zero();
        p.add_term(vec![a], BigRational::one());
        p
    }

    pub fn term(atoms: Monomial, coeff: BigRational) -> Poly {
        let mut p = Poly::zero();
        p.add_term(atoms, coeff);
        p
    }

    pub fn add_term(&mut self, mut atoms: Monomial, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        atoms.sort();
        let entry = self.terms.entry(atoms).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            // Re-fetch key: remove cancelled term.
            let dead: Vec<Monomial> = self
                .terms
                .iter()
                .filter(|(_, c)| c.is_zero())
                .map(|(m, _)| m.clone())
                .collect();
            for key in dead {
                self.terms.remove(&key);
            }
        }
    }

    pub fn add_assign(&mut self, other: Poly) {
        for (atoms, coeff) in other.terms {
            self.add_term(atoms, coeff);
        }
    }

    pub fn scale(&mut self, c: &BigRational) {
        if c.is_zero() {
            self.terms.clear();
            return;
        }
        for coeff in self.terms.values_mut() {
            *coeff *= c;
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (la, lc) in &self.terms {
            for (ra, rc) in &other.terms {
                let mut atoms = la.clone();
                atoms.extend(ra.iter().cloned());
                out.add_term(atoms, lc * rc);
            }
        }
        out
    }

    pub fn neg(mut self) -> Poly {
        for coeff in self.terms.values_mut() {
            *coeff = -coeff.clone();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (atoms, coeff) = self.terms.iter().next().unwrap();
                atoms.is_empty().then(|| coeff.clone())
            }
            _ => None,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn single_term(&self) -> Option<(&Monomial, &BigRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Rebuild one monomial as an expression.
    pub fn term_expr(atoms: &[SignalExpr], coeff: &BigRational) -> SignalExpr {
        if atoms.is_empty() {
            return SignalExpr::Const(coeff.clone());
        }
        if coeff.is_one() {
            return SignalExpr::product(atoms.to_vec());
        }
        let mut factors = Vec::with_capacity(atoms.len() + 1);
        factors.push(SignalExpr::Const(coeff.clone()));
        factors.extend(atoms.iter().cloned());
        SignalExpr::Product(factors)
    }

    /// Canonical expression: terms in map order (constant term first, then
    /// lexicographic on the sorted factor lists).
    pub fn into_expr(self) -> SignalExpr {
        let terms: Vec<SignalExpr> = self
            .terms
            .iter()
            .map(|(atoms, coeff)| Poly::term_expr(atoms, coeff))
            .collect();
        SignalExpr::sum(terms)
    }
}

/// An atom "varies along a trajectory" when it mentions a signal or `t`.
/// Everything else (parameters, nested constants) commutes with `D` and `I`.
fn is_varying(atom: &SignalExpr) -> bool {
    atom.mentions_any_signal() || atom.mentions_time()
}

pub(crate) fn poly_of(expr: &SignalExpr) -> Poly {
    match expr {
        SignalExpr::Const(c) => Poly::constant(c.clone()),
        SignalExpr::Param(_) | SignalExpr::Time | SignalExpr::Signal(_) => {
            Poly::atom(expr.clone())
        }
        SignalExpr::Sum(items) => {
            let mut out = Poly::zero();
            for item in items {
                out.add_assign(poly_of(item));
            }
            out
        }
        SignalExpr::Product(items) => {
            let mut out = Poly::one();
            for item in items {
                out = out.mul(&poly_of(item));
            }
            out
        }
        SignalExpr::Deriv(child, order) => push_deriv(poly_of(child), *order),
        SignalExpr::Integ(child) => push_integ(poly_of(child)),
        SignalExpr::Recip(child) => push_recip(poly_of(child)),
        SignalExpr::Apply(func, child) => push_apply(*func, poly_of(child)),
    }
}

/// `D[.,k]` applied to a normalized polynomial, total (never errors):
/// linear structure distributes, nested derivatives merge, derivatives of
/// integrals collapse, and anything needing the product rule or a function
/// derivative stays opaque.
fn push_deriv(p: Poly, order: u32) -> Poly {
    debug_assert!(order >= 1);
    let mut out = Poly::zero();
    for (atoms, coeff) in p.iter() {
        let (constant, varying): (Vec<_>, Vec<_>) =
            atoms.iter().cloned().partition(|a| !is_varying(a));
        match varying.len() {
            0 => {} // derivative of a constant term
            1 => {
                let inner = deriv_of_atom(varying.into_iter().next().unwrap(), order);
                out.add_assign(Poly::term(constant, coeff.clone()).mul(&inner));
            }
            _ => {
                let opaque = SignalExpr::Deriv(Box::new(SignalExpr::product(varying)), order);
                let mut atoms = constant;
                atoms.push(opaque);
                out.add_term(atoms, coeff.clone());
            }
        }
    }
    out
}

fn deriv_of_atom(atom: SignalExpr, order: u32) -> Poly {
    match atom {
        SignalExpr::Signal(r) => Poly::atom(SignalExpr::Deriv(
            Box::new(SignalExpr::Signal(r)),
            order,
        )),
        SignalExpr::Deriv(child, inner_order) => {
            // D^k(D^j e) = D^{k+j} e; re-dispatch so the merged node still
            // pushes through whatever structure the child offers.
            push_deriv(poly_of(&child), order + inner_order)
        }
        SignalExpr::Integ(child) => {
            if order == 1 {
                poly_of(&child)
            } else {
                push_deriv(poly_of(&child), order - 1)
            }
        }
        SignalExpr::Time => {
            if order == 1 {
                Poly::one()
            } else {
                Poly::zero()
            }
        }
        other => Poly::atom(SignalExpr::Deriv(Box::new(other), order)),
    }
}

/// Integration from 0 to `t`, pushed through linear structure. An integral
/// of a pure constant term folds to `c*t`; everything else stays an atom
/// (there is no boundary-term bookkeeping here, so `I[D[y,1]]` must not
/// collapse to `y`).
fn push_integ(p: Poly) -> Poly {
    let mut out = Poly::zero();
    for (atoms, coeff) in p.iter() {
        let (constant, varying): (Vec<_>, Vec<_>) =
            atoms.iter().cloned().partition(|a| !is_varying(a));
        let mut atoms = constant;
        match varying.len() {
            0 => atoms.push(SignalExpr::Time),
            1 => atoms.push(SignalExpr::Integ(Box::new(
                varying.into_iter().next().unwrap(),
            ))),
            _ => atoms.push(SignalExpr::Integ(Box::new(SignalExpr::product(varying)))),
        }
        out.add_term(atoms, coeff.clone());
    }
    out
}

fn push_recip(p: Poly) -> Poly {
    if let Some(c) = p.as_constant() {
        if !c.is_zero() {
            return Poly::constant(c.recip());
        }
        // 1/0 from hand-built trees: keep it inert rather than panic.
        return Poly::atom(SignalExpr::recip(SignalExpr::zero()));
    }
    if let Some((atoms, coeff)) = p.single_term() {
        // 1/(c * f1 * f2 ...) = (1/c) * (1/f1) * (1/f2) ...; a reciprocal
        // factor unwraps back to whatever it was hiding.
        let mut out = Poly::constant(coeff.recip());
        for atom in atoms {
            match atom {
                SignalExpr::Recip(inner) => out = out.mul(&poly_of(inner)),
                other => out = out.mul(&Poly::atom(SignalExpr::recip(other.clone()))),
            }
        }
        return out;
    }
    Poly::atom(SignalExpr::recip(p.into_expr()))
}

fn push_apply(func: Func, p: Poly) -> Poly {
    if func == Func::Sq {
        return p.mul(&p);
    }
    if let Some(c) = p.as_constant() {
        match func {
            Func::Abs => return Poly::constant(c.abs()),
            Func::Sin if c.is_zero() => return Poly::zero(),
            Func::Exp if c.is_zero() => return Poly::one(),
            _ => {}
        }
    }
    Poly::atom(SignalExpr::apply(func, p.into_expr()))
}

/// Canonical form: flattened sum of products, constants folded, like terms
/// combined, deterministic ordering. Idempotent.
pub fn normalize(expr: &SignalExpr) -> SignalExpr {
    poly_of(expr).into_expr()
}

/// Structural equality of normal forms. An equivalence relation on the
/// expressions reachable through this crate's constructors.
pub fn expr_equal(lhs: &SignalExpr, rhs: &SignalExpr) -> bool {
    poly_of(lhs) == poly_of(rhs)
}

#[cfg(test)]
mod tests {
    use super::super::{SignalExpr, SignalKind};
    use super::*;

    fn a() -> SignalExpr {
        SignalExpr::param("a")
    }
    fn b() -> SignalExpr {
        SignalExpr::param("b")
    }
    fn x() -> SignalExpr {
        SignalExpr::input()
    }
    fn y() -> SignalExpr {
        SignalExpr::output()
    }

    #[test]
    fn like_terms_combine() {
        // a*x + a*x -> 2*a*x
        let e = a() * x() + a() * x();
        let expected = SignalExpr::int(2) * a() * x();
        assert!(expr_equal(&normalize(&e), &expected));
        assert_eq!(normalize(&e).to_string(), "2*a*x");
    }

    #[test]
    fn products_distribute_over_sums() {
        // a*(x + y) -> a*x + a*y
        let e = a() * (x() + y());
        assert_eq!(normalize(&e).to_string(), "a*x + a*y");
    }

    #[test]
    fn constants_fold_inside_context() {
        // a*(3 + 4) + b -> 7*a + b
        let e = a() * (SignalExpr::int(3) + SignalExpr::int(4)) + b();
        assert_eq!(normalize(&e).to_string(), "7*a + b");
    }

    #[test]
    fn collected_coefficients_match_distributed_form() {
        let lhs = a() * x() + b() * x();
        let rhs = (a() + b()) * x();
        assert!(expr_equal(&lhs, &rhs));
    }

    #[test]
    fn unequal_offsets_stay_unequal() {
        let lhs = SignalExpr::int(7) * a() + b();
        let rhs = SignalExpr::int(7) * a() + SignalExpr::int(2) * b();
        assert!(!expr_equal(&lhs, &rhs));
    }

    #[test]
    fn derivative_pushes_through_linear_structure() {
        // D[a*x + 2*y, 1] -> a*D[x,1] + 2*D[y,1]
        let e = SignalExpr::deriv(a() * x() + SignalExpr::int(2) * y(), 1);
        assert_eq!(normalize(&e).to_string(), "a*D[x,1] + 2*D[y,1]");
    }

    #[test]
    fn nested_derivatives_merge() {
        let e = SignalExpr::deriv(SignalExpr::deriv(x(), 1), 2);
        assert_eq!(normalize(&e), SignalExpr::deriv(x(), 3));
    }

    #[test]
    fn derivative_of_integral_collapses() {
        let e = SignalExpr::deriv(SignalExpr::integ(x()), 1);
        assert_eq!(normalize(&e), x());
        let e2 = SignalExpr::deriv(SignalExpr::integ(SignalExpr::integ(y())), 3);
        assert_eq!(normalize(&e2), SignalExpr::deriv(y(), 1));
    }

    #[test]
    fn integral_of_derivative_stays_opaque() {
        let e = SignalExpr::integ(SignalExpr::deriv(y(), 1));
        assert_eq!(normalize(&e), e);
    }

    #[test]
    fn integral_of_constant_grows_linearly() {
        let e = SignalExpr::integ(a());
        assert_eq!(normalize(&e).to_string(), "a*t");
        assert!(normalize(&SignalExpr::integ(SignalExpr::zero())).is_zero());
    }

    #[test]
    fn product_rule_cases_stay_opaque_in_normalize() {
        let e = SignalExpr::deriv(SignalExpr::Time * x(), 1);
        let n = normalize(&e);
        assert_eq!(n.to_string(), "D[t*x,1]");
        // Idempotent even on the opaque atom.
        assert_eq!(normalize(&n), n);
    }

    #[test]
    fn squares_expand_exactly() {
        let e = SignalExpr::apply(Func::Sq, x() + SignalExpr::one());
        assert_eq!(normalize(&e).to_string(), "1 + 2*x + x*x");
        assert!(expr_equal(
            &SignalExpr::apply(Func::Sq, x()),
            &(x() * x())
        ));
    }

    #[test]
    fn reciprocal_folding() {
        assert_eq!(
            normalize(&SignalExpr::recip(SignalExpr::ratio(1, 2))),
            SignalExpr::int(2)
        );
        let q = SignalExpr::recip(SignalExpr::recip(a()));
        assert_eq!(normalize(&q), a());
        let sym = SignalExpr::recip(SignalExpr::one() - a());
        assert_eq!(normalize(&sym).to_string(), "1/(1 - a)");
    }

    #[test]
    fn zero_substituted_operators_vanish() {
        let e = SignalExpr::deriv(SignalExpr::zero(), 1) + SignalExpr::integ(SignalExpr::zero());
        assert!(normalize(&e).is_zero());
    }

    #[test]
    fn signals_of_different_kind_do_not_merge() {
        assert!(!expr_equal(&x(), &y()));
        assert!(!expr_equal(
            &SignalExpr::deriv(x(), 1),
            &SignalExpr::deriv(x(), 2)
        ));
        assert!(!expr_equal(&SignalExpr::integ(x()), &x()));
    }

    #[test]
    fn term_order_is_deterministic() {
        let e1 = b() * x() + a() * SignalExpr::deriv(y(), 1);
        let e2 = a() * SignalExpr::deriv(y(), 1) + b() * x();
        assert_eq!(normalize(&e1), normalize(&e2));
        assert_eq!(normalize(&e1).to_string(), "a*D[y,1] + b*x");
    }

    #[test]
    fn mentions_helpers_respect_kinds() {
        let e = SignalExpr::integ(SignalExpr::signal(SignalKind::Output));
        assert!(e.mentions_signal(SignalKind::Output));
        assert!(!e.mentions_signal(SignalKind::Input));
    }
}
