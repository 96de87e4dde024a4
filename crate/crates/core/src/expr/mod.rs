//! Symbolic expression trees over signals, time, and named parameters.
//!
//! [`SignalExpr`] is the value every other layer works with. Constants are
//! exact rationals, parameters stay symbolic, and the only signal atoms are
//! the system input `x` and output `y` (plus the tagged copies `x1, x2, y1,
//! y2` and time-shifted variants used when derivation traces are generated).
//!
//! All values are immutable; every operation here is a pure function, so
//! expressions can be shared and moved across threads freely.

mod calculus;
mod normalize;

pub use calculus::{differentiate, substitute, CalculusError};
pub(crate) use calculus::{retag_signals, shift_signals, substitute_raw, substitute_time};
pub use normalize::{expr_equal, normalize};
pub(crate) use normalize::{poly_of, Poly};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::rational::{format_rational, rat_int};

/// Which of the two signals an atom refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SignalKind {
    /// The system input, written `x`.
    Input,
    /// The system output, written `y`.
    Output,
}

impl SignalKind {
    pub fn letter(self) -> char {
        match self {
            SignalKind::Input => 'x',
            SignalKind::Output => 'y',
        }
    }
}

/// Distinguishes the plain signal from the numbered copies that appear in
/// superposition derivations (`x1`, `x2`, `y1`, `y2`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SignalTag {
    Plain,
    One,
    Two,
}

/// A single signal occurrence. `shifted` marks the time-shifted variant
/// `x(t+delta)` used by shift-equivariance derivations; parsed systems only
/// ever contain plain, unshifted references.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignalRef {
    pub kind: SignalKind,
    pub tag: SignalTag,
    pub shifted: bool,
}

impl SignalRef {
    pub fn plain(kind: SignalKind) -> Self {
        SignalRef {
            kind,
            tag: SignalTag::Plain,
            shifted: false,
        }
    }

    pub fn tagged(kind: SignalKind, tag: SignalTag) -> Self {
        SignalRef {
            kind,
            tag,
            shifted: false,
        }
    }

    pub fn is_plain(&self) -> bool {
        self.tag == SignalTag::Plain && !self.shifted
    }
}

impl fmt::Display for SignalRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.letter())?;
        match self.tag {
            SignalTag::Plain => {}
            SignalTag::One => write!(f, "1")?,
            SignalTag::Two => write!(f, "2")?,
        }
        if self.shifted {
            write!(f, "(t+delta)")?;
        }
        Ok(())
    }
}

/// Nonlinear function heads. These are representable so the analyzer can
/// reject them; only `sq` (squaring) is expanded symbolically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Sin,
    Exp,
    Abs,
    Sq,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Exp => "exp",
            Func::Abs => "abs",
            Func::Sq => "sq",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        match name {
            "sin" => Some(Func::Sin),
            "exp" => Some(Func::Exp),
            "abs" => Some(Func::Abs),
            "sq" => Some(Func::Sq),
            _ => None,
        }
    }
}

/// Symbolic expression over signals, time, and parameters.
///
/// Invariants maintained by [`normalize`]:
/// * `Deriv` orders are positive;
/// * `Sum` / `Product` have at least two children and are never nested
///   directly inside the same node kind;
/// * constants are exact rationals and are folded.
///
/// The variant declaration order doubles as the canonical atom ordering used
/// for deterministic term layout, so equality after normalization is plain
/// structural equality.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SignalExpr {
    Const(BigRational),
    Param(String),
    /// The time variable `t`.
    Time,
    Signal(SignalRef),
    /// k-th time derivative of the child.
    Deriv(Box<SignalExpr>, u32),
    /// Definite integral of the child from 0 to `t`.
    Integ(Box<SignalExpr>),
    /// Multiplicative inverse; appears when feedback is unrolled or a
    /// canonical form is scaled by a symbolic leading coefficient.
    Recip(Box<SignalExpr>),
    Apply(Func, Box<SignalExpr>),
    Sum(Vec<SignalExpr>),
    Product(Vec<SignalExpr>),
}

impl SignalExpr {
    pub fn int(v: i64) -> Self {
        SignalExpr::Const(rat_int(v))
    }

    pub fn ratio(numer: i64, denom: i64) -> Self {
        SignalExpr::Const(crate::rational::rat(numer, denom))
    }

    pub fn zero() -> Self {
        SignalExpr::Const(BigRational::zero())
    }

    pub fn one() -> Self {
        SignalExpr::Const(BigRational::one())
    }

    pub fn param(name: impl Into<String>) -> Self {
        SignalExpr::Param(name.into())
    }

    /// The plain input signal `x`.
    pub fn input() -> Self {
        SignalExpr::Signal(SignalRef::plain(SignalKind::Input))
    }

    /// The plain output signal `y`.
    pub fn output() -> Self {
        SignalExpr::Signal(SignalRef::plain(SignalKind::Output))
    }

    pub fn signal(kind: SignalKind) -> Self {
        SignalExpr::Signal(SignalRef::plain(kind))
    }

    pub fn deriv(child: SignalExpr, order: u32) -> Self {
        assert!(order >= 1, "derivative order must be positive");
        SignalExpr::Deriv(Box::new(child), order)
    }

    pub fn integ(child: SignalExpr) -> Self {
        SignalExpr::Integ(Box::new(child))
    }

    pub fn recip(child: SignalExpr) -> Self {
        SignalExpr::Recip(Box::new(child))
    }

    pub fn apply(func: Func, child: SignalExpr) -> Self {
        SignalExpr::Apply(func, Box::new(child))
    }

    /// Sum with the arity invariant restored (0 children -> 0, 1 -> itself).
    pub fn sum(mut items: Vec<SignalExpr>) -> Self {
        match items.len() {
            0 => SignalExpr::zero(),
            1 => items.pop().unwrap(),
            _ => SignalExpr::Sum(items),
        }
    }

    /// Product with the arity invariant restored.
    pub fn product(mut items: Vec<SignalExpr>) -> Self {
        match items.len() {
            0 => SignalExpr::one(),
            1 => items.pop().unwrap(),
            _ => SignalExpr::Product(items),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, SignalExpr::Const(c) if c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, SignalExpr::Const(c) if c.is_one())
    }

    pub fn as_const(&self) -> Option<&BigRational> {
        match self {
            SignalExpr::Const(c) => Some(c),
            _ => None,
        }
    }

    /// Does any node satisfy the predicate?
    pub fn any_node(&self, pred: &mut impl FnMut(&SignalExpr) -> bool) -> bool {
        if pred(self) {
            return true;
        }
        match self {
            SignalExpr::Const(_)
            | SignalExpr::Param(_)
            | SignalExpr::Time
            | SignalExpr::Signal(_) => false,
            SignalExpr::Deriv(c, _)
            | SignalExpr::Integ(c)
            | SignalExpr::Recip(c)
            | SignalExpr::Apply(_, c) => c.any_node(pred),
            SignalExpr::Sum(items) | SignalExpr::Product(items) => {
                items.iter().any(|e| e.any_node(pred))
            }
        }
    }

    pub fn mentions_signal(&self, kind: SignalKind) -> bool {
        self.any_node(&mut |e| matches!(e, SignalExpr::Signal(r) if r.kind == kind))
    }

    pub fn mentions_any_signal(&self) -> bool {
        self.any_node(&mut |e| matches!(e, SignalExpr::Signal(_)))
    }

    pub fn mentions_time(&self) -> bool {
        self.any_node(&mut |e| matches!(e, SignalExpr::Time))
    }

    pub fn contains_integral(&self) -> bool {
        self.any_node(&mut |e| matches!(e, SignalExpr::Integ(_)))
    }

    /// Signal-free and time-free: constant along any trajectory.
    pub fn is_time_invariant_constant(&self) -> bool {
        !self.mentions_any_signal() && !self.mentions_time()
    }
}

impl Add for SignalExpr {
    type Output = SignalExpr;
    fn add(self, rhs: SignalExpr) -> SignalExpr {
        SignalExpr::Sum(vec![self, rhs])
    }
}

impl Sub for SignalExpr {
    type Output = SignalExpr;
    fn sub(self, rhs: SignalExpr) -> SignalExpr {
        SignalExpr::Sum(vec![self, -rhs])
    }
}

impl Mul for SignalExpr {
    type Output = SignalExpr;
    fn mul(self, rhs: SignalExpr) -> SignalExpr {
        SignalExpr::Product(vec![self, rhs])
    }
}

impl Neg for SignalExpr {
    type Output = SignalExpr;
    fn neg(self) -> SignalExpr {
        SignalExpr::Product(vec![SignalExpr::int(-1), self])
    }
}

// ---------------------------------------------------------------------------
// Rendering. The canonical text emitted here doubles as the DSL syntax, so
// the parser and Display stay in lockstep (round-trip tests pin this).
// ---------------------------------------------------------------------------

/// True when the expression renders as a single token and never needs parens.
fn is_atomic_token(e: &SignalExpr) -> bool {
    match e {
        SignalExpr::Param(_) | SignalExpr::Time | SignalExpr::Signal(_) => true,
        SignalExpr::Const(c) => !c.is_negative(),
        SignalExpr::Deriv(_, _) | SignalExpr::Integ(_) | SignalExpr::Apply(_, _) => true,
        _ => false,
    }
}

fn fmt_factor(e: &SignalExpr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if is_atomic_token(e) {
        write!(f, "{e}")
    } else {
        write!(f, "({e})")
    }
}

/// Factor list rendering: reciprocal factors come last as divisions.
fn fmt_product(items: &[SignalExpr], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let (recips, direct): (Vec<_>, Vec<_>) = items
        .iter()
        .partition(|e| matches!(e, SignalExpr::Recip(_)));
    let mut wrote = false;
    for item in &direct {
        if wrote {
            write!(f, "*")?;
        }
        fmt_factor(item, f)?;
        wrote = true;
    }
    if !wrote {
        write!(f, "1")?;
    }
    for item in &recips {
        if let SignalExpr::Recip(den) = item {
            write!(f, "/")?;
            fmt_factor(den, f)?;
        }
    }
    Ok(())
}

/// Splits a term into (is_negative, magnitude-factors) for sum layout.
fn term_sign(e: &SignalExpr) -> (bool, SignalExpr) {
    match e {
        SignalExpr::Const(c) if c.is_negative() => (true, SignalExpr::Const(-c.clone())),
        SignalExpr::Product(items) => {
            if let Some(SignalExpr::Const(c)) = items.first() {
                if c.is_negative() {
                    let mut rest = items.clone();
                    let mag = -c.clone();
                    if mag.is_one() && rest.len() > 1 {
                        rest.remove(0);
                    } else {
                        rest[0] = SignalExpr::Const(mag);
                    }
                    return (true, SignalExpr::product(rest));
                }
            }
            (false, e.clone())
        }
        _ => (false, e.clone()),
    }
}

impl fmt::Display for SignalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignalExpr::Const(c) => write!(f, "{}", format_rational(c)),
            SignalExpr::Param(name) => write!(f, "{name}"),
            SignalExpr::Time => write!(f, "t"),
            SignalExpr::Signal(r) => write!(f, "{r}"),
            SignalExpr::Deriv(child, order) => write!(f, "D[{child},{order}]"),
            SignalExpr::Integ(child) => write!(f, "I[{child}]"),
            SignalExpr::Recip(child) => {
                write!(f, "1/")?;
                fmt_factor(child, f)
            }
            SignalExpr::Apply(func, child) => write!(f, "{}({child})", func.name()),
            SignalExpr::Sum(items) => {
                for (i, item) in items.iter().enumerate() {
                    let (neg, mag) = term_sign(item);
                    if i == 0 {
                        if neg {
                            write!(f, "-")?;
                        }
                    } else if neg {
                        write!(f, " - ")?;
                    } else {
                        write!(f, " + ")?;
                    }
                    if matches!(mag, SignalExpr::Sum(_)) {
                        write!(f, "({mag})")?;
                    } else {
                        write!(f, "{mag}")?;
                    }
                }
                Ok(())
            }
            SignalExpr::Product(items) => {
                if let Some(SignalExpr::Const(c)) = items.first() {
                    if c.is_negative() {
                        write!(f, "-")?;
                        let mag = -c.clone();
                        let mut rest = items.clone();
                        if mag.is_one() && rest.len() > 1 {
                            rest.remove(0);
                        } else {
                            rest[0] = SignalExpr::Const(mag);
                        }
                        return fmt_product(&rest, f);
                    }
                }
                fmt_product(items, f)
            }
        }
    }
}
