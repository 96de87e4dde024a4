//! Text DSL for system definitions.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! system := "y" "=" expr
//! expr   := ["-"] term { ("+" | "-") term }
//! term   := factor { ("*" | "/") factor }
//! factor := NUMBER | PARAM | "t" | "x" | "y"
//!         | "D[" ("x" | "y") "," INT "]"      derivative of a signal
//!         | "I[" ("x" | "y") "]"              integral of a signal from 0 to t
//!         | FUNC "(" expr ")"
//!         | "(" expr ")"
//! PARAM  := lowercase identifier other than t, x, y
//! FUNC   := "sin" | "exp" | "abs" | "sq"
//! NUMBER := integer or decimal literal (converted to an exact rational),
//!           optionally followed by "/" INT for an exact fraction
//! ```
//!
//! `y` may appear on the right-hand side (feedback); `x` may not appear on
//! the left. Decimal literals become exact rationals (`0.5` is `1/2`).
//! [`format_system`] emits canonical text: normalized term order, fractions
//! for non-integer rationals, and `a/b` for symbolic quotients, so
//! `parse(format(s))` reproduces `s` exactly.

use std::fmt;

use num::rational::BigRational;
use num::ToPrimitive;
use thiserror::Error;

use crate::expr::{Func, SignalExpr, SignalKind};
use crate::rational::parse_number_literal;
use crate::system::SystemDef;

/// Syntax error with the byte offset of the first offending token.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "expected {} at offset {}, found {}",
            self.expected, self.position, self.found
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    UpperD,
    UpperI,
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Equals,
    End,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    start: usize,
    text: String,
}

fn lex(input: &str) -> Result<Vec<Spanned>, ParseError> {
    let bytes = input.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let (tok, len) = match b {
            b'+' => (Tok::Plus, 1),
            b'-' => (Tok::Minus, 1),
            b'*' => (Tok::Star, 1),
            b'/' => (Tok::Slash, 1),
            b'(' => (Tok::LParen, 1),
            b')' => (Tok::RParen, 1),
            b'[' => (Tok::LBracket, 1),
            b']' => (Tok::RBracket, 1),
            b',' => (Tok::Comma, 1),
            b'=' => (Tok::Equals, 1),
            b'D' => (Tok::UpperD, 1),
            b'I' => (Tok::UpperI, 1),
            b'0'..=b'9' => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                if j < bytes.len() && bytes[j] == b'.' {
                    let k = j + 1;
                    if k >= bytes.len() || !bytes[k].is_ascii_digit() {
                        return Err(ParseError {
                            position: j,
                            expected: "digit after decimal point".into(),
                            found: "`.`".into(),
                        });
                    }
                    j = k;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                }
                let text = &input[i..j];
                let value = parse_number_literal(text).ok_or_else(|| ParseError {
                    position: i,
                    expected: "number literal".into(),
                    found: format!("`{text}`"),
                })?;
                (Tok::Num(value), j - i)
            }
            b'a'..=b'z' => {
                let mut j = i;
                while j < bytes.len()
                    && (bytes[j].is_ascii_lowercase()
                        || bytes[j].is_ascii_digit()
                        || bytes[j] == b'_')
                {
                    j += 1;
                }
                (Tok::Ident(input[i..j].to_string()), j - i)
            }
            other => {
                return Err(ParseError {
                    position: i,
                    expected: "a term".into(),
                    found: format!("`{}`", other as char),
                })
            }
        };
        let len = match &tok {
            Tok::Num(_) | Tok::Ident(_) => len,
            _ => len,
        };
        toks.push(Spanned {
            tok,
            start,
            text: input[start..start + len].to_string(),
        });
        i = start + len;
    }
    toks.push(Spanned {
        tok: Tok::End,
        start: input.len(),
        text: "end of input".to_string(),
    });
    Ok(toks)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: impl Into<String>) -> ParseError {
        let here = self.peek();
        let found = match &here.tok {
            Tok::End => "end of input".to_string(),
            _ => format!("`{}`", here.text),
        };
        ParseError {
            position: here.start,
            expected: expected.into(),
            found,
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Spanned, ParseError> {
        if self.peek().tok == tok {
            Ok(self.bump())
        } else {
            Err(self.error(what))
        }
    }

    fn parse_expr(&mut self) -> Result<SignalExpr, ParseError> {
        let mut terms = Vec::new();
        let leading_minus = if self.peek().tok == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let first = self.parse_term()?;
        terms.push(if leading_minus { -first } else { first });
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    terms.push(self.parse_term()?);
                }
                Tok::Minus => {
                    self.bump();
                    terms.push(-self.parse_term()?);
                }
                _ => break,
            }
        }
        Ok(SignalExpr::sum(terms))
    }

    fn parse_term(&mut self) -> Result<SignalExpr, ParseError> {
        let mut factors = vec![self.parse_factor()?];
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.bump();
                    factors.push(self.parse_factor()?);
                }
                Tok::Slash => {
                    self.bump();
                    let at = self.peek().start;
                    let divisor = self.parse_factor()?;
                    if divisor.is_zero() {
                        return Err(ParseError {
                            position: at,
                            expected: "nonzero divisor".into(),
                            found: "`0`".into(),
                        });
                    }
                    factors.push(SignalExpr::recip(divisor));
                }
                _ => break,
            }
        }
        Ok(SignalExpr::product(factors))
    }

    fn parse_signal_letter(&mut self) -> Result<SignalKind, ParseError> {
        match &self.peek().tok {
            Tok::Ident(name) if name == "x" => {
                self.bump();
                Ok(SignalKind::Input)
            }
            Tok::Ident(name) if name == "y" => {
                self.bump();
                Ok(SignalKind::Output)
            }
            _ => Err(self.error("signal `x` or `y`")),
        }
    }

    fn parse_factor(&mut self) -> Result<SignalExpr, ParseError> {
        match self.peek().tok.clone() {
            Tok::Num(value) => {
                self.bump();
                Ok(SignalExpr::Const(value))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.parse_expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::UpperD => {
                self.bump();
                self.expect(Tok::LBracket, "`[`")?;
                let kind = self.parse_signal_letter()?;
                self.expect(Tok::Comma, "`,`")?;
                let at = self.peek().start;
                let order = match &self.peek().tok {
                    Tok::Num(value) if value.is_integer() && value.to_integer() > 0.into() => {
                        let order = value.to_integer().to_u32().ok_or_else(|| ParseError {
                            position: at,
                            expected: "derivative order within range".into(),
                            found: format!("`{value}`"),
                        })?;
                        self.bump();
                        order
                    }
                    _ => return Err(self.error("positive integer derivative order")),
                };
                self.expect(Tok::RBracket, "`]`")?;
                Ok(SignalExpr::deriv(SignalExpr::signal(kind), order))
            }
            Tok::UpperI => {
                self.bump();
                self.expect(Tok::LBracket, "`[`")?;
                let kind = self.parse_signal_letter()?;
                self.expect(Tok::RBracket, "`]`")?;
                Ok(SignalExpr::integ(SignalExpr::signal(kind)))
            }
            Tok::Ident(name) => {
                if name == "t" {
                    self.bump();
                    return Ok(SignalExpr::Time);
                }
                if name == "x" || name == "y" {
                    self.bump();
                    return Ok(SignalExpr::signal(if name == "x" {
                        SignalKind::Input
                    } else {
                        SignalKind::Output
                    }));
                }
                // Identifier followed by "(" must be a known function name;
                // otherwise it is a parameter.
                if self.toks[self.pos + 1].tok == Tok::LParen {
                    let func = Func::from_name(&name)
                        .ok_or_else(|| self.error("function name (sin, exp, abs, sq)"))?;
                    self.bump();
                    self.bump(); // "("
                    let arg = self.parse_expr()?;
                    self.expect(Tok::RParen, "`)`")?;
                    return Ok(SignalExpr::apply(func, arg));
                }
                self.bump();
                Ok(SignalExpr::param(name))
            }
            _ => Err(self.error("a term")),
        }
    }
}

/// Parse a full definition `y = <expr>` into a [`SystemDef`] with a
/// normalized right-hand side.
pub fn parse_system(text: &str) -> Result<SystemDef, ParseError> {
    let toks = lex(text)?;
    let mut parser = Parser { toks, pos: 0 };
    match &parser.peek().tok {
        Tok::Ident(name) if name == "y" => {
            parser.bump();
        }
        _ => return Err(parser.error("`y` on the left-hand side")),
    }
    parser.expect(Tok::Equals, "`=`")?;
    let rhs = parser.parse_expr()?;
    if parser.peek().tok != Tok::End {
        return Err(parser.error("end of input"));
    }
    Ok(SystemDef::new(rhs, text))
}

/// Canonical DSL text for a definition. `parse_system(format_system(s))`
/// reproduces the normalized right-hand side of `s` exactly.
pub fn format_system(sys: &SystemDef) -> String {
    format!("y = {}", sys.rhs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::expr_equal;

    fn rhs(text: &str) -> SignalExpr {
        parse_system(text).unwrap().rhs().clone()
    }

    #[test]
    fn parses_first_order_feedback_system() {
        let sys = parse_system("y = a*D[y,1] + b*x").unwrap();
        assert!(sys.has_feedback());
        let expected = SignalExpr::param("a") * SignalExpr::deriv(SignalExpr::output(), 1)
            + SignalExpr::param("b") * SignalExpr::input();
        assert!(expr_equal(sys.rhs(), &expected));
    }

    #[test]
    fn parses_affine_system_without_feedback() {
        let sys = parse_system("y = a*x + b").unwrap();
        assert!(!sys.has_feedback());
        let expected = SignalExpr::param("a") * SignalExpr::input() + SignalExpr::param("b");
        assert!(expr_equal(sys.rhs(), &expected));
    }

    #[test]
    fn parses_integral_feedback() {
        let sys = parse_system("y = D[y,1] + I[x]").unwrap();
        assert!(sys.has_feedback());
        let expected = SignalExpr::deriv(SignalExpr::output(), 1)
            + SignalExpr::integ(SignalExpr::input());
        assert!(expr_equal(sys.rhs(), &expected));
    }

    #[test]
    fn decimals_become_exact_rationals() {
        assert!(expr_equal(
            &rhs("y = 0.5*y + x"),
            &(SignalExpr::ratio(1, 2) * SignalExpr::output() + SignalExpr::input())
        ));
    }

    #[test]
    fn leading_minus_and_fractions_parse() {
        let sys = parse_system("y = -D[y,2] + D[y,1] - D[x,1]").unwrap();
        assert!(sys.has_feedback());
        assert!(expr_equal(
            &rhs("y = 1/2*x"),
            &(SignalExpr::ratio(1, 2) * SignalExpr::input())
        ));
        assert!(expr_equal(
            &rhs("y = b*x/(1 - a)"),
            &(SignalExpr::param("b")
                * SignalExpr::input()
                * SignalExpr::recip(SignalExpr::one() - SignalExpr::param("a")))
        ));
    }

    #[test]
    fn format_is_canonical_and_reparses() {
        let sys = parse_system("y = b*x + a*D[y,1]").unwrap();
        assert_eq!(format_system(&sys), "y = a*D[y,1] + b*x");
        let sys2 = parse_system("y = 0").unwrap();
        assert_eq!(format_system(&sys2), "y = 0");
        let sys3 = parse_system("y = a*x").unwrap();
        assert_eq!(format_system(&sys3), "y = a*x");
    }

    #[test]
    fn parse_format_parse_is_a_fixed_point() {
        for text in [
            "y = D[y,1] + x + a",
            "y = a*D[y,1] + b*x",
            "y = 0.5*y + x",
            "y = -D[y,2] + D[y,1] - D[x,1]",
            "y = t*x",
            "y = sq(x)",
            "y = D[y,1] + I[y] + x",
        ] {
            let first = parse_system(text).unwrap();
            let rendered = format_system(&first);
            let second = parse_system(&rendered).unwrap();
            assert_eq!(first.rhs(), second.rhs(), "not a fixed point: {text}");
            assert_eq!(rendered, format_system(&second));
        }
    }

    #[test]
    fn error_positions_point_at_first_offending_token() {
        let table: &[(&str, usize)] = &[
            ("", 0),          // empty input: expected y
            ("x = y", 0),     // x may not define the left side
            ("y", 1),         // missing =
            ("y =", 3),       // missing expression
            ("y = ", 4),      // missing expression (after space)
            ("y = )", 4),     // stray paren
            ("y = a +", 7),   // dangling operator
            ("y = D[t,1]", 6),  // derivative of non-signal
            ("y = D[x,0]", 8),  // zero order
            ("y = D[x,a]", 8),  // symbolic order
            ("y = q(x)", 4),  // unknown function
            ("y = 2..5", 5),  // malformed number: no digit after the dot
            ("y = x/0", 6),   // division by literal zero
            ("y = x y", 6),   // trailing garbage
            ("y = Q", 4),     // uppercase garbage
        ];
        for (text, want) in table {
            let err = parse_system(text).unwrap_err();
            assert_eq!(err.position, *want, "position for {text:?}: {err}");
            assert!(err.position <= text.len() + 1);
        }
    }

    #[test]
    fn y_allowed_on_right_but_not_left() {
        assert!(parse_system("y = y + x").is_ok());
        assert!(parse_system("x = y").is_err());
    }

    #[test]
    fn identifiers_with_digits_are_parameters() {
        let sys = parse_system("y = k2*x").unwrap();
        assert!(expr_equal(
            sys.rhs(),
            &(SignalExpr::param("k2") * SignalExpr::input())
        ));
    }
}
