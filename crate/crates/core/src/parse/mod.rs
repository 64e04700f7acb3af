//! Text syntax for expressions.
//!
//! ```text
//! expr    := term (("+"|"-") term)* ;
//! term    := factor (("*"|"/") factor)* ;
//! factor  := "-" factor | atom ("^" "(" rational ")" | "^" integer)? ;
//! atom    := number | ident | call | "(" expr ")" ;
//! call    := ("exp"|"sin"|"cos"|"log"|"Re") "(" expr ")"
//!          | "delta" "'"* "(" expr ")" | "delta" "^" "(" integer ")" "(" expr ")"
//!          | "Y" "(" integer "," integer ")" ;
//! number  := integer ("/" positive-integer)? ;
//! ```
//!
//! Outside of an exponent a literal `p/q` is read as a division, which folds to the
//! same rational. Implicit multiplication is not accepted.

mod lexer;
mod printer;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::expr::{Expr, ExprError, Func, NamedConstant, Node, Rational, DEFAULT_PHI, DEFAULT_THETA};
use lexer::{Tok, Token};

pub use printer::print_expr;

/// Byte range `[start, end)` into the parsed input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        SourceSpan { start, end }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
    pub expected: Vec<String>,
}

impl ParseError {
    fn new(span: SourceSpan, message: impl Into<String>, expected: Vec<String>) -> Self {
        ParseError {
            span,
            message: message.into(),
            expected,
        }
    }

    /// Multi-line rendering with a caret under the offending span.
    pub fn render(&self, input: &str) -> String {
        let width = (self.span.end - self.span.start).max(1);
        let pad = input[..self.span.start.min(input.len())].chars().count();
        format!("{input}\n{}{}\n{self}", " ".repeat(pad), "^".repeat(width))
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at offset {}: {}", self.span.start, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(" or "))?;
        }
        Ok(())
    }
}

const FUNCTIONS: [&str; 7] = ["exp", "sin", "cos", "log", "Re", "delta", "Y"];

pub fn parse_expr(input: &str) -> Result<Expr, ParseError> {
    let tokens = lexer::tokenize(input)?;
    let mut p = Parser { tokens, pos: 0 };
    let e = p.expr()?;
    let t = p.peek();
    if t.tok != Tok::Eof {
        let hint = if matches!(t.tok, Tok::Ident(_) | Tok::Int(_) | Tok::LParen) {
            " (implicit multiplication is not supported)"
        } else {
            ""
        };
        return Err(ParseError::new(
            t.span,
            format!("unexpected {}{hint}", t.tok.describe()),
            ["'+'", "'-'", "'*'", "'/'", "'^'", "end of input"]
                .map(String::from)
                .to_vec(),
        ));
    }
    Ok(e)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if &self.peek().tok == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<Token, ParseError> {
        if self.peek().tok == tok {
            return Ok(self.bump());
        }
        Err(self.unexpected(vec![tok.describe()]))
    }

    fn unexpected(&self, expected: Vec<String>) -> ParseError {
        let t = self.peek();
        ParseError::new(t.span, format!("unexpected {}", t.tok.describe()), expected)
    }

    fn node_error(&self, start: usize, err: ExprError) -> ParseError {
        let end = self.tokens[self.pos.saturating_sub(1)].span.end.max(start);
        ParseError::new(SourceSpan::new(start, end), err.to_string(), Vec::new())
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat(&Tok::Plus) {
                terms.push(self.term()?);
            } else if self.eat(&Tok::Minus) {
                terms.push(-self.term()?);
            } else {
                break;
            }
        }
        Ok(Expr::sum(terms))
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut factors = vec![self.factor()?];
        loop {
            if self.eat(&Tok::Star) {
                factors.push(self.factor()?);
            } else if self.peek().tok == Tok::Slash {
                let start = self.bump().span.start;
                let d = self.factor()?;
                factors.push(d.recip().map_err(|e| self.node_error(start, e))?);
            } else {
                break;
            }
        }
        Ok(Expr::product(factors))
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.eat(&Tok::Minus) {
            return Ok(-self.factor()?);
        }
        let start = self.peek().span.start;
        let base = self.atom()?;
        if !self.eat(&Tok::Caret) {
            return Ok(base);
        }
        let exp = if self.eat(&Tok::LParen) {
            let r = self.rational()?;
            self.expect(Tok::RParen)?;
            r
        } else {
            let neg = self.eat(&Tok::Minus);
            let n = self.integer()?;
            BigRational::from_integer(if neg { -n } else { n })
        };
        base.pow(exp).map_err(|e| self.node_error(start, e))
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        match &self.peek().tok {
            Tok::Int(s) => {
                let n: BigInt = s.parse().expect("lexer yields digits");
                self.bump();
                Ok(n)
            }
            _ => Err(self.unexpected(vec!["integer".into()])),
        }
    }

    fn signed_integer(&mut self) -> Result<BigInt, ParseError> {
        let neg = self.eat(&Tok::Minus);
        let n = self.integer()?;
        Ok(if neg { -n } else { n })
    }

    fn small_integer<T: TryFrom<i64>>(&mut self, signed: bool) -> Result<T, ParseError> {
        let span = self.peek().span;
        let n = if signed {
            self.signed_integer()?
        } else {
            self.integer()?
        };
        i64::try_from(n)
            .ok()
            .and_then(|v| T::try_from(v).ok())
            .ok_or_else(|| ParseError::new(span, "integer out of range", Vec::new()))
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        let p = self.signed_integer()?;
        if !self.eat(&Tok::Slash) {
            return Ok(BigRational::from_integer(p));
        }
        let span = self.peek().span;
        let q = self.integer()?;
        if q.is_zero() {
            return Err(ParseError::new(
                span,
                "zero denominator",
                vec!["positive integer".into()],
            ));
        }
        Ok(BigRational::new(p, q))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Int(_) => Ok(Expr::rational(BigRational::from_integer(self.integer()?))),
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                if FUNCTIONS.contains(&name.as_str()) {
                    return self.call(name, t.span);
                }
                if self.peek().tok == Tok::LParen {
                    return Err(ParseError::new(
                        t.span,
                        format!("unknown function '{name}'"),
                        FUNCTIONS.map(String::from).to_vec(),
                    ));
                }
                if let Some(c) = NamedConstant::from_name(name) {
                    return Ok(Expr::constant(c));
                }
                Expr::build(Node::Symbol(name.clone())).map_err(|e| self.node_error(t.span.start, e))
            }
            _ => Err(self.unexpected(vec![
                "integer".into(),
                "identifier".into(),
                "function call".into(),
                "'('".into(),
                "'-'".into(),
            ])),
        }
    }

    fn call(&mut self, name: &str, span: SourceSpan) -> Result<Expr, ParseError> {
        match name {
            "delta" => {
                let mut order: u32 = 0;
                if self.eat(&Tok::Caret) {
                    self.expect(Tok::LParen)?;
                    order = self.small_integer(false)?;
                    self.expect(Tok::RParen)?;
                } else {
                    while self.eat(&Tok::Prime) {
                        order += 1;
                    }
                }
                self.expect(Tok::LParen)?;
                let arg = self.expr()?;
                self.expect(Tok::RParen)?;
                Expr::delta(arg, order).map_err(|e| self.node_error(span.start, e))
            }
            "Y" => {
                self.expect(Tok::LParen)?;
                let l: u32 = self.small_integer(false)?;
                self.expect(Tok::Comma)?;
                let m: i32 = self.small_integer(true)?;
                self.expect(Tok::RParen)?;
                Expr::build(Node::SphHarmonic {
                    l,
                    m,
                    theta: DEFAULT_THETA.into(),
                    phi: DEFAULT_PHI.into(),
                })
                .map_err(|e| self.node_error(span.start, e))
            }
            _ => {
                self.expect(Tok::LParen)?;
                let arg = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(match name {
                    "exp" => Expr::apply(Func::Exp, arg),
                    "sin" => Expr::apply(Func::Sin, arg),
                    "cos" => Expr::apply(Func::Cos, arg),
                    "log" => Expr::apply(Func::Log, arg),
                    "Re" => Expr::re(arg),
                    _ => unreachable!("closed function set"),
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{int, rational};

    fn sym(s: &str) -> Expr {
        Expr::symbol(s)
    }

    #[test]
    fn general_euler_solution() {
        let e = parse_expr("c1 + c2/r").unwrap();
        let want = Expr::sum([sym("c1"), sym("c2") * sym("r").recip().unwrap()]);
        assert_eq!(e, want);
        assert_eq!(print_expr(&e), "c1 + c2/r");
    }

    #[test]
    fn orbit_sphere_radial_profile() {
        let e = parse_expr("delta(r - r_n)/r").unwrap();
        let d = Expr::delta(sym("r") - sym("r_n"), 0).unwrap();
        assert_eq!(e, d.clone() * sym("r").recip().unwrap());
        assert_eq!(e, parse_expr("delta(r - r_n)*r^(-1)").unwrap());
        assert_eq!(print_expr(&e), "delta(r - r_n)/r");
    }

    #[test]
    fn harmonic_charge_density_shape() {
        let e = parse_expr("Y(0,0) + Re(Y(1,0)*(1 + exp(i*w*t)))").unwrap();
        let i = Expr::constant(NamedConstant::I);
        let want = Expr::harmonic(0, 0).unwrap()
            + Expr::re(
                Expr::harmonic(1, 0).unwrap()
                    * (Expr::one() + Expr::exp(Expr::product([i, sym("w"), sym("t")]))),
            );
        assert_eq!(e, want);
    }

    #[test]
    fn dangling_operator_reports_offset() {
        let err = parse_expr("2 **").unwrap_err();
        assert_eq!(err.span.start, 2);
        let err = parse_expr("2 *").unwrap_err();
        assert_eq!(err.span.start, 3);
        assert_eq!(err.expected.len(), 5);
    }

    #[test]
    fn rejects_unknown_functions_and_implicit_products() {
        let err = parse_expr("foo(x)").unwrap_err();
        assert!(err.message.contains("unknown function"));
        assert_eq!(err.span, SourceSpan::new(0, 3));
        let err = parse_expr("2r").unwrap_err();
        assert_eq!(err.span.start, 1);
        assert!(err.message.contains("implicit"));
        assert!(parse_expr("exp + 1").is_err());
        assert!(parse_expr("Y(1,2)").unwrap_err().message.contains("|m| <= l"));
        assert!(parse_expr("x^(1/0)").is_err());
        assert!(parse_expr("1/0").is_err());
        assert!(parse_expr("x²").is_err());
    }

    #[test]
    fn precedence_and_associativity() {
        // power binds tighter than unary minus
        assert_eq!(
            parse_expr("-x^2").unwrap(),
            -sym("x").powi(2).unwrap()
        );
        assert_eq!(parse_expr("2 - 3 - 4").unwrap(), Expr::int(-5));
        assert_eq!(parse_expr("12/2/3").unwrap(), Expr::int(2));
        assert_eq!(parse_expr("3/4").unwrap(), Expr::rational(rational(3, 4).unwrap()));
        assert_eq!(
            parse_expr("r^(3/2)").unwrap(),
            sym("r").pow(rational(3, 2).unwrap()).unwrap()
        );
        assert_eq!(parse_expr(" ( x ) ").unwrap(), sym("x"));
        assert_eq!(parse_expr("x^-1").unwrap(), sym("x").pow(int(-1)).unwrap());
    }

    #[test]
    fn delta_derivative_notation() {
        let arg = sym("r") - sym("r_n");
        for (src, order) in [
            ("delta(r - r_n)", 0),
            ("delta'(r - r_n)", 1),
            ("delta''(r - r_n)", 2),
            ("delta'''(r - r_n)", 3),
            ("delta^(3)(r - r_n)", 3),
            ("delta^(7)(r - r_n)", 7),
        ] {
            assert_eq!(
                parse_expr(src).unwrap(),
                Expr::delta(arg.clone(), order).unwrap(),
                "{src}"
            );
        }
        assert_eq!(
            print_expr(&Expr::delta(arg.clone(), 1).unwrap()),
            "delta'(r - r_n)"
        );
        assert_eq!(
            print_expr(&Expr::delta(arg, 4).unwrap()),
            "delta^(4)(r - r_n)"
        );
        assert!(parse_expr("delta(r^2)").is_err());
    }

    #[test]
    fn reserved_constant_names() {
        assert_eq!(parse_expr("pi").unwrap(), Expr::constant(NamedConstant::Pi));
        assert_eq!(parse_expr("i").unwrap(), Expr::constant(NamedConstant::I));
        assert_eq!(
            parse_expr("hbar/m_e").unwrap(),
            Expr::constant(NamedConstant::ReducedPlanck)
                * Expr::constant(NamedConstant::ElectronMass).recip().unwrap()
        );
    }

    #[test]
    fn error_display_mentions_expected_tokens() {
        let err = parse_expr("(x + 1").unwrap_err();
        assert_eq!(err.span.start, 6);
        let shown = err.render("(x + 1");
        assert!(shown.contains("expected"));
        assert!(shown.lines().nth(1).unwrap().starts_with("      ^"));
    }
}
