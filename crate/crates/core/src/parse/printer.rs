use num_traits::{One, Signed};

use crate::expr::{Expr, Node, Rational, Scalar};

const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const UNARY: u8 = 3;
const POWER: u8 = 4;
const ATOM: u8 = 5;

/// Prints `e` in the text syntax with minimal parentheses.
///
/// The output reparses to an equal expression, except for float scalars and
/// harmonic atoms in non-default angle symbols, which have no surface syntax.
pub fn print_expr(e: &Expr) -> String {
    render(e).0
}

fn wrap(e: &Expr, min: u8) -> String {
    let (s, prec) = render(e);
    if prec < min {
        format!("({s})")
    } else {
        s
    }
}

fn rational_text(r: &Rational) -> (String, u8) {
    let s = if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    };
    let prec = if !r.is_integer() || r.is_negative() {
        PRODUCT
    } else {
        ATOM
    };
    (s, prec)
}

fn exponent_text(p: &Rational) -> String {
    if p.is_integer() && !p.is_negative() {
        format!("^{}", p.numer())
    } else if p.is_integer() {
        format!("^({})", p.numer())
    } else {
        format!("^({}/{})", p.numer(), p.denom())
    }
}

fn render(e: &Expr) -> (String, u8) {
    match e.node() {
        Node::Scalar(Scalar::Rational(r)) => rational_text(r),
        Node::Scalar(s @ Scalar::Float(f)) => (s.to_string(), if f.0 < 0.0 { PRODUCT } else { ATOM }),
        Node::Scalar(s) => (s.to_string(), ATOM),
        Node::Symbol(s) => (s.clone(), ATOM),
        Node::Sum(terms) => {
            let mut out = render(&terms[0]).0;
            for t in &terms[1..] {
                match negated(t) {
                    Some(pos) => {
                        out.push_str(" - ");
                        out.push_str(&wrap(&pos, PRODUCT));
                    }
                    None => {
                        out.push_str(" + ");
                        out.push_str(&wrap(t, PRODUCT));
                    }
                }
            }
            (out, SUM)
        }
        Node::Product(factors) => render_product(factors),
        Node::Power(base, p) => {
            if p.is_negative() {
                let pos = Expr::build(Node::Power(base.clone(), -p.clone()))
                    .expect("positive power of a valid base");
                (format!("1/{}", wrap(&pos, UNARY)), PRODUCT)
            } else {
                (format!("{}{}", wrap(base, ATOM), exponent_text(p)), POWER)
            }
        }
        Node::Apply(f, arg) => (format!("{}({})", f.name(), render(arg).0), ATOM),
        Node::RealPart(arg) => (format!("Re({})", render(arg).0), ATOM),
        Node::Delta { arg, order } => {
            let head = match order {
                0..=2 => format!("delta{}", "'".repeat(*order as usize)),
                k => format!("delta^({k})"),
            };
            (format!("{head}({})", render(arg).0), ATOM)
        }
        Node::SphHarmonic { l, m, .. } => (format!("Y({l},{m})"), ATOM),
    }
}

/// For a term that prints with a leading minus, the term with that sign removed.
fn negated(t: &Expr) -> Option<Expr> {
    let negative = match t.node() {
        Node::Scalar(s) => s.is_negative(),
        Node::Product(xs) => xs[0].as_rational().is_some_and(|r| r.is_negative()),
        _ => false,
    };
    negative.then(|| -t.clone())
}

fn render_product(factors: &[Expr]) -> (String, u8) {
    let (coef, rest) = match factors[0].as_rational() {
        Some(r) => (r.clone(), &factors[1..]),
        None => (Rational::one(), factors),
    };
    let mut numer = Vec::new();
    let mut denom = Vec::new();
    for f in rest {
        match f.node() {
            Node::Power(b, p) if p.is_negative() => denom.push(
                Expr::build(Node::Power(b.clone(), -p.clone())).expect("valid base"),
            ),
            _ => numer.push(f),
        }
    }
    let mut out = String::new();
    if coef.is_negative() {
        out.push('-');
    }
    let mag = coef.numer().abs();
    let mut parts = Vec::new();
    if !mag.is_one() || numer.is_empty() {
        parts.push(mag.to_string());
    }
    parts.extend(numer.iter().map(|f| wrap(f, UNARY)));
    out.push_str(&parts.join("*"));
    if !coef.denom().is_one() {
        out.push('/');
        out.push_str(&coef.denom().to_string());
    }
    for d in &denom {
        out.push('/');
        out.push_str(&wrap(d, UNARY));
    }
    (out, PRODUCT)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::rational;
    use crate::parse::parse_expr;

    #[test]
    fn rational_exponent() {
        let e = Expr::symbol("r").pow(rational(3, 2).unwrap()).unwrap();
        assert_eq!(print_expr(&e), "r^(3/2)");
    }

    #[test]
    fn signs_and_denominators() {
        for src in [
            "x - y",
            "-x",
            "-3/4*x/r",
            "1/r",
            "x/r^2",
            "x/(a + b)",
            "(-2)^(1/2)",
            "(3/4)^(1/2)",
            "1/r^(3/2)",
            "x - (a + b)*y",
            "2*x - 3",
            "Re(Y(1,0)*i*w*exp(i*w*t))",
            "(x^2)^(1/2)",
            "1/(a*b)",
            "-(a + b)",
        ] {
            let e = parse_expr(src).unwrap();
            let printed = print_expr(&e);
            let back = parse_expr(&printed).unwrap_or_else(|err| panic!("{printed}: {err}"));
            assert_eq!(back, e, "{src} -> {printed}");
        }
        assert_eq!(print_expr(&parse_expr("x - y").unwrap()), "x - y");
        assert_eq!(print_expr(&parse_expr("y*x/2").unwrap()), "x*y/2");
    }
}
