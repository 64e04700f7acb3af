use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::expr::{int, rational_as_i64, Expr, Func, NamedConstant, Node, Rational, Scalar};

const MAX_PASSES: usize = 64;

/// Rewrites to a fixpoint: like terms collected, rational scalars folded, equal
/// bases merged into powers, `x^0 -> 1`, zero annihilation, trivial function values.
pub fn simplify(e: &Expr) -> Expr {
    let mut cur = e.clone();
    for _ in 0..MAX_PASSES {
        let next = pass(&cur);
        if next == cur {
            break;
        }
        cur = next;
    }
    cur
}

/// Distributes products over sums, then simplifies.
pub fn expand(e: &Expr) -> Expr {
    simplify(&distribute(&simplify(e)))
}

fn distribute(e: &Expr) -> Expr {
    let kids: Vec<Expr> = e.children().into_iter().map(distribute).collect();
    let e = if kids.is_empty() {
        e.clone()
    } else {
        e.with_children(kids).unwrap_or_else(|_| e.clone())
    };
    match e.node() {
        Node::Product(factors) => {
            let mut acc: Vec<Expr> = vec![Expr::one()];
            for f in factors {
                let alts: Vec<Expr> = match f.node() {
                    Node::Sum(ts) => ts.clone(),
                    _ => vec![f.clone()],
                };
                acc = acc
                    .iter()
                    .flat_map(|a| alts.iter().map(move |b| a.clone() * b.clone()))
                    .collect();
            }
            Expr::sum(acc)
        }
        Node::RealPart(arg) => match arg.node() {
            Node::Sum(ts) => Expr::sum(ts.iter().map(|t| Expr::re(t.clone()))),
            _ => e.clone(),
        },
        _ => e,
    }
}

fn pass(e: &Expr) -> Expr {
    match e.node() {
        Node::Scalar(_) | Node::Symbol(_) | Node::SphHarmonic { .. } => e.clone(),
        Node::Sum(terms) => collect_terms(Expr::sum(terms.iter().map(pass))),
        Node::Product(factors) => combine_factors(Expr::product(factors.iter().map(pass))),
        Node::Power(base, p) => power(pass(base), p.clone()).unwrap_or_else(|| e.clone()),
        Node::Apply(f, arg) => apply(*f, pass(arg)),
        Node::RealPart(arg) => real_part(pass(arg)),
        Node::Delta { arg, order } => {
            Expr::delta(pass(arg), *order).unwrap_or_else(|_| e.clone())
        }
    }
}

fn collect_terms(sum: Expr) -> Expr {
    let Node::Sum(terms) = sum.node() else {
        return sum;
    };
    let mut like: BTreeMap<Expr, Rational> = BTreeMap::new();
    for t in terms {
        let (c, key) = t.split_coefficient();
        *like.entry(key).or_insert_with(Rational::zero) += c;
    }
    Expr::sum(
        like.into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| Expr::rational(c) * k),
    )
}

fn combine_factors(prod: Expr) -> Expr {
    let Node::Product(factors) = prod.node() else {
        return prod;
    };
    let mut coef = Rational::one();
    let mut bases: BTreeMap<Expr, Rational> = BTreeMap::new();
    for f in factors {
        match f.node() {
            Node::Scalar(Scalar::Rational(r)) => coef *= r,
            Node::Power(b, p) => *bases.entry(b.clone()).or_insert_with(Rational::zero) += p,
            _ => *bases.entry(f.clone()).or_insert_with(Rational::zero) += Rational::one(),
        }
    }
    if coef.is_zero() {
        return Expr::zero();
    }
    let mut out = vec![Expr::rational(coef)];
    for (b, p) in bases {
        if p.is_zero() {
            continue;
        }
        out.push(power(b, p).expect("non-rational base"));
    }
    Expr::product(out)
}

/// `None` only for a zero base with a negative exponent.
fn power(base: Expr, p: Rational) -> Option<Expr> {
    if p.is_zero() {
        return Some(Expr::one());
    }
    if let Some(n) = rational_as_i64(&p) {
        match base.node() {
            Node::Scalar(Scalar::Constant(NamedConstant::I)) => {
                let i = Expr::constant(NamedConstant::I);
                return Some(match n.rem_euclid(4) {
                    0 => Expr::one(),
                    1 => i,
                    2 => Expr::int(-1),
                    _ => -i,
                });
            }
            Node::Product(factors) => {
                let parts = factors
                    .iter()
                    .map(|f| power(f.clone(), int(n)))
                    .collect::<Option<Vec<_>>>()?;
                return Some(combine_factors(Expr::product(parts)));
            }
            Node::Power(inner, q) => return power(inner.clone(), q * &p),
            _ => {}
        }
    }
    base.pow(p).ok()
}

fn apply(f: Func, arg: Expr) -> Expr {
    if arg.is_zero() {
        match f {
            Func::Exp | Func::Cos => return Expr::one(),
            Func::Sin => return Expr::zero(),
            Func::Log => {}
        }
    }
    if f == Func::Log && arg.is_one() {
        return Expr::zero();
    }
    Expr::apply(f, arg)
}

fn real_part(arg: Expr) -> Expr {
    if !arg.contains_imaginary() {
        return arg;
    }
    match arg.node() {
        Node::RealPart(_) => arg,
        Node::Sum(terms) => Expr::sum(terms.iter().map(|t| real_part(t.clone()))),
        Node::Product(_) => {
            let (c, rest) = arg.split_coefficient();
            if c.is_one() {
                Expr::re(arg)
            } else {
                Expr::rational(c) * real_part(rest)
            }
        }
        _ => Expr::re(arg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expr;

    fn p(s: &str) -> Expr {
        parse_expr(s).unwrap()
    }

    #[test]
    fn cancels_eigenvalue_terms() {
        let e = p("(1/r^2)*(-(1*(1+1)))*Y(1,0) + 2*Y(1,0)/r^2");
        assert_eq!(simplify(&e), Expr::zero());
    }

    #[test]
    fn like_terms() {
        assert_eq!(simplify(&p("x + -x + y")), p("y"));
        assert_eq!(simplify(&p("x + 2*x")), p("3*x"));
        assert_eq!(simplify(&p("x*x*x^(1/2)")), p("x^(5/2)"));
        assert_eq!(simplify(&p("x/x")), Expr::one());
        assert_eq!(simplify(&p("0*exp(x)")), Expr::zero());
        assert_eq!(simplify(&p("x^0 + exp(0) + log(1)")), p("2"));
        assert_eq!(simplify(&p("i*i")), p("-1"));
        assert_eq!(simplify(&p("i^3")), p("-i"));
        assert_eq!(simplify(&p("(2*x)^2")), p("4*x^2"));
        assert_eq!(simplify(&p("Re(3*x)")), p("3*x"));
    }

    #[test]
    fn time_factor_folds_at_bound_time() {
        let e = p("Re(Y(1,0)*(1+exp(i*w*t)))");
        let at_zero = e.substitute(&Expr::symbol("t"), &Expr::zero()).unwrap();
        assert_eq!(simplify(&at_zero), p("2*Y(1,0)"));
    }

    #[test]
    fn idempotent() {
        for s in [
            "x*y + y*x - 2*x*y + Re(i*exp(i*t))",
            "(a + b)*(a - b)",
            "exp(-r)*r^2*(1/r)",
        ] {
            let once = simplify(&p(s));
            assert_eq!(simplify(&once), once, "{s}");
        }
    }

    #[test]
    fn expansion() {
        assert_eq!(expand(&p("(a + b)*(a - b)")), p("a^2 - b^2"));
        assert_eq!(expand(&p("1/r_n*(r_n^2*d2 + 2*r_n*d1)")), p("r_n*d2 + 2*d1"));
    }
}
