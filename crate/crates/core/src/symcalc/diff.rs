use num_traits::One;

use super::simplify::simplify;
use super::CalcError;
use crate::expr::{Expr, Func, Node};

/// Exact derivative of a delta-free expression with respect to `var`, simplified.
///
/// Derivatives of harmonic atoms in their own angle symbols are refused: the
/// angular action goes through the eigenrelation in
/// [`apply_operator`](super::apply_operator).
pub fn differentiate(e: &Expr, var: &str) -> Result<Expr, CalcError> {
    Ok(simplify(&derive(e, var)?))
}

pub(crate) fn derive(e: &Expr, var: &str) -> Result<Expr, CalcError> {
    if !e.depends_on(var) {
        if e.contains_delta() {
            return Err(CalcError::DeltaInSmoothContext);
        }
        return Ok(Expr::zero());
    }
    Ok(match e.node() {
        Node::Scalar(_) => Expr::zero(),
        Node::Symbol(s) => {
            if s == var {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Node::Sum(terms) => Expr::sum(
            terms
                .iter()
                .map(|t| derive(t, var))
                .collect::<Result<Vec<_>, _>>()?,
        ),
        Node::Product(factors) => {
            let mut terms = Vec::new();
            for (i, f) in factors.iter().enumerate() {
                let df = derive(f, var)?;
                if df.is_zero() {
                    continue;
                }
                let mut parts: Vec<Expr> = factors.clone();
                parts[i] = df;
                terms.push(Expr::product(parts));
            }
            Expr::sum(terms)
        }
        Node::Power(base, p) => {
            let db = derive(base, var)?;
            let lowered = base.pow(p - num_rational::BigRational::one())?;
            Expr::product([Expr::rational(p.clone()), lowered, db])
        }
        Node::Apply(func, arg) => {
            let du = derive(arg, var)?;
            let outer = match func {
                Func::Exp => e.clone(),
                Func::Sin => Expr::apply(Func::Cos, arg.clone()),
                Func::Cos => -Expr::apply(Func::Sin, arg.clone()),
                Func::Log => arg.recip()?,
            };
            outer * du
        }
        Node::RealPart(arg) => Expr::re(derive(arg, var)?),
        Node::Delta { .. } => return Err(CalcError::DeltaInSmoothContext),
        Node::SphHarmonic { l, m, .. } => {
            return Err(CalcError::UnsupportedDerivative(format!(
                "d/d{var} of Y({l},{m}); angular derivatives act through the eigenrelation"
            )))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expr;

    fn p(s: &str) -> Expr {
        parse_expr(s).unwrap()
    }

    #[test]
    fn power_rule_on_general_solution() {
        assert_eq!(differentiate(&p("c1 + c2/r"), "r").unwrap(), p("-c2/r^2"));
    }

    #[test]
    fn harmonic_time_factor() {
        let d = differentiate(&p("Re(Y(1,0)*(1 + exp(i*w*t)))"), "t").unwrap();
        assert_eq!(d, p("Re(Y(1,0)*i*w*exp(i*w*t))"));
    }

    #[test]
    fn product_rule() {
        let d = differentiate(&p("exp(-r)*r"), "r").unwrap();
        assert_eq!(d, p("exp(-r) - r*exp(-r)"));
    }

    #[test]
    fn chain_rule_and_functions() {
        assert_eq!(differentiate(&p("sin(x^2)"), "x").unwrap(), p("2*x*cos(x^2)"));
        assert_eq!(differentiate(&p("log(x)"), "x").unwrap(), p("1/x"));
        assert_eq!(differentiate(&p("cos(3*x)"), "x").unwrap(), p("-3*sin(3*x)"));
        assert_eq!(differentiate(&p("x^(1/2)"), "x").unwrap(), p("1/2/x^(1/2)"));
        assert_eq!(differentiate(&p("y*pi"), "x").unwrap(), Expr::zero());
    }

    #[test]
    fn refuses_deltas_and_angular_derivatives() {
        assert_eq!(
            differentiate(&p("delta(r - 1)/r"), "r"),
            Err(CalcError::DeltaInSmoothContext)
        );
        assert_eq!(
            differentiate(&p("delta(x - 1)"), "r"),
            Err(CalcError::DeltaInSmoothContext)
        );
        assert!(matches!(
            differentiate(&p("Y(1,0)*t"), "theta"),
            Err(CalcError::UnsupportedDerivative(_))
        ));
        assert_eq!(differentiate(&p("Y(1,0)*t"), "t").unwrap(), p("Y(1,0)"));
    }
}
