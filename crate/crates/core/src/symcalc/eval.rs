use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Zero;

use super::harmonics::real_sph_harmonic;
use super::CalcError;
use crate::expr::{
    rational_as_i64, rational_to_f64, Expr, Func, NamedConstant, Node, PhysicalConstants, Scalar,
};

/// Numeric bindings for free symbols.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvalPoint {
    pub bindings: BTreeMap<String, f64>,
}

impl EvalPoint {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.bindings.insert(name.to_string(), value);
        self
    }

    pub fn set(&mut self, name: &str, value: f64) {
        self.bindings.insert(name.to_string(), value);
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.bindings.get(name).copied()
    }
}

impl<const N: usize> From<[(&str, f64); N]> for EvalPoint {
    fn from(pairs: [(&str, f64); N]) -> Self {
        let mut p = EvalPoint::new();
        for (k, v) in pairs {
            p.set(k, v);
        }
        p
    }
}

/// Evaluates a delta-free expression with the CODATA constant table.
pub fn eval_numeric(e: &Expr, at: &EvalPoint) -> Result<f64, CalcError> {
    eval_numeric_with(e, at, &PhysicalConstants::default())
}

pub fn eval_numeric_with(
    e: &Expr,
    at: &EvalPoint,
    constants: &PhysicalConstants,
) -> Result<f64, CalcError> {
    let v = Evaluator { at, constants }.real(e)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CalcError::NonFinite(e.to_string()))
    }
}

/// Complex-valued evaluation; `i` may appear anywhere.
pub fn eval_complex(e: &Expr, at: &EvalPoint) -> Result<Complex64, CalcError> {
    Evaluator {
        at,
        constants: &PhysicalConstants::default(),
    }
    .complex(e)
}

struct Evaluator<'a> {
    at: &'a EvalPoint,
    constants: &'a PhysicalConstants,
}

impl Evaluator<'_> {
    fn lookup(&self, name: &str) -> Result<f64, CalcError> {
        self.at
            .get(name)
            .ok_or_else(|| CalcError::UnboundSymbol(name.to_string()))
    }

    fn harmonic(&self, l: u32, m: i32, theta: &str, phi: &str) -> Result<f64, CalcError> {
        let th = self.lookup(theta)?;
        let ph = self.lookup(phi)?;
        if !(0.0..=PI).contains(&th) {
            return Err(CalcError::AngleOutOfRange {
                symbol: theta.to_string(),
                value: th,
            });
        }
        Ok(real_sph_harmonic(l, m, th, ph.rem_euclid(2.0 * PI)))
    }

    fn real(&self, e: &Expr) -> Result<f64, CalcError> {
        Ok(match e.node() {
            Node::Scalar(Scalar::Rational(r)) => rational_to_f64(r),
            Node::Scalar(Scalar::Float(x)) => x.0,
            Node::Scalar(Scalar::Constant(NamedConstant::I)) => {
                return Err(CalcError::NonReal(
                    "imaginary unit outside Re(...)".to_string(),
                ))
            }
            Node::Scalar(Scalar::Constant(c)) => self.constants.value_of(*c).expect("real constant"),
            Node::Symbol(s) => self.lookup(s)?,
            Node::Sum(xs) => {
                let mut acc = 0.0;
                for x in xs {
                    acc += self.real(x)?;
                }
                acc
            }
            Node::Product(xs) => {
                let mut acc = 1.0;
                for x in xs {
                    acc *= self.real(x)?;
                }
                acc
            }
            Node::Power(b, p) => {
                let base = self.real(b)?;
                match rational_as_i64(p).and_then(|n| i32::try_from(n).ok()) {
                    Some(n) => base.powi(n),
                    None if base < 0.0 => {
                        return Err(CalcError::NonReal(format!(
                            "negative base {base} raised to {p}"
                        )))
                    }
                    None => base.powf(rational_to_f64(p)),
                }
            }
            Node::Apply(f, arg) => {
                let x = self.real(arg)?;
                match f {
                    Func::Exp => x.exp(),
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Log if x > 0.0 => x.ln(),
                    Func::Log => return Err(CalcError::NonReal(format!("log of {x}"))),
                }
            }
            Node::RealPart(arg) => self.complex(arg)?.re,
            Node::Delta { .. } => return Err(CalcError::DeltaInSmoothContext),
            Node::SphHarmonic { l, m, theta, phi } => self.harmonic(*l, *m, theta, phi)?,
        })
    }

    fn complex(&self, e: &Expr) -> Result<Complex64, CalcError> {
        Ok(match e.node() {
            Node::Scalar(Scalar::Constant(NamedConstant::I)) => Complex64::i(),
            Node::Scalar(_) | Node::Symbol(_) | Node::SphHarmonic { .. } => {
                Complex64::new(self.real(e)?, 0.0)
            }
            Node::Sum(xs) => {
                let mut acc = Complex64::zero();
                for x in xs {
                    acc += self.complex(x)?;
                }
                acc
            }
            Node::Product(xs) => {
                let mut acc = Complex64::new(1.0, 0.0);
                for x in xs {
                    acc *= self.complex(x)?;
                }
                acc
            }
            Node::Power(b, p) => {
                let base = self.complex(b)?;
                match rational_as_i64(p).and_then(|n| i32::try_from(n).ok()) {
                    Some(n) => base.powi(n),
                    None => base.powf(rational_to_f64(p)),
                }
            }
            Node::Apply(f, arg) => {
                let z = self.complex(arg)?;
                match f {
                    Func::Exp => z.exp(),
                    Func::Sin => z.sin(),
                    Func::Cos => z.cos(),
                    Func::Log => z.ln(),
                }
            }
            Node::RealPart(arg) => Complex64::new(self.complex(arg)?.re, 0.0),
            Node::Delta { .. } => return Err(CalcError::DeltaInSmoothContext),
        })
    }
}
