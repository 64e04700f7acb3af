use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use ordered_float::OrderedFloat;

use super::ExprError;

/// Exact rational numbers used for scalars and exponents.
pub type Rational = BigRational;

/// Builds `p/q` in lowest terms, rejecting a zero denominator.
pub fn rational(p: i64, q: i64) -> Result<Rational, ExprError> {
    if q == 0 {
        return Err(ExprError::ZeroDenominator);
    }
    Ok(BigRational::new(BigInt::from(p), BigInt::from(q)))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `r` as an `i64` when it is an integer that fits.
pub fn rational_as_i64(r: &Rational) -> Option<i64> {
    if r.is_integer() {
        r.to_integer().to_i64()
    } else {
        None
    }
}

/// Exact integer power of a rational. `None` for `0^negative`.
pub fn rational_powi(base: &Rational, exp: i64) -> Option<Rational> {
    if exp == 0 {
        return Some(Rational::one());
    }
    if base.is_zero() {
        return if exp > 0 { Some(Rational::zero()) } else { None };
    }
    let mag = exp.unsigned_abs();
    let mut acc = Rational::one();
    let mut sq = base.clone();
    let mut e = mag;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &sq;
        }
        e >>= 1;
        if e > 0 {
            sq = &sq * &sq;
        }
    }
    Some(if exp < 0 { acc.recip() } else { acc })
}

/// The closed set of named constants an expression may mention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NamedConstant {
    Pi,
    /// The imaginary unit.
    I,
    FineStructure,
    BohrRadius,
    ReducedPlanck,
    ElectronMass,
    LightSpeed,
    ElementaryCharge,
    /// Ground-state binding energy `W_1`, in eV.
    GroundBinding,
}

impl NamedConstant {
    pub const ALL: [NamedConstant; 9] = [
        NamedConstant::Pi,
        NamedConstant::I,
        NamedConstant::FineStructure,
        NamedConstant::BohrRadius,
        NamedConstant::ReducedPlanck,
        NamedConstant::ElectronMass,
        NamedConstant::LightSpeed,
        NamedConstant::ElementaryCharge,
        NamedConstant::GroundBinding,
    ];

    /// Surface name used by the text syntax. These names are reserved identifiers.
    pub fn name(self) -> &'static str {
        match self {
            NamedConstant::Pi => "pi",
            NamedConstant::I => "i",
            NamedConstant::FineStructure => "alpha",
            NamedConstant::BohrRadius => "a_H",
            NamedConstant::ReducedPlanck => "hbar",
            NamedConstant::ElectronMass => "m_e",
            NamedConstant::LightSpeed => "c",
            NamedConstant::ElementaryCharge => "e_charge",
            NamedConstant::GroundBinding => "W_1",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scalar {
    Rational(Rational),
    Constant(NamedConstant),
    /// Only produced by numeric folding; the symbolic layer never creates floats.
    Float(OrderedFloat<f64>),
}

impl Scalar {
    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_negative(),
            Scalar::Float(f) => f.0 < 0.0,
            Scalar::Constant(_) => false,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Constant(c) => f.write_str(c.name()),
            Scalar::Float(x) => write!(f, "{:?}", x.0),
        }
    }
}
