//! Immutable expression trees with exact rational scalars.
//!
//! Every [`Expr`] is produced by [`Expr::build`], which flattens nested sums and
//! products, folds rational constants and sorts operands into a deterministic
//! total order. Two expressions are equal exactly when their canonical trees are
//! identical; no semantic equivalence is attempted.

mod constants;
mod scalar;

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use constants::PhysicalConstants;
pub use scalar::{
    int, rational, rational_as_i64, rational_powi, rational_to_f64, NamedConstant, Rational,
    Scalar,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("zero denominator in rational literal")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid symbol name {0:?}")]
    InvalidSymbol(String),
    #[error("spherical harmonic Y({l},{m}) requires |m| <= l")]
    HarmonicOrder { l: u32, m: i32 },
    #[error("delta argument must be affine in its symbols with constant coefficients: {0}")]
    DeltaArgument(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Log,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Log => "log",
        }
    }
}

/// One node of an expression tree. The variant order is the canonical kind rank.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Scalar(Scalar),
    Symbol(String),
    Power(Expr, Rational),
    Apply(Func, Expr),
    RealPart(Expr),
    SphHarmonic {
        l: u32,
        m: i32,
        theta: String,
        phi: String,
    },
    Delta {
        arg: Expr,
        order: u32,
    },
    Product(Vec<Expr>),
    Sum(Vec<Expr>),
}

/// Shared, immutable expression handle.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Expr(Arc<Node>);

pub const DEFAULT_THETA: &str = "theta";
pub const DEFAULT_PHI: &str = "phi";

fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Expr {
    fn raw(node: Node) -> Expr {
        Expr(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    /// Validates `node` and returns its canonical form.
    pub fn build(node: Node) -> Result<Expr, ExprError> {
        match node {
            Node::Symbol(name) => {
                if !valid_identifier(&name) {
                    return Err(ExprError::InvalidSymbol(name));
                }
                Ok(Expr::raw(Node::Symbol(name)))
            }
            Node::Sum(terms) => Ok(build_sum(terms)),
            Node::Product(factors) => Ok(build_product(factors)),
            Node::Power(base, exp) => build_power(base, exp),
            Node::SphHarmonic { l, m, theta, phi } => {
                if m.unsigned_abs() > l {
                    return Err(ExprError::HarmonicOrder { l, m });
                }
                for s in [&theta, &phi] {
                    if !valid_identifier(s) {
                        return Err(ExprError::InvalidSymbol(s.clone()));
                    }
                }
                Ok(Expr::raw(Node::SphHarmonic { l, m, theta, phi }))
            }
            Node::Delta { arg, order } => {
                if !is_affine(&arg) {
                    return Err(ExprError::DeltaArgument(arg.to_string()));
                }
                Ok(Expr::raw(Node::Delta { arg, order }))
            }
            n @ (Node::Scalar(_) | Node::Apply(..) | Node::RealPart(_)) => Ok(Expr::raw(n)),
        }
    }

    pub fn rational(r: Rational) -> Expr {
        Expr::raw(Node::Scalar(Scalar::Rational(r)))
    }

    pub fn int(n: i64) -> Expr {
        Expr::rational(int(n))
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn constant(c: NamedConstant) -> Expr {
        Expr::raw(Node::Scalar(Scalar::Constant(c)))
    }

    pub fn float(x: f64) -> Expr {
        Expr::raw(Node::Scalar(Scalar::Float(x.into())))
    }

    /// Panics on an invalid identifier; use [`Expr::build`] for untrusted names.
    pub fn symbol(name: &str) -> Expr {
        Expr::build(Node::Symbol(name.to_string())).expect("invalid symbol name")
    }

    pub fn sum<I: IntoIterator<Item = Expr>>(terms: I) -> Expr {
        build_sum(terms.into_iter().collect())
    }

    pub fn product<I: IntoIterator<Item = Expr>>(factors: I) -> Expr {
        build_product(factors.into_iter().collect())
    }

    pub fn pow(&self, exp: Rational) -> Result<Expr, ExprError> {
        build_power(self.clone(), exp)
    }

    pub fn powi(&self, n: i64) -> Result<Expr, ExprError> {
        self.pow(int(n))
    }

    pub fn recip(&self) -> Result<Expr, ExprError> {
        self.powi(-1)
    }

    pub fn apply(func: Func, arg: Expr) -> Expr {
        Expr::raw(Node::Apply(func, arg))
    }

    pub fn exp(arg: Expr) -> Expr {
        Expr::apply(Func::Exp, arg)
    }

    pub fn re(arg: Expr) -> Expr {
        Expr::raw(Node::RealPart(arg))
    }

    pub fn delta(arg: Expr, order: u32) -> Result<Expr, ExprError> {
        Expr::build(Node::Delta { arg, order })
    }

    /// `Y(l, m)` in the default angle symbols `theta`, `phi`.
    pub fn harmonic(l: u32, m: i32) -> Result<Expr, ExprError> {
        Expr::build(Node::SphHarmonic {
            l,
            m,
            theta: DEFAULT_THETA.into(),
            phi: DEFAULT_PHI.into(),
        })
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self.node() {
            Node::Scalar(Scalar::Rational(r)) => Some(r),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_one())
    }

    pub fn is_symbol(&self, name: &str) -> bool {
        matches!(self.node(), Node::Symbol(s) if s == name)
    }

    /// Direct children, in order.
    pub fn children(&self) -> Vec<&Expr> {
        match self.node() {
            Node::Scalar(_) | Node::Symbol(_) | Node::SphHarmonic { .. } => Vec::new(),
            Node::Power(b, _) => vec![b],
            Node::Apply(_, a) | Node::RealPart(a) => vec![a],
            Node::Delta { arg, .. } => vec![arg],
            Node::Product(xs) | Node::Sum(xs) => xs.iter().collect(),
        }
    }

    pub fn any(&self, pred: &impl Fn(&Expr) -> bool) -> bool {
        pred(self) || self.children().into_iter().any(|c| c.any(pred))
    }

    pub fn contains_delta(&self) -> bool {
        self.any(&|e| matches!(e.node(), Node::Delta { .. }))
    }

    pub fn contains_imaginary(&self) -> bool {
        self.any(&|e| matches!(e.node(), Node::Scalar(Scalar::Constant(NamedConstant::I))))
    }

    /// Free symbols, including the angle symbols of harmonic atoms.
    pub fn free_symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<String>) {
        match self.node() {
            Node::Symbol(s) => {
                out.insert(s.clone());
            }
            Node::SphHarmonic { theta, phi, .. } => {
                out.insert(theta.clone());
                out.insert(phi.clone());
            }
            _ => {
                for c in self.children() {
                    c.collect_symbols(out);
                }
            }
        }
    }

    pub fn depends_on(&self, var: &str) -> bool {
        self.any(&|e| match e.node() {
            Node::Symbol(s) => s == var,
            Node::SphHarmonic { theta, phi, .. } => theta == var || phi == var,
            _ => false,
        })
    }

    /// Rebuilds this node with new children (same arity as [`Expr::children`]).
    pub fn with_children(&self, kids: Vec<Expr>) -> Result<Expr, ExprError> {
        let mut kids = kids.into_iter();
        let mut next = || kids.next().expect("child count mismatch");
        match self.node() {
            Node::Scalar(_) | Node::Symbol(_) | Node::SphHarmonic { .. } => Ok(self.clone()),
            Node::Power(_, p) => build_power(next(), p.clone()),
            Node::Apply(f, _) => Ok(Expr::apply(*f, next())),
            Node::RealPart(_) => Ok(Expr::re(next())),
            Node::Delta { order, .. } => Expr::delta(next(), *order),
            Node::Product(xs) => Ok(Expr::product((0..xs.len()).map(|_| next()))),
            Node::Sum(xs) => Ok(Expr::sum((0..xs.len()).map(|_| next()))),
        }
    }

    /// Structural replacement of every occurrence of `from` by `to`.
    pub fn substitute(&self, from: &Expr, to: &Expr) -> Result<Expr, ExprError> {
        if self == from {
            return Ok(to.clone());
        }
        let kids = self.children();
        if kids.is_empty() {
            return Ok(self.clone());
        }
        let new = kids
            .into_iter()
            .map(|c| c.substitute(from, to))
            .collect::<Result<Vec<_>, _>>()?;
        self.with_children(new)
    }

    /// Splits a canonical term into its rational coefficient and the remaining factor.
    pub fn split_coefficient(&self) -> (Rational, Expr) {
        match self.node() {
            Node::Scalar(Scalar::Rational(r)) => (r.clone(), Expr::one()),
            Node::Product(xs) => match xs[0].as_rational() {
                Some(r) => (r.clone(), Expr::product(xs[1..].iter().cloned())),
                None => (Rational::one(), self.clone()),
            },
            _ => (Rational::one(), self.clone()),
        }
    }
}

/// Structural equality on canonical trees.
pub fn expr_equal(a: &Expr, b: &Expr) -> bool {
    a == b
}

fn build_sum(terms: Vec<Expr>) -> Expr {
    let mut flat = Vec::with_capacity(terms.len());
    let mut acc = Rational::zero();
    let mut stack: Vec<Expr> = terms.into_iter().rev().collect();
    while let Some(t) = stack.pop() {
        match t.node() {
            Node::Sum(inner) => stack.extend(inner.iter().rev().cloned()),
            Node::Scalar(Scalar::Rational(r)) => acc += r,
            _ => flat.push(t),
        }
    }
    if !acc.is_zero() || flat.is_empty() {
        flat.push(Expr::rational(acc));
    }
    if flat.len() == 1 {
        return flat.pop().unwrap();
    }
    flat.sort();
    Expr::raw(Node::Sum(flat))
}

fn build_product(factors: Vec<Expr>) -> Expr {
    let mut flat = Vec::with_capacity(factors.len());
    let mut acc = Rational::one();
    let mut stack: Vec<Expr> = factors.into_iter().rev().collect();
    while let Some(f) = stack.pop() {
        match f.node() {
            Node::Product(inner) => stack.extend(inner.iter().rev().cloned()),
            Node::Scalar(Scalar::Rational(r)) => acc *= r,
            _ => flat.push(f),
        }
    }
    if !acc.is_one() || flat.is_empty() {
        flat.push(Expr::rational(acc));
    }
    if flat.len() == 1 {
        return flat.pop().unwrap();
    }
    flat.sort();
    Expr::raw(Node::Product(flat))
}

fn build_power(base: Expr, exp: Rational) -> Result<Expr, ExprError> {
    if exp.is_one() {
        return Ok(base);
    }
    if let Some(n) = rational_as_i64(&exp) {
        if let Some(r) = base.as_rational() {
            return rational_powi(r, n)
                .map(Expr::rational)
                .ok_or(ExprError::DivisionByZero);
        }
        if let Node::Power(inner, p) = base.node() {
            return build_power(inner.clone(), p * &exp);
        }
    } else if let Some(r) = base.as_rational() {
        if r.is_zero() {
            return if exp.is_positive() {
                Ok(Expr::zero())
            } else {
                Err(ExprError::DivisionByZero)
            };
        }
    }
    Ok(Expr::raw(Node::Power(base, exp)))
}

/// `true` when `e` is `c0 + sum c_k * s_k` with constant `c_k` and at least one symbol.
fn is_affine(e: &Expr) -> bool {
    fn is_const(e: &Expr) -> bool {
        match e.node() {
            Node::Scalar(_) => true,
            Node::Product(xs) => xs.iter().all(is_const),
            Node::Power(b, _) => is_const(b),
            _ => false,
        }
    }
    fn linear_term(e: &Expr) -> Option<bool> {
        // Some(true): c * symbol, Some(false): constant.
        if is_const(e) {
            return Some(false);
        }
        match e.node() {
            Node::Symbol(_) => Some(true),
            Node::Product(xs) => {
                let syms = xs.iter().filter(|x| matches!(x.node(), Node::Symbol(_))).count();
                let consts = xs.iter().filter(|x| is_const(x)).count();
                (syms == 1 && syms + consts == xs.len()).then_some(true)
            }
            _ => None,
        }
    }
    let terms: Vec<&Expr> = match e.node() {
        Node::Sum(xs) => xs.iter().collect(),
        _ => vec![e],
    };
    let mut has_symbol = false;
    for t in terms {
        match linear_term(t) {
            Some(s) => has_symbol |= s,
            None => return false,
        }
    }
    has_symbol
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({})", self)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parse::print_expr(self))
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::sum([self, rhs])
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::sum([self, -rhs])
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::product([self, rhs])
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::product([Expr::int(-1), self])
    }
}
