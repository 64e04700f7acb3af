//! Symbolic differentiation, simplification, numeric evaluation and residuals
//! of candidate solutions under the separated wave-equation operators.

mod diff;
mod eval;
pub mod harmonics;
mod simplify;

use thiserror::Error;

use crate::expr::{Expr, ExprError, Node, DEFAULT_PHI, DEFAULT_THETA};

pub use diff::differentiate;
pub use eval::{eval_complex, eval_numeric, eval_numeric_with, EvalPoint};
pub use simplify::{expand, simplify};

/// Residuals below this magnitude count as zero.
pub const TOL_SYM: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CalcError {
    #[error("delta distribution in a smooth context; use the weak-form checks")]
    DeltaInSmoothContext,
    #[error("unsupported derivative: {0}")]
    UnsupportedDerivative(String),
    #[error("unbound symbol {0:?}")]
    UnboundSymbol(String),
    #[error("non-real result: {0}")]
    NonReal(String),
    #[error("non-finite value for {0}")]
    NonFinite(String),
    #[error("angle {symbol} = {value} outside [0, pi]")]
    AngleOutOfRange { symbol: String, value: f64 },
    #[error("invalid operator: {0}")]
    InvalidOperator(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// Linear differential operators used by the solution checks.
#[derive(Debug, Clone, PartialEq)]
pub enum DiffOperator {
    /// `f -> d/dr (r^2 df/dr)`
    EulerRadial { r: String },
    /// Angular part of the Laplacian, acting on harmonic atoms by `-l(l+1)`.
    AngularLaplacian,
    /// `d^2/dt^2`
    SecondTime { t: String },
    /// `(1/r^2) d/dr(r^2 d/dr) + (1/r^2) Lap_ang - (1/v^2) d^2/dt^2`
    Wave {
        velocity: Expr,
        r: String,
        t: String,
    },
    /// Separated angular-time operator `(1/R^2) Lap_ang + (1/v^2) d^2/dt^2`
    /// evaluated on a fixed radius `R`.
    AngularTime {
        radius: Expr,
        velocity: Expr,
        t: String,
    },
}

impl DiffOperator {
    pub fn euler() -> Self {
        DiffOperator::EulerRadial { r: "r".into() }
    }

    pub fn second_time() -> Self {
        DiffOperator::SecondTime { t: "t".into() }
    }

    pub fn wave(velocity: Expr) -> Self {
        DiffOperator::Wave {
            velocity,
            r: "r".into(),
            t: "t".into(),
        }
    }

    /// The angular-time operator on the orbit `r = r_n` with `v_n = omega_n r_n`.
    pub fn angular_time_on_orbit(radius: Expr, omega: Expr) -> Self {
        let velocity = omega * radius.clone();
        DiffOperator::AngularTime {
            radius,
            velocity,
            t: "t".into(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            DiffOperator::EulerRadial { .. } => "d-dr-euler",
            DiffOperator::AngularLaplacian => "angular-laplacian",
            DiffOperator::SecondTime { .. } => "d2-dt2",
            DiffOperator::Wave { .. } => "wave-operator",
            DiffOperator::AngularTime { .. } => "angular-time",
        }
    }

    fn velocity(&self) -> Option<&Expr> {
        match self {
            DiffOperator::Wave { velocity, .. } | DiffOperator::AngularTime { velocity, .. } => {
                Some(velocity)
            }
            _ => None,
        }
    }
}

fn euler(e: &Expr, r: &str) -> Result<Expr, CalcError> {
    let r2 = Expr::symbol(r).powi(2)?;
    differentiate(&(r2 * differentiate(e, r)?), r)
}

fn second(e: &Expr, t: &str) -> Result<Expr, CalcError> {
    differentiate(&differentiate(e, t)?, t)
}

fn is_angular(e: &Expr) -> bool {
    e.any(&|x| matches!(x.node(), Node::SphHarmonic { .. }))
}

/// Angular Laplacian by linearity and the eigenrelation `Lap Y_l^m = -l(l+1) Y_l^m`.
fn angular_laplacian(e: &Expr) -> Result<Expr, CalcError> {
    let mut angles = vec![(DEFAULT_THETA.to_string(), DEFAULT_PHI.to_string())];
    collect_angles(e, &mut angles);
    for (th, ph) in &angles {
        let bare = |x: &Expr| x.is_symbol(th) || x.is_symbol(ph);
        if e.any(&bare) {
            return Err(CalcError::UnsupportedDerivative(format!(
                "angular Laplacian needs {th}/{ph} to appear only inside harmonic atoms"
            )));
        }
    }
    lap(e)
}

fn collect_angles(e: &Expr, out: &mut Vec<(String, String)>) {
    if let Node::SphHarmonic { theta, phi, .. } = e.node() {
        let pair = (theta.clone(), phi.clone());
        if !out.contains(&pair) {
            out.push(pair);
        }
    }
    for c in e.children() {
        collect_angles(c, out);
    }
}

fn lap(e: &Expr) -> Result<Expr, CalcError> {
    if !is_angular(e) {
        return Ok(Expr::zero());
    }
    match e.node() {
        Node::SphHarmonic { l, .. } => {
            let ev = i64::from(*l) * (i64::from(*l) + 1);
            Ok(Expr::int(-ev) * e.clone())
        }
        Node::Sum(terms) => Ok(Expr::sum(
            terms.iter().map(lap).collect::<Result<Vec<_>, _>>()?,
        )),
        Node::RealPart(arg) => Ok(Expr::re(lap(arg)?)),
        Node::Product(factors) => {
            let angular: Vec<usize> = (0..factors.len())
                .filter(|&i| is_angular(&factors[i]))
                .collect();
            if angular.len() != 1 {
                return Err(CalcError::UnsupportedDerivative(format!(
                    "product of {} angular factors in {e}",
                    angular.len()
                )));
            }
            let mut parts = factors.clone();
            parts[angular[0]] = lap(&factors[angular[0]])?;
            Ok(Expr::product(parts))
        }
        _ => Err(CalcError::UnsupportedDerivative(format!(
            "angular Laplacian of non-linear harmonic expression {e}"
        ))),
    }
}

/// Applies `op` to `e` and simplifies the result.
pub fn apply_operator(op: &DiffOperator, e: &Expr) -> Result<Expr, CalcError> {
    if e.contains_delta() {
        return Err(CalcError::DeltaInSmoothContext);
    }
    let out = match op {
        DiffOperator::EulerRadial { r } => euler(e, r)?,
        DiffOperator::AngularLaplacian => angular_laplacian(e)?,
        DiffOperator::SecondTime { t } => second(e, t)?,
        DiffOperator::Wave { velocity, r, t } => {
            let inv_r2 = Expr::symbol(r).powi(-2)?;
            let spatial = inv_r2 * (euler(e, r)? + angular_laplacian(e)?);
            spatial - velocity.powi(-2)? * second(e, t)?
        }
        DiffOperator::AngularTime {
            radius,
            velocity,
            t,
        } => radius.powi(-2)? * angular_laplacian(e)? + velocity.powi(-2)? * second(e, t)?,
    };
    Ok(expand(&out))
}

/// Symbolic residual of a candidate and its values at sample points.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub symbolic: Expr,
    pub values: Vec<f64>,
    pub tolerance: f64,
}

impl Residual {
    /// Literal zero, or every sampled magnitude below the tolerance.
    pub fn passes(&self) -> bool {
        self.symbolic.is_zero() || self.values.iter().all(|v| v.abs() < self.tolerance)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

pub fn residual(
    op: &DiffOperator,
    candidate: &Expr,
    at: &[EvalPoint],
) -> Result<Residual, CalcError> {
    residual_with_tolerance(op, candidate, at, TOL_SYM)
}

pub fn residual_with_tolerance(
    op: &DiffOperator,
    candidate: &Expr,
    at: &[EvalPoint],
    tolerance: f64,
) -> Result<Residual, CalcError> {
    let symbolic = apply_operator(op, candidate)?;
    let mut values = Vec::with_capacity(at.len());
    for p in at {
        if let Some(v) = op.velocity() {
            let speed = eval_numeric(v, p)?;
            if speed <= 0.0 {
                return Err(CalcError::InvalidOperator(format!(
                    "phase velocity {v} evaluates to {speed}"
                )));
            }
        }
        values.push(if symbolic.is_zero() {
            0.0
        } else {
            eval_numeric(&symbolic, p)?
        });
    }
    Ok(Residual {
        symbolic,
        values,
        tolerance,
    })
}
