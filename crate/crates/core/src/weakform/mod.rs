//! Distributional checks: candidates containing delta nodes are paired with
//! smooth compactly supported test functions after moving every derivative onto
//! the test function.
//!
//! Two independent paths are computed for delta terms: exact sifting through
//! Taylor jets, and quadrature against a narrow gaussian mollifier extrapolated
//! to zero width.

pub mod jet;
pub mod quadrature;
mod testfn;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{int, Expr, Node, Rational};
use crate::symcalc::{differentiate, eval_numeric, expand, simplify, CalcError, DiffOperator, EvalPoint};
use jet::{factorial, Jet};
use quadrature::{integrate_with_breaks, QuadError, QuadSettings};
pub use testfn::{BumpKind, TestFunction};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WeakError {
    #[error("test function support [{lo}, {hi}] touches the origin")]
    SupportTouchesOrigin { lo: f64, hi: f64 },
    #[error("quadrature did not converge on [{a}, {b}] (error estimate {error:e})")]
    QuadratureNonconvergence { a: f64, b: f64, error: f64 },
    #[error("weak pairing is only defined for d-dr-euler, not {0}")]
    UnsupportedOperator(String),
    #[error("unsupported candidate term {0}")]
    UnsupportedCandidate(String),
    #[error(transparent)]
    Calc(#[from] CalcError),
}

impl From<QuadError<CalcError>> for WeakError {
    fn from(e: QuadError<CalcError>) -> Self {
        match e {
            QuadError::NonConvergence { a, b, error } => {
                WeakError::QuadratureNonconvergence { a, b, error }
            }
            QuadError::Integrand(c) => WeakError::Calc(c),
        }
    }
}

/// Battery layout as multiples of the orbit radius; kinds cycle by member index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BatteryConfig {
    pub centers: Vec<f64>,
    pub widths: Vec<f64>,
    pub kinds: Vec<BumpKind>,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        BatteryConfig {
            centers: vec![0.5, 1.0, 1.5, 2.0],
            widths: vec![0.1, 0.2, 0.3],
            kinds: vec![BumpKind::PolynomialBump, BumpKind::GaussianBump],
        }
    }
}

impl BatteryConfig {
    pub fn build(&self, r_n: f64) -> Vec<TestFunction> {
        let mut out = Vec::new();
        for c in &self.centers {
            for w in &self.widths {
                let kind = if self.kinds.is_empty() {
                    BumpKind::PolynomialBump
                } else {
                    self.kinds[out.len() % self.kinds.len()]
                };
                out.push(TestFunction::new(kind, c * r_n, w * r_n));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WeakSettings {
    /// Verdict threshold on normalized residuals.
    pub tolerance: f64,
    /// Mollifier widths as fractions of the test-function width.
    pub mollifier_sigmas: Vec<f64>,
    #[serde(skip)]
    pub quad: QuadSettings,
}

impl Default for WeakSettings {
    fn default() -> Self {
        WeakSettings {
            tolerance: 1e-9,
            mollifier_sigmas: vec![0.05, 0.02, 0.01, 0.005],
            quad: QuadSettings::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeakVerdict {
    Solves,
    Fails,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeakResidualReport {
    pub candidate: Expr,
    pub operator: DiffOperator,
    pub members: Vec<TestFunction>,
    /// Pairings `<f, L phi>` by exact sifting plus quadrature of smooth parts.
    pub values: Vec<f64>,
    /// `sup |L phi|` per member.
    pub scales: Vec<f64>,
    pub normalized: Vec<f64>,
    /// Mollified-quadrature pairings extrapolated to zero width; present iff deltas occur.
    pub mollified: Option<Vec<f64>>,
    /// Observed convergence order in `sigma^2` per member, where measurable.
    pub mollifier_orders: Option<Vec<Option<f64>>>,
    /// Sifted pairing in terms of `phi_d<k>` (the k-th derivative of the test function).
    pub sifted_closed_form: Option<Expr>,
    pub closed_form_values: Option<Vec<f64>>,
    pub verdict: WeakVerdict,
    pub tolerance: f64,
}

impl WeakResidualReport {
    pub fn max_normalized(&self) -> f64 {
        self.normalized.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest sifting/mollifier gap, relative to `max(|sifted|, scale)` per member.
    pub fn path_disagreement(&self) -> Option<f64> {
        let moll = self.mollified.as_ref()?;
        Some(
            self.values
                .iter()
                .zip(moll)
                .zip(&self.scales)
                .map(|((s, m), sc)| (s - m).abs() / s.abs().max(*sc))
                .fold(0.0, f64::max),
        )
    }
}

/// `g(r) * delta^(k)(a r + b)` with `g` delta-free.
#[derive(Debug, Clone)]
struct DeltaTerm {
    coeff: Expr,
    arg: Expr,
    order: u32,
}

struct Decomposed {
    smooth: Expr,
    deltas: Vec<DeltaTerm>,
}

fn decompose(candidate: &Expr, r: &str) -> Result<Decomposed, WeakError> {
    let expanded = expand(candidate);
    let terms: Vec<Expr> = match expanded.node() {
        Node::Sum(ts) => ts.clone(),
        _ => vec![expanded.clone()],
    };
    let mut smooth = Vec::new();
    let mut deltas = Vec::new();
    for t in terms {
        if !t.contains_delta() {
            smooth.push(t);
            continue;
        }
        let factors: Vec<Expr> = match t.node() {
            Node::Product(fs) => fs.clone(),
            _ => vec![t.clone()],
        };
        let (ds, rest): (Vec<Expr>, Vec<Expr>) =
            factors.into_iter().partition(|f| matches!(f.node(), Node::Delta { .. }));
        let coeff = Expr::product(rest);
        let [d] = ds.as_slice() else {
            return Err(WeakError::UnsupportedCandidate(t.to_string()));
        };
        let Node::Delta { arg, order } = d.node() else {
            unreachable!()
        };
        if coeff.contains_delta() || !arg.depends_on(r) {
            return Err(WeakError::UnsupportedCandidate(t.to_string()));
        }
        deltas.push(DeltaTerm {
            coeff,
            arg: arg.clone(),
            order: *order,
        });
    }
    Ok(Decomposed {
        smooth: Expr::sum(smooth),
        deltas,
    })
}

/// A delta term with its numeric slope, root and coefficient derivatives.
struct BoundDelta {
    slope: f64,
    root: f64,
    order: u32,
    coeff_derivs: Vec<Expr>,
    coeff: Expr,
}

fn bind_delta(t: &DeltaTerm, r: &str, at: &EvalPoint) -> Result<BoundDelta, WeakError> {
    let slope = eval_numeric(&differentiate(&t.arg, r)?, at)?;
    let offset = eval_numeric(&t.arg.substitute(&Expr::symbol(r), &Expr::zero()).map_err(CalcError::from)?, at)?;
    let mut coeff_derivs = vec![t.coeff.clone()];
    for _ in 0..t.order {
        let next = differentiate(coeff_derivs.last().expect("nonempty"), r)?;
        coeff_derivs.push(next);
    }
    Ok(BoundDelta {
        slope,
        root: -offset / slope,
        order: t.order,
        coeff_derivs,
        coeff: t.coeff.clone(),
    })
}

fn at_r(at: &EvalPoint, r: &str, value: f64) -> EvalPoint {
    at.clone().with(r, value)
}

/// Exact sifting of `g(r) delta^(k)(a r + b)` against `L phi`.
fn sift(d: &BoundDelta, phi: &TestFunction, r: &str, at: &EvalPoint) -> Result<f64, WeakError> {
    if !phi.contains(d.root) {
        return Ok(0.0);
    }
    let k = d.order as usize;
    let psi = phi.euler_jet(d.root, k);
    let point = at_r(at, r, d.root);
    let mut acc = 0.0;
    for j in 0..=k {
        let binom = factorial(k) / (factorial(j) * factorial(k - j));
        acc += binom * eval_numeric(&d.coeff_derivs[j], &point)? * psi.derivative(k - j);
    }
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * acc / (d.slope.powi(k as i32) * d.slope.abs()))
}

/// Probabilists' Hermite polynomial `He_k(x)`.
fn hermite(k: u32, x: f64) -> f64 {
    let (mut h0, mut h1) = (1.0, x);
    if k == 0 {
        return h0;
    }
    for n in 1..k {
        let h2 = x * h1 - f64::from(n) * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

/// k-th derivative of the unit-mass gaussian of width `sigma`.
pub fn mollifier(k: u32, sigma: f64, x: f64) -> f64 {
    let s = x / sigma;
    let g = (-0.5 * s * s).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt());
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * hermite(k, s) * g / sigma.powi(k as i32)
}

/// Neville extrapolation of `ys(xs)` to `x = 0`.
pub fn extrapolate_to_zero(xs: &[f64], ys: &[f64]) -> f64 {
    let mut p = ys.to_vec();
    let n = p.len();
    for k in 1..n {
        for i in 0..n - k {
            p[i] = (xs[i + k] * p[i] - xs[i] * p[i + 1]) / (xs[i + k] - xs[i]);
        }
    }
    p[0]
}

fn breaks(lo: f64, hi: f64, root: f64, halfwidth: f64) -> Vec<f64> {
    let mut pts = vec![lo];
    for p in [root - halfwidth, root, root + halfwidth] {
        if p > lo && p < hi {
            pts.push(p);
        }
    }
    pts.push(hi);
    pts
}

/// `int g(r) m_sigma^(k)(a r + b) L phi(r) dr` for a mollifier of width `sigma` in the argument.
fn mollified_term(
    d: &BoundDelta,
    phi: &TestFunction,
    sigma: f64,
    r: &str,
    at: &EvalPoint,
    quad: &QuadSettings,
) -> Result<f64, WeakError> {
    let (lo, hi) = phi.support();
    let pts = breaks(lo, hi, d.root, 10.0 * sigma / d.slope.abs());
    let q = integrate_with_breaks(
        |x| {
            let m = mollifier(d.order, sigma, d.slope * x - d.slope * d.root);
            if m == 0.0 {
                return Ok(0.0);
            }
            Ok(eval_numeric(&d.coeff, &at_r(at, r, x))? * m * phi.euler_jet(x, 0).value())
        },
        &pts,
        quad,
    )?;
    Ok(q.value)
}

fn smooth_pairing(
    f: &Expr,
    phi: &TestFunction,
    r: &str,
    at: &EvalPoint,
    quad: &QuadSettings,
) -> Result<f64, WeakError> {
    if f.is_zero() {
        return Ok(0.0);
    }
    let (lo, hi) = phi.support();
    let q = integrate_with_breaks(
        |x| Ok(eval_numeric(f, &at_r(at, r, x))? * phi.euler_jet(x, 0).value()),
        &[lo, phi.center, hi],
        quad,
    )?;
    Ok(q.value)
}

fn euler_var(op: &DiffOperator) -> Result<&str, WeakError> {
    match op {
        DiffOperator::EulerRadial { r } => Ok(r),
        other => Err(WeakError::UnsupportedOperator(other.name().to_string())),
    }
}

fn check_support(phi: &TestFunction) -> Result<(), WeakError> {
    let (lo, hi) = phi.support();
    if lo <= 0.0 {
        return Err(WeakError::SupportTouchesOrigin { lo, hi });
    }
    Ok(())
}

/// `<L f, phi>` with all derivatives moved onto `phi`; parameters of `f` come from `at`.
pub fn weak_residual(
    op: &DiffOperator,
    candidate: &Expr,
    phi: &TestFunction,
    at: &EvalPoint,
) -> Result<f64, WeakError> {
    let r = euler_var(op)?;
    check_support(phi)?;
    let parts = decompose(candidate, r)?;
    let deltas = parts
        .deltas
        .iter()
        .map(|t| bind_delta(t, r, at))
        .collect::<Result<Vec<_>, _>>()?;
    let mut v = smooth_pairing(&parts.smooth, phi, r, at, &QuadSettings::default())?;
    for d in &deltas {
        v += sift(d, phi, r, at)?;
    }
    Ok(v)
}

/// Symbolic sifted pairing when every term is a delta at one common argument.
fn closed_form(parts: &Decomposed, r: &str) -> Result<Option<Expr>, WeakError> {
    let Some(first) = parts.deltas.first() else {
        return Ok(None);
    };
    if !parts.smooth.is_zero() || parts.deltas.iter().any(|d| d.arg != first.arg) {
        return Ok(None);
    }
    let slope = differentiate(&first.arg, r)?;
    let Some(a) = slope.as_rational().cloned() else {
        return Ok(None);
    };
    let rs = Expr::symbol(r);
    let offset = simplify(&first.arg.substitute(&rs, &Expr::zero()).map_err(CalcError::from)?);
    let root = Expr::product([Expr::int(-1), offset, Expr::rational(a.recip())]);
    let p = |j: usize| Expr::symbol(&format!("phi_d{j}"));
    // (r^2 phi'' + 2 r phi')^(m) = r^2 phi^(m+2) + 2(m+1) r phi^(m+1) + m(m+1) phi^(m)
    let psi = |m: usize| -> Result<Expr, WeakError> {
        let m_i = m as i64;
        Ok(Expr::sum([
            root.powi(2).map_err(CalcError::from)? * p(m + 2),
            Expr::int(2 * (m_i + 1)) * root.clone() * p(m + 1),
            Expr::int(m_i * (m_i + 1)) * p(m),
        ]))
    };
    let mut total = Vec::new();
    for d in &parts.deltas {
        let k = d.order as usize;
        let mut g = d.coeff.clone();
        let abs_a = if a < int(0) { -a.clone() } else { a.clone() };
        let mut scale = Rational::from_integer(1.into()) / (num_traits::pow(a.clone(), k) * abs_a);
        if k % 2 == 1 {
            scale = -scale;
        }
        for j in 0..=k {
            let binom = (factorial(k) / (factorial(j) * factorial(k - j))).round() as i64;
            let gj = g.substitute(&rs, &root).map_err(CalcError::from)?;
            total.push(Expr::product([
                Expr::rational(scale.clone() * int(binom)),
                gj,
                psi(k - j)?,
            ]));
            g = differentiate(&g, r)?;
        }
    }
    Ok(Some(expand(&Expr::sum(total))))
}

fn eval_closed_form(
    form: &Expr,
    root: f64,
    phi: &TestFunction,
    at: &EvalPoint,
    max_order: usize,
) -> Result<f64, WeakError> {
    if !phi.contains(root) {
        return Ok(0.0);
    }
    let j = phi.jet(root, max_order);
    let mut point = at.clone();
    for k in 0..=max_order {
        point.set(&format!("phi_d{k}"), j.derivative(k));
    }
    Ok(eval_numeric(form, &point)?)
}

/// Observed order in `sigma^2` from the finest pair of mollifier widths whose
/// errors both sit above the quadrature noise.
fn observed_order(sigmas: &[f64], raw: &[f64], exact: f64, scale: f64) -> Option<f64> {
    let errs: Vec<f64> = raw.iter().map(|m| (m - exact).abs()).collect();
    (0..errs.len().saturating_sub(1)).rev().find_map(|i| {
        (errs[i + 1] > 1e-11 * scale).then(|| {
            let ratio = (sigmas[i] / sigmas[i + 1]).powi(2);
            (errs[i] / errs[i + 1]).ln() / ratio.ln()
        })
    })
}

/// Runs the battery and aggregates a verdict on the normalized residuals.
pub fn check_candidate(
    op: &DiffOperator,
    candidate: &Expr,
    at: &EvalPoint,
    members: &[TestFunction],
    settings: &WeakSettings,
) -> Result<WeakResidualReport, WeakError> {
    use rayon::prelude::*;

    let r = euler_var(op)?;
    for phi in members {
        check_support(phi)?;
    }
    let parts = decompose(candidate, r)?;
    let deltas = parts
        .deltas
        .iter()
        .map(|t| bind_delta(t, r, at))
        .collect::<Result<Vec<_>, _>>()?;
    let form = closed_form(&parts, r)?;
    let max_order = parts.deltas.iter().map(|d| d.order as usize).max().unwrap_or(0) + 2;

    struct Member {
        value: f64,
        scale: f64,
        mollified: Option<(f64, Option<f64>)>,
        closed: Option<f64>,
    }

    let per_member = members
        .par_iter()
        .map(|phi| -> Result<Member, WeakError> {
            let smooth = smooth_pairing(&parts.smooth, phi, r, at, &settings.quad)?;
            let mut sifted = smooth;
            for d in &deltas {
                sifted += sift(d, phi, r, at)?;
            }
            let scale = phi.euler_scale();
            let mollified = if deltas.is_empty() {
                None
            } else {
                let sig: Vec<f64> = settings
                    .mollifier_sigmas
                    .iter()
                    .map(|s| s * phi.width)
                    .collect();
                let mut raw = Vec::with_capacity(sig.len());
                for &s in &sig {
                    let mut v = smooth;
                    for d in &deltas {
                        v += mollified_term(d, phi, s * d.slope.abs(), r, at, &settings.quad)?;
                    }
                    raw.push(v);
                }
                let x2: Vec<f64> = sig.iter().map(|s| s * s).collect();
                let extrapolated = extrapolate_to_zero(&x2, &raw);
                Some((extrapolated, observed_order(&sig, &raw, sifted, scale)))
            };
            let closed = match &form {
                Some(f) => Some(
                    smooth + eval_closed_form(f, deltas[0].root, phi, at, max_order)?,
                ),
                None => None,
            };
            Ok(Member {
                value: sifted,
                scale,
                mollified,
                closed,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let values: Vec<f64> = per_member.iter().map(|m| m.value).collect();
    let scales: Vec<f64> = per_member.iter().map(|m| m.scale).collect();
    let normalized: Vec<f64> = values.iter().zip(&scales).map(|(v, s)| v / s).collect();
    let mollified = (!deltas.is_empty()).then(|| {
        per_member
            .iter()
            .map(|m| m.mollified.expect("deltas present").0)
            .collect()
    });
    let mollifier_orders = (!deltas.is_empty()).then(|| {
        per_member
            .iter()
            .map(|m| m.mollified.expect("deltas present").1)
            .collect()
    });
    let closed_form_values = form
        .as_ref()
        .map(|_| per_member.iter().map(|m| m.closed.expect("form present")).collect());
    let max = normalized.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    Ok(WeakResidualReport {
        candidate: candidate.clone(),
        operator: op.clone(),
        members: members.to_vec(),
        values,
        scales,
        normalized,
        mollified,
        mollifier_orders,
        sifted_closed_form: form,
        closed_form_values,
        verdict: if max < settings.tolerance {
            WeakVerdict::Solves
        } else {
            WeakVerdict::Fails
        },
        tolerance: settings.tolerance,
    })
}

/// `<delta^(k)(. - a), phi> = (-1)^k phi^(k)(a)`, from the jet of `phi`.
pub fn sift_test_function(k: u32, a: f64, phi: &TestFunction) -> f64 {
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * phi.jet(a, k as usize).derivative(k as usize)
}

/// Both sides of `<x^n delta^(n)(x), phi> = (-1)^n n! phi(0)` on the whole line.
///
/// The left side moves the n derivatives onto `x^n phi` and differentiates that
/// product as a jet; the right side evaluates `phi(0)` directly.
pub fn delta_identity_check(n: u32, phi: &TestFunction) -> (f64, f64) {
    let k = n as usize;
    let x = Jet::variable(0.0, k);
    let product = &x.powi(n) * &phi.jet(0.0, k);
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let lhs = sign * product.derivative(k);
    let rhs = sign * factorial(k) * phi.value(0.0);
    (lhs, rhs)
}

/// `<x^n m_sigma^(n)(x), phi>` by quadrature, extrapolated to zero width.
pub fn delta_identity_mollified(
    n: u32,
    phi: &TestFunction,
    settings: &WeakSettings,
) -> Result<f64, WeakError> {
    let (lo, hi) = phi.support();
    if lo >= 0.0 || hi <= 0.0 {
        return Ok(0.0);
    }
    let sig: Vec<f64> = settings
        .mollifier_sigmas
        .iter()
        .map(|s| s * phi.width)
        .collect();
    let mut raw = Vec::new();
    for &s in &sig {
        let q = integrate_with_breaks(
            |x| {
                Ok::<_, CalcError>(x.powi(n as i32) * mollifier(n, s, x) * phi.value(x))
            },
            &breaks(lo, hi, 0.0, 10.0 * s),
            &settings.quad,
        )?;
        raw.push(q.value);
    }
    let x2: Vec<f64> = sig.iter().map(|s| s * s).collect();
    Ok(extrapolate_to_zero(&x2, &raw))
}
