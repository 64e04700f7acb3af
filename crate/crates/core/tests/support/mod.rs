//! Seeded random expression generators shared by property and acceptance tests.
#![allow(dead_code)]

use hydrino_audit::expr::{rational, Func};
use hydrino_audit::symcalc::{differentiate, eval_numeric, EvalPoint};
use hydrino_audit::{parse_expr, Expr};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_rational(rng: &mut ChaCha8Rng) -> Expr {
    let p = rng.gen_range(-4..=4);
    let q = rng.gen_range(1..=3);
    Expr::rational(rational(p, q).expect("nonzero denominator"))
}

fn var(rng: &mut ChaCha8Rng) -> Expr {
    Expr::symbol(["x", "y"].choose(rng).expect("non-empty"))
}

/// Smooth, delta-free expression in `x`, `y`, finite for `x, y` in `[0.5, 1.5]`.
pub fn smooth_expr(rng: &mut ChaCha8Rng, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.7) { var(rng) } else { small_rational(rng) };
    }
    let d = depth - 1;
    match rng.gen_range(0..8) {
        0 => Expr::sum((0..rng.gen_range(2..=3)).map(|_| smooth_expr(rng, d)).collect::<Vec<_>>()),
        1 => Expr::product([smooth_expr(rng, d), smooth_expr(rng, d)]),
        2 => {
            let k = *[2, 3].choose(rng).expect("non-empty");
            smooth_expr(rng, d).powi(k).expect("integer power")
        }
        3 => {
            let (p, q) = *[(-1, 1), (-2, 1), (1, 2), (-1, 2), (3, 2)].choose(rng).expect("non-empty");
            positive_expr(rng, d).pow(rational(p, q).expect("nonzero")).expect("positive base")
        }
        4 => Expr::exp(bounded_expr(rng, d)),
        5 => Expr::apply(Func::Sin, smooth_expr(rng, d)),
        6 => Expr::apply(Func::Cos, smooth_expr(rng, d)),
        _ => Expr::apply(Func::Log, positive_expr(rng, d)),
    }
}

/// Bounded on the sampling box, so `exp` of it cannot overflow.
fn bounded_expr(rng: &mut ChaCha8Rng, depth: u32) -> Expr {
    match rng.gen_range(0..3) {
        0 => Expr::apply(Func::Sin, smooth_expr(rng, depth)),
        1 => Expr::apply(Func::Cos, smooth_expr(rng, depth)),
        _ => var(rng),
    }
}

/// Bounded away from zero on the sampling box.
fn positive_expr(rng: &mut ChaCha8Rng, depth: u32) -> Expr {
    match rng.gen_range(0..4) {
        0 => var(rng),
        1 => Expr::symbol("x") + Expr::symbol("y"),
        2 => Expr::exp(bounded_expr(rng, depth)),
        _ => Expr::one() + smooth_expr(rng, depth).powi(2).expect("square"),
    }
}

/// Any printable expression: smooth parts plus harmonics, deltas, `Re` and constants.
pub fn any_expr(rng: &mut ChaCha8Rng, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..6) {
            0 => small_rational(rng),
            1 => {
                let name = ["hbar", "m_e", "alpha", "a_H", "pi", "c", "i"].choose(rng).expect("non-empty");
                parse_expr(name).expect("named constant")
            }
            2 => {
                let l = rng.gen_range(0..=3u32);
                let m = rng.gen_range(-(l as i32)..=l as i32);
                Expr::harmonic(l, m).expect("|m| <= l")
            }
            3 => {
                let arg = Expr::symbol("r") - Expr::product([small_rational(rng), Expr::symbol("r_n")]);
                Expr::delta(arg, rng.gen_range(0..=3)).unwrap_or_else(|_| Expr::symbol("r"))
            }
            _ => Expr::symbol(["x", "y", "r", "t", "r_n", "omega_n"].choose(rng).expect("non-empty")),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..6) {
        0 => Expr::sum((0..rng.gen_range(2..=3)).map(|_| any_expr(rng, d)).collect::<Vec<_>>()),
        1 => Expr::product([any_expr(rng, d), any_expr(rng, d)]),
        2 => {
            let (p, q) = *[(2, 1), (3, 1), (-1, 1), (1, 2), (-3, 2)].choose(rng).expect("non-empty");
            any_expr(rng, d)
                .pow(rational(p, q).expect("nonzero"))
                .unwrap_or_else(|_| Expr::symbol("x"))
        }
        3 => Expr::re(any_expr(rng, d)),
        4 => Expr::exp(any_expr(rng, d)),
        _ => smooth_expr(rng, d),
    }
}

pub fn point(x: f64, y: f64) -> EvalPoint {
    EvalPoint::from([("x", x), ("y", y)])
}

/// Fourth-order central difference in `var` (Richardson on steps h and h/2),
/// with the gap to the same estimate at half the step as an error bound.
pub fn fd_derivative(e: &Expr, at: &EvalPoint, var: &str) -> Option<(f64, f64)> {
    let x0 = at.get(var)?;
    let f = |dx: f64| {
        let mut p = at.clone();
        p.set(var, x0 + dx);
        eval_numeric(e, &p).ok()
    };
    let richardson = |h: f64| -> Option<f64> {
        let d1 = (f(h)? - f(-h)?) / (2.0 * h);
        let d2 = (f(h / 2.0)? - f(-h / 2.0)?) / h;
        Some((4.0 * d2 - d1) / 3.0)
    };
    let coarse = richardson(1e-3)?;
    let fine = richardson(5e-4)?;
    Some((fine, (fine - coarse).abs()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DerivativeCheck {
    /// Relative gap against `max(|d|, 1)`.
    Gap(f64),
    /// The finite-difference estimate has not converged (rapid oscillation or
    /// steep growth), so it cannot serve as an oracle at this point.
    OracleUnresolved,
    /// The expression or its derivative does not evaluate at this point.
    NotEvaluable,
}

pub fn derivative_check(e: &Expr, var: &str, at: &EvalPoint) -> DerivativeCheck {
    let Ok(d) = differentiate(e, var) else {
        return DerivativeCheck::NotEvaluable;
    };
    let (Ok(sym), Some((fd, fd_err))) = (eval_numeric(&d, at), fd_derivative(e, at, var)) else {
        return DerivativeCheck::NotEvaluable;
    };
    let scale = sym.abs().max(1.0);
    if fd_err > 1e-8 * scale {
        return DerivativeCheck::OracleUnresolved;
    }
    DerivativeCheck::Gap((sym - fd).abs() / scale)
}
