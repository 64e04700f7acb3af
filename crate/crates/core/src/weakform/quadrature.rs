use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSettings {
    pub abs_tol: f64,
    /// Relative to the integral of `|f|`, so cancelling integrands still terminate.
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadSettings {
    fn default() -> Self {
        QuadSettings {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_depth: 60,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError<E> {
    #[error("quadrature did not converge on [{a}, {b}]: error estimate {error:e}")]
    NonConvergence { a: f64, b: f64, error: f64 },
    #[error(transparent)]
    Integrand(E),
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Gauss weights for the odd Kronrod nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs: f64,
    depth: u32,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<E>(
    f: &impl Fn(f64) -> Result<f64, E>,
    a: f64,
    b: f64,
    depth: u32,
) -> Result<Panel, E> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut abs = WGK[7] * fc.abs();
    for i in 0..7 {
        let x = h * XGK[i];
        let (f1, f2) = (f(c - x)?, f(c + x)?);
        kronrod += WGK[i] * (f1 + f2);
        abs += WGK[i] * (f1.abs() + f2.abs());
        if i % 2 == 1 {
            gauss += WG[i / 2] * (f1 + f2);
        }
    }
    Ok(Panel {
        a,
        b,
        value: kronrod * h,
        error: ((kronrod - gauss) * h).abs(),
        abs: abs * h.abs(),
        depth,
    })
}

/// Globally adaptive Gauss–Kronrod (7/15) quadrature of `f` over `[a, b]`.
pub fn integrate<E>(
    f: impl Fn(f64) -> Result<f64, E>,
    a: f64,
    b: f64,
    settings: &QuadSettings,
) -> Result<Quadrature, QuadError<E>> {
    integrate_with_breaks(f, &[a, b], settings)
}

/// As [`integrate`], with the initial panels split at the given sorted points.
pub fn integrate_with_breaks<E>(
    f: impl Fn(f64) -> Result<f64, E>,
    points: &[f64],
    settings: &QuadSettings,
) -> Result<Quadrature, QuadError<E>> {
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in points.windows(2) {
        if w[1] > w[0] {
            heap.push(gk15(&f, w[0], w[1], 0).map_err(QuadError::Integrand)?);
            evaluations += 15;
        }
    }
    loop {
        let (value, error, abs) = heap.iter().fold((0.0, 0.0, 0.0), |(v, e, s), p| {
            (v + p.value, e + p.error, s + p.abs)
        });
        if error <= settings.abs_tol.max(settings.rel_tol * abs) {
            return Ok(Quadrature {
                value,
                error,
                evaluations,
            });
        }
        let Some(worst) = heap.pop() else {
            return Ok(Quadrature {
                value,
                error,
                evaluations,
            });
        };
        if worst.depth >= settings.max_depth {
            return Err(QuadError::NonConvergence {
                a: worst.a,
                b: worst.b,
                error,
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        heap.push(gk15(&f, worst.a, mid, worst.depth + 1).map_err(QuadError::Integrand)?);
        heap.push(gk15(&f, mid, worst.b, worst.depth + 1).map_err(QuadError::Integrand)?);
        evaluations += 30;
    }
}
