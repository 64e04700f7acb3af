use serde::{Deserialize, Serialize};

use super::jet::Jet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BumpKind {
    /// `exp(-s^2/2)` with `s = (r - c)/(w/5)`, smoothly windowed to `|r - c| < w`.
    GaussianBump,
    /// `(1 - u^2)^4` with `u = (r - c)/w`, zero outside.
    PolynomialBump,
}

/// Smooth bump supported on `[center - width, center + width]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub center: f64,
    pub width: f64,
    pub amplitude: f64,
    pub kind: BumpKind,
}

impl TestFunction {
    pub fn new(kind: BumpKind, center: f64, width: f64) -> Self {
        TestFunction {
            center,
            width,
            amplitude: 1.0,
            kind,
        }
    }

    pub fn polynomial(center: f64, width: f64) -> Self {
        Self::new(BumpKind::PolynomialBump, center, width)
    }

    pub fn gaussian(center: f64, width: f64) -> Self {
        Self::new(BumpKind::GaussianBump, center, width)
    }

    pub fn support(&self) -> (f64, f64) {
        (self.center - self.width, self.center + self.width)
    }

    pub fn contains(&self, r: f64) -> bool {
        ((r - self.center) / self.width).abs() < 1.0
    }

    /// Taylor jet of the bump at `r` up to `order`; identically zero off the open support.
    pub fn jet(&self, r: f64, order: usize) -> Jet {
        if !self.contains(r) {
            return Jet::zero(order);
        }
        let u = Jet::variable(r, order)
            .add_scalar(-self.center)
            .scale(1.0 / self.width);
        let one_minus_u2 = (&u * &u).scale(-1.0).add_scalar(1.0);
        let shape = match self.kind {
            BumpKind::PolynomialBump => one_minus_u2.powi(4),
            BumpKind::GaussianBump => {
                // s = 5u
                let s2 = (&u * &u).scale(25.0);
                let window = &(&u * &u) * &one_minus_u2.recip();
                (&s2.scale(-0.5) - &window).exp()
            }
        };
        shape.scale(self.amplitude)
    }

    pub fn value(&self, r: f64) -> f64 {
        self.jet(r, 0).value()
    }

    /// Jet of `(r^2 phi')'` at `r`, up to `order`.
    pub fn euler_jet(&self, r: f64, order: usize) -> Jet {
        let phi = self.jet(r, order + 2);
        let x = Jet::variable(r, order + 2);
        (&(&x * &x) * &phi.diff()).diff()
    }

    /// `sup |(r^2 phi')'|` over the support, sampled on a fine grid.
    pub fn euler_scale(&self) -> f64 {
        let (a, b) = self.support();
        let n = 2000;
        (0..=n)
            .map(|i| {
                let r = a + (b - a) * i as f64 / n as f64;
                self.euler_jet(r, 0).value().abs()
            })
            .fold(0.0, f64::max)
    }
}
