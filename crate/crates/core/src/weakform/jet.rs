use std::ops::{Add, Mul, Neg, Sub};

/// Truncated Taylor series `sum c_k h^k` about a point; `c_k = f^(k)(x0) / k!`.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    coeffs: Vec<f64>,
}

impl Jet {
    pub fn constant(value: f64, order: usize) -> Jet {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = value;
        Jet { coeffs }
    }

    /// The identity function `x0 + h`.
    pub fn variable(x0: f64, order: usize) -> Jet {
        let mut j = Jet::constant(x0, order);
        if order >= 1 {
            j.coeffs[1] = 1.0;
        }
        j
    }

    pub fn zero(order: usize) -> Jet {
        Jet::constant(0.0, order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `f^(k)(x0)`.
    pub fn derivative(&self, k: usize) -> f64 {
        self.coeffs[k] * factorial(k)
    }

    /// Jet of `f'`, one order lower.
    pub fn diff(&self) -> Jet {
        let coeffs = if self.order() == 0 {
            vec![0.0]
        } else {
            (1..self.coeffs.len())
                .map(|k| k as f64 * self.coeffs[k])
                .collect()
        };
        Jet { coeffs }
    }

    pub fn scale(&self, s: f64) -> Jet {
        Jet {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add_scalar(&self, s: f64) -> Jet {
        let mut j = self.clone();
        j.coeffs[0] += s;
        j
    }

    pub fn exp(&self) -> Jet {
        let n = self.coeffs.len();
        let mut e = vec![0.0; n];
        e[0] = self.coeffs[0].exp();
        for k in 1..n {
            let s: f64 = (1..=k)
                .map(|j| j as f64 * self.coeffs[j] * e[k - j])
                .sum();
            e[k] = s / k as f64;
        }
        Jet { coeffs: e }
    }

    /// `1/f`; requires `f(x0) != 0`.
    pub fn recip(&self) -> Jet {
        let n = self.coeffs.len();
        let c0 = self.coeffs[0];
        let mut r = vec![0.0; n];
        r[0] = 1.0 / c0;
        for k in 1..n {
            let s: f64 = (1..=k).map(|j| self.coeffs[j] * r[k - j]).sum();
            r[k] = -s / c0;
        }
        Jet { coeffs: r }
    }

    pub fn powi(&self, n: u32) -> Jet {
        let mut acc = Jet::constant(1.0, self.order());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    fn truncated(&self, order: usize) -> Jet {
        Jet {
            coeffs: self.coeffs[..=order.min(self.order())].to_vec(),
        }
    }
}

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        let n = self.order().min(rhs.order());
        let (a, b) = (self.truncated(n), rhs.truncated(n));
        Jet {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        self + &(-rhs)
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        let n = self.order().min(rhs.order());
        let mut out = vec![0.0; n + 1];
        for (i, a) in self.coeffs.iter().take(n + 1).enumerate() {
            for (j, b) in rhs.coeffs.iter().take(n + 1 - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        Jet { coeffs: out }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet {
                (&self).$m(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn polynomial_derivatives() {
        // f = x^3 - 2x at 1.5: f' = 3x^2 - 2, f'' = 6x, f''' = 6
        let x = Jet::variable(1.5, 4);
        let f = &x.powi(3) - &x.scale(2.0);
        assert!(close(f.value(), 0.375, 1e-15));
        assert!(close(f.derivative(1), 4.75, 1e-15));
        assert!(close(f.derivative(2), 9.0, 1e-15));
        assert!(close(f.derivative(3), 6.0, 1e-15));
        assert_eq!(f.derivative(4), 0.0);
    }

    #[test]
    fn exp_and_recip() {
        let x = Jet::variable(0.3, 5);
        let e = x.scale(2.0).exp();
        for k in 0..=5 {
            assert!(close(e.derivative(k), 2f64.powi(k as i32) * 0.6f64.exp(), 1e-13));
        }
        // 1/x: k-th derivative (-1)^k k! / x^(k+1)
        let r = x.recip();
        for k in 0..=5 {
            let want = (-1f64).powi(k as i32) * factorial(k) / 0.3f64.powi(k as i32 + 1);
            assert!(close(r.derivative(k), want, 1e-12), "k={k}");
        }
    }

    #[test]
    fn diff_lowers_order() {
        let x = Jet::variable(2.0, 3);
        let f = x.powi(3);
        let d = f.diff();
        assert_eq!(d.order(), 2);
        assert!(close(d.value(), 12.0, 1e-15));
        assert!(close(d.derivative(1), 12.0, 1e-15));
    }
}
