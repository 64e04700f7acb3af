//! Least-squares fits and the behaviour classifiers used on sampled solutions.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope.
    pub slope_se: f64,
    pub r_squared: f64,
    pub max_residual: f64,
}

/// Ordinary least squares `y = slope x + intercept`; needs at least three points.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Option<LineFit> {
    let n = xs.len();
    if n < 3 || ys.len() != n {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let resid: Vec<f64> = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| y - (slope * x + intercept))
        .collect();
    let sse: f64 = resid.iter().map(|r| r * r).sum();
    Some(LineFit {
        slope,
        intercept,
        slope_se: (sse / (nf - 2.0) / sxx).sqrt(),
        r_squared: if syy == 0.0 { 1.0 } else { 1.0 - sse / syy },
        max_residual: resid.iter().fold(0.0, |m, r| m.max(r.abs())),
    })
}

/// Leading power of `r` from `ln|u|` over the first decade of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentFit {
    pub exponent: f64,
    /// 95% interval from the slope standard error.
    pub interval: (f64, f64),
    pub r_squared: f64,
    pub max_residual: f64,
}

impl ExponentFit {
    /// `R^2 >= 0.999`, or a near-constant `ln|u|` fitted to within 1e-3 everywhere.
    pub fn reliable(&self) -> bool {
        self.r_squared >= 0.999 || self.max_residual < 1e-3
    }
}

pub fn fit_origin_exponent(grid: &[f64], log_abs_u: &[f64]) -> Option<ExponentFit> {
    let r0 = *grid.first()?;
    let (xs, ys): (Vec<f64>, Vec<f64>) = grid
        .iter()
        .zip(log_abs_u)
        .filter(|(r, l)| **r <= 10.0 * r0 * (1.0 + 1e-12) && l.is_finite())
        .map(|(r, l)| (r.ln(), *l))
        .unzip();
    let f = fit_line(&xs, &ys)?;
    Some(ExponentFit {
        exponent: f.slope,
        interval: (f.slope - 1.96 * f.slope_se, f.slope + 1.96 * f.slope_se),
        r_squared: f.r_squared,
        max_residual: f.max_residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InfinityClass {
    Decaying,
    Growing,
}

/// Sign of `d ln|u| / dr` over the outer quarter of the grid, and the fitted rate.
pub fn classify_infinity(grid: &[f64], log_abs_u: &[f64]) -> (InfinityClass, f64) {
    let n = grid.len();
    let start = n - (n / 4).max(3);
    let (xs, ys): (Vec<f64>, Vec<f64>) = grid[start..]
        .iter()
        .zip(&log_abs_u[start..])
        .filter(|(_, l)| l.is_finite())
        .map(|(r, l)| (*r, *l))
        .unzip();
    let rate = fit_line(&xs, &ys).map_or(0.0, |f| f.slope);
    let class = if rate < 0.0 {
        InfinityClass::Decaying
    } else {
        InfinityClass::Growing
    };
    (class, rate)
}

/// Margin above the borderline origin exponent `-1/2` of `int u^2`.
pub const ORIGIN_EXPONENT_MARGIN: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Endpoint {
    Origin,
    Infinity,
}

/// Which endpoint, if any, makes `int u^2 dr` diverge.
pub fn norm_divergence(origin_exponent: f64, infinity: InfinityClass) -> Option<Endpoint> {
    if origin_exponent < -0.5 + ORIGIN_EXPONENT_MARGIN {
        Some(Endpoint::Origin)
    } else if infinity == InfinityClass::Growing {
        Some(Endpoint::Infinity)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = [1.0, 3.0, 5.0, 7.0];
        let f = fit_line(&xs, &ys).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-14 && (f.intercept - 1.0).abs() < 1e-14);
        assert!(f.r_squared > 0.999_999);
        assert!(fit_line(&xs[..2], &ys[..2]).is_none());
    }

    fn geometric(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
            .collect()
    }

    #[test]
    fn divergence_calibration() {
        let grid = geometric(1e-4, 40.0, 2000);
        for (p, divergent) in [(-2.0, true), (-1.0, true), (-0.6, true), (-0.4, false), (0.0, false), (1.0, false)] {
            // u = r^p e^{-r}
            let logs: Vec<f64> = grid.iter().map(|r: &f64| p * r.ln() - r).collect();
            let fit = fit_origin_exponent(&grid, &logs).unwrap();
            assert!(fit.reliable());
            let (class, _) = classify_infinity(&grid, &logs);
            assert_eq!(class, InfinityClass::Decaying);
            let d = norm_divergence(fit.exponent, class);
            assert_eq!(d == Some(Endpoint::Origin), divergent, "p = {p}");
        }
        // u^2 = e^{2r}
        let logs: Vec<f64> = grid.to_vec();
        let fit = fit_origin_exponent(&grid, &logs).unwrap();
        let (class, rate) = classify_infinity(&grid, &logs);
        assert_eq!(class, InfinityClass::Growing);
        assert!((rate - 1.0).abs() < 1e-9);
        assert_eq!(norm_divergence(fit.exponent, class), Some(Endpoint::Infinity));
    }
}
