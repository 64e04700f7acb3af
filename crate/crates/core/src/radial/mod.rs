//! The radial Schrödinger equation of hydrogen at real principal quantum number
//! `nu`, in atomic units:
//!
//! `u'' = [l(l+1)/r^2 - 2/r + 1/nu^2] u`, with `E = -1/(2 nu^2)` hartree and `u = r R`.
//!
//! Solutions are integrated outward from a Frobenius seed at `r_min` and inward
//! from an asymptotic seed at `r_max`; the normalized Wronskian of the two
//! detects eigenvalues.

mod dopri;
pub mod fit;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use dopri::{State, Stepper};
pub use fit::{Endpoint, ExponentFit, InfinityClass};

pub const RTOL: f64 = 1e-10;
/// `|W|` below this counts as matched one-sided solutions.
pub const MATCH_TOL: f64 = 1e-6;
/// Origin exponents above this count as `u -> 0`; the regular branch has `l + 1 >= 1`.
pub const REGULAR_EXPONENT: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RadialError {
    #[error("invalid radial problem: {0}")]
    InvalidProblem(String),
    #[error("seed region too coarse: {0}")]
    SeedRegionTooCoarse(String),
    #[error("integrator step size collapsed near r = {r}")]
    StepLimit { r: f64 },
    #[error("exponent fit failed: {0}")]
    FitFailed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialProblem {
    pub nu: f64,
    pub l: u32,
    pub r_min: f64,
    pub r_max: f64,
    pub grid_points: usize,
}

impl RadialProblem {
    pub fn new(nu: f64, l: u32) -> Self {
        RadialProblem {
            nu,
            l,
            r_min: 1e-4,
            r_max: 40.0 * nu,
            grid_points: 2000,
        }
    }

    pub fn validate(&self) -> Result<(), RadialError> {
        let bad = |m: String| Err(RadialError::InvalidProblem(m));
        if !(self.nu > 0.0 && self.nu.is_finite()) {
            return bad(format!("nu must be positive, got {}", self.nu));
        }
        if !(self.r_min > 0.0 && self.r_min < self.r_max && self.r_max.is_finite()) {
            return bad(format!("need 0 < r_min < r_max, got [{}, {}]", self.r_min, self.r_max));
        }
        if self.grid_points < 1000 {
            return bad(format!("need at least 1000 grid points, got {}", self.grid_points));
        }
        Ok(())
    }

    pub fn energy(&self) -> f64 {
        -0.5 / (self.nu * self.nu)
    }

    fn coef(&self) -> impl Fn(f64) -> f64 {
        let ll = f64::from(self.l) * f64::from(self.l + 1);
        let k2 = 1.0 / (self.nu * self.nu);
        move |r| ll / (r * r) - 2.0 / r + k2
    }

    pub fn grid(&self) -> Vec<f64> {
        let n = self.grid_points;
        let ratio = (self.r_max / self.r_min).ln();
        let mut g: Vec<f64> = (0..n)
            .map(|i| self.r_min * (ratio * i as f64 / (n - 1) as f64).exp())
            .collect();
        g[0] = self.r_min;
        g[n - 1] = self.r_max;
        g
    }

    /// Six-term Frobenius series `r^(l+1) sum a_k r^k` and its derivative.
    fn origin_seed(&self, r: f64) -> Result<State, RadialError> {
        let l = f64::from(self.l);
        let k2 = 1.0 / (self.nu * self.nu);
        let mut a = [0.0; 6];
        a[0] = 1.0;
        for k in 1..6 {
            let prev2 = if k >= 2 { a[k - 2] } else { 0.0 };
            a[k] = (-2.0 * a[k - 1] + k2 * prev2) / (k as f64 * (k as f64 + 2.0 * l + 1.0));
        }
        let tail = (a[5] * r.powi(5)).abs();
        if tail > 1e-12 {
            return Err(RadialError::SeedRegionTooCoarse(format!(
                "series tail {tail:e} at r_min = {r}"
            )));
        }
        let s = l + 1.0;
        let (mut u, mut du) = (0.0, 0.0);
        for (k, ak) in a.iter().enumerate() {
            let p = s + k as f64;
            u += ak * r.powf(p);
            du += ak * p * r.powf(p - 1.0);
        }
        Ok([u, du, 0.0])
    }

    /// Two-term Whittaker asymptotic `e^(-z/2) z^nu (1 + c/z)`, `z = 2r/nu`.
    fn infinity_seed(&self, r: f64) -> Result<State, RadialError> {
        let nu = self.nu;
        let l = f64::from(self.l);
        let z = 2.0 * r / nu;
        if z < 20.0 {
            return Err(RadialError::SeedRegionTooCoarse(format!(
                "r_max = {r} is within 10 nu of the origin"
            )));
        }
        let c = (l + 1.0 - nu) * (l + nu);
        // d/dr = (2/nu) d/dz
        let u = (-z / 2.0 + nu * z.ln()).exp() * (1.0 + c / z);
        let du_dz = u * (-0.5 + nu / z) - (-z / 2.0 + nu * z.ln()).exp() * c / (z * z);
        Ok([u, du_dz * 2.0 / nu, 0.0])
    }

    fn stepper(&self) -> Stepper<impl Fn(f64) -> f64> {
        Stepper {
            coef: self.coef(),
            rtol: RTOL,
            h: 0.0,
            log_scale: 0.0,
            steps: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    OutwardRegular,
    InwardDecaying,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NormIntegral {
    Finite { value: f64 },
    DivergentAt { endpoint: Endpoint },
}

impl NormIntegral {
    pub fn is_finite(&self) -> bool {
        matches!(self, NormIntegral::Finite { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialSolution {
    pub direction: Direction,
    pub grid: Vec<f64>,
    /// `u = u_values * exp(log_scale)`
    pub u_values: Vec<f64>,
    pub du_values: Vec<f64>,
    pub log_scale: f64,
    pub log_abs_u: Vec<f64>,
    pub origin_exponent: ExponentFit,
    pub infinity_class: InfinityClass,
    pub infinity_rate: f64,
    /// In units of `exp(2 log_scale)`.
    pub norm_integral: NormIntegral,
    pub u_at_rmin: f64,
}

impl RadialSolution {
    pub fn max_abs_u(&self) -> f64 {
        self.u_values.iter().fold(0.0, |m, u| m.max(u.abs()))
    }

    /// Sign changes of `u` for `r >= r_from`, exact zeros counted once.
    pub fn sign_changes(&self, r_from: f64) -> usize {
        let signs: Vec<bool> = self
            .grid
            .iter()
            .zip(&self.u_values)
            .filter(|(r, u)| **r >= r_from && **u != 0.0)
            .map(|(_, u)| *u > 0.0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }
}

/// Integrates one branch across the geometric grid and classifies it.
pub fn integrate_radial(p: &RadialProblem, direction: Direction) -> Result<RadialSolution, RadialError> {
    p.validate()?;
    let grid = p.grid();
    let n = grid.len();
    let mut st = p.stepper();
    let mut states: Vec<(State, f64)> = Vec::with_capacity(n);
    let mut y;
    match direction {
        Direction::OutwardRegular => {
            y = p.origin_seed(p.r_min)?;
            states.push((y, 0.0));
            for w in grid.windows(2) {
                st.propagate(&mut y, w[0], w[1])?;
                states.push((y, st.log_scale));
            }
        }
        Direction::InwardDecaying => {
            y = p.infinity_seed(p.r_max)?;
            states.push((y, 0.0));
            for w in grid.windows(2).rev() {
                st.propagate(&mut y, w[1], w[0])?;
                states.push((y, st.log_scale));
            }
            states.reverse();
        }
    }
    let final_scale = st.log_scale;
    let rescale = |v: f64, ls: f64| v * (ls - final_scale).exp();
    let u_values: Vec<f64> = states.iter().map(|(s, ls)| rescale(s[0], *ls)).collect();
    let du_values: Vec<f64> = states.iter().map(|(s, ls)| rescale(s[1], *ls)).collect();
    let log_abs_u: Vec<f64> = states.iter().map(|(s, ls)| s[0].abs().ln() + ls).collect();

    let origin_exponent = fit::fit_origin_exponent(&grid, &log_abs_u)
        .ok_or_else(|| RadialError::FitFailed("fewer than three points in the first decade".into()))?;
    let (infinity_class, infinity_rate) = fit::classify_infinity(&grid, &log_abs_u);

    let norm_integral = match fit::norm_divergence(origin_exponent.exponent, infinity_class) {
        Some(endpoint) => NormIntegral::DivergentAt { endpoint },
        None => {
            // int over [r_min, r_max] from the carried component, in final units
            let (s_end, ls_end) = match direction {
                Direction::OutwardRegular => states[n - 1],
                Direction::InwardDecaying => states[0],
            };
            let body = s_end[2] * (2.0 * (ls_end - final_scale)).exp();
            let u0 = u_values[0];
            let head = u0 * u0 * p.r_min / (2.0 * origin_exponent.exponent + 1.0);
            let un = u_values[n - 1];
            let tail = un * un / (-2.0 * infinity_rate);
            NormIntegral::Finite {
                value: body.abs() + head + tail,
            }
        }
    };
    Ok(RadialSolution {
        direction,
        u_at_rmin: u_values[0],
        grid,
        u_values,
        du_values,
        log_scale: final_scale,
        log_abs_u,
        origin_exponent,
        infinity_class,
        infinity_rate,
        norm_integral,
    })
}

/// `(u, u')` of one branch at `r`, up to a positive factor.
fn branch_at(p: &RadialProblem, direction: Direction, r: f64) -> Result<(f64, f64), RadialError> {
    p.validate()?;
    let mut st = p.stepper();
    let mut y = match direction {
        Direction::OutwardRegular => {
            let mut y = p.origin_seed(p.r_min)?;
            st.propagate(&mut y, p.r_min, r)?;
            y
        }
        Direction::InwardDecaying => {
            let mut y = p.infinity_seed(p.r_max)?;
            st.propagate(&mut y, p.r_max, r)?;
            y
        }
    };
    let mag = y[0].abs().max(y[1].abs());
    y[0] /= mag;
    y[1] /= mag;
    Ok((y[0], y[1]))
}

/// `W(u_out, u_in) / (|(u_out, u_out')| |(u_in, u_in')|)` at `r_match`; lies in `[-1, 1]`.
pub fn wronskian_match(nu: f64, l: u32, r_match: f64) -> Result<f64, RadialError> {
    let p = RadialProblem::new(nu, l);
    if !(r_match > p.r_min && r_match < p.r_max) {
        return Err(RadialError::InvalidProblem(format!(
            "r_match = {r_match} outside ({}, {})",
            p.r_min, p.r_max
        )));
    }
    let (a, da) = branch_at(&p, Direction::OutwardRegular, r_match)?;
    let (b, db) = branch_at(&p, Direction::InwardDecaying, r_match)?;
    Ok((a * db - da * b) / (a.hypot(da) * b.hypot(db)))
}

/// Matching radius used by [`admissibility`]: `nu^2`, clamped into the grid.
pub fn default_match_radius(p: &RadialProblem) -> f64 {
    (p.nu * p.nu).clamp(100.0 * p.r_min, 0.5 * p.r_max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Criteria {
    pub square_integrable: bool,
    pub origin_regular: bool,
    pub decaying_at_infinity: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchSummary {
    pub origin_exponent: f64,
    pub exponent_interval: (f64, f64),
    pub infinity_class: InfinityClass,
    pub infinity_rate: f64,
    pub norm_integral: NormIntegral,
}

impl From<&RadialSolution> for BranchSummary {
    fn from(s: &RadialSolution) -> Self {
        BranchSummary {
            origin_exponent: s.origin_exponent.exponent,
            exponent_interval: s.origin_exponent.interval,
            infinity_class: s.infinity_class,
            infinity_rate: s.infinity_rate,
            norm_integral: s.norm_integral,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibilityVerdict {
    pub nu: f64,
    pub l: u32,
    pub energy_hartree: f64,
    pub criteria: Criteria,
    pub admissible: bool,
    pub failure_modes: Vec<String>,
    pub wronskian: f64,
    pub r_match: f64,
    /// The branches coincide, so the criteria were read off the stitched solution.
    pub matched: bool,
    pub outward: BranchSummary,
    pub inward: BranchSummary,
}

/// Outward branch below `r_match`, inward branch above, scaled to agree at `r_match`.
#[derive(Debug, Clone, PartialEq)]
pub struct Stitched {
    pub grid: Vec<f64>,
    pub u: Vec<f64>,
}

pub fn stitch(out: &RadialSolution, inw: &RadialSolution, r_match: f64) -> Stitched {
    let i = out.grid.partition_point(|r| *r < r_match).min(out.grid.len() - 1);
    let scale = inw.u_values[i] / out.u_values[i];
    let u = out
        .grid
        .iter()
        .enumerate()
        .map(|(j, _)| if j < i { out.u_values[j] * scale } else { inw.u_values[j] })
        .collect();
    Stitched {
        grid: out.grid.clone(),
        u,
    }
}

/// Measures the three bound-state criteria for `(nu, l)`.
///
/// When the two branches match (`|W| < 1e-6`) they are one function and the
/// criteria are read off the stitched solution. Otherwise no solution is both
/// regular and decaying: the outward branch supplies the behaviour at infinity
/// and the inward branch the behaviour at the origin and the norm.
pub fn admissibility(nu: f64, l: u32) -> Result<AdmissibilityVerdict, RadialError> {
    let p = RadialProblem::new(nu, l);
    let out = integrate_radial(&p, Direction::OutwardRegular)?;
    let inw = integrate_radial(&p, Direction::InwardDecaying)?;
    let r_match = default_match_radius(&p);
    let wronskian = wronskian_match(nu, l, r_match)?;
    let matched = wronskian.abs() < MATCH_TOL;
    let criteria = if matched {
        Criteria {
            square_integrable: fit::norm_divergence(out.origin_exponent.exponent, inw.infinity_class)
                .is_none(),
            origin_regular: out.origin_exponent.exponent > REGULAR_EXPONENT,
            decaying_at_infinity: inw.infinity_class == InfinityClass::Decaying,
        }
    } else {
        Criteria {
            square_integrable: inw.norm_integral.is_finite(),
            origin_regular: inw.origin_exponent.exponent > REGULAR_EXPONENT,
            decaying_at_infinity: out.infinity_class == InfinityClass::Decaying,
        }
    };
    let mut failure_modes = Vec::new();
    for (ok, name) in [
        (criteria.square_integrable, "square-integrable"),
        (criteria.origin_regular, "origin-regular"),
        (criteria.decaying_at_infinity, "decaying-at-infinity"),
    ] {
        if !ok {
            failure_modes.push(name.to_string());
        }
    }
    Ok(AdmissibilityVerdict {
        nu,
        l,
        energy_hartree: p.energy(),
        admissible: failure_modes.is_empty(),
        criteria,
        failure_modes,
        wronskian,
        r_match,
        matched,
        outward: (&out).into(),
        inward: (&inw).into(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WronskianScan {
    pub l: u32,
    pub r_match: f64,
    pub samples: Vec<(f64, f64)>,
    /// Bisected to `1e-10` in `nu`.
    pub zeros: Vec<f64>,
}

/// Samples the normalized Wronskian on `steps + 1` equally spaced `nu` and
/// bisects every sign change.
pub fn wronskian_scan(
    l: u32,
    nu_min: f64,
    nu_max: f64,
    steps: usize,
    r_match: f64,
) -> Result<WronskianScan, RadialError> {
    if !(nu_min > 0.0 && nu_max > nu_min && steps >= 1) {
        return Err(RadialError::InvalidProblem(format!(
            "scan needs 0 < nu_min < nu_max and steps >= 1, got [{nu_min}, {nu_max}] / {steps}"
        )));
    }
    let nus: Vec<f64> = (0..=steps)
        .map(|i| nu_min + (nu_max - nu_min) * i as f64 / steps as f64)
        .collect();
    let samples = nus
        .par_iter()
        .map(|&nu| wronskian_match(nu, l, r_match).map(|w| (nu, w)))
        .collect::<Result<Vec<_>, _>>()?;
    let brackets: Vec<(f64, f64, f64)> = samples
        .windows(2)
        .filter_map(|w| {
            let ((a, wa), (b, wb)) = (w[0], w[1]);
            if wa == 0.0 {
                Some((a, a, 0.0))
            } else if wa * wb < 0.0 {
                Some((a, b, wa))
            } else {
                None
            }
        })
        .collect();
    let zeros = brackets
        .par_iter()
        .map(|&(mut a, mut b, wa)| {
            let sa = wa.signum();
            while b - a > 1e-10 {
                let m = 0.5 * (a + b);
                let wm = wronskian_match(m, l, r_match)?;
                if wm == 0.0 {
                    return Ok(m);
                }
                if wm.signum() == sa {
                    a = m;
                } else {
                    b = m;
                }
            }
            Ok(0.5 * (a + b))
        })
        .collect::<Result<Vec<_>, RadialError>>()?;
    Ok(WronskianScan {
        l,
        r_match,
        samples,
        zeros,
    })
}

/// Generalized Laguerre polynomial `L_k^(alpha)(x)` by the three-term recurrence.
pub fn laguerre(k: u32, alpha: f64, x: f64) -> f64 {
    let (mut l0, mut l1) = (1.0, 1.0 + alpha - x);
    if k == 0 {
        return l0;
    }
    for j in 1..k {
        let j = f64::from(j);
        let l2 = ((2.0 * j + 1.0 + alpha - x) * l1 - (j + alpha) * l0) / (j + 1.0);
        l0 = l1;
        l1 = l2;
    }
    l1
}

/// Unnormalized bound state `r^(l+1) e^(-r/n) L_(n-l-1)^(2l+1)(2r/n)` for integer `n > l`.
pub fn hydrogen_u(n: u32, l: u32, r: f64) -> f64 {
    assert!(n > l, "bound states need n > l");
    let nf = f64::from(n);
    r.powi(l as i32 + 1) * (-r / nf).exp() * laguerre(n - l - 1, f64::from(2 * l + 1), 2.0 * r / nf)
}
