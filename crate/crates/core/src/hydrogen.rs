//! Circular Coulomb orbits under a de Broglie quantization condition, the
//! hydrino level table, and the comparison against the stability bound.
//!
//! SI units at the interface; the defect scan runs in atomic units.

use std::fmt::Write as _;

use num_rational::Rational64;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::expr::PhysicalConstants;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HydrogenError {
    #[error("bohr quantization needs n >= 1")]
    ZeroQuantumNumber,
    #[error("scan needs at least 1000 samples, got {0}")]
    TooFewSamples(usize),
    #[error("scan range [{lo:e}, {hi:e}] is not a positive interval")]
    BadRange { lo: f64, hi: f64 },
    #[error("k_max must lie in 1..=10000, got {0}")]
    BadKMax(u32),
}

/// `Cqm`: circumference equals one wavelength. `Bohr { n }`: n wavelengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum QuantizationMode {
    Cqm,
    Bohr { n: u32 },
}

impl QuantizationMode {
    pub fn bohr(n: u32) -> Result<Self, HydrogenError> {
        if n == 0 {
            return Err(HydrogenError::ZeroQuantumNumber);
        }
        Ok(QuantizationMode::Bohr { n })
    }

    /// Number of wavelengths on the orbit.
    pub fn wavelengths(self) -> u32 {
        match self {
            QuantizationMode::Cqm => 1,
            QuantizationMode::Bohr { n } => n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrbitSolution {
    /// m
    pub radius: f64,
    /// m/s
    pub phase_velocity: f64,
    /// rad/s
    pub angular_frequency: f64,
    /// eV
    pub kinetic_energy: f64,
    /// eV
    pub total_energy: f64,
}

fn joule_to_ev(j: f64, k: &PhysicalConstants) -> f64 {
    j / k.elementary_charge
}

/// Closed-form root of `m v^2 / r = alpha hbar c / r^2` with `v = n hbar / (m r)`.
pub fn solve_orbit(mode: QuantizationMode, k: &PhysicalConstants) -> OrbitSolution {
    let n = f64::from(mode.wavelengths());
    let radius = n * n * k.hbar / (k.electron_mass * k.alpha * k.light_speed);
    let phase_velocity = n * k.hbar / (k.electron_mass * radius);
    let kinetic = 0.5 * k.electron_mass * phase_velocity * phase_velocity;
    OrbitSolution {
        radius,
        phase_velocity,
        angular_frequency: phase_velocity / radius,
        kinetic_energy: joule_to_ev(kinetic, k),
        // virial theorem for the Coulomb potential: E = -T
        total_energy: -joule_to_ev(kinetic, k),
    }
}

/// Centripetal minus Coulomb force in atomic units with `v = n / r`.
pub fn force_defect(n: u32, r: f64) -> f64 {
    let n = f64::from(n);
    n * n / (r * r * r) - 1.0 / (r * r)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanResult {
    pub samples: usize,
    /// m, log-linear interpolation inside each bracketing cell.
    pub roots: Vec<f64>,
    /// Ratio between neighbouring grid points.
    pub grid_ratio: f64,
}

impl ScanResult {
    pub fn count(&self) -> usize {
        self.roots.len()
    }
}

/// Counts sign changes of the force defect on a geometric grid over `[lo, hi]` (m).
pub fn uniqueness_scan(
    mode: QuantizationMode,
    lo: f64,
    hi: f64,
    samples: usize,
    k: &PhysicalConstants,
) -> Result<ScanResult, HydrogenError> {
    if samples < 1000 {
        return Err(HydrogenError::TooFewSamples(samples));
    }
    if !(lo > 0.0 && hi > lo) {
        return Err(HydrogenError::BadRange { lo, hi });
    }
    let n = mode.wavelengths();
    let (a, b) = ((lo / k.bohr_radius).ln(), (hi / k.bohr_radius).ln());
    let step = (b - a) / (samples - 1) as f64;
    let grid = |i: usize| (a + step * i as f64).exp();
    let mut roots = Vec::new();
    let mut prev = force_defect(n, grid(0));
    if prev == 0.0 {
        roots.push(grid(0));
    }
    for i in 1..samples {
        let r = grid(i);
        let d = force_defect(n, r);
        if d == 0.0 {
            roots.push(r);
        } else if prev != 0.0 && (d > 0.0) != (prev > 0.0) {
            let x0 = a + step * (i - 1) as f64;
            let t = prev / (prev - d);
            roots.push((x0 + t * step).exp());
        }
        prev = d;
    }
    Ok(ScanResult {
        samples,
        roots: roots.into_iter().map(|r| r * k.bohr_radius).collect(),
        grid_ratio: step.exp(),
    })
}

fn ser_q<S: Serializer>(q: &Rational64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

/// Hydrino state with `q = 1/k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HydrinoLevel {
    pub k: u32,
    #[serde(serialize_with = "ser_q")]
    pub q: Rational64,
    /// m
    pub radius: f64,
    /// eV
    pub binding_energy: f64,
    /// m/s, `hbar / (m_e r)`
    pub orbital_velocity: f64,
    pub subluminal: bool,
}

pub fn hydrino_level(k: u32, c: &PhysicalConstants) -> HydrinoLevel {
    let q = Rational64::new(1, i64::from(k));
    let qf = 1.0 / f64::from(k);
    let radius = qf * c.bohr_radius;
    let orbital_velocity = c.hbar / (c.electron_mass * radius);
    HydrinoLevel {
        k,
        q,
        radius,
        binding_energy: c.rydberg_energy / (qf * qf),
        orbital_velocity,
        subluminal: orbital_velocity < c.light_speed,
    }
}

pub fn hydrino_table(k_max: u32, c: &PhysicalConstants) -> Result<Vec<HydrinoLevel>, HydrogenError> {
    if !(1..=10_000).contains(&k_max) {
        return Err(HydrogenError::BadKMax(k_max));
    }
    Ok((1..=k_max).map(|k| hydrino_level(k, c)).collect())
}

/// Largest k whose orbit is still subluminal, if the table reaches the cutoff.
pub fn subluminal_cutoff(levels: &[HydrinoLevel]) -> Option<&HydrinoLevel> {
    levels
        .windows(2)
        .find(|w| w[0].subluminal && !w[1].subluminal)
        .map(|w| &w[0])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StabilityVerdict {
    WithinBound,
    ExceedsBound,
}

pub fn stability_bound_check(level: &HydrinoLevel, c: &PhysicalConstants) -> StabilityVerdict {
    if level.binding_energy > c.stability_bound {
        StabilityVerdict::ExceedsBound
    } else {
        StabilityVerdict::WithinBound
    }
}

/// Aligned-column table, one row per level.
pub fn format_table(levels: &[HydrinoLevel]) -> String {
    let mut out = format!(
        "{:>6} {:>8} {:>14} {:>16} {:>14} {:>11}\n",
        "k", "q", "radius_m", "binding_eV", "velocity_m_s", "subluminal"
    );
    for l in levels {
        let _ = writeln!(
            out,
            "{:>6} {:>8} {:>14.6e} {:>16.4} {:>14.6e} {:>11}",
            l.k,
            l.q.to_string(),
            l.radius,
            l.binding_energy,
            l.orbital_velocity,
            l.subluminal
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> PhysicalConstants {
        PhysicalConstants::default()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn cqm_orbit_is_the_bohr_ground_state() {
        let c = k();
        let s = solve_orbit(QuantizationMode::Cqm, &c);
        assert!(rel(s.radius, 5.291_772_109_03e-11) < 1e-9);
        assert!(rel(s.phase_velocity, c.alpha * c.light_speed) < 1e-9);
        assert!(rel(s.phase_velocity, 2.1877e6) < 1e-4);
        assert_eq!(s, solve_orbit(QuantizationMode::bohr(1).unwrap(), &c));
        assert!(rel(s.angular_frequency, s.phase_velocity / s.radius) < 1e-15);
    }

    #[test]
    fn bohr_excited_level() {
        let c = k();
        let s1 = solve_orbit(QuantizationMode::Cqm, &c);
        let s2 = solve_orbit(QuantizationMode::bohr(2).unwrap(), &c);
        assert!(rel(s2.radius, 4.0 * s1.radius) < 1e-15);
        // -hartree/8
        assert!(rel(s2.total_energy, -27.211_386_245_988 / 8.0) < 1e-8);
        assert!((s2.total_energy + 3.4).abs() < 0.01);
        assert!(rel(s2.total_energy * 4.0, s1.total_energy) < 1e-12);
    }

    #[test]
    fn scan_finds_one_root() {
        let c = k();
        let a = c.bohr_radius;
        let s = uniqueness_scan(QuantizationMode::Cqm, a / 1000.0, 1000.0 * a, 100_000, &c).unwrap();
        assert_eq!(s.count(), 1);
        assert!(rel(s.roots[0], a) < s.grid_ratio - 1.0);
        let s = uniqueness_scan(QuantizationMode::Cqm, 2.0 * a, 1000.0 * a, 100_000, &c).unwrap();
        assert_eq!(s.count(), 0);
        let s = uniqueness_scan(QuantizationMode::Bohr { n: 3 }, a / 1000.0, 1000.0 * a, 100_000, &c).unwrap();
        assert_eq!(s.count(), 1);
        assert!(rel(s.roots[0], 9.0 * a) < 1e-4);
    }

    #[test]
    fn scan_counts_exact_grid_zero_once() {
        let c = k();
        let a = c.bohr_radius;
        // grid points at a/10^k; the root a sits exactly on one of them
        let s = uniqueness_scan(QuantizationMode::Cqm, a / 10.0, a * 10.0, 1001, &c).unwrap();
        assert_eq!(s.count(), 1);
    }

    #[test]
    fn scan_rejects_bad_input() {
        let c = k();
        assert_eq!(
            uniqueness_scan(QuantizationMode::Cqm, 1.0, 2.0, 10, &c),
            Err(HydrogenError::TooFewSamples(10))
        );
        assert!(uniqueness_scan(QuantizationMode::Cqm, 2.0, 1.0, 1000, &c).is_err());
        assert_eq!(QuantizationMode::bohr(0), Err(HydrogenError::ZeroQuantumNumber));
    }

    #[test]
    fn hydrino_levels() {
        let c = k();
        let t = hydrino_table(200, &c).unwrap();
        assert_eq!(t[0].binding_energy, 13.6);
        assert_eq!(t[0].radius, c.bohr_radius);
        assert!(t[0].subluminal);
        assert!(rel(t[1].binding_energy, 54.4) < 1e-15);
        assert!(rel(t[1].radius, c.bohr_radius / 2.0) < 1e-15);
        assert!(t[136].subluminal && !t[137].subluminal);
        assert_eq!(subluminal_cutoff(&t).unwrap().k, 137);
        assert_eq!(t[1].q, Rational64::new(1, 2));
        assert!(hydrino_table(0, &c).is_err());
    }

    #[test]
    fn stability_bound() {
        let c = k();
        let t = hydrino_table(137, &c).unwrap();
        assert_eq!(stability_bound_check(&t[0], &c), StabilityVerdict::WithinBound);
        assert_eq!(stability_bound_check(&t[1], &c), StabilityVerdict::ExceedsBound);
        assert_eq!(stability_bound_check(&t[136], &c), StabilityVerdict::ExceedsBound);
    }

    #[test]
    fn table_formats() {
        let c = k();
        let text = format_table(&hydrino_table(2, &c).unwrap());
        assert_eq!(text.lines().count(), 3);
        assert!(text.lines().nth(2).unwrap().contains("1/2"));
        let json = serde_json::to_value(hydrino_level(2, &c)).unwrap();
        assert_eq!(json["q"], "1/2");
    }
}
