use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::ClaimsError;
use crate::expr::PhysicalConstants;
use crate::weakform::BatteryConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Symbolic residual magnitude counted as zero.
    pub tol_sym: f64,
    /// Minimum residual magnitude for a refutation at a sample point.
    pub refute_min: f64,
    /// Finite-difference cross-check of angular residuals.
    pub fd_crosscheck: f64,
    /// Weak-form verdict threshold on normalized residuals.
    pub weak: f64,
    /// Normalized residual a refuting battery member must exceed.
    pub weak_refute: f64,
    /// Sifting versus mollified quadrature.
    pub path_agreement: f64,
    /// Both sides of the delta identity.
    pub delta_identity: f64,
    /// Distance of a Wronskian zero from the nearest integer.
    pub eigenvalue: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tol_sym: 1e-10,
            refute_min: 1e-3,
            fd_crosscheck: 1e-4,
            weak: 1e-9,
            weak_refute: 0.1,
            path_agreement: 1e-8,
            delta_identity: 1e-8,
            eigenvalue: 1e-3,
        }
    }
}

/// Generic points for the angular-time checks, in atomic units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplePoints {
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    pub t: Vec<f64>,
    pub r_n: f64,
    pub omega_n: f64,
}

impl Default for SamplePoints {
    fn default() -> Self {
        SamplePoints {
            theta: vec![PI / 3.0, PI / 4.0],
            phi: vec![0.0, PI / 2.0],
            // {0, pi / (2 omega_n)} with omega_n = 1
            t: vec![0.0, PI / 2.0],
            r_n: 1.0,
            omega_n: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WeakConfig {
    pub battery: BatteryConfig,
    pub mollifier_sigmas: Vec<f64>,
    /// Finer ladder for the whole-line delta identity, whose test functions
    /// have steeper high derivatives relative to their width.
    pub identity_sigmas: Vec<f64>,
    /// Values bound to `c1`, `c2` in the general radial solution.
    pub c1: f64,
    pub c2: f64,
    /// Orbit radii at which the orbit-sphere profile is paired.
    pub r_n: Vec<f64>,
}

impl Default for WeakConfig {
    fn default() -> Self {
        WeakConfig {
            battery: BatteryConfig::default(),
            mollifier_sigmas: vec![0.05, 0.02, 0.01, 0.005],
            identity_sigmas: vec![0.02, 0.01, 0.005, 0.0025],
            c1: 0.7,
            c2: 1.3,
            r_n: vec![1.0, 0.25, 4.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HydrogenConfig {
    /// Scan range for the one-wavelength condition, in units of `a_H`.
    pub scan_range: (f64, f64),
    /// Range expected to contain no orbit, in units of `a_H`.
    pub exclusion_range: (f64, f64),
    pub scan_samples: usize,
    pub bohr_n_max: u32,
    pub k_max: u32,
}

impl Default for HydrogenConfig {
    fn default() -> Self {
        HydrogenConfig {
            scan_range: (0.001, 1000.0),
            exclusion_range: (2.0, 1000.0),
            scan_samples: 100_000,
            bohr_n_max: 5,
            k_max: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RadialConfig {
    pub nu_min: f64,
    pub nu_max: f64,
    pub steps: usize,
    pub r_match: f64,
    pub l: u32,
    pub fractional_nu: f64,
}

impl Default for RadialConfig {
    fn default() -> Self {
        RadialConfig {
            nu_min: 0.3,
            nu_max: 3.5,
            steps: 200,
            r_match: 2.0,
            l: 0,
            fractional_nu: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AuditConfig {
    pub tolerances: Tolerances,
    pub samples: SamplePoints,
    pub weak: WeakConfig,
    pub hydrogen: HydrogenConfig,
    pub radial: RadialConfig,
    pub constants: PhysicalConstants,
    /// Claim ids that report an error without running.
    pub force_error: Vec<String>,
}

impl AuditConfig {
    pub fn from_toml_str(s: &str) -> Result<Self, ClaimsError> {
        let cfg: AuditConfig = toml::from_str(s).map_err(|e| ClaimsError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self, ClaimsError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ClaimsError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<(), ClaimsError> {
        self.constants.validate().map_err(ClaimsError::Config)?;
        let s = &self.samples;
        if s.theta.iter().any(|t| !(0.0..=PI).contains(t)) {
            return Err(ClaimsError::Config("sample theta outside [0, pi]".into()));
        }
        if !(s.r_n > 0.0 && s.omega_n > 0.0) {
            return Err(ClaimsError::Config("r_n and omega_n must be positive".into()));
        }
        for id in &self.force_error {
            super::Claim::get(id)?;
        }
        Ok(())
    }
}
