use serde::{Deserialize, Serialize};

use super::scalar::NamedConstant;

/// CODATA 2018 values plus the two energy scales the audit compares against.
///
/// SI units except for the two energies, which are in eV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhysicalConstants {
    pub alpha: f64,
    /// m
    pub bohr_radius: f64,
    /// J s
    pub hbar: f64,
    /// kg
    pub electron_mass: f64,
    /// m/s
    pub light_speed: f64,
    /// C
    pub elementary_charge: f64,
    /// `W_1`, eV
    pub rydberg_energy: f64,
    /// Upper bound on the binding energy of the isolated atom, eV
    pub stability_bound: f64,
    /// eV
    pub hartree_energy: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA_2018
    }
}

impl PhysicalConstants {
    pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
        alpha: 7.297_352_569_3e-3,
        bohr_radius: 5.291_772_109_03e-11,
        // h / 2pi with h exact; the 10-digit rounding would offset a_H by 6e-10
        hbar: 1.054_571_817_646_156_5e-34,
        electron_mass: 9.109_383_701_5e-31,
        light_speed: 299_792_458.0,
        elementary_charge: 1.602_176_634e-19,
        rydberg_energy: 13.6,
        stability_bound: 20.0,
        hartree_energy: 27.211_386_245_988,
    };

    /// Checks the table invariants; returns a description of the first violation.
    pub fn validate(&self) -> Result<(), String> {
        let all = [
            ("alpha", self.alpha),
            ("bohr_radius", self.bohr_radius),
            ("hbar", self.hbar),
            ("electron_mass", self.electron_mass),
            ("light_speed", self.light_speed),
            ("elementary_charge", self.elementary_charge),
            ("rydberg_energy", self.rydberg_energy),
            ("stability_bound", self.stability_bound),
            ("hartree_energy", self.hartree_energy),
        ];
        for (name, v) in all {
            if !(v.is_finite() && v > 0.0) {
                return Err(format!("{name} must be positive and finite, got {v}"));
            }
        }
        if !(self.alpha > 1.0 / 138.0 && self.alpha < 1.0 / 137.0) {
            return Err(format!("alpha = {} outside (1/138, 1/137)", self.alpha));
        }
        if (self.rydberg_energy - 13.6).abs() > 0.01 {
            return Err(format!(
                "rydberg_energy = {} eV is not 13.6 eV within 0.01 eV",
                self.rydberg_energy
            ));
        }
        Ok(())
    }

    pub fn value_of(&self, c: NamedConstant) -> Option<f64> {
        Some(match c {
            NamedConstant::Pi => std::f64::consts::PI,
            NamedConstant::I => return None,
            NamedConstant::FineStructure => self.alpha,
            NamedConstant::BohrRadius => self.bohr_radius,
            NamedConstant::ReducedPlanck => self.hbar,
            NamedConstant::ElectronMass => self.electron_mass,
            NamedConstant::LightSpeed => self.light_speed,
            NamedConstant::ElementaryCharge => self.elementary_charge,
            NamedConstant::GroundBinding => self.rydberg_energy,
        })
    }
}
