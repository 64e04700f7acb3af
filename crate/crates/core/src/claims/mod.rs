//! Registry binding each audited assertion (C1..C9) to an executable check.

mod checks;
pub mod config;
pub mod report;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

pub use config::AuditConfig;
pub use report::Report;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClaimsError {
    #[error("unknown claim id {0:?}; expected C1..C9")]
    UnknownClaim(String),
    #[error("config: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Confirmed,
    RefutedCandidate,
    Informational,
    /// The computation disagrees with the expected conclusion.
    Contradicted,
    /// The check could not run.
    Error,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Confirmed => "confirmed",
            Verdict::RefutedCandidate => "refuted-candidate",
            Verdict::Informational => "informational",
            Verdict::Contradicted => "contradicted",
            Verdict::Error => "error",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub id: &'static str,
    pub description: &'static str,
    /// Short topic tag locating the assertion.
    pub anchor: &'static str,
    pub expected: Verdict,
    pub modules: &'static [&'static str],
}

pub const REGISTRY: [Claim; 9] = [
    Claim {
        id: "C1",
        description: "One-wavelength quantization with Coulomb force balance admits only the Bohr ground-state orbit",
        anchor: "orbit quantization uniqueness",
        expected: Verdict::Confirmed,
        modules: &["hydrogen"],
    },
    Claim {
        id: "C2",
        description: "The time-independent monopole charge density solves the separated angular-time equation",
        anchor: "monopole angular part",
        expected: Verdict::Confirmed,
        modules: &["expr", "symcalc"],
    },
    Claim {
        id: "C3",
        description: "The time-dependent l=1 charge density does not solve the separated angular-time equation",
        anchor: "time-dependent angular candidate",
        expected: Verdict::RefutedCandidate,
        modules: &["expr", "symcalc"],
    },
    Claim {
        id: "C4",
        description: "c1 + c2/r is the general solution of the Euler radial equation on (0, inf)",
        anchor: "Euler radial equation",
        expected: Verdict::Confirmed,
        modules: &["symcalc", "weakform"],
    },
    Claim {
        id: "C5",
        description: "The orbit-sphere profile delta(r - r_n)/r does not solve the Euler radial equation",
        anchor: "orbit-sphere radial profile",
        expected: Verdict::RefutedCandidate,
        modules: &["weakform"],
    },
    Claim {
        id: "C6",
        description: "x^n delta^(n)(x) = (-1)^n n! delta(x) as distributions",
        anchor: "delta derivative identity",
        expected: Verdict::Confirmed,
        modules: &["weakform"],
    },
    Claim {
        id: "C7",
        description: "Hydrino levels W_1 k^2 with orbital speed below c stop at k = floor(1/alpha)",
        anchor: "hydrino level cutoff",
        expected: Verdict::Informational,
        modules: &["hydrogen"],
    },
    Claim {
        id: "C8",
        description: "No admissible bound state of the radial Schrodinger equation exists for nu < 1",
        anchor: "fractional principal quantum number",
        expected: Verdict::Confirmed,
        modules: &["radial"],
    },
    Claim {
        id: "C9",
        description: "Every hydrino level with k >= 2 exceeds the 20 eV stability bound; k = 1 does not",
        anchor: "binding energy stability bound",
        expected: Verdict::Confirmed,
        modules: &["hydrogen"],
    },
];

impl Claim {
    pub fn get(id: &str) -> Result<&'static Claim, ClaimsError> {
        REGISTRY
            .iter()
            .find(|c| c.id.eq_ignore_ascii_case(id))
            .ok_or_else(|| ClaimsError::UnknownClaim(id.to_string()))
    }
}

pub type Evidence = BTreeMap<String, Value>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimResult {
    pub id: &'static str,
    pub description: &'static str,
    pub anchor: &'static str,
    pub expected: Verdict,
    pub computed: Verdict,
    pub evidence: Evidence,
    pub notes: Vec<String>,
}

impl ClaimResult {
    pub fn matches_expected(&self) -> bool {
        self.computed == self.expected
    }
}

/// What a check produced before it is bound to its registry entry.
pub(crate) struct Outcome {
    /// Whether the computation supports the expected conclusion.
    pub holds: bool,
    pub evidence: Evidence,
    pub notes: Vec<String>,
}

pub fn run_claim(id: &str, cfg: &AuditConfig) -> Result<ClaimResult, ClaimsError> {
    let claim = Claim::get(id)?;
    let outcome = if cfg.force_error.iter().any(|f| f.eq_ignore_ascii_case(claim.id)) {
        Err("forced by configuration".to_string())
    } else {
        checks::run(claim.id, cfg)
    };
    let (computed, evidence, notes) = match outcome {
        Ok(o) => (
            if o.holds { claim.expected } else { Verdict::Contradicted },
            o.evidence,
            o.notes,
        ),
        Err(msg) => (
            Verdict::Error,
            BTreeMap::from([("error".to_string(), Value::String(msg))]),
            Vec::new(),
        ),
    };
    Ok(ClaimResult {
        id: claim.id,
        description: claim.description,
        anchor: claim.anchor,
        expected: claim.expected,
        computed,
        evidence,
        notes,
    })
}

/// Runs every claim concurrently and assembles the report in id order.
pub fn run_all(cfg: &AuditConfig) -> Report {
    let claims = REGISTRY
        .par_iter()
        .map(|c| run_claim(c.id, cfg).expect("registry ids are valid"))
        .collect();
    Report::new(cfg, claims)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_ids_are_unique_and_ordered() {
        let ids: Vec<&str> = REGISTRY.iter().map(|c| c.id).collect();
        assert_eq!(ids, ["C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9"]);
        assert!(REGISTRY.iter().all(|c| !c.modules.is_empty()));
        assert!(Claim::get("c5").is_ok());
        assert_eq!(Claim::get("C10"), Err(ClaimsError::UnknownClaim("C10".into())));
    }

    #[test]
    fn forced_error_is_recorded() {
        let cfg = AuditConfig {
            force_error: vec!["C7".into()],
            ..AuditConfig::default()
        };
        let r = run_claim("C7", &cfg).unwrap();
        assert_eq!(r.computed, Verdict::Error);
        assert!(!r.evidence.is_empty());
    }
}
