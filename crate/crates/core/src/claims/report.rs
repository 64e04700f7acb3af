use std::fmt::Write as _;

use serde::Serialize;

use super::{AuditConfig, ClaimResult};
use crate::expr::PhysicalConstants;

pub const SCHEMA_VERSION: u32 = 1;

/// Audit output. Contains no timing data, so identical inputs give identical JSON.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub version: &'static str,
    pub constants: PhysicalConstants,
    pub claims: Vec<ClaimResult>,
    pub config: AuditConfig,
}

impl Report {
    pub fn new(cfg: &AuditConfig, claims: Vec<ClaimResult>) -> Self {
        Report {
            schema: SCHEMA_VERSION,
            version: env!("CARGO_PKG_VERSION"),
            constants: cfg.constants,
            claims,
            config: cfg.clone(),
        }
    }

    pub fn all_match(&self) -> bool {
        self.claims.iter().all(ClaimResult::matches_expected)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<4} {:<18} {:<18} {:<5} description", "id", "expected", "computed", "ok");
        for c in &self.claims {
            let _ = writeln!(
                out,
                "{:<4} {:<18} {:<18} {:<5} {}",
                c.id,
                c.expected.as_str(),
                c.computed.as_str(),
                if c.matches_expected() { "yes" } else { "NO" },
                c.description
            );
        }
        let matched = self.claims.iter().filter(|c| c.matches_expected()).count();
        let _ = writeln!(out, "{matched}/{} verdicts match", self.claims.len());
        out
    }
}
