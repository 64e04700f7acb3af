//! Mechanical checks for the orbit-sphere (CQM) account of the hydrogen atom and
//! for hydrino states in ordinary quantum mechanics.
//!
//! The crate is layered bottom-up:
//!
//! * [`expr`] and [`parse`]: exact expression trees and their text syntax.
//! * [`symcalc`]: differentiation, simplification, evaluation and residuals.
//! * [`weakform`]: distributional checks of candidates that contain deltas.
//! * [`hydrogen`]: orbit quantization and the hydrino level table.
//! * [`radial`]: the radial Schrödinger equation at real principal quantum number.
//! * [`claims`]: the registry that binds each assertion to a check, and the report.

pub mod claims;
pub mod expr;
pub mod hydrogen;
pub mod parse;
pub mod radial;
pub mod symcalc;
pub mod weakform;

pub use expr::{expr_equal, Expr, ExprError, Node, PhysicalConstants};
pub use parse::{parse_expr, print_expr, ParseError};
