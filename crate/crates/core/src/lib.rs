//! Noncommutative ℓᵖ spaces over finite truncations of the unitary dual of a
//! compact group.
//!
//! A [`DualModel`](dualmodel::DualModel) is a finite list of irreducible
//! representation classes, each known only through its dimension. A
//! [`Field`](dualmodel::Field) assigns a square matrix of that dimension to
//! every class. On top of that the crate provides
//!
//! * the Schatten family `ℓᵖ_sch` and the Hilbert–Schmidt family `ℓᵖ` of norms
//!   ([`norms`]),
//! * the trace pairing, explicit norming functionals and weighted direct sums
//!   ([`duality`]),
//! * complex-interpolation witness functions on the unit strip
//!   ([`interpolation`]),
//! * Clarkson, two-point, moduli, type/cotype and Kadec–Klee checks
//!   ([`inequalities`]),
//! * a seeded batch runner producing [`CheckReport`]s ([`suite`]).

pub mod dualmodel;
pub mod duality;
pub mod error;
pub mod inequalities;
pub mod interpolation;
pub mod matcore;
pub mod norms;
pub mod report;
pub mod rng;
pub mod suite;

pub use dualmodel::{DualEntry, DualModel, Field, FieldDistribution, Preset};
pub use error::{Error, Result};
pub use matcore::{CMatrix, C64};
pub use norms::{DirectSumSpec, ExponentP, Family};
pub use report::CheckReport;
pub use suite::{run_suite, FamilyChoice, ReportFormat, SuiteConfig, SuiteKind};
