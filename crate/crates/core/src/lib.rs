//! Finitely presented quandles and a concrete model of Thompson's quandle
//! inside Thompson's group `F`.
//!
//! - [`laurent`]: exact `Z[q, q^-1]` arithmetic and module presentations.
//! - [`algebra`]: the [`algebra::Quandle`] trait, Cayley tables, enumeration,
//!   conjugation and free quandles.
//! - [`term`]: quandle terms, the `.qdl` presentation language, evaluation,
//!   homomorphism counting, orbits, HNN extensions, Alexander matrices.
//! - [`thompson`]: tree-pair diagram arithmetic in `F`.
//! - [`thompson_quandle`]: Thompson's quandle realized by conjugation in `F`.
//! - [`experiments`]: verification drivers producing JSON-serializable reports.

pub mod algebra;
pub mod caps;
pub mod experiments;
pub mod laurent;
pub mod term;
pub mod thompson;
pub mod thompson_quandle;

pub use caps::Caps;
