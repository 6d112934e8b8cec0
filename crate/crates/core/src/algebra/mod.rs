//! The quandle interface and the concrete quandles used as models:
//! Cayley tables, conjugation quandles of groups, and free quandles.

mod conj;
mod enumerate;
mod finite;
mod free;
mod union_find;

pub use conj::ConjugationQuandle;
pub use enumerate::{enumerate_quandles, permutations};
pub use finite::{
    dihedral_quandle, first_violation, is_quandle, trivial_quandle, AxiomViolation, FiniteQuandle,
};
pub use free::{free_quandle_canonical, FreeQuandle, FreeQuandleElem, FreeWord, Letter};
pub use union_find::UnionFind;

use std::fmt::Debug;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("quandle order must be at least 1")]
    ZeroOrder,
    #[error("row {row} has {len} entries in a table of order {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("entry {value} at ({x}, {y}) is out of range for order {n}")]
    OutOfRange { x: usize, y: usize, value: usize, n: usize },
    #[error("table is not a quandle: {0}")]
    NotAQuandle(AxiomViolation),
    #[error("order {n} exceeds the cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("cannot parse Cayley table: {0}")]
    Parse(String),
}

/// A set with a left-invertible, idempotent, left self-distributive
/// operation `x ▷ y`.
pub trait Quandle {
    type Elem: Clone + PartialEq + Debug;

    /// `x ▷ y`.
    fn op(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;

    /// The unique `z` with `x ▷ z = y`.
    fn op_inv(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
}

/// Just enough of a group to form its conjugation quandle.
pub trait Group: Clone + PartialEq + Debug {
    fn identity() -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn inv(&self) -> Self;

    /// `self * y * self^-1`.
    fn conj(&self, y: &Self) -> Self {
        self.mul(y).mul(&self.inv())
    }

    fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inv() } else { self.clone() };
        (0..k.unsigned_abs()).fold(Self::identity(), |acc, _| acc.mul(&base))
    }
}
