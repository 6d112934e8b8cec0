//! Quandle terms and finite presentations.
//!
//! Terms are written with `|>` for `▷` and `<|` for its left inverse, so
//! `x <| (x |> y)` equals `y` in every quandle. Both operators are
//! right-associative with equal precedence; mixing them without parentheses
//! is rejected.

mod alexander;
mod hnn;
mod hom;
mod parse;
mod presentation;

pub use alexander::{abelianization_rank, alexander_matrix, linearize};
pub use hnn::{hnn_extend, parse_tau, thompson_hnn_data, HnnData};
pub use hom::{check_hom, eval, hom_count, orbit_count, OrbitPartition};
pub use parse::parse_term;
pub use presentation::{thompson_presentation, truncated_thompson_presentation, Presentation};

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("line {line}, column {col}: `|>` and `<|` cannot be mixed without parentheses")]
    MixedOperators { line: usize, col: usize },
    #[error("generator `{0}` has no assigned value")]
    Unassigned(String),
    #[error("`{0}` is not a declared generator")]
    Undeclared(String),
    #[error("generator `{0}` is declared twice")]
    DuplicateGenerator(String),
    #[error("stable letter `{0}` is already a generator")]
    StableLetterCollision(String),
    #[error("expected {expected} values, got {got}")]
    AssignmentLength { expected: usize, got: usize },
    #[error("{what} is {value}, above the cap of {cap}")]
    CapExceeded { what: &'static str, value: usize, cap: usize },
}

impl TermError {
    /// Moves a single-line parse position onto `line`, shifted by `col_offset`.
    pub(crate) fn relocate(self, line: usize, col_offset: usize) -> Self {
        match self {
            Self::Parse { col, msg, .. } => Self::Parse { line, col: col + col_offset, msg },
            Self::MixedOperators { col, .. } => Self::MixedOperators { line, col: col + col_offset },
            other => other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpKind {
    /// `x |> y`, the quandle operation `x ▷ y`.
    Act,
    /// `x <| y`, the unique `z` with `x ▷ z = y`.
    ActInv,
}

impl OpKind {
    pub fn symbol(self) -> &'static str {
        match self {
            Self::Act => "|>",
            Self::ActInv => "<|",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Gen(String),
    Op(Box<Term>, OpKind, Box<Term>),
}

impl Term {
    pub fn gen(name: impl Into<String>) -> Self {
        Self::Gen(name.into())
    }

    /// `left |> right`.
    pub fn act(left: Term, right: Term) -> Self {
        Self::Op(Box::new(left), OpKind::Act, Box::new(right))
    }

    /// `left <| right`.
    pub fn act_inv(left: Term, right: Term) -> Self {
        Self::Op(Box::new(left), OpKind::ActInv, Box::new(right))
    }

    /// The generator reached by always descending right. Every term maps to
    /// this generator's image in a trivial quandle.
    pub fn rightmost_leaf(&self) -> &str {
        match self {
            Self::Gen(name) => name,
            Self::Op(_, _, r) => r.rightmost_leaf(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Self::Gen(_) => 0,
            Self::Op(l, _, r) => 1 + l.depth().max(r.depth()),
        }
    }

    /// Every leaf, left to right, with repeats.
    pub fn leaves(&self) -> Vec<&str> {
        let mut out = Vec::new();
        fn walk<'a>(t: &'a Term, out: &mut Vec<&'a str>) {
            match t {
                Term::Gen(n) => out.push(n),
                Term::Op(l, _, r) => {
                    walk(l, out);
                    walk(r, out);
                }
            }
        }
        walk(self, &mut out);
        out
    }
}

/// Compound operands are always parenthesized, e.g. `(a |> b) |> (b |> (a |> b))`.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn operand(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t {
                Term::Gen(n) => write!(f, "{n}"),
                op => write!(f, "({op})"),
            }
        }
        match self {
            Self::Gen(n) => write!(f, "{n}"),
            Self::Op(l, k, r) => {
                operand(l, f)?;
                write!(f, " {} ", k.symbol())?;
                operand(r, f)
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_term(&s).map_err(serde::de::Error::custom)
    }
}
