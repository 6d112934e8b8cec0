//! Resource caps for the exhaustive searches and the generator memo.

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const CAP_ENV: &str = "QUANDLEFORGE_CAP";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad {CAP_ENV} value {value:?}: {reason}")]
pub struct CapsError {
    pub value: String,
    pub reason: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest quandle order for enumeration and homomorphism counting.
    pub order: usize,
    /// Largest generator count for homomorphism counting.
    pub gens: usize,
    /// Largest index `n` for which `p(n)` may be built.
    pub p_index: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Self { order: 5, gens: 4, p_index: 64 }
    }
}

impl Caps {
    /// Parses an override: a bare integer sets the order cap; otherwise a
    /// comma-separated list of `order=N`, `gens=N`, `p=N`.
    pub fn parse_override(self, value: &str) -> Result<Self, CapsError> {
        let err = |reason: &str| CapsError { value: value.to_string(), reason: reason.to_string() };
        let value = value.trim();
        if let Ok(order) = value.parse::<usize>() {
            return Ok(Self { order, ..self });
        }
        let mut caps = self;
        for part in value.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, num) = part.split_once('=').ok_or_else(|| err("expected key=value"))?;
            let num: usize = num.trim().parse().map_err(|_| err("cap must be a nonnegative integer"))?;
            match key.trim() {
                "order" => caps.order = num,
                "gens" => caps.gens = num,
                "p" => caps.p_index = num,
                _ => return Err(err("unknown key; use order, gens or p")),
            }
        }
        Ok(caps)
    }

    /// Defaults with the environment override applied, if set.
    pub fn from_env() -> Result<Self, CapsError> {
        match std::env::var(CAP_ENV) {
            Ok(v) => Self::default().parse_override(&v),
            Err(_) => Ok(Self::default()),
        }
    }
}
