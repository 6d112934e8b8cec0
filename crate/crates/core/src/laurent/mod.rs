//! Exact arithmetic in the Laurent polynomial ring `Z[q, q^-1]` and matrices
//! over it.
//!
//! Polynomials are stored sparsely as a map from exponent to nonzero integer
//! coefficient. The zero polynomial is the empty map.

mod matrix;

pub use matrix::{
    describe_module, describe_with_transcript, matrix_reduce, rational_rank, row_quotient, LaurentMatrix,
    ModuleDescription, Reduction, ReductionStep,
};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("q must specialize to an invertible value, got {0}")]
    NotInvertible(String),
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(u64),
    #[error("row {row} has {len} entries, expected {ncols}")]
    RaggedRow { row: usize, len: usize, ncols: usize },
    #[error("{labels} column labels for {ncols} columns")]
    LabelMismatch { labels: usize, ncols: usize },
}

/// An element of `Z[q, q^-1]` in canonical sparse form.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `coeff * q^exp`.
    pub fn monomial(coeff: i64, exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if coeff != 0 {
            terms.insert(exp, coeff);
        }
        Self { terms }
    }

    /// The indeterminate `q`.
    pub fn q() -> Self {
        Self::monomial(1, 1)
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, summing
    /// repeated exponents and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (i64, i64)>>(pairs: I) -> Self {
        let mut terms = BTreeMap::new();
        for (exp, coeff) in pairs {
            *terms.entry(exp).or_insert(0) += coeff;
        }
        terms.retain(|_, c| *c != 0);
        Self { terms }
    }

    /// `1 - q`, the annihilator that shows up in every Alexander computation here.
    pub fn one_minus_q() -> Self {
        Self::from_terms([(0, 1), (1, -1)])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    /// Iterates `(exponent, coefficient)` in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Units of `Z[q, q^-1]` are exactly `±q^k`.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms.values().all(|c| c.abs() == 1)
    }

    pub fn unit_inverse(&self) -> Option<Self> {
        if !self.is_unit() {
            return None;
        }
        let (&e, &c) = self.terms.iter().next()?;
        Some(Self::monomial(c, -e))
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, &c)| (e + k, c)).collect(),
        }
    }

    /// Canonical associate: lowest exponent moved to 0 and that constant
    /// term made positive. Two polynomials generate the same ideal iff their
    /// associates agree.
    pub fn normalize_associate(&self) -> Self {
        let Some(low) = self.min_exp() else {
            return Self::zero();
        };
        let shifted = self.shift(-low);
        if shifted.coeff(0) < 0 {
            -shifted
        } else {
            shifted
        }
    }

    /// Exact division: returns `u` with `self = u * divisor` if one exists.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        // Strip the q-adic valuations; what remains is a pair of ordinary
        // integer polynomials with nonzero constant terms, and any Laurent
        // quotient of those must be an honest polynomial.
        let self_low = self.min_exp().unwrap_or(0);
        let div_low = divisor.min_exp().unwrap_or(0);
        let mut rem = self.shift(-self_low);
        let den = divisor.shift(-div_low);
        let den_top = den.max_exp().unwrap_or(0);
        let den_lead = den.coeff(den_top);
        let mut quotient = BTreeMap::new();
        while let Some(top) = rem.max_exp() {
            if top < den_top {
                return None;
            }
            let lead = rem.coeff(top);
            if lead % den_lead != 0 {
                return None;
            }
            let factor = Self::monomial(lead / den_lead, top - den_top);
            quotient.insert(top - den_top, lead / den_lead);
            rem = &rem - &(&factor * &den);
        }
        let quotient = Self { terms: quotient };
        Some(quotient.shift(self_low - div_low))
    }

    /// Substitutes a nonzero rational for `q`.
    pub fn eval_rational(&self, at: &BigRational) -> Result<BigRational, LaurentError> {
        if at.is_zero() {
            return Err(LaurentError::NotInvertible(at.to_string()));
        }
        let mut total = BigRational::zero();
        for (e, c) in self.terms() {
            let power = pow_rational(at, e);
            total += power * BigRational::from_integer(BigInt::from(c));
        }
        Ok(total)
    }

    /// Substitutes a residue for `q` in `Z/modulus`; `at` must be a unit mod `modulus`.
    pub fn eval_mod(&self, at: u64, modulus: u64) -> Result<u64, LaurentError> {
        if modulus < 2 {
            return Err(LaurentError::BadModulus(modulus));
        }
        let m = modulus as i128;
        let a = (at % modulus) as i128;
        let inv = mod_inverse(a, m).ok_or_else(|| LaurentError::NotInvertible(format!("{at} mod {modulus}")))?;
        let mut total: i128 = 0;
        for (e, c) in self.terms() {
            let base = if e < 0 { inv } else { a };
            let p = mod_pow(base, e.unsigned_abs(), m);
            total = (total + (c as i128).rem_euclid(m) * p).rem_euclid(m);
        }
        Ok(total as u64)
    }
}

fn pow_rational(base: &BigRational, exp: i64) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..exp.unsigned_abs() {
        acc *= base;
    }
    if exp < 0 {
        acc.recip()
    } else {
        acc
    }
}

fn mod_pow(mut base: i128, mut exp: u64, m: i128) -> i128 {
    let mut acc = 1 % m;
    base = base.rem_euclid(m);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    let (mut r0, mut r1) = (m, a.rem_euclid(m));
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(m))
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms().chain(rhs.terms()))
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms().chain(rhs.terms().map(|(e, c)| (e, -c))))
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.terms()
                .flat_map(|(e1, c1)| rhs.terms().map(move |(e2, c2)| (e1 + e2, c1 * c2))),
        )
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(&e, &c)| (e, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        Self::monomial(c, 0)
    }
}

/// Ascending exponent order, e.g. `1 - q`, `-1 + q`, `2*q^-1`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            let mag = c.unsigned_abs();
            match (i, c < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            match (e, mag) {
                (0, _) => write!(f, "{mag}")?,
                (1, 1) => write!(f, "q")?,
                (1, _) => write!(f, "{mag}*q")?,
                (_, 1) => write!(f, "q^{e}")?,
                _ => write!(f, "{mag}*q^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

/// JSON form: a list of `[exponent, coefficient]` pairs in ascending order.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.terms().map(|(e, c)| [e, c]))
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let pairs = Vec::<[i64; 2]>::deserialize(deserializer)?;
        Ok(Self::from_terms(pairs.into_iter().map(|[e, c]| (e, c))))
    }
}
