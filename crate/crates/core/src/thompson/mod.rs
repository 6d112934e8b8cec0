//! Thompson's group `F` as reduced tree-pair diagrams.
//!
//! A pair `(domain, range)` with equal leaf counts is the piecewise-linear
//! map sending the i-th dyadic interval of `domain` affinely onto the i-th
//! interval of `range`. Products compose as functions: `p.mul(r)` applies `r`
//! first, then `p`.

mod tree;

pub use tree::BinTree;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{FreeWord, Group, Letter};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThompsonError {
    #[error("domain has {domain} leaves but range has {range}")]
    LeafMismatch { domain: usize, range: usize },
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("no generator x{0}; only x0 and x1")]
    NoSuchGenerator(usize),
}

/// An element of `F`, always stored reduced, so structural equality is
/// group equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TreePair {
    domain: BinTree,
    range: BinTree,
}

/// Cancels common exposed carets until none remain. The reduced diagram is
/// unique, so the order of cancellation does not matter.
pub fn reduce(domain: BinTree, range: BinTree) -> Result<TreePair, ThompsonError> {
    reduce_by(domain, range, |common| common[0])
}

pub(crate) fn reduce_by(
    mut domain: BinTree,
    mut range: BinTree,
    mut pick: impl FnMut(&[usize]) -> usize,
) -> Result<TreePair, ThompsonError> {
    let (dl, rl) = (domain.leaf_count(), range.leaf_count());
    if dl != rl {
        return Err(ThompsonError::LeafMismatch { domain: dl, range: rl });
    }
    loop {
        let in_range = range.exposed_carets();
        let common: Vec<usize> = domain
            .exposed_carets()
            .into_iter()
            .filter(|i| in_range.binary_search(i).is_ok())
            .collect();
        if common.is_empty() {
            return Ok(TreePair { domain, range });
        }
        let i = pick(&common);
        domain = domain.collapse_caret(i);
        range = range.collapse_caret(i);
    }
}

impl TreePair {
    /// Builds and reduces.
    pub fn new(domain: BinTree, range: BinTree) -> Result<Self, ThompsonError> {
        reduce(domain, range)
    }

    pub fn identity() -> Self {
        Self { domain: BinTree::Leaf, range: BinTree::Leaf }
    }

    pub fn domain(&self) -> &BinTree {
        &self.domain
    }

    pub fn range(&self) -> &BinTree {
        &self.range
    }

    pub fn is_identity(&self) -> bool {
        self.domain.is_leaf()
    }

    pub fn leaf_count(&self) -> usize {
        self.domain.leaf_count()
    }

    /// `x0 = ((.,(.,.)) -> ((.,.),.))`, which halves `[0, 1/2]` onto `[0, 1/4]`.
    pub fn x0() -> Self {
        Self {
            domain: BinTree::node(BinTree::Leaf, BinTree::caret()),
            range: BinTree::node(BinTree::caret(), BinTree::Leaf),
        }
    }

    /// `x1 = shift(x0)`: the identity on `[0, 1/2]` and a copy of `x0` on `[1/2, 1]`.
    pub fn x1() -> Self {
        Self::x0().shift()
    }

    /// `x_n = shift^n(x0)`.
    pub fn x(n: usize) -> Self {
        (0..n).fold(Self::x0(), |p, _| p.shift())
    }

    pub fn generator(i: usize) -> Result<Self, ThompsonError> {
        match i {
            0 => Ok(Self::x0()),
            1 => Ok(Self::x1()),
            _ => Err(ThompsonError::NoSuchGenerator(i)),
        }
    }

    pub fn invert(&self) -> Self {
        Self { domain: self.range.clone(), range: self.domain.clone() }
    }

    /// `self ∘ rhs`: apply `rhs`, then `self`.
    pub fn multiply(&self, rhs: &Self) -> Self {
        let common = rhs.range.union(&self.domain);
        let mut below_rhs = Vec::with_capacity(common.leaf_count());
        rhs.range.leaf_subtrees(&common, &mut below_rhs);
        let mut below_self = Vec::with_capacity(common.leaf_count());
        self.domain.leaf_subtrees(&common, &mut below_self);
        let domain = rhs.domain.graft(&mut below_rhs.into_iter());
        let range = self.range.graft(&mut below_self.into_iter());
        reduce(domain, range).expect("expansion preserves leaf counts")
    }

    /// The shift endomorphism: conjugates the element onto `[1/2, 1]` by
    /// grafting both trees under a new root whose left child is a leaf.
    pub fn shift(&self) -> Self {
        if self.is_identity() {
            return Self::identity();
        }
        Self {
            domain: BinTree::node(BinTree::Leaf, self.domain.clone()),
            range: BinTree::node(BinTree::Leaf, self.range.clone()),
        }
    }

    /// Log-2 slopes at the two endpoints, `(at 0, at 1)`. Each coordinate is
    /// a homomorphism `F -> Z`, and together they give the abelianization.
    pub fn abelianize(&self) -> (i64, i64) {
        let d = |a: usize, b: usize| a as i64 - b as i64;
        (
            d(self.domain.left_depth(), self.range.left_depth()),
            d(self.domain.right_depth(), self.range.right_depth()),
        )
    }

    /// Product of `x0^±1`, `x1^±1` letters, left to right.
    pub fn from_word(word: &FreeWord) -> Self {
        word.eval(&[Self::x0(), Self::x1()])
    }
}

impl Group for TreePair {
    fn identity() -> Self {
        TreePair::identity()
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.multiply(rhs)
    }

    fn inv(&self) -> Self {
        self.invert()
    }
}

/// `domain -> range`.
impl fmt::Display for TreePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.domain, self.range)
    }
}

impl fmt::Debug for TreePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TreePair({self})")
    }
}

impl FromStr for TreePair {
    type Err = ThompsonError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (d, r) = s.split_once("->").ok_or_else(|| ThompsonError::Parse {
            pos: 0,
            msg: "expected `domain -> range`".into(),
        })?;
        Self::new(d.parse()?, r.parse()?)
    }
}

#[derive(Serialize, Deserialize)]
struct TreePairJson {
    domain: String,
    range: String,
}

impl Serialize for TreePair {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        TreePairJson { domain: self.domain.to_string(), range: self.range.to_string() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TreePair {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = TreePairJson::deserialize(deserializer)?;
        let domain = raw.domain.parse().map_err(D::Error::custom)?;
        let range = raw.range.parse().map_err(D::Error::custom)?;
        Self::new(domain, range).map_err(D::Error::custom)
    }
}

/// A uniformly random word of length `0..=max_len` over `x0^±1, x1^±1`
/// (not necessarily freely reduced).
pub fn random_word<R: Rng>(rng: &mut R, max_len: usize) -> FreeWord {
    let len = rng.gen_range(0..=max_len);
    FreeWord::new((0..len).map(|_| Letter::new(rng.gen_range(0..2), rng.gen_bool(0.5))))
}

pub fn random_element<R: Rng>(rng: &mut R, max_len: usize) -> TreePair {
    TreePair::from_word(&random_word(rng, max_len))
}

/// A random binary tree with `leaves` leaves.
pub fn random_tree<R: Rng>(rng: &mut R, leaves: usize) -> BinTree {
    if leaves <= 1 {
        return BinTree::Leaf;
    }
    let left = rng.gen_range(1..leaves);
    BinTree::node(random_tree(rng, left), random_tree(rng, leaves - left))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn commutator(u: &TreePair, v: &TreePair) -> TreePair {
        u.mul(v).mul(&u.inv()).mul(&v.inv())
    }

    #[test]
    fn reduce_examples() {
        let t: BinTree = "((.,.),(.,(.,.)))".parse().unwrap();
        assert!(TreePair::new(t.clone(), t).unwrap().is_identity());
        let x0 = TreePair::x0();
        assert_eq!(TreePair::new(x0.domain().clone(), x0.range().clone()).unwrap(), x0);
        assert_eq!(
            TreePair::new(BinTree::caret(), BinTree::Leaf),
            Err(ThompsonError::LeafMismatch { domain: 2, range: 1 })
        );
    }

    #[test]
    fn reduce_is_idempotent_and_order_free() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let n = rng.gen_range(1..9);
            let (d, r) = (random_tree(&mut rng, n), random_tree(&mut rng, n));
            let once = reduce(d.clone(), r.clone()).unwrap();
            let twice = reduce(once.domain().clone(), once.range().clone()).unwrap();
            assert_eq!(once, twice);
            let mut pick_rng = ChaCha8Rng::seed_from_u64(n as u64);
            let random_order = reduce_by(d, r, |c| c[pick_rng.gen_range(0..c.len())]).unwrap();
            assert_eq!(once, random_order);
        }
    }

    #[test]
    fn generator_shapes() {
        let x0 = TreePair::x0();
        assert_eq!(x0.to_string(), "(.,(.,.)) -> ((.,.),.)");
        assert_eq!(x0.leaf_count(), 3);
        assert_eq!(TreePair::x1().to_string(), "(.,(.,(.,.))) -> (.,((.,.),.))");
        assert_eq!(TreePair::generator(1).unwrap(), TreePair::x0().shift());
        assert_ne!(TreePair::generator(0).unwrap(), TreePair::generator(1).unwrap());
        assert!(TreePair::generator(2).is_err());
    }

    #[test]
    fn inverse_and_identity() {
        let x0 = TreePair::x0();
        assert!(x0.mul(&x0.inv()).is_identity());
        assert!(x0.inv().mul(&x0).is_identity());
    }

    #[test]
    fn standard_relators() {
        let (a, b) = (TreePair::x0(), TreePair::x1());
        let u = a.mul(&b.inv());
        let v1 = a.inv().mul(&b).mul(&a);
        let v2 = a.pow(-2).mul(&b).mul(&a.pow(2));
        assert!(commutator(&u, &v1).is_identity());
        assert!(commutator(&u, &v2).is_identity());
        // The defining conjugation relations in this composition order.
        for k in 0..4 {
            for n in k + 1..6 {
                assert_eq!(TreePair::x(k).inv().conj(&TreePair::x(n)), TreePair::x(n + 1));
            }
        }
    }

    #[test]
    fn nonabelian() {
        let (a, b) = (TreePair::x0(), TreePair::x1());
        assert_ne!(a.mul(&b), b.mul(&a));
    }

    #[test]
    fn abelianization() {
        assert_eq!(TreePair::identity().abelianize(), (0, 0));
        let (s0, s1) = (TreePair::x0().abelianize(), TreePair::x1().abelianize());
        assert_eq!(s0, (-1, 1));
        assert_eq!(s1, (0, 1));
        assert_ne!(s0.0 * s1.1 - s0.1 * s1.0, 0);
    }

    #[test]
    fn shift_identity_and_injectivity() {
        assert!(TreePair::identity().shift().is_identity());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let p = random_element(&mut rng, 6);
            let s = p.shift();
            match s.domain() {
                BinTree::Node(l, d) if !p.is_identity() => {
                    assert!(l.is_leaf());
                    assert_eq!(**d, *p.domain());
                }
                _ => assert!(p.is_identity()),
            }
        }
    }

    #[test]
    fn text_and_json_round_trip() {
        let p = TreePair::x0().mul(&TreePair::x1().inv());
        assert_eq!(p.to_string().parse::<TreePair>().unwrap(), p);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<TreePair>(&json).unwrap(), p);
    }
}
