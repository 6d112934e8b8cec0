use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Group, Quandle};

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Self { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Self { inverse: !self.inverse, ..self }
    }
}

/// A freely reduced word in the free group on generators `g0, g1, ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct FreeWord(Vec<Letter>);

impl FreeWord {
    pub fn new<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self(out)
    }

    pub fn generator(g: usize) -> Self {
        Self(vec![Letter::new(g, false)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The group homomorphism sending `g_i` to `images[i]`.
    pub fn eval<G: Group>(&self, images: &[G]) -> G {
        self.0.iter().fold(G::identity(), |acc, l| {
            let g = &images[l.generator];
            acc.mul(&if l.inverse { g.inv() } else { g.clone() })
        })
    }
}

impl Group for FreeWord {
    fn identity() -> Self {
        Self::default()
    }

    fn mul(&self, rhs: &Self) -> Self {
        Self::new(self.0.iter().chain(&rhs.0).copied())
    }

    fn inv(&self) -> Self {
        Self(self.0.iter().rev().map(|l| l.inv()).collect())
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|l| {
                if l.inverse {
                    format!("g{}^-1", l.generator)
                } else {
                    format!("g{}", l.generator)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// The conjugate `w g w⁻¹` of generator `g`, an element of the free quandle.
/// Stored with `w` reduced and not ending in `g^±1`, which makes the pair
/// unique per element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FreeQuandleElem {
    word: FreeWord,
    generator: usize,
}

/// Canonical representative of `word · g · word⁻¹`.
pub fn free_quandle_canonical(word: FreeWord, generator: usize) -> FreeQuandleElem {
    let mut letters = word.0;
    while letters.last().is_some_and(|l| l.generator == generator) {
        letters.pop();
    }
    FreeQuandleElem { word: FreeWord(letters), generator }
}

impl FreeQuandleElem {
    pub fn generator_elem(g: usize) -> Self {
        Self { word: FreeWord::default(), generator: g }
    }

    pub fn word(&self) -> &FreeWord {
        &self.word
    }

    pub fn generator(&self) -> usize {
        self.generator
    }

    /// The element as a group element, `w g w⁻¹`.
    pub fn to_word(&self) -> FreeWord {
        self.word.conj(&FreeWord::generator(self.generator))
    }

    /// Image under the quandle morphism sending generator `i` to `images[i]`:
    /// each letter of `w` acts by `▷` or its inverse, rightmost first.
    pub fn eval_in<Q: Quandle>(&self, model: &Q, images: &[Q::Elem]) -> Q::Elem {
        self.word
            .letters()
            .iter()
            .rev()
            .fold(images[self.generator].clone(), |acc, l| {
                let x = &images[l.generator];
                if l.inverse {
                    model.op_inv(x, &acc)
                } else {
                    model.op(x, &acc)
                }
            })
    }
}

impl fmt::Display for FreeQuandleElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] g{}", self.word, self.generator)
    }
}

/// The free quandle, realized as conjugates of generators in the free group.
#[derive(Debug, Clone, Copy)]
pub struct FreeQuandle {
    pub rank: usize,
}

impl Quandle for FreeQuandle {
    type Elem = FreeQuandleElem;

    fn op(&self, x: &FreeQuandleElem, y: &FreeQuandleElem) -> FreeQuandleElem {
        free_quandle_canonical(x.to_word().mul(&y.word), y.generator)
    }

    fn op_inv(&self, x: &FreeQuandleElem, y: &FreeQuandleElem) -> FreeQuandleElem {
        free_quandle_canonical(x.to_word().inv().mul(&y.word), y.generator)
    }
}
