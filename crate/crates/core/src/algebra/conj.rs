use std::marker::PhantomData;

use super::{Group, Quandle};

/// A group viewed as a quandle under conjugation, `x ▷ y = x y x⁻¹`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ConjugationQuandle<G>(PhantomData<G>);

impl<G> ConjugationQuandle<G> {
    pub fn new() -> Self {
        Self(PhantomData)
    }
}

impl<G: Group> Quandle for ConjugationQuandle<G> {
    type Elem = G;

    fn op(&self, x: &G, y: &G) -> G {
        x.conj(y)
    }

    fn op_inv(&self, x: &G, y: &G) -> G {
        x.inv().conj(y)
    }
}
