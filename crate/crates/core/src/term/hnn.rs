use serde::{Deserialize, Serialize};

use super::{parse_term, thompson_presentation, Presentation, Term, TermError};

/// Input to an HNN extension: a base presentation, a fresh stable letter `t`,
/// and the partial isomorphism `τ` given on generators of its domain `U` as
/// pairs `(u, τ(u))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HnnData {
    pub base: Presentation,
    pub stable_letter: String,
    pub tau_pairs: Vec<(Term, Term)>,
}

/// Adds the stable letter and one relation `t |> u = τ(u)` per pair. Left
/// multiplication by `t` is an automorphism, so relations on generators of
/// `U` imply `t ▷ u = τ(u)` for every `u ∈ U`.
pub fn hnn_extend(data: &HnnData) -> Result<Presentation, TermError> {
    let base = &data.base;
    if base.generator_index(&data.stable_letter).is_some() {
        return Err(TermError::StableLetterCollision(data.stable_letter.clone()));
    }
    for (u, v) in &data.tau_pairs {
        for leaf in u.leaves().into_iter().chain(v.leaves()) {
            if base.generator_index(leaf).is_none() {
                return Err(TermError::Undeclared(leaf.to_string()));
            }
        }
    }
    let mut generators = base.generators().to_vec();
    generators.push(data.stable_letter.clone());
    let mut relations = base.relations().to_vec();
    let t = Term::gen(&data.stable_letter);
    relations.extend(
        data.tau_pairs
            .iter()
            .map(|(u, v)| (Term::act(t.clone(), u.clone()), v.clone())),
    );
    Presentation::new(format!("{}_hnn", base.name()), generators, relations)
}

/// Parses `u1->v1, u2->v2, ...`.
pub fn parse_tau(text: &str) -> Result<Vec<(Term, Term)>, TermError> {
    let mut out = Vec::new();
    let mut col = 1;
    for part in text.split(',') {
        let offset = col - 1;
        col += part.chars().count() + 1;
        if part.trim().is_empty() {
            continue;
        }
        let Some((u, v)) = part.split_once("->") else {
            return Err(TermError::Parse {
                line: 1,
                col: offset + 1 + (part.len() - part.trim_start().len()),
                msg: "expected `u -> v`".into(),
            });
        };
        let u_term = parse_term(u).map_err(|e| e.relocate(1, offset))?;
        let v_term = parse_term(v).map_err(|e| e.relocate(1, offset + u.chars().count() + 2))?;
        out.push((u_term, v_term));
    }
    Ok(out)
}

/// The shift `p_j -> p_{j+1}` on the presentation `<a, b>` read as the
/// subquandle generated by `p_1, p_2, ...`: `τ(a) = b`, `τ(b) = a |> b`,
/// stable letter `t`.
pub fn thompson_hnn_data() -> HnnData {
    HnnData {
        base: thompson_presentation(),
        stable_letter: "t".into(),
        tau_pairs: parse_tau("a -> b, b -> a |> b").expect("built-in tau parses"),
    }
}
