use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{OpKind, Presentation, Term, TermError};
use crate::algebra::{FiniteQuandle, Quandle, UnionFind};
use crate::caps::Caps;

/// Evaluates `t` in `model`, looking generators up in `assignment`.
pub fn eval<Q: Quandle>(
    t: &Term,
    assignment: &HashMap<String, Q::Elem>,
    model: &Q,
) -> Result<Q::Elem, TermError> {
    eval_with(t, &|name| assignment.get(name).cloned(), model)
}

pub(crate) fn eval_with<Q: Quandle>(
    t: &Term,
    lookup: &dyn Fn(&str) -> Option<Q::Elem>,
    model: &Q,
) -> Result<Q::Elem, TermError> {
    match t {
        Term::Gen(name) => lookup(name).ok_or_else(|| TermError::Unassigned(name.clone())),
        Term::Op(l, kind, r) => {
            let x = eval_with(l, lookup, model)?;
            let y = eval_with(r, lookup, model)?;
            Ok(match kind {
                OpKind::Act => model.op(&x, &y),
                OpKind::ActInv => model.op_inv(&x, &y),
            })
        }
    }
}

/// Whether sending the generators to `values` (in declaration order) respects
/// every relation, i.e. extends to a quandle morphism.
pub fn check_hom<Q: Quandle>(
    pres: &Presentation,
    model: &Q,
    values: &[Q::Elem],
) -> Result<bool, TermError> {
    let gens = pres.generators();
    if values.len() != gens.len() {
        return Err(TermError::AssignmentLength { expected: gens.len(), got: values.len() });
    }
    let lookup = |name: &str| pres.generator_index(name).map(|i| values[i].clone());
    for (l, r) in pres.relations() {
        if eval_with(l, &lookup, model)? != eval_with(r, &lookup, model)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Counts morphisms from the presented quandle into `q` by trying all
/// `|q|^#generators` assignments.
pub fn hom_count(pres: &Presentation, q: &FiniteQuandle, caps: &Caps) -> Result<u64, TermError> {
    if q.order() > caps.order {
        return Err(TermError::CapExceeded { what: "model order", value: q.order(), cap: caps.order });
    }
    let k = pres.generators().len();
    if k > caps.gens {
        return Err(TermError::CapExceeded { what: "generator count", value: k, cap: caps.gens });
    }
    let n = q.order();
    let mut values = vec![0usize; k];
    let mut count = 0;
    loop {
        if check_hom(pres, q, &values)? {
            count += 1;
        }
        // Odometer increment, last generator fastest.
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(count);
            }
            i -= 1;
            values[i] += 1;
            if values[i] < n {
                break;
            }
            values[i] = 0;
        }
    }
}

/// The orbit partition of the generators of a presentation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitPartition {
    pub count: usize,
    /// Blocks of generator names, each in declaration order, ordered by first member.
    pub blocks: Vec<Vec<String>>,
}

/// Orbits of the presented quandle. A morphism into a trivial quandle sends
/// each term to the image of its rightmost leaf, so the universal trivial
/// quotient is the generator set modulo `rightmost(L) ~ rightmost(R)` for each
/// relation.
pub fn orbit_count(pres: &Presentation) -> OrbitPartition {
    let gens = pres.generators();
    let mut uf = UnionFind::new(gens.len());
    for (l, r) in pres.relations() {
        let i = pres.generator_index(l.rightmost_leaf()).expect("validated presentation");
        let j = pres.generator_index(r.rightmost_leaf()).expect("validated presentation");
        uf.union(i, j);
    }
    let blocks: Vec<Vec<String>> = uf
        .blocks()
        .into_iter()
        .map(|b| b.into_iter().map(|i| gens[i].clone()).collect())
        .collect();
    OrbitPartition { count: blocks.len(), blocks }
}

#[cfg(test)]
mod tests {
    use super::super::{parse_term, thompson_presentation, truncated_thompson_presentation};
    use super::*;
    use crate::algebra::{dihedral_quandle, trivial_quandle, FiniteQuandle};
    use proptest::prelude::*;

    fn assign(pairs: &[(&str, usize)]) -> HashMap<String, usize> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn eval_examples() {
        let triv = trivial_quandle(4).unwrap();
        let t = parse_term("a |> b").unwrap();
        assert_eq!(eval(&t, &assign(&[("a", 1), ("b", 3)]), &triv).unwrap(), 3);

        let d3 = dihedral_quandle(3).unwrap();
        let round = parse_term("a <| (a |> b)").unwrap();
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(eval(&round, &assign(&[("a", a), ("b", b)]), &d3).unwrap(), b);
            }
        }
        let t = parse_term("a |> (a |> b)").unwrap();
        assert_eq!(eval(&t, &assign(&[("a", 0), ("b", 1)]), &d3).unwrap(), 1);
        assert_eq!(eval(&t, &assign(&[("a", 0)]), &d3), Err(TermError::Unassigned("b".into())));
    }

    /// Homomorphisms counted by plugging every pair into the two relations
    /// written out directly in the model's arithmetic.
    fn thompson_pairs_by_hand(q: &FiniteQuandle) -> Vec<(usize, usize)> {
        let op = |x, y| q.get(x, y);
        let mut out = Vec::new();
        for a in 0..q.order() {
            for b in 0..q.order() {
                let ab = op(a, b);
                let aab = op(a, ab);
                if op(a, ab) == op(b, ab) && op(a, aab) == op(b, aab) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    #[test]
    fn check_hom_examples() {
        let p = thompson_presentation();
        let triv = trivial_quandle(3).unwrap();
        for s in 0..3 {
            for t in 0..3 {
                assert!(check_hom(&p, &triv, &[s, t]).unwrap());
            }
        }
        let d3 = dihedral_quandle(3).unwrap();
        assert!(!check_hom(&p, &d3, &[0, 1]).unwrap());
        assert!(check_hom(&p, &d3, &[2, 2]).unwrap());
        assert_eq!(thompson_pairs_by_hand(&d3), vec![(0, 0), (1, 1), (2, 2)]);
        assert!(check_hom(&p, &d3, &[0]).is_err());
    }

    #[test]
    fn hom_count_examples() {
        let caps = Caps::default();
        let p = thompson_presentation();
        assert_eq!(hom_count(&p, &trivial_quandle(3).unwrap(), &caps).unwrap(), 9);
        let d3 = dihedral_quandle(3).unwrap();
        assert_eq!(hom_count(&p, &d3, &caps).unwrap(), thompson_pairs_by_hand(&d3).len() as u64);
        assert_eq!(hom_count(&p, &d3, &caps).unwrap(), 3);
        assert_eq!(hom_count(&p, &trivial_quandle(1).unwrap(), &caps).unwrap(), 1);
        let free3 = Presentation::parse_dsl("gens x, y, z\n").unwrap();
        assert_eq!(hom_count(&free3, &trivial_quandle(1).unwrap(), &caps).unwrap(), 1);
        assert_eq!(hom_count(&free3, &dihedral_quandle(4).unwrap(), &caps).unwrap(), 64);
        for n in 1..=5 {
            let d = dihedral_quandle(n).unwrap();
            assert_eq!(hom_count(&p, &d, &caps).unwrap(), thompson_pairs_by_hand(&d).len() as u64);
        }
    }

    #[test]
    fn hom_count_caps() {
        let caps = Caps::default();
        let p = thompson_presentation();
        assert!(matches!(
            hom_count(&p, &trivial_quandle(6).unwrap(), &caps),
            Err(TermError::CapExceeded { what: "model order", .. })
        ));
        let wide = truncated_thompson_presentation(5);
        assert!(matches!(
            hom_count(&wide, &trivial_quandle(2).unwrap(), &caps),
            Err(TermError::CapExceeded { what: "generator count", .. })
        ));
    }

    #[test]
    fn orbit_examples() {
        let o = orbit_count(&thompson_presentation());
        assert_eq!(o.count, 2);
        assert_eq!(o.blocks, vec![vec!["a".to_string()], vec!["b".to_string()]]);

        let t = orbit_count(&truncated_thompson_presentation(6));
        assert_eq!(t.count, 2);
        assert_eq!(t.blocks[0], vec!["p0"]);
        assert_eq!(t.blocks[1], vec!["p1", "p2", "p3", "p4", "p5"]);

        let free = Presentation::parse_dsl("gens x, y, z\n").unwrap();
        assert_eq!(orbit_count(&free).count, 3);
    }

    #[test]
    fn trivial_hom_counts_follow_orbits() {
        let caps = Caps::default();
        let p = thompson_presentation();
        for n in 1..=5u64 {
            let q = trivial_quandle(n as usize).unwrap();
            assert_eq!(hom_count(&p, &q, &caps).unwrap(), n.pow(orbit_count(&p).count as u32));
        }
    }

    fn order_five() -> &'static [FiniteQuandle] {
        static CELL: std::sync::OnceLock<Vec<FiniteQuandle>> = std::sync::OnceLock::new();
        CELL.get_or_init(|| crate::algebra::enumerate_quandles(5, 5).unwrap())
    }

    fn arb_term() -> impl Strategy<Value = Term> {
        let leaf = prop::sample::select(vec!["x", "y", "z"]).prop_map(Term::gen);
        leaf.prop_recursive(4, 16, 2, |inner| {
            (inner.clone(), prop::bool::ANY, inner)
                .prop_map(|(l, a, r)| if a { Term::act(l, r) } else { Term::act_inv(l, r) })
        })
    }

    proptest! {
        #[test]
        fn eval_respects_distributivity(
            x in arb_term(), y in arb_term(), z in arb_term(),
            which in 0usize..4, vals in prop::collection::vec(0usize..5, 3)
        ) {
            let model = match which {
                0 => dihedral_quandle(5).unwrap(),
                1 => dihedral_quandle(4).unwrap(),
                2 => trivial_quandle(5).unwrap(),
                _ => order_five()[11].clone(),
            };
            let n = model.order();
            let a = assign(&[("x", vals[0] % n), ("y", vals[1] % n), ("z", vals[2] % n)]);
            let lhs = Term::act(x.clone(), Term::act(y.clone(), z.clone()));
            let rhs = Term::act(Term::act(x.clone(), y.clone()), Term::act(x, z));
            prop_assert_eq!(eval(&lhs, &a, &model).unwrap(), eval(&rhs, &a, &model).unwrap());
        }

        #[test]
        fn trivial_evaluation_is_rightmost_leaf(t in arb_term(), vals in prop::collection::vec(0usize..4, 3)) {
            let q = trivial_quandle(4).unwrap();
            let a = assign(&[("x", vals[0]), ("y", vals[1]), ("z", vals[2])]);
            prop_assert_eq!(eval(&t, &a, &q).unwrap(), a[t.rightmost_leaf()]);
        }
    }
}
