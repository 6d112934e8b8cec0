use super::{orbit_count, OpKind, Presentation, Term};
use crate::laurent::{LaurentMatrix, LaurentPoly};

/// Coefficient vector of `t` under `x ▷ y ↦ (1 - q)x + qy` and
/// `x ▷⁻¹ y ↦ (1 - q⁻¹)x + q⁻¹y`, indexed by generator.
pub fn linearize(t: &Term, pres: &Presentation) -> Vec<LaurentPoly> {
    let n = pres.generators().len();
    match t {
        Term::Gen(name) => {
            let mut v = vec![LaurentPoly::zero(); n];
            v[pres.generator_index(name).expect("validated presentation")] = LaurentPoly::one();
            v
        }
        Term::Op(l, kind, r) => {
            let (left_coeff, right_coeff) = match kind {
                OpKind::Act => (LaurentPoly::one_minus_q(), LaurentPoly::q()),
                OpKind::ActInv => (
                    LaurentPoly::from_terms([(0, 1), (-1, -1)]),
                    LaurentPoly::monomial(1, -1),
                ),
            };
            let lv = linearize(l, pres);
            let rv = linearize(r, pres);
            lv.iter()
                .zip(&rv)
                .map(|(x, y)| &(&left_coeff * x) + &(&right_coeff * y))
                .collect()
        }
    }
}

/// One row `linearize(L) - linearize(R)` per relation, columns labelled by
/// generator.
pub fn alexander_matrix(pres: &Presentation) -> LaurentMatrix {
    let rows = pres
        .relations()
        .iter()
        .map(|(l, r)| {
            linearize(l, pres)
                .iter()
                .zip(linearize(r, pres))
                .map(|(x, y)| x - &y)
                .collect()
        })
        .collect();
    LaurentMatrix::new(rows, pres.generators().to_vec()).expect("one entry per generator")
}

/// Rank of the abelianized enveloping group: the number of orbits.
pub fn abelianization_rank(pres: &Presentation) -> usize {
    orbit_count(pres).count
}

#[cfg(test)]
mod tests {
    use super::super::{thompson_presentation, truncated_thompson_presentation};
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn one() -> BigRational {
        BigRational::from_integer(BigInt::from(1))
    }

    #[test]
    fn thompson_rows() {
        let m = alexander_matrix(&thompson_presentation());
        let row = vec![LaurentPoly::one_minus_q(), -LaurentPoly::one_minus_q()];
        assert_eq!(m.rows(), &[row.clone(), row]);
        assert_eq!(m.column_labels(), &["a", "b"]);
    }

    #[test]
    fn single_relations() {
        let p = Presentation::parse_dsl("gens a, b\nrel a |> b = b\nrel a = a\n").unwrap();
        let m = alexander_matrix(&p);
        assert_eq!(m.rows()[0], vec![LaurentPoly::one_minus_q(), -LaurentPoly::one_minus_q()]);
        assert!(m.rows()[1].iter().all(LaurentPoly::is_zero));
        // x <| (x |> y) = y linearizes to zero.
        let p = Presentation::parse_dsl("gens x, y\nrel x <| (x |> y) = y\n").unwrap();
        assert!(alexander_matrix(&p).rows()[0].iter().all(LaurentPoly::is_zero));
    }

    #[test]
    fn q_one_rank_matches_orbits() {
        for p in [
            thompson_presentation(),
            truncated_thompson_presentation(6),
            Presentation::parse_dsl("gens x, y, z\n").unwrap(),
        ] {
            let m = alexander_matrix(&p);
            let rank = m.rank_at(&one()).unwrap();
            assert_eq!(rank, p.generators().len() - abelianization_rank(&p));
        }
        assert_eq!(abelianization_rank(&thompson_presentation()), 2);
        assert_eq!(abelianization_rank(&Presentation::parse_dsl("gens x, y, z\n").unwrap()), 3);
    }

    #[test]
    fn q_one_rows_are_rightmost_differences() {
        let p = truncated_thompson_presentation(6);
        let m = alexander_matrix(&p);
        let spec = m.specialize(&one()).unwrap();
        for ((l, r), row) in p.relations().iter().zip(spec) {
            let i = p.generator_index(l.rightmost_leaf()).unwrap();
            let j = p.generator_index(r.rightmost_leaf()).unwrap();
            for (c, v) in row.iter().enumerate() {
                let expected = (c == i) as i64 - (c == j) as i64;
                assert_eq!(*v, BigRational::from_integer(BigInt::from(expected)));
            }
        }
    }
}
