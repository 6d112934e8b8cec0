use std::collections::BTreeSet;

use super::{AlgebraError, FiniteQuandle};

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn go(n: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                current.push(v);
                go(n, current, used, out);
                current.pop();
                used[v] = false;
            }
        }
    }
    go(n, &mut current, &mut used, &mut out);
    out
}

type Rows = Vec<Option<Vec<usize>>>;

/// Self-distributivity as a statement about rows: with `σ_x` the left
/// multiplication by `x`, `σ_x ∘ σ_y ∘ σ_x⁻¹ = σ_{x▷y}`. Any two assigned rows
/// therefore determine a third. Propagates until fixpoint; `false` on
/// contradiction.
fn propagate(rows: &mut Rows) -> bool {
    let n = rows.len();
    loop {
        let mut changed = false;
        for x in 0..n {
            let Some(sx) = rows[x].clone() else { continue };
            let mut sx_inv = vec![0; n];
            for (i, &v) in sx.iter().enumerate() {
                sx_inv[v] = i;
            }
            for y in 0..n {
                let Some(sy) = rows[y].as_ref() else { continue };
                let target = sx[y];
                let required: Vec<usize> = (0..n).map(|z| sx[sy[sx_inv[z]]]).collect();
                match &rows[target] {
                    Some(existing) if *existing != required => return false,
                    Some(_) => {}
                    None => {
                        if required[target] != target {
                            return false;
                        }
                        rows[target] = Some(required);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return true;
        }
    }
}

fn search(rows: &mut Rows, choices: &[Vec<Vec<usize>>], found: &mut Vec<Vec<Vec<usize>>>) {
    let Some(next) = rows.iter().position(Option::is_none) else {
        found.push(rows.iter().map(|r| r.clone().expect("complete")).collect());
        return;
    };
    for perm in &choices[next] {
        let mut trial = rows.clone();
        trial[next] = Some(perm.clone());
        if propagate(&mut trial) {
            search(&mut trial, choices, found);
        }
    }
}

/// Relabels by `perm` (old label -> new label).
fn relabel(table: &[Vec<usize>], perm: &[usize]) -> Vec<Vec<usize>> {
    let n = table.len();
    let mut out = vec![vec![0; n]; n];
    for x in 0..n {
        for y in 0..n {
            out[perm[x]][perm[y]] = perm[table[x][y]];
        }
    }
    out
}

/// Lexicographically least relabeling; equal for isomorphic tables.
pub(crate) fn canonical_form(table: &[Vec<usize>], perms: &[Vec<usize>]) -> Vec<Vec<usize>> {
    perms
        .iter()
        .map(|p| relabel(table, p))
        .min()
        .expect("at least one permutation")
}

/// One representative per isomorphism class of quandles of order `n`,
/// each in canonical (lexicographically least) labeling, sorted.
pub fn enumerate_quandles(n: usize, cap: usize) -> Result<Vec<FiniteQuandle>, AlgebraError> {
    if n == 0 {
        return Err(AlgebraError::ZeroOrder);
    }
    if n > cap {
        return Err(AlgebraError::CapExceeded { n, cap });
    }
    let perms = permutations(n);
    let choices: Vec<Vec<Vec<usize>>> = (0..n)
        .map(|x| perms.iter().filter(|p| p[x] == x).cloned().collect())
        .collect();
    let mut found = Vec::new();
    search(&mut vec![None; n], &choices, &mut found);

    let classes: BTreeSet<Vec<Vec<usize>>> =
        found.iter().map(|t| canonical_form(t, &perms)).collect();
    Ok(classes.into_iter().map(FiniteQuandle::from_checked).collect())
}

#[cfg(test)]
mod tests {
    use super::super::{first_violation, is_quandle};
    use super::*;

    /// Independent count: every table whose rows are arbitrary permutations,
    /// filtered by the full axiom check, then reduced up to isomorphism.
    fn generate_then_filter(n: usize) -> usize {
        let perms = permutations(n);
        let total = perms.len().pow(n as u32);
        let mut classes = BTreeSet::new();
        for mut code in 0..total {
            let mut table = Vec::with_capacity(n);
            for _ in 0..n {
                table.push(perms[code % perms.len()].clone());
                code /= perms.len();
            }
            if first_violation(&table).unwrap().is_none() {
                classes.insert(canonical_form(&table, &perms));
            }
        }
        classes.len()
    }

    #[test]
    fn small_orders() {
        assert_eq!(enumerate_quandles(1, 5).unwrap().len(), 1);
        let two = enumerate_quandles(2, 5).unwrap();
        assert_eq!(two.len(), 1);
        assert!(two[0].is_trivial());
    }

    #[test]
    fn double_enumeration_agrees() {
        for n in 1..=4 {
            let fast = enumerate_quandles(n, 5).unwrap();
            assert_eq!(fast.len(), generate_then_filter(n), "order {n}");
            assert!(fast.iter().all(|q| is_quandle(&q.table()).unwrap()));
        }
    }

    #[test]
    fn known_class_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| enumerate_quandles(n, 5).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 7, 22]);
    }

    #[test]
    fn cap_and_zero() {
        assert_eq!(enumerate_quandles(6, 5), Err(AlgebraError::CapExceeded { n: 6, cap: 5 }));
        assert_eq!(enumerate_quandles(0, 5), Err(AlgebraError::ZeroOrder));
    }

    #[test]
    fn deterministic_order() {
        assert_eq!(enumerate_quandles(4, 5).unwrap(), enumerate_quandles(4, 5).unwrap());
    }
}
