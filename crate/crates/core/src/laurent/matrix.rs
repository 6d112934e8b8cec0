use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{LaurentError, LaurentPoly};

/// A relation matrix over `Z[q, q^-1]`: one row per relation, one column per
/// generator. It presents the cokernel of the row map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix")]
pub struct LaurentMatrix {
    rows: Vec<Vec<LaurentPoly>>,
    ncols: usize,
    column_labels: Vec<String>,
}

#[derive(Deserialize)]
struct RawMatrix {
    rows: Vec<Vec<LaurentPoly>>,
    ncols: usize,
    column_labels: Vec<String>,
}

impl TryFrom<RawMatrix> for LaurentMatrix {
    type Error = LaurentError;
    fn try_from(raw: RawMatrix) -> Result<Self, Self::Error> {
        if raw.column_labels.len() != raw.ncols {
            return Err(LaurentError::LabelMismatch {
                labels: raw.column_labels.len(),
                ncols: raw.ncols,
            });
        }
        Self::new(raw.rows, raw.column_labels)
    }
}

impl LaurentMatrix {
    /// Column count is taken from `column_labels`.
    pub fn new(rows: Vec<Vec<LaurentPoly>>, column_labels: Vec<String>) -> Result<Self, LaurentError> {
        let ncols = column_labels.len();
        for (row, entries) in rows.iter().enumerate() {
            if entries.len() != ncols {
                return Err(LaurentError::RaggedRow { row, len: entries.len(), ncols });
            }
        }
        Ok(Self { rows, ncols, column_labels })
    }

    /// Columns labelled `x0, x1, ...`.
    pub fn with_default_labels(rows: Vec<Vec<LaurentPoly>>, ncols: usize) -> Result<Self, LaurentError> {
        Self::new(rows, (0..ncols).map(|i| format!("x{i}")).collect())
    }

    pub fn rows(&self) -> &[Vec<LaurentPoly>] {
        &self.rows
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn column_labels(&self) -> &[String] {
        &self.column_labels
    }

    pub fn get(&self, row: usize, col: usize) -> &LaurentPoly {
        &self.rows[row][col]
    }

    /// Entrywise substitution `q -> at`.
    pub fn specialize(&self, at: &BigRational) -> Result<Vec<Vec<BigRational>>, LaurentError> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|p| p.eval_rational(at)).collect())
            .collect()
    }

    /// Rank over the rationals after substituting `q -> at`.
    pub fn rank_at(&self, at: &BigRational) -> Result<usize, LaurentError> {
        Ok(rational_rank(&self.specialize(at)?))
    }

    fn is_zero_row(&self, r: usize) -> bool {
        self.rows[r].iter().all(LaurentPoly::is_zero)
    }

    fn add_row_multiple(&mut self, target: usize, source: usize, factor: &LaurentPoly) {
        for c in 0..self.ncols {
            let delta = factor * &self.rows[source][c];
            self.rows[target][c] = &self.rows[target][c] + &delta;
        }
    }

    fn add_col_multiple(&mut self, target: usize, source: usize, factor: &LaurentPoly) {
        for row in &mut self.rows {
            let delta = factor * &row[source];
            row[target] = &row[target] + &delta;
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for row in &mut self.rows {
            row.swap(a, b);
        }
        self.column_labels.swap(a, b);
    }
}

impl fmt::Display for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}]", self.column_labels.join(", "))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// One elementary move. Indices refer to the matrix as it stood just before
/// the move.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum ReductionStep {
    DropZeroRow { row: usize },
    /// `row = factor * of`, so `row` adds nothing to the relation module.
    DropMultipleRow { row: usize, of: usize, factor: LaurentPoly },
    /// `row[target] += factor * row[source]`.
    RowAddMultiple { target: usize, source: usize, factor: LaurentPoly },
    /// `col[target] += factor * col[source]`, a change of generators.
    ColAddMultiple { target: usize, source: usize, factor: LaurentPoly },
    SwapRows { a: usize, b: usize },
    SwapCols { a: usize, b: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reduction {
    pub matrix: LaurentMatrix,
    pub transcript: Vec<ReductionStep>,
}

/// Summary of a presented module as `free ⊕ ⊕_i R/(t_i)`, plus whatever part
/// the implemented moves could not diagonalize.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleDescription {
    pub free_rank: usize,
    pub torsion_factors: Vec<LaurentPoly>,
    pub residual: Option<LaurentMatrix>,
}

impl fmt::Display for ModuleDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                "Z[q^±1]".to_string()
            } else {
                format!("Z[q^±1]^{}", self.free_rank)
            });
        }
        for t in &self.torsion_factors {
            parts.push(format!("Z[q^±1]/({t})"));
        }
        if let Some(res) = &self.residual {
            parts.push(format!("coker({}x{} residual)", res.nrows(), res.ncols()));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

struct Reducer {
    m: LaurentMatrix,
    transcript: Vec<ReductionStep>,
    pivot_rows: Vec<bool>,
    pivot_cols: Vec<bool>,
}

impl Reducer {
    fn new(m: LaurentMatrix) -> Self {
        let pivot_rows = vec![false; m.nrows()];
        let pivot_cols = vec![false; m.ncols()];
        Self { m, transcript: Vec::new(), pivot_rows, pivot_cols }
    }

    fn remove_row(&mut self, r: usize) {
        self.m.rows.remove(r);
        self.pivot_rows.remove(r);
    }

    /// Drops zero rows and rows that are ring multiples of another row, until
    /// neither applies.
    fn cleanup(&mut self) {
        loop {
            if let Some(row) = (0..self.m.nrows()).find(|&r| self.m.is_zero_row(r)) {
                self.transcript.push(ReductionStep::DropZeroRow { row });
                self.remove_row(row);
                continue;
            }
            if let Some((row, of, factor)) = self.find_multiple_row() {
                self.transcript.push(ReductionStep::DropMultipleRow { row, of, factor });
                self.remove_row(row);
                continue;
            }
            break;
        }
    }

    fn find_multiple_row(&self) -> Option<(usize, usize, LaurentPoly)> {
        let n = self.m.nrows();
        for row in (0..n).rev() {
            if self.pivot_rows[row] {
                continue;
            }
            for of in 0..n {
                if of == row {
                    continue;
                }
                if let Some(factor) = row_quotient(&self.m.rows[row], &self.m.rows[of]) {
                    return Some((row, of, factor));
                }
            }
        }
        None
    }

    /// Candidate pivots among unprocessed rows and columns: a nonzero entry
    /// dividing every other unprocessed entry of its row and column.
    fn find_pivot(&self, units_only: bool) -> Option<(usize, usize)> {
        let mut best: Option<((usize, i64, usize, usize), (usize, usize))> = None;
        for r in 0..self.m.nrows() {
            if self.pivot_rows[r] {
                continue;
            }
            for c in 0..self.m.ncols() {
                if self.pivot_cols[c] {
                    continue;
                }
                let entry = &self.m.rows[r][c];
                if entry.is_zero() || (units_only && !entry.is_unit()) {
                    continue;
                }
                let divides_row = (0..self.m.ncols())
                    .filter(|&j| j != c && !self.pivot_cols[j])
                    .all(|j| self.m.rows[r][j].div_exact(entry).is_some());
                let divides_col = (0..self.m.nrows())
                    .filter(|&i| i != r && !self.pivot_rows[i])
                    .all(|i| self.m.rows[i][c].div_exact(entry).is_some());
                if !(divides_row && divides_col) {
                    continue;
                }
                let span = entry.max_exp().unwrap_or(0) - entry.min_exp().unwrap_or(0);
                let key = (entry.num_terms(), span, r, c);
                if best.as_ref().is_none_or(|(k, _)| key < *k) {
                    best = Some((key, (r, c)));
                }
            }
        }
        best.map(|(_, rc)| rc)
    }

    fn eliminate(&mut self, r: usize, c: usize) {
        let pivot = self.m.rows[r][c].clone();
        for i in 0..self.m.nrows() {
            if i == r || self.m.rows[i][c].is_zero() {
                continue;
            }
            let quotient = self.m.rows[i][c].div_exact(&pivot).expect("pivot divides its column");
            let factor = -quotient;
            self.m.add_row_multiple(i, r, &factor);
            self.transcript.push(ReductionStep::RowAddMultiple { target: i, source: r, factor });
        }
        for j in 0..self.m.ncols() {
            if j == c || self.m.rows[r][j].is_zero() {
                continue;
            }
            let quotient = self.m.rows[r][j].div_exact(&pivot).expect("pivot divides its row");
            let factor = -quotient;
            self.m.add_col_multiple(j, c, &factor);
            self.transcript.push(ReductionStep::ColAddMultiple { target: j, source: c, factor });
        }
        self.pivot_rows[r] = true;
        self.pivot_cols[c] = true;
    }

    fn run(&mut self, units_only: bool) {
        self.cleanup();
        while let Some((r, c)) = self.find_pivot(units_only) {
            self.eliminate(r, c);
            self.cleanup();
        }
    }

    /// Moves processed pivots to the leading diagonal, in row order.
    fn arrange(&mut self) {
        let mut k = 0;
        for r in 0..self.m.nrows() {
            if !self.pivot_rows[r] {
                continue;
            }
            if r != k {
                self.m.rows.swap(r, k);
                self.pivot_rows.swap(r, k);
                self.transcript.push(ReductionStep::SwapRows { a: k, b: r });
            }
            let c = (0..self.m.ncols())
                .find(|&c| self.pivot_cols[c] && !self.m.rows[k][c].is_zero())
                .expect("pivot row keeps its pivot");
            if c != k {
                self.m.swap_cols(c, k);
                self.pivot_cols.swap(c, k);
                self.transcript.push(ReductionStep::SwapCols { a: k, b: c });
            }
            k += 1;
        }
    }

    fn finish(self) -> Reduction {
        Reduction { matrix: self.m, transcript: self.transcript }
    }
}

/// `Some(u)` when `row = u * of` entrywise for a single ring element `u`.
pub fn row_quotient(row: &[LaurentPoly], of: &[LaurentPoly]) -> Option<LaurentPoly> {
    let lead = of.iter().position(|p| !p.is_zero())?;
    let factor = row[lead].div_exact(&of[lead])?;
    row.iter()
        .zip(of)
        .all(|(x, y)| &factor * y == *x)
        .then_some(factor)
}

/// Presentation-preserving cleanup: drops zero rows and rows that are ring
/// multiples of another row, then clears the row and column of every unit
/// entry (`±q^k`) and moves those pivots to the leading diagonal. Unit pivots
/// stay in the matrix; [`describe_module`] discards them.
pub fn matrix_reduce(m: &LaurentMatrix) -> Reduction {
    let mut reducer = Reducer::new(m.clone());
    reducer.run(true);
    reducer.arrange();
    reducer.finish()
}

/// Reads off the module presented by `m`.
pub fn describe_module(m: &LaurentMatrix) -> ModuleDescription {
    describe_with_transcript(m).0
}

/// Like [`describe_module`], also returning the fully reduced matrix and
/// every move applied. After the unit phase of [`matrix_reduce`], non-unit
/// entries that divide the rest of their row and column are used as pivots
/// too; this is how `(a, b)` becomes `(a, a - b)` for the relation
/// `(1 - q)(a - b)`.
pub fn describe_with_transcript(m: &LaurentMatrix) -> (ModuleDescription, Reduction) {
    let mut reducer = Reducer::new(m.clone());
    reducer.run(true);
    reducer.run(false);
    reducer.arrange();

    let mut torsion_factors = Vec::new();
    for (r, is_pivot) in reducer.pivot_rows.iter().enumerate() {
        if !*is_pivot {
            continue;
        }
        let entry = &reducer.m.rows[r][r];
        if !entry.is_unit() {
            torsion_factors.push(entry.normalize_associate());
        }
    }

    let rest_rows: Vec<usize> = (0..reducer.m.nrows()).filter(|&r| !reducer.pivot_rows[r]).collect();
    let rest_cols: Vec<usize> = (0..reducer.m.ncols()).filter(|&c| !reducer.pivot_cols[c]).collect();
    let (free_cols, tangled_cols): (Vec<usize>, Vec<usize>) = rest_cols
        .iter()
        .partition(|&&c| rest_rows.iter().all(|&r| reducer.m.rows[r][c].is_zero()));

    let residual = (!rest_rows.is_empty()).then(|| {
        let rows = rest_rows
            .iter()
            .map(|&r| tangled_cols.iter().map(|&c| reducer.m.rows[r][c].clone()).collect())
            .collect();
        let labels = tangled_cols.iter().map(|&c| reducer.m.column_labels[c].clone()).collect();
        LaurentMatrix::new(rows, labels).expect("residual rows are rectangular")
    });

    let description = ModuleDescription {
        free_rank: free_cols.len(),
        torsion_factors,
        residual,
    };
    (description, reducer.finish())
}

/// Rank of a rational matrix by fraction-exact Gaussian elimination.
pub fn rational_rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for r in 0..m.len() {
            if r == rank || m[r][c].is_zero() {
                continue;
            }
            let factor = &m[r][c] / &pivot;
            for j in c..ncols {
                let delta = &factor * &m[rank][j];
                m[r][j] -= delta;
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn poly(pairs: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(pairs.iter().copied())
    }

    fn mat(rows: Vec<Vec<LaurentPoly>>, ncols: usize) -> LaurentMatrix {
        LaurentMatrix::with_default_labels(rows, ncols).unwrap()
    }

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn omq() -> LaurentPoly {
        LaurentPoly::one_minus_q()
    }

    fn qm1() -> LaurentPoly {
        -LaurentPoly::one_minus_q()
    }

    /// Replays only the column moves of a transcript on a specialized
    /// identity, giving the change-of-generators matrix `C` with
    /// `rowspan(input * C) == rowspan(output)`.
    fn column_transform(transcript: &[ReductionStep], ncols: usize, at: &BigRational) -> Vec<Vec<BigRational>> {
        let mut c: Vec<Vec<BigRational>> = (0..ncols)
            .map(|i| (0..ncols).map(|j| int((i == j) as i64)).collect())
            .collect();
        for step in transcript {
            match step {
                ReductionStep::ColAddMultiple { target, source, factor } => {
                    let f = factor.eval_rational(at).unwrap();
                    for row in c.iter_mut() {
                        let delta = &f * &row[*source];
                        row[*target] += delta;
                    }
                }
                ReductionStep::SwapCols { a, b } => {
                    for row in c.iter_mut() {
                        row.swap(*a, *b);
                    }
                }
                _ => {}
            }
        }
        c
    }

    fn matmul(a: &[Vec<BigRational>], b: &[Vec<BigRational>], ncols: usize) -> Vec<Vec<BigRational>> {
        a.iter()
            .map(|row| {
                (0..ncols)
                    .map(|j| row.iter().zip(b).fold(int(0), |acc, (x, brow)| acc + x * &brow[j]))
                    .collect()
            })
            .collect()
    }

    fn same_row_span(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> bool {
        let stacked: Vec<_> = a.iter().chain(b).cloned().collect();
        let r = rational_rank(&stacked);
        rational_rank(a) == r && rational_rank(b) == r
    }

    fn check_spans(input: &LaurentMatrix, red: &Reduction) {
        for c in [2, 3, -1] {
            let at = int(c);
            let spec_in = input.specialize(&at).unwrap();
            let spec_out = red.matrix.specialize(&at).unwrap();
            let transform = column_transform(&red.transcript, input.ncols(), &at);
            let moved = matmul(&spec_in, &transform, input.ncols());
            assert!(same_row_span(&moved, &spec_out), "span mismatch at q={c}");
        }
    }

    #[test]
    fn duplicate_relation_is_dropped() {
        let m = mat(vec![vec![omq(), qm1()], vec![omq(), qm1()]], 2);
        let red = matrix_reduce(&m);
        assert_eq!(red.matrix.rows(), &[vec![omq(), qm1()]]);
        assert!(matches!(red.transcript[0], ReductionStep::DropMultipleRow { .. }));
        check_spans(&m, &red);
    }

    #[test]
    fn zero_matrix_reduces_to_nothing() {
        let m = mat(vec![vec![LaurentPoly::zero(); 2]; 3], 2);
        let red = matrix_reduce(&m);
        assert_eq!(red.matrix.nrows(), 0);
        let d = describe_module(&m);
        assert_eq!(d.free_rank, 2);
        assert!(d.torsion_factors.is_empty());
        assert!(d.residual.is_none());
        let empty = mat(vec![], 2);
        assert_eq!(describe_module(&empty).free_rank, 2);
    }

    #[test]
    fn unit_pivot_kept_then_discarded() {
        let m = mat(
            vec![vec![LaurentPoly::one(), LaurentPoly::zero()], vec![LaurentPoly::zero(), omq()]],
            2,
        );
        let red = matrix_reduce(&m);
        assert_eq!(red.matrix, m);
        let d = describe_module(&m);
        assert_eq!(d.free_rank, 0);
        assert_eq!(d.torsion_factors, vec![omq()]);
        assert!(d.residual.is_none());
    }

    #[test]
    fn basis_change_a_minus_b() {
        let m = mat(vec![vec![omq(), qm1()]], 2);
        let (d, red) = describe_with_transcript(&m);
        assert_eq!(d.free_rank, 1);
        assert_eq!(d.torsion_factors, vec![omq()]);
        assert!(d.residual.is_none());
        assert!(red
            .transcript
            .iter()
            .any(|s| matches!(s, ReductionStep::ColAddMultiple { target: 1, source: 0, factor } if *factor == LaurentPoly::one())));
        check_spans(&m, &red);
    }

    /// Integer Smith normal form, used as the q=1 oracle for the torsion part.
    fn smith_invariants(mut m: Vec<Vec<i64>>) -> Vec<i64> {
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        let mut out = Vec::new();
        let mut t = 0;
        while t < rows.min(cols) {
            let Some((pr, pc)) = (t..rows)
                .flat_map(|r| (t..cols).map(move |c| (r, c)))
                .filter(|&(r, c)| m[r][c] != 0)
                .min_by_key(|&(r, c)| m[r][c].abs())
            else {
                break;
            };
            m.swap(t, pr);
            for row in m.iter_mut() {
                row.swap(t, pc);
            }
            let mut clean = true;
            for r in t + 1..rows {
                let f = m[r][t] / m[t][t];
                for c in t..cols {
                    m[r][c] -= f * m[t][c];
                }
                clean &= m[r][t] == 0;
            }
            for c in t + 1..cols {
                let f = m[t][c] / m[t][t];
                for r in t..rows {
                    m[r][c] -= f * m[r][t];
                }
                clean &= m[t][c] == 0;
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows).flat_map(|r| (t + 1..cols).map(move |c| (r, c))).find(|&(r, c)| m[r][c] % m[t][t] != 0);
            if let Some((r, _)) = bad {
                for c in t..cols {
                    m[t][c] += m[r][c];
                }
                continue;
            }
            out.push(m[t][t].abs());
            t += 1;
        }
        out.into_iter().filter(|&d| d != 1).collect()
    }

    #[test]
    fn integer_diagonal_matches_smith_at_one() {
        let m = mat(vec![vec![LaurentPoly::from(2), LaurentPoly::zero()], vec![LaurentPoly::zero(), LaurentPoly::from(3)]], 2);
        let d = describe_module(&m);
        assert!(d.residual.is_none());
        let one = int(1);
        let orders: Vec<i64> = d
            .torsion_factors
            .iter()
            .map(|t| t.eval_rational(&one).unwrap().to_integer().try_into().unwrap())
            .collect();
        let described: i64 = orders.iter().product();
        let snf = smith_invariants(vec![vec![2, 0], vec![0, 3]]);
        assert_eq!(snf, vec![6]);
        assert_eq!(described, snf.iter().product::<i64>());
        assert_eq!(d.free_rank, 0);
    }

    #[test]
    fn residual_when_no_pivot_divides() {
        // (2, q) has no entry dividing the other: no moves apply.
        let m = mat(vec![vec![LaurentPoly::from(2), poly(&[(0, 1), (1, 1)])]], 2);
        let d = describe_module(&m);
        assert!(d.residual.is_some());
        assert_eq!(d.free_rank, 0);
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(LaurentMatrix::with_default_labels(vec![vec![LaurentPoly::one()]], 2).is_err());
    }

    #[test]
    fn matrix_json_round_trip() {
        let m = mat(vec![vec![omq(), qm1()]], 2);
        let s = serde_json::to_string(&m).unwrap();
        let back: LaurentMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<LaurentMatrix>(r#"{"rows":[[[[0,1]]]],"ncols":2,"column_labels":["a","b"]}"#).is_err());
    }

    fn arb_entry() -> impl Strategy<Value = LaurentPoly> {
        prop_oneof![
            Just(LaurentPoly::zero()),
            (-2i64..3, prop::bool::ANY).prop_map(|(e, s)| LaurentPoly::monomial(if s { 1 } else { -1 }, e)),
            prop::collection::vec((-2i64..3, -3i64..4), 1..3).prop_map(LaurentPoly::from_terms),
        ]
    }

    proptest! {
        #[test]
        fn reductions_preserve_row_span(rows in prop::collection::vec(prop::collection::vec(arb_entry(), 3), 0..4)) {
            let m = mat(rows, 3);
            check_spans(&m, &matrix_reduce(&m));
            let (d, full) = describe_with_transcript(&m);
            check_spans(&m, &full);
            prop_assert!(d.torsion_factors.iter().all(|t| !t.is_unit() && !t.is_zero()));
        }
    }
}
