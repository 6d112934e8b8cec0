use std::fmt;

use serde::{Deserialize, Serialize};

use super::{AlgebraError, Quandle, UnionFind};

/// The first quandle axiom a table breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AxiomViolation {
    /// Row `x` is not a permutation.
    NotBijective { x: usize },
    /// `x ▷ x != x`.
    NotIdempotent { x: usize },
    /// `x ▷ (y ▷ z) != (x ▷ y) ▷ (x ▷ z)`.
    NotDistributive { x: usize, y: usize, z: usize },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotBijective { x } => write!(f, "row {x} is not a permutation"),
            Self::NotIdempotent { x } => write!(f, "idempotence fails at x={x}"),
            Self::NotDistributive { x, y, z } => {
                write!(f, "self-distributivity fails at (x, y, z) = ({x}, {y}, {z})")
            }
        }
    }
}

fn validate_shape(table: &[Vec<usize>]) -> Result<usize, AlgebraError> {
    let n = table.len();
    if n == 0 {
        return Err(AlgebraError::ZeroOrder);
    }
    for (x, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(AlgebraError::NotSquare { row: x, len: row.len(), n });
        }
        if let Some((y, &value)) = row.iter().enumerate().find(|(_, &v)| v >= n) {
            return Err(AlgebraError::OutOfRange { x, y, value, n });
        }
    }
    Ok(n)
}

/// Checks the three axiom families in order: bijective rows, idempotence,
/// self-distributivity. `Ok(None)` means the table is a quandle.
pub fn first_violation(table: &[Vec<usize>]) -> Result<Option<AxiomViolation>, AlgebraError> {
    let n = validate_shape(table)?;
    for (x, row) in table.iter().enumerate() {
        let mut seen = vec![false; n];
        for &v in row {
            if std::mem::replace(&mut seen[v], true) {
                return Ok(Some(AxiomViolation::NotBijective { x }));
            }
        }
    }
    if let Some(x) = (0..n).find(|&x| table[x][x] != x) {
        return Ok(Some(AxiomViolation::NotIdempotent { x }));
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if table[x][table[y][z]] != table[table[x][y]][table[x][z]] {
                    return Ok(Some(AxiomViolation::NotDistributive { x, y, z }));
                }
            }
        }
    }
    Ok(None)
}

pub fn is_quandle(table: &[Vec<usize>]) -> Result<bool, AlgebraError> {
    Ok(first_violation(table)?.is_none())
}

/// A quandle on `{0, .., n-1}` given by its Cayley table, `table[x][y] = x ▷ y`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteQuandle {
    n: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
}

impl FiniteQuandle {
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self, AlgebraError> {
        if let Some(v) = first_violation(&table)? {
            return Err(AlgebraError::NotAQuandle(v));
        }
        Ok(Self::from_checked(table))
    }

    pub(crate) fn from_checked(table: Vec<Vec<usize>>) -> Self {
        let n = table.len();
        let mut inverse = vec![0; n * n];
        for (x, row) in table.iter().enumerate() {
            for (y, &v) in row.iter().enumerate() {
                inverse[x * n + v] = y;
            }
        }
        Self { n, table: table.concat(), inverse }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, x: usize, y: usize) -> usize {
        self.table[x * self.n + y]
    }

    /// The unique `z` with `x ▷ z = y`.
    pub fn left_div(&self, x: usize, y: usize) -> usize {
        self.inverse[x * self.n + y]
    }

    pub fn row(&self, x: usize) -> &[usize] {
        &self.table[x * self.n..(x + 1) * self.n]
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|x| self.row(x).to_vec()).collect()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn is_trivial(&self) -> bool {
        (0..self.n).all(|x| (0..self.n).all(|y| self.get(x, y) == y))
    }

    /// Blocks of the equivalence relation generated by `y ~ x ▷ y`.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.n);
        for x in 0..self.n {
            for y in 0..self.n {
                uf.union(y, self.get(x, y));
            }
        }
        uf.blocks()
    }

    /// Every self-map `f` with `f(x ▷ y) = f(x) ▷ f(y)`, in lexicographic order.
    pub fn endomorphisms(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut map = Vec::with_capacity(self.n);
        self.extend_endomorphism(&mut map, &mut out);
        out
    }

    fn extend_endomorphism(&self, map: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let k = map.len();
        if k == self.n {
            out.push(map.clone());
            return;
        }
        for image in 0..self.n {
            map.push(image);
            if self.consistent_prefix(map) {
                self.extend_endomorphism(map, out);
            }
            map.pop();
        }
    }

    /// Checks the morphism condition on every pair whose product is also in
    /// the assigned prefix and involves the newest point.
    fn consistent_prefix(&self, map: &[usize]) -> bool {
        let k = map.len() - 1;
        for x in 0..=k {
            for (a, b) in [(x, k), (k, x)] {
                let xy = self.get(a, b);
                if xy <= k && map[xy] != self.get(map[a], map[b]) {
                    return false;
                }
            }
        }
        // Pairs assigned earlier whose product only just became available.
        for a in 0..k {
            for b in 0..k {
                if self.get(a, b) == k && map[k] != self.get(map[a], map[b]) {
                    return false;
                }
            }
        }
        true
    }

    /// Accepts either a JSON array of rows or the text form: the order `n`
    /// followed by `n` rows of `n` whitespace-separated integers.
    pub fn parse(text: &str) -> Result<Self, AlgebraError> {
        let trimmed = text.trim_start();
        let table: Vec<Vec<usize>> = if trimmed.starts_with('[') {
            serde_json::from_str(trimmed).map_err(|e| AlgebraError::Parse(e.to_string()))?
        } else {
            let mut nums = trimmed.split_whitespace().map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| AlgebraError::Parse(format!("not a nonnegative integer: {tok:?}")))
            });
            let n = nums.next().ok_or_else(|| AlgebraError::Parse("empty input".into()))??;
            let values = nums.collect::<Result<Vec<_>, _>>()?;
            if values.len() != n * n {
                return Err(AlgebraError::Parse(format!(
                    "expected {} entries for order {n}, found {}",
                    n * n,
                    values.len()
                )));
            }
            values.chunks(n.max(1)).map(<[usize]>::to_vec).collect()
        };
        Self::new(table)
    }

    /// The text form accepted by [`FiniteQuandle::parse`].
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for x in 0..self.n {
            let row: Vec<String> = self.row(x).iter().map(ToString::to_string).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }
}

impl fmt::Debug for FiniteQuandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteQuandle({:?})", self.table())
    }
}

impl Serialize for FiniteQuandle {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.table().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FiniteQuandle {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let table = Vec::<Vec<usize>>::deserialize(deserializer)?;
        Self::new(table).map_err(serde::de::Error::custom)
    }
}

impl Quandle for FiniteQuandle {
    type Elem = usize;

    fn op(&self, x: &usize, y: &usize) -> usize {
        self.get(*x, *y)
    }

    fn op_inv(&self, x: &usize, y: &usize) -> usize {
        self.left_div(*x, *y)
    }
}

/// `x ▷ y = y`.
pub fn trivial_quandle(n: usize) -> Result<FiniteQuandle, AlgebraError> {
    if n == 0 {
        return Err(AlgebraError::ZeroOrder);
    }
    Ok(FiniteQuandle::from_checked(vec![(0..n).collect(); n]))
}

/// `x ▷ y = 2x - y mod n`.
pub fn dihedral_quandle(n: usize) -> Result<FiniteQuandle, AlgebraError> {
    if n == 0 {
        return Err(AlgebraError::ZeroOrder);
    }
    let table = (0..n)
        .map(|x| (0..n).map(|y| (2 * x + n - y) % n).collect())
        .collect();
    Ok(FiniteQuandle::from_checked(table))
}
