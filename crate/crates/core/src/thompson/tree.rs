use std::fmt;
use std::str::FromStr;

use super::ThompsonError;

/// A finite rooted binary tree. Leaves are the dyadic intervals of the
/// subdivision of `[0, 1]` the tree describes, read left to right.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinTree {
    Leaf,
    Node(Box<BinTree>, Box<BinTree>),
}

impl BinTree {
    pub fn node(left: BinTree, right: BinTree) -> Self {
        Self::Node(Box::new(left), Box::new(right))
    }

    /// A single caret.
    pub fn caret() -> Self {
        Self::node(Self::Leaf, Self::Leaf)
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Self::Leaf)
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Self::Leaf => 1,
            Self::Node(l, r) => l.leaf_count() + r.leaf_count(),
        }
    }

    pub fn caret_count(&self) -> usize {
        self.leaf_count() - 1
    }

    /// Depth of the leftmost leaf.
    pub fn left_depth(&self) -> usize {
        match self {
            Self::Leaf => 0,
            Self::Node(l, _) => 1 + l.left_depth(),
        }
    }

    /// Depth of the rightmost leaf.
    pub fn right_depth(&self) -> usize {
        match self {
            Self::Leaf => 0,
            Self::Node(_, r) => 1 + r.right_depth(),
        }
    }

    /// Smallest common refinement of two subdivisions.
    pub fn union(&self, other: &BinTree) -> BinTree {
        match (self, other) {
            (Self::Leaf, t) | (t, Self::Leaf) => t.clone(),
            (Self::Node(a, b), Self::Node(c, d)) => Self::node(a.union(c), b.union(d)),
        }
    }

    /// For a refinement `fine` of `self`, the subtrees of `fine` hanging
    /// below each leaf of `self`, in leaf order.
    pub(crate) fn leaf_subtrees(&self, fine: &BinTree, out: &mut Vec<BinTree>) {
        match (self, fine) {
            (Self::Leaf, t) => out.push(t.clone()),
            (Self::Node(a, b), Self::Node(c, d)) => {
                a.leaf_subtrees(c, out);
                b.leaf_subtrees(d, out);
            }
            (Self::Node(..), Self::Leaf) => unreachable!("refinement is coarser than the tree"),
        }
    }

    /// Replaces the leaves, in order, with the given subtrees.
    pub(crate) fn graft(&self, subtrees: &mut impl Iterator<Item = BinTree>) -> BinTree {
        match self {
            Self::Leaf => subtrees.next().expect("one subtree per leaf"),
            Self::Node(l, r) => {
                let l = l.graft(subtrees);
                let r = r.graft(subtrees);
                Self::node(l, r)
            }
        }
    }

    /// Leaf indices `i` such that leaves `i` and `i + 1` are the two children
    /// of one caret.
    pub(crate) fn exposed_carets(&self) -> Vec<usize> {
        fn walk(t: &BinTree, offset: &mut usize, out: &mut Vec<usize>) {
            match t {
                BinTree::Leaf => *offset += 1,
                BinTree::Node(l, r) => {
                    if l.is_leaf() && r.is_leaf() {
                        out.push(*offset);
                    }
                    walk(l, offset, out);
                    walk(r, offset, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut 0, &mut out);
        out
    }

    /// Removes the exposed caret whose left leaf has index `index`.
    pub(crate) fn collapse_caret(&self, index: usize) -> BinTree {
        fn walk(t: &BinTree, offset: &mut usize, index: usize) -> BinTree {
            match t {
                BinTree::Leaf => {
                    *offset += 1;
                    BinTree::Leaf
                }
                BinTree::Node(l, r) if l.is_leaf() && r.is_leaf() && *offset == index => {
                    *offset += 2;
                    BinTree::Leaf
                }
                BinTree::Node(l, r) => {
                    let l = walk(l, offset, index);
                    let r = walk(r, offset, index);
                    BinTree::node(l, r)
                }
            }
        }
        walk(self, &mut 0, index)
    }

    fn parse_at(bytes: &[u8], pos: &mut usize) -> Result<BinTree, ThompsonError> {
        let err = |pos: usize, msg: &str| ThompsonError::Parse { pos, msg: msg.to_string() };
        match bytes.get(*pos) {
            Some(b'.') => {
                *pos += 1;
                Ok(Self::Leaf)
            }
            Some(b'(') => {
                *pos += 1;
                let l = Self::parse_at(bytes, pos)?;
                if bytes.get(*pos) != Some(&b',') {
                    return Err(err(*pos, "expected ','"));
                }
                *pos += 1;
                let r = Self::parse_at(bytes, pos)?;
                if bytes.get(*pos) != Some(&b')') {
                    return Err(err(*pos, "expected ')'"));
                }
                *pos += 1;
                Ok(Self::node(l, r))
            }
            _ => Err(err(*pos, "expected '.' or '('")),
        }
    }
}

/// `.` for a leaf, `(L,R)` for a caret over `L` and `R`.
impl fmt::Display for BinTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Leaf => write!(f, "."),
            Self::Node(l, r) => write!(f, "({l},{r})"),
        }
    }
}

impl fmt::Debug for BinTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for BinTree {
    type Err = ThompsonError;

    /// Whitespace is ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: Vec<u8> = s.bytes().filter(|b| !b.is_ascii_whitespace()).collect();
        let mut pos = 0;
        let tree = Self::parse_at(&compact, &mut pos)?;
        if pos != compact.len() {
            return Err(ThompsonError::Parse { pos, msg: "trailing input".into() });
        }
        Ok(tree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let t: BinTree = "((.,.),(.,(.,.)))".parse().unwrap();
        assert_eq!(t.leaf_count(), 5);
        assert_eq!(t.to_string(), "((.,.),(.,(.,.)))");
        assert_eq!((t.left_depth(), t.right_depth()), (2, 3));
        assert!("(.,.".parse::<BinTree>().is_err());
        assert!("(.,.).".parse::<BinTree>().is_err());
    }

    #[test]
    fn carets() {
        let t: BinTree = "((.,.),(.,(.,.)))".parse().unwrap();
        assert_eq!(t.exposed_carets(), vec![0, 3]);
        assert_eq!(t.collapse_caret(3).to_string(), "((.,.),(.,.))");
        assert_eq!(t.collapse_caret(0).to_string(), "(.,(.,(.,.)))");
    }

    #[test]
    fn union_refines_both() {
        let a: BinTree = "((.,.),.)".parse().unwrap();
        let b: BinTree = "(.,(.,.))".parse().unwrap();
        let u = a.union(&b);
        assert_eq!(u.to_string(), "((.,.),(.,.))");
        let mut subs = Vec::new();
        a.leaf_subtrees(&u, &mut subs);
        assert_eq!(subs, vec![BinTree::Leaf, BinTree::Leaf, BinTree::caret()]);
    }
}
