//! Thompson's quandle as the subquandle of the conjugation quandle of `F`
//! generated by two calibrated elements `a`, `b`.
//!
//! Elements are built only from generators and the quandle operations, and
//! two elements are equal exactly when their tree pairs are. The sequence
//! `p(0) = a`, `p(1) = b`, `p(n) = p(n-2) ▷ p(n-1)` satisfies
//! `p(j) ▷ p(k) = p(k+1)` for all `j < k`.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Group, Quandle};
use crate::caps::Caps;
use crate::term::{eval, Term, TermError};
use crate::thompson::TreePair;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("p({n}) is above the index cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("calibration failed: {0}")]
    Calibration(String),
    #[error("abelianization {0:?} matches neither orbit")]
    UnknownOrbit((i64, i64)),
    #[error("element tagged {tagged:?} has the abelianization of orbit {computed:?}")]
    OrbitMismatch { tagged: Orbit, computed: Orbit },
    #[error(transparent)]
    Term(#[from] TermError),
}

/// The two orbits: `A` contains `p(0)`, `B` contains `p(1), p(2), ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orbit {
    A,
    B,
}

impl fmt::Display for Orbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orbit::A => "A",
            Orbit::B => "B",
        })
    }
}

/// An element of the model. Equality and hashing look at the tree pair only.
#[derive(Clone, Serialize)]
pub struct PElem {
    orbit: Orbit,
    #[serde(flatten)]
    value: TreePair,
}

impl PElem {
    pub fn value(&self) -> &TreePair {
        &self.value
    }

    pub fn orbit_tag(&self) -> Orbit {
        self.orbit
    }
}

impl PartialEq for PElem {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl Eq for PElem {}

impl Hash for PElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.value.hash(state)
    }
}

impl fmt::Display for PElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p-elem{{orbit={}, tree={}}}", self.orbit, self.value)
    }
}

impl fmt::Debug for PElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The images of the two generators, `a = x0^sign` and `b = x1^sign`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Calibration {
    pub a: TreePair,
    pub b: TreePair,
    pub sign: i8,
}

/// `a ▷ (a ▷ b) = b ▷ (a ▷ b)` in the conjugation quandle.
pub fn first_relation_holds(a: &TreePair, b: &TreePair) -> bool {
    let ab = a.conj(b);
    a.conj(&ab) == b.conj(&ab)
}

/// `a ▷ (a ▷ (a ▷ b)) = b ▷ (a ▷ (a ▷ b))` in the conjugation quandle.
pub fn second_relation_holds(a: &TreePair, b: &TreePair) -> bool {
    let aab = a.conj(&a.conj(b));
    a.conj(&aab) == b.conj(&aab)
}

/// `[x0 x1^-1, x0^-1 x1 x0]` and `[x0 x1^-1, x0^-2 x1 x0^2]`.
pub fn standard_relators() -> [TreePair; 2] {
    let (x0, x1) = (TreePair::x0(), TreePair::x1());
    let commutator = |g: &TreePair, h: &TreePair| g.mul(h).mul(&g.inv()).mul(&h.inv());
    let u = x0.mul(&x1.inv());
    let v1 = x0.inv().conj(&x1);
    let v2 = x0.inv().pow(2).conj(&x1);
    [commutator(&u, &v1), commutator(&u, &v2)]
}

/// Picks the sign of the generators for which the first defining relation
/// holds. Fails unless the `F` relators vanish and exactly one sign works.
pub fn calibrate() -> Result<Calibration, ModelError> {
    if let Some(i) = standard_relators().iter().position(|r| !r.is_identity()) {
        return Err(ModelError::Calibration(format!("F relator {i} does not reduce to the identity")));
    }
    let candidates: Vec<Calibration> = [1i8, -1]
        .into_iter()
        .map(|sign| {
            let k = i64::from(sign);
            Calibration { a: TreePair::x0().pow(k), b: TreePair::x1().pow(k), sign }
        })
        .filter(|c| first_relation_holds(&c.a, &c.b))
        .collect();
    match candidates.as_slice() {
        [c] if second_relation_holds(&c.a, &c.b) => Ok(c.clone()),
        [c] => Err(ModelError::Calibration(format!("sign {} fails the second relation", c.sign))),
        [] => Err(ModelError::Calibration("neither sign satisfies the first relation".into())),
        _ => Err(ModelError::Calibration("both signs satisfy the first relation".into())),
    }
}

/// Outcome of checking `p(j) ▷ p(k) = p(k+1)` for `j < k <= n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub n: usize,
    pub checked: usize,
    /// The first `(j, k)` that fails, in order of increasing `k` then `j`.
    pub failure: Option<(usize, usize)>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// The model: calibration plus an append-only memo of `p(n)`.
pub struct ThompsonQuandle {
    calibration: Calibration,
    memo: Vec<OnceLock<PElem>>,
    abel_a: (i64, i64),
    abel_b: (i64, i64),
}

impl fmt::Debug for ThompsonQuandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ThompsonQuandle")
            .field("calibration", &self.calibration)
            .field("cap", &self.cap())
            .finish()
    }
}

/// Number of generators on which `eps(p(n)) = p(n+1)` is checked at startup.
const EPS_STARTUP_CHECK: usize = 10;

impl ThompsonQuandle {
    pub fn new(caps: &Caps) -> Result<Self, ModelError> {
        let calibration = calibrate()?;
        let abel_a = calibration.a.abelianize();
        let abel_b = calibration.b.abelianize();
        if abel_a == abel_b {
            return Err(ModelError::Calibration("a and b have equal abelianizations".into()));
        }
        let model = Self {
            calibration,
            memo: (0..=caps.p_index).map(|_| OnceLock::new()).collect(),
            abel_a,
            abel_b,
        };
        for n in 0..EPS_STARTUP_CHECK.min(caps.p_index) {
            if model.eps(&model.p(n)?) != model.p(n + 1)? {
                return Err(ModelError::Calibration(format!("eps(p({n})) differs from p({})", n + 1)));
            }
        }
        Ok(model)
    }

    pub fn calibration(&self) -> &Calibration {
        &self.calibration
    }

    /// Largest `n` for which `p(n)` can be built.
    pub fn cap(&self) -> usize {
        self.memo.len() - 1
    }

    pub fn a(&self) -> PElem {
        PElem { orbit: Orbit::A, value: self.calibration.a.clone() }
    }

    pub fn b(&self) -> PElem {
        PElem { orbit: Orbit::B, value: self.calibration.b.clone() }
    }

    /// `p(n)`, built by the recursion and memoized.
    pub fn p(&self, n: usize) -> Result<PElem, ModelError> {
        let slot = self.memo.get(n).ok_or(ModelError::CapExceeded { n, cap: self.cap() })?;
        if let Some(e) = slot.get() {
            return Ok(e.clone());
        }
        let value = match n {
            0 => self.a(),
            1 => self.b(),
            _ => {
                // p(n-2) is memoized before p(n-1) asks for it, so this stays linear.
                let (x, y) = (self.p(n - 2)?, self.p(n - 1)?);
                self.op(&x, &y)
            }
        };
        Ok(slot.get_or_init(|| value).clone())
    }

    /// Largest leaf count among memoized generators.
    pub fn max_memo_leaves(&self) -> usize {
        self.memo.iter().filter_map(|s| s.get()).map(|e| e.value.leaf_count()).max().unwrap_or(0)
    }

    /// The shift endomorphism of `F` applied to the tree pair. It commutes
    /// with inversion, so it serves both signs.
    pub fn eps(&self, x: &PElem) -> PElem {
        PElem { orbit: Orbit::B, value: x.value.shift() }
    }

    /// The orbit read off the abelianization, checked against the tag.
    pub fn orbit(&self, x: &PElem) -> Result<Orbit, ModelError> {
        let ab = x.value.abelianize();
        let computed = if ab == self.abel_a {
            Orbit::A
        } else if ab == self.abel_b {
            Orbit::B
        } else {
            return Err(ModelError::UnknownOrbit(ab));
        };
        if computed != x.orbit {
            return Err(ModelError::OrbitMismatch { tagged: x.orbit, computed });
        }
        Ok(computed)
    }

    /// Evaluates a term over `a`, `b` with `a ↦ p(0)`, `b ↦ p(1)`.
    pub fn iso_g(&self, t: &Term) -> Result<PElem, ModelError> {
        let assignment = HashMap::from([("a".to_string(), self.a()), ("b".to_string(), self.b())]);
        Ok(eval(t, &assignment, self)?)
    }

    /// The term `q_n` over `a`, `b`: `a`, `b`, then `q_{n-2} |> q_{n-1}`.
    pub fn iso_f(&self, n: usize) -> Result<Term, ModelError> {
        if n > self.cap() {
            return Err(ModelError::CapExceeded { n, cap: self.cap() });
        }
        let (mut prev, mut cur) = (Term::gen("a"), Term::gen("b"));
        if n == 0 {
            return Ok(prev);
        }
        for _ in 1..n {
            let next = Term::act(prev, cur.clone());
            prev = cur;
            cur = next;
        }
        Ok(cur)
    }

    /// Checks `p(j) ▷ p(k) = p(k+1)` for all `0 <= j < k <= n`.
    pub fn verify_relations(&self, n: usize) -> Result<RelationReport, ModelError> {
        let mut checked = 0;
        for k in 1..=n {
            let next = self.p(k + 1)?;
            let pk = self.p(k)?;
            for j in 0..k {
                checked += 1;
                if self.op(&self.p(j)?, &pk) != next {
                    return Ok(RelationReport { n, checked, failure: Some((j, k)) });
                }
            }
        }
        Ok(RelationReport { n, checked, failure: None })
    }
}

impl Quandle for ThompsonQuandle {
    type Elem = PElem;

    fn op(&self, x: &PElem, y: &PElem) -> PElem {
        PElem { orbit: y.orbit, value: x.value.conj(&y.value) }
    }

    fn op_inv(&self, x: &PElem, y: &PElem) -> PElem {
        PElem { orbit: y.orbit, value: x.value.inv().conj(&y.value) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{free_quandle_canonical, FreeQuandleElem, FreeWord, Letter};
    use crate::term::parse_term;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn model() -> &'static ThompsonQuandle {
        static CELL: OnceLock<ThompsonQuandle> = OnceLock::new();
        CELL.get_or_init(|| ThompsonQuandle::new(&Caps::default()).unwrap())
    }

    /// Elements reached from `p(0..6)` by random `▷` and `▷⁻¹` steps.
    fn random_elems(seed: u64, count: usize) -> Vec<PElem> {
        let m = model();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pool: Vec<PElem> = (0..6).map(|i| m.p(i).unwrap()).collect();
        let mut out = Vec::new();
        while out.len() < count {
            let x = &pool[rng.gen_range(0..pool.len())];
            let y = &pool[rng.gen_range(0..pool.len())];
            let z = if rng.gen_bool(0.5) { m.op(x, y) } else { m.op_inv(x, y) };
            if z.value.leaf_count() < 40 {
                pool.push(z.clone());
            }
            out.push(z);
        }
        out
    }

    #[test]
    fn calibration_picks_the_inverse_sign() {
        let c = calibrate().unwrap();
        assert_eq!(c.sign, -1);
        assert_eq!(c.a, TreePair::x0().inv());
        assert!(!first_relation_holds(&TreePair::x0(), &TreePair::x1()));
        assert!(first_relation_holds(&c.a, &c.b));
        assert!(second_relation_holds(&c.a, &c.b));
        for r in standard_relators() {
            assert!(r.is_identity());
        }
    }

    #[test]
    fn sequence_values() {
        let m = model();
        let (a, b) = (&m.calibration().a, &m.calibration().b);
        assert_eq!(m.p(2).unwrap().value(), &a.mul(b).mul(&a.inv()));
        assert_eq!(m.p(3).unwrap().value(), &b.mul(m.p(2).unwrap().value()).mul(&b.inv()));
        // Under the inverse sign, p(n) is the inverse of the n-th standard generator.
        for n in 0..=20 {
            assert_eq!(m.p(n).unwrap().value(), &TreePair::x(n).inv());
        }
        assert!(matches!(m.p(65), Err(ModelError::CapExceeded { n: 65, cap: 64 })));
        assert_eq!(m.p(64).unwrap().value().leaf_count(), 67);
    }

    #[test]
    fn generators_distinct() {
        let m = model();
        let ps: Vec<PElem> = (0..=20).map(|n| m.p(n).unwrap()).collect();
        for i in 0..ps.len() {
            for j in i + 1..ps.len() {
                assert_ne!(ps[i], ps[j], "p({i}) = p({j})");
            }
        }
    }

    #[test]
    fn relations_up_to_ten() {
        let m = model();
        let r = m.verify_relations(10).unwrap();
        assert_eq!((r.checked, r.failure), (55, None));
        assert_eq!(m.verify_relations(1).unwrap().checked, 1);
        let empty = m.verify_relations(0).unwrap();
        assert!(empty.passed() && empty.checked == 0);
        for k in 1..=10 {
            for j in 0..k {
                assert_eq!(m.op(&m.p(j).unwrap(), &m.p(k).unwrap()), m.p(k + 1).unwrap());
            }
        }
    }

    #[test]
    fn quandle_axioms_on_generated_elements() {
        let m = model();
        let ps: Vec<PElem> = (0..=10).map(|n| m.p(n).unwrap()).collect();
        for x in &ps {
            assert_eq!(m.op(x, x), *x);
            for y in &ps {
                assert_eq!(m.op_inv(x, &m.op(x, y)), *y);
            }
        }
        let sample = random_elems(7, 90);
        for w in sample.chunks(3) {
            let (x, y, z) = (&w[0], &w[1], &w[2]);
            assert_eq!(m.op(x, &m.op(y, z)), m.op(&m.op(x, y), &m.op(x, z)));
            assert_eq!(m.op(x, x), *x);
            assert_eq!(m.op_inv(x, &m.op(x, y)), *y);
        }
    }

    #[test]
    fn eps_properties() {
        let m = model();
        for n in 0..=10 {
            assert_eq!(m.eps(&m.p(n).unwrap()), m.p(n + 1).unwrap());
        }
        let p0 = m.p(0).unwrap();
        let sample = random_elems(11, 100);
        for x in &sample {
            let e = m.eps(x);
            assert_eq!(m.eps(&e), m.op(&p0, &e));
        }
        for (i, x) in sample.iter().enumerate() {
            for y in &sample[i + 1..] {
                if x != y {
                    assert_ne!(m.eps(x), m.eps(y));
                }
            }
        }
    }

    #[test]
    fn orbits() {
        let m = model();
        assert_eq!(m.orbit(&m.p(0).unwrap()).unwrap(), Orbit::A);
        assert_eq!(m.orbit(&m.p(7).unwrap()).unwrap(), Orbit::B);
        let sample = random_elems(3, 200);
        let mut seen = std::collections::HashSet::new();
        for w in sample.chunks(2) {
            let z = m.op(&w[0], &w[1]);
            assert_eq!(m.orbit(&z).unwrap(), m.orbit(&w[1]).unwrap());
            seen.insert(m.orbit(&w[0]).unwrap());
        }
        assert_eq!(seen.len(), 2);
        let bad = PElem { orbit: Orbit::A, value: m.calibration().b.clone() };
        assert!(matches!(m.orbit(&bad), Err(ModelError::OrbitMismatch { .. })));
        let odd = PElem { orbit: Orbit::A, value: TreePair::identity() };
        assert!(matches!(m.orbit(&odd), Err(ModelError::UnknownOrbit((0, 0)))));
    }

    #[test]
    fn isomorphisms() {
        let m = model();
        assert_eq!(m.iso_g(&parse_term("a |> b").unwrap()).unwrap(), m.p(2).unwrap());
        assert_eq!(m.iso_g(&parse_term("b |> (a |> b)").unwrap()).unwrap(), m.p(3).unwrap());
        assert_eq!(m.iso_g(&parse_term("a").unwrap()).unwrap(), m.p(0).unwrap());
        assert!(m.iso_g(&parse_term("c").unwrap()).is_err());
        assert_eq!(m.iso_f(2).unwrap().to_string(), "a |> b");
        assert_eq!(m.iso_f(4).unwrap().to_string(), "(a |> b) |> (b |> (a |> b))");
        for n in 0..=12 {
            assert_eq!(m.iso_g(&m.iso_f(n).unwrap()).unwrap(), m.p(n).unwrap());
        }
        assert!(m.iso_f(65).is_err());
    }

    /// Every reduced word of length at most 4 over `a^±1, b^±1`.
    fn short_words() -> Vec<FreeWord> {
        let letters: Vec<Letter> =
            (0..2).flat_map(|g| [Letter::new(g, false), Letter::new(g, true)]).collect();
        let mut all = vec![Vec::new()];
        let mut frontier = vec![Vec::new()];
        for _ in 0..4 {
            let mut next = Vec::new();
            for w in &frontier {
                for &l in &letters {
                    let mut v: Vec<Letter> = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
            all.extend(next.iter().cloned());
            frontier = next;
        }
        all.into_iter().map(FreeWord::new).collect()
    }

    #[test]
    fn centralizer_probe() {
        let m = model();
        let (a, b) = (m.calibration().a.clone(), m.calibration().b.clone());
        let powers: Vec<TreePair> = (-4..=4).map(|k| a.pow(k)).collect();
        for w in short_words() {
            let g = w.eval(&[a.clone(), b.clone()]);
            if g.conj(&a) == a {
                assert!(powers.contains(&g), "{w} centralizes a");
            }
        }
    }

    #[test]
    fn free_quandle_diagram_commutes() {
        let m = model();
        let images = [m.a(), m.b()];
        let group_images = [m.calibration().a.clone(), m.calibration().b.clone()];
        for w in short_words() {
            for g in 0..2 {
                let e: FreeQuandleElem = free_quandle_canonical(w.clone(), g);
                let via_p = e.eval_in(m, &images);
                let via_group = e.to_word().eval(&group_images);
                assert_eq!(via_p.value(), &via_group, "{e}");
            }
        }
    }

    #[test]
    fn rendering() {
        let m = model();
        let s = m.p(0).unwrap().to_string();
        assert_eq!(s, "p-elem{orbit=A, tree=((.,.),.) -> (.,(.,.))}");
        let json = serde_json::to_value(m.p(1).unwrap()).unwrap();
        assert_eq!(json["orbit"], "B");
        assert!(json["domain"].is_string() && json["range"].is_string());
    }
}
