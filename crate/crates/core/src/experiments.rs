//! Verification drivers. Each returns a [`Report`]; a failing report carries
//! the inputs that reproduce the failure. Random sampling uses fixed seeds,
//! recorded in the report parameters, so two runs agree except for timings.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{
    dihedral_quandle, enumerate_quandles, first_violation, trivial_quandle, AlgebraError,
    FiniteQuandle, FreeWord, Group, Letter, Quandle,
};
use crate::caps::Caps;
use crate::laurent::{describe_with_transcript, matrix_reduce, row_quotient, LaurentPoly};
use crate::term::{
    alexander_matrix, check_hom, hnn_extend, hom_count, orbit_count, thompson_hnn_data,
    thompson_presentation, TermError,
};
use crate::thompson::{random_element, TreePair};
use crate::thompson_quandle::{standard_relators, ModelError, Orbit, PElem, ThompsonQuandle};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExperimentError {
    #[error("{what} is {value}, above the limit of {limit}")]
    TooLarge { what: &'static str, value: usize, limit: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
}

fn limit(what: &'static str, value: usize, limit: usize) -> Result<(), ExperimentError> {
    if value > limit {
        return Err(ExperimentError::TooLarge { what, value, limit });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    pub parameters: Value,
    pub passed: bool,
    /// Inputs reproducing the first failure.
    pub counterexample: Option<Value>,
    /// What was computed, for passing and failing runs alike.
    pub observed: Value,
    pub note: String,
    pub wall_time_ms: u64,
}

impl Report {
    fn start(name: &str, parameters: Value) -> ReportBuilder {
        ReportBuilder {
            name: name.to_string(),
            parameters,
            started: Instant::now(),
            counterexample: None,
            observed: json!({}),
            note: String::new(),
        }
    }

    /// One JSON object on one line.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {} ({} ms)", self.name, self.wall_time_ms)?;
        if !self.note.is_empty() {
            write!(f, ": {}", self.note)?;
        }
        if let Some(c) = &self.counterexample {
            write!(f, "\n  counterexample: {c}")?;
        }
        Ok(())
    }
}

struct ReportBuilder {
    name: String,
    parameters: Value,
    started: Instant,
    counterexample: Option<Value>,
    observed: Value,
    note: String,
}

impl ReportBuilder {
    /// Records `c` unless an earlier failure is already recorded.
    fn fail(&mut self, c: Value) {
        if self.counterexample.is_none() {
            self.counterexample = Some(c);
        }
    }

    fn observe(&mut self, key: &str, v: impl Serialize) {
        self.observed[key] = serde_json::to_value(v).expect("observations serialize");
    }

    fn note(&mut self, s: impl Into<String>) {
        self.note = s.into();
    }

    fn finish(self) -> Report {
        Report {
            name: self.name,
            parameters: self.parameters,
            passed: self.counterexample.is_none(),
            counterexample: self.counterexample,
            observed: self.observed,
            note: self.note,
            wall_time_ms: self.started.elapsed().as_millis() as u64,
        }
    }
}

/// Highest index `k` in the relations `s_j ▷ s_k = s_{k+1}` checked for a
/// sequence built from a universal pair.
const UNIV_RELATION_DEPTH: usize = 6;

/// Builds `q_0 = x`, `q_1 = y`, `q_n = q_{n-2} ▷ q_{n-1}` up to `q_len-1`.
fn q_sequence(q: &FiniteQuandle, x: usize, y: usize, len: usize) -> Vec<usize> {
    let mut seq = vec![x, y];
    while seq.len() < len {
        let n = seq.len();
        seq.push(q.get(seq[n - 2], seq[n - 1]));
    }
    seq.truncate(len);
    seq
}

/// First `(j, k)` with `j < k <= n` and `s_j ▷ s_k != s_{k+1}`.
fn first_sequence_failure(q: &FiniteQuandle, s: &[usize], n: usize) -> Option<(usize, usize)> {
    (1..=n).flat_map(|k| (0..k).map(move |j| (j, k))).find(|&(j, k)| q.get(s[j], s[k]) != s[k + 1])
}

/// For every endomorphism `δ` of `q` and point `q0` with
/// `δ²(x) = q0 ▷ δ(x)` for all `x`: the assignment `a ↦ q0`, `b ↦ δ(q0)`
/// must respect the two defining relations, and `δ^n(q0)` must satisfy
/// `s_j ▷ s_k = s_{k+1}` for `j < k <= 6`.
pub fn check_universal_pairs(q: &FiniteQuandle) -> Result<Report, ExperimentError> {
    limit("model order", q.order(), 5)?;
    let pres = thompson_presentation();
    let mut r = Report::start("universal_pairs", json!({ "model": q.table() }));
    let mut qualifying = 0usize;
    for delta in q.endomorphisms() {
        for q0 in q.elements() {
            if !q.elements().all(|x| delta[delta[x]] == q.get(q0, delta[x])) {
                continue;
            }
            qualifying += 1;
            if !check_hom(&pres, q, &[q0, delta[q0]])? {
                r.fail(json!({ "model": q.table(), "delta": delta, "q0": q0, "failed": "defining relations" }));
                continue;
            }
            let mut seq = vec![q0];
            for _ in 0..=UNIV_RELATION_DEPTH {
                seq.push(delta[*seq.last().expect("nonempty")]);
            }
            if let Some((j, k)) = first_sequence_failure(q, &seq, UNIV_RELATION_DEPTH) {
                r.fail(json!({ "model": q.table(), "delta": delta, "q0": q0, "failed": [j, k] }));
            }
        }
    }
    r.observe("qualifying_pairs", qualifying);
    r.note(format!("{qualifying} qualifying (delta, q0) pairs"));
    Ok(r.finish())
}

/// For every morphism from the finite presentation (`a ↦ x`, `b ↦ y`),
/// the recursively built `q_n` satisfy `q_j ▷ q_k = q_{k+1}` for `j < k <= n`.
pub fn check_qseq_relations(q: &FiniteQuandle, n: usize) -> Result<Report, ExperimentError> {
    limit("model order", q.order(), 5)?;
    limit("N", n, 8)?;
    let pres = thompson_presentation();
    let mut r = Report::start("qseq_relations", json!({ "model": q.table(), "n": n }));
    let mut homs = 0usize;
    for x in q.elements() {
        for y in q.elements() {
            if !check_hom(&pres, q, &[x, y])? {
                continue;
            }
            homs += 1;
            let seq = q_sequence(q, x, y, n + 2);
            if let Some((j, k)) = first_sequence_failure(q, &seq, n) {
                r.fail(json!({ "model": q.table(), "n": n, "a": x, "b": y, "failed": [j, k] }));
            }
        }
    }
    r.observe("homomorphisms", homs);
    r.note(format!("{homs} homomorphisms checked"));
    Ok(r.finish())
}

/// Compares homomorphism counts of the finite presentation and its HNN
/// extension along `a ↦ b`, `b ↦ a ▷ b` into every quandle of order at most
/// `cap`.
pub fn hnn_census(cap: usize) -> Result<Report, ExperimentError> {
    limit("census order", cap, 4)?;
    let data = thompson_hnn_data();
    let ext = hnn_extend(&data)?;
    let caps = Caps { order: cap, gens: ext.generators().len(), ..Caps::default() };
    let mut r = Report::start("hnn_census", json!({ "max_order": cap, "tau": "a -> b, b -> a |> b" }));
    let mut rows = Vec::new();
    for n in 1..=cap {
        for q in enumerate_quandles(n, cap)? {
            let base = hom_count(&data.base, &q, &caps)?;
            let extended = hom_count(&ext, &q, &caps)?;
            rows.push(json!({ "model": q.table(), "base": base, "extended": extended }));
            if base != extended {
                r.fail(json!({ "model": q.table(), "base": base, "extended": extended }));
            }
        }
    }
    r.observe("counts", rows);
    r.note(
        "equal hom counts into every small quandle are a necessary condition for the \
         extension to be isomorphic to the base; they do not prove it",
    );
    Ok(r.finish())
}

/// Linearizes the finite presentation, reduces, and reads off the module.
pub fn alexander_pipeline() -> Report {
    let pres = thompson_presentation();
    let mut r = Report::start("alexander_pipeline", json!({ "presentation": pres.to_dsl() }));
    let m = alexander_matrix(&pres);
    r.observe("matrix", &m);
    let rows = m.rows();
    match rows {
        [first, second] => match row_quotient(second, first) {
            Some(u) => r.observe("second_row_factor", u),
            None => r.fail(json!({ "failed": "second row is not a multiple of the first" })),
        },
        _ => r.fail(json!({ "failed": "expected two relation rows", "rows": rows.len() })),
    }
    let reduced = matrix_reduce(&m);
    r.observe("reduced", &reduced.matrix);
    let (description, full) = describe_with_transcript(&m);
    r.observe("transcript", &full.transcript);
    r.observe("description", &description);
    r.observe("module", description.to_string());
    let torsion_ok = description.torsion_factors == [LaurentPoly::one_minus_q().normalize_associate()];
    if description.free_rank != 1 || !torsion_ok || description.residual.is_some() {
        r.fail(json!({ "failed": "module description", "got": description.to_string() }));
    }
    let one = num_rational::BigRational::from_integer(1.into());
    let rank = m.rank_at(&one).expect("evaluation at 1 is defined");
    let expected = pres.generators().len() - orbit_count(&pres).count;
    r.observe("rank_at_1", rank);
    if rank != expected {
        r.fail(json!({ "failed": "rank at q = 1", "rank": rank, "expected": expected }));
    }
    r.note(format!("module {description}, rank {rank} at q = 1"));
    r.finish()
}

/// `p(0..=n)` pairwise distinct, and `p(0)`, `p(1)` in different orbits.
pub fn distinctness_probe(model: &ThompsonQuandle, n: usize) -> Result<Report, ExperimentError> {
    let mut r = Report::start("distinctness_probe", json!({ "n": n }));
    let ps: Vec<PElem> = (0..=n).map(|i| model.p(i)).collect::<Result<_, _>>()?;
    'outer: for i in 0..ps.len() {
        for j in i + 1..ps.len() {
            if ps[i] == ps[j] {
                r.fail(json!({ "n": n, "equal": [i, j] }));
                break 'outer;
            }
        }
    }
    let (o0, o1) = (model.orbit(&ps[0])?, model.orbit(&model.p(1)?)?);
    if o0 == o1 {
        r.fail(json!({ "n": n, "failed": "p(0) and p(1) share an orbit" }));
    }
    r.observe("orbit_p0", o0);
    r.observe("orbit_p1", o1);
    r.observe("max_leaves", ps.iter().map(|p| p.value().leaf_count()).max());
    r.note(format!("{} generators distinct, orbits {o0} and {o1}", ps.len()));
    Ok(r.finish())
}

/// Orbit count of the finite presentation is 2 and it has `n²` morphisms
/// into the trivial quandle of order `n`, for `n = 1..=5`.
pub fn trivial_hom_census() -> Result<Report, ExperimentError> {
    let pres = thompson_presentation();
    let mut r = Report::start("trivial_hom_census", json!({ "orders": [1, 2, 3, 4, 5] }));
    let orbits = orbit_count(&pres);
    r.observe("orbits", &orbits);
    if orbits.count != 2 {
        r.fail(json!({ "failed": "orbit count", "got": orbits.count }));
    }
    let caps = Caps::default();
    let mut counts = Vec::new();
    for n in 1..=5usize {
        let c = hom_count(&pres, &trivial_quandle(n)?, &caps)?;
        counts.push(c);
        if c != (n * n) as u64 {
            r.fail(json!({ "model": format!("trivial:{n}"), "count": c }));
        }
    }
    r.observe("counts", &counts);
    r.note(format!("{} orbits; trivial counts {counts:?}", orbits.count));
    Ok(r.finish())
}

/// `p(j) ▷ p(k) = p(k+1)` in `F` for `j < k <= n`, and
/// `iso_g(iso_f(m)) = p(m)` for `m <= iso_n`.
pub fn fingen_model(model: &ThompsonQuandle, n: usize, iso_n: usize) -> Result<Report, ExperimentError> {
    let mut r = Report::start("fingen_relations", json!({ "n": n, "iso_n": iso_n }));
    let rel = model.verify_relations(n)?;
    if let Some((j, k)) = rel.failure {
        r.fail(json!({ "relation": [j, k] }));
    }
    for m in 0..=iso_n {
        let t = model.iso_f(m)?;
        if model.iso_g(&t)? != model.p(m)? {
            r.fail(json!({ "iso_round_trip": m, "term": t.to_string() }));
        }
    }
    r.observe("relations_checked", rel.checked);
    r.observe("max_leaves", model.max_memo_leaves());
    r.note(format!("{} relations hold; iso_g(iso_f(m)) = p(m) for m <= {iso_n}", rel.checked));
    Ok(r.finish())
}

/// Both `F` relators vanish, and `shift²(g) = a · shift(g) · a⁻¹` for
/// `samples` seeded random elements.
pub fn calibration_gate(model: &ThompsonQuandle, seed: u64, samples: usize) -> Report {
    let mut r = Report::start("calibration_gate", json!({ "seed": seed, "samples": samples, "max_word": 12 }));
    for (i, rel) in standard_relators().iter().enumerate() {
        if !rel.is_identity() {
            r.fail(json!({ "relator": i, "got": rel.to_string() }));
        }
    }
    let a = &model.calibration().a;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..samples {
        let g = random_element(&mut rng, 12);
        let s = g.shift();
        if s.shift() != a.conj(&s) {
            r.fail(json!({ "seed": seed, "sample": i, "element": g.to_string() }));
        }
    }
    r.observe("sign", model.calibration().sign);
    r.note(format!("sign {}; relators trivial; {samples} shift checks", model.calibration().sign));
    r.finish()
}

/// Quandle axioms on every enumerated quandle of order at most `max_order`
/// and on `triples` seeded random triples in the conjugation quandle of `F`.
pub fn axiom_suite(max_order: usize, seed: u64, triples: usize) -> Result<Report, ExperimentError> {
    limit("census order", max_order, 4)?;
    let mut r = Report::start(
        "axioms",
        json!({ "max_order": max_order, "seed": seed, "triples": triples, "max_word": 8 }),
    );
    let mut tables = 0usize;
    for n in 1..=max_order {
        for q in enumerate_quandles(n, max_order)? {
            tables += 1;
            if let Some(v) = first_violation(&q.table())? {
                r.fail(json!({ "model": q.table(), "violation": v.to_string() }));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..triples {
        let (x, y, z) = (random_element(&mut rng, 8), random_element(&mut rng, 8), random_element(&mut rng, 8));
        let ok = x.conj(&y.conj(&z)) == x.conj(&y).conj(&x.conj(&z))
            && x.conj(&x) == x
            && x.inv().conj(&x.conj(&y)) == y;
        if !ok {
            r.fail(json!({ "seed": seed, "triple": i, "x": x.to_string(), "y": y.to_string(), "z": z.to_string() }));
        }
    }
    r.observe("tables", tables);
    r.note(format!("{tables} tables and {triples} conjugation triples"));
    Ok(r.finish())
}

/// Every freely reduced word of length at most `len` over two generators.
fn words_up_to(len: usize) -> Vec<FreeWord> {
    let letters: Vec<Letter> = (0..2).flat_map(|g| [Letter::new(g, false), Letter::new(g, true)]).collect();
    let mut out: Vec<FreeWord> = vec![FreeWord::default()];
    let mut frontier = out.clone();
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in &letters {
                if w.letters().last() == Some(&l.inv()) {
                    continue;
                }
                next.push(FreeWord::new(w.letters().iter().copied().chain([l])));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Faithfulness probes for the model inside `F`: distinct generators, the
/// orbit map on a seeded sample takes exactly the two values, and every word
/// of length at most 4 in `a`, `b` that commutes with `a` is a power of `a`.
pub fn embedding_probe(model: &ThompsonQuandle, seed: u64) -> Result<Report, ExperimentError> {
    let mut r = Report::start("embedding_probe", json!({ "seed": seed, "distinct_n": 20, "word_len": 4, "sample": 200 }));
    let d = distinctness_probe(model, 20)?;
    if let Some(c) = d.counterexample {
        r.fail(c);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<PElem> = (0..6).map(|i| model.p(i)).collect::<Result<_, _>>()?;
    let mut orbits = HashSet::new();
    for step in 0..200 {
        use rand::Rng;
        let x = pool[rng.gen_range(0..pool.len())].clone();
        let y = pool[rng.gen_range(0..pool.len())].clone();
        let z = if rng.gen_bool(0.5) { model.op(&x, &y) } else { model.op_inv(&x, &y) };
        match model.orbit(&z) {
            Ok(o) => {
                orbits.insert(o);
            }
            Err(e) => r.fail(json!({ "seed": seed, "step": step, "error": e.to_string() })),
        }
        if z.value().leaf_count() < 40 {
            pool.push(z);
        }
    }
    let mut seen: Vec<Orbit> = orbits.into_iter().collect();
    seen.sort_by_key(|o| *o == Orbit::B);
    if seen.len() != 2 {
        r.fail(json!({ "seed": seed, "orbits_seen": seen }));
    }

    let (a, b) = (model.calibration().a.clone(), model.calibration().b.clone());
    let powers: Vec<TreePair> = (-4..=4).map(|k| a.pow(k)).collect();
    let words = words_up_to(4);
    let mut centralizing = 0usize;
    for w in &words {
        let g = w.eval(&[a.clone(), b.clone()]);
        if g.conj(&a) == a {
            centralizing += 1;
            if !powers.contains(&g) {
                r.fail(json!({ "word": w.to_string() }));
            }
        }
    }
    r.observe("orbits_seen", &seen);
    r.observe("words", words.len());
    r.observe("centralizing_words", centralizing);
    r.note(format!(
        "p(0..=20) distinct; orbits {seen:?}; {centralizing} of {} words commute with a, all powers of a",
        words.len()
    ));
    Ok(r.finish())
}

/// Named groups of experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Univ,
    Fingen,
    Hnn,
    Alexander,
    Orbits,
    Axioms,
}

impl Suite {
    pub const NAMES: [&'static str; 7] = ["all", "univ", "fingen", "hnn", "alexander", "orbits", "axioms"];
}

impl FromStr for Suite {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "all" => Suite::All,
            "univ" => Suite::Univ,
            "fingen" => Suite::Fingen,
            "hnn" => Suite::Hnn,
            "alexander" => Suite::Alexander,
            "orbits" => Suite::Orbits,
            "axioms" => Suite::Axioms,
            other => return Err(ExperimentError::UnknownSuite(other.to_string())),
        })
    }
}

const CALIBRATION_SEED: u64 = 0x5eed_0001;
const AXIOM_SEED: u64 = 0x5eed_0002;
const EMBEDDING_SEED: u64 = 0x5eed_0003;

/// Every quandle of order at most 4, then trivial and dihedral of order 5.
fn census_models() -> Result<Vec<FiniteQuandle>, ExperimentError> {
    let mut models = Vec::new();
    for n in 1..=4 {
        models.extend(enumerate_quandles(n, 4)?);
    }
    models.push(trivial_quandle(5)?);
    models.push(dihedral_quandle(5)?);
    Ok(models)
}

/// Runs a suite in a fixed order.
pub fn run_suite(suite: Suite, caps: &Caps) -> Result<Vec<Report>, ExperimentError> {
    let needs_model = !matches!(suite, Suite::Hnn | Suite::Alexander | Suite::Axioms);
    let model = if needs_model { Some(ThompsonQuandle::new(caps)?) } else { None };
    let model = || model.as_ref().expect("built for this suite");
    let mut out = Vec::new();
    let has = |s: Suite| suite == Suite::All || suite == s;
    if has(Suite::Fingen) {
        out.push(fingen_model(model(), 10, 12)?);
        for q in census_models()?.iter().filter(|q| q.order() <= 4) {
            out.push(check_qseq_relations(q, 6)?);
        }
    }
    if has(Suite::Orbits) {
        out.push(trivial_hom_census()?);
        out.push(distinctness_probe(model(), 20)?);
        out.push(embedding_probe(model(), EMBEDDING_SEED)?);
    }
    if has(Suite::Univ) {
        for q in census_models()? {
            out.push(check_universal_pairs(&q)?);
        }
        out.push(calibration_gate(model(), CALIBRATION_SEED, 100));
    }
    if has(Suite::Hnn) {
        out.push(hnn_census(4)?);
    }
    if has(Suite::Alexander) {
        out.push(alexander_pipeline());
    }
    if has(Suite::Axioms) {
        out.push(axiom_suite(4, AXIOM_SEED, 200)?);
    }
    Ok(out)
}
