use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{parse_term, Term, TermError};

/// Generators and relations of a finitely presented quandle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPresentation")]
pub struct Presentation {
    name: String,
    generators: Vec<String>,
    relations: Vec<(Term, Term)>,
}

#[derive(Deserialize)]
struct RawPresentation {
    name: String,
    generators: Vec<String>,
    relations: Vec<(Term, Term)>,
}

impl TryFrom<RawPresentation> for Presentation {
    type Error = TermError;
    fn try_from(raw: RawPresentation) -> Result<Self, TermError> {
        Self::new(raw.name, raw.generators, raw.relations)
    }
}

impl Presentation {
    pub fn new(
        name: impl Into<String>,
        generators: Vec<String>,
        relations: Vec<(Term, Term)>,
    ) -> Result<Self, TermError> {
        let mut seen = HashSet::new();
        for g in &generators {
            if !seen.insert(g.as_str()) {
                return Err(TermError::DuplicateGenerator(g.clone()));
            }
        }
        for (l, r) in &relations {
            for leaf in l.leaves().into_iter().chain(r.leaves()) {
                if !seen.contains(leaf) {
                    return Err(TermError::Undeclared(leaf.to_string()));
                }
            }
        }
        Ok(Self { name: name.into(), generators, relations })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relations(&self) -> &[(Term, Term)] {
        &self.relations
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    /// Parses the line-oriented `.qdl` format:
    ///
    /// ```text
    /// # comment
    /// quandle P
    /// gens a, b
    /// rel a |> (a |> b) = b |> (a |> b)
    /// ```
    ///
    /// `gens` may appear on several lines; relations may only use generators
    /// declared somewhere in the file.
    pub fn parse_dsl(text: &str) -> Result<Self, TermError> {
        let mut name: Option<String> = None;
        let mut generators = Vec::new();
        let mut relations = Vec::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw_line.split('#').next().unwrap_or("");
            let indent = line.len() - line.trim_start().len();
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            // 1-based column of the first non-blank character after the keyword.
            let sep = usize::from(!rest.is_empty() || keyword.len() < line.len());
            let rest_offset =
                indent + keyword.chars().count() + sep + (rest.len() - rest.trim_start().len()) + 1;
            let rest = rest.trim_start();
            let perr = |col: usize, msg: String| TermError::Parse { line: line_no, col, msg };
            match keyword {
                "quandle" => {
                    if name.is_some() {
                        return Err(perr(indent + 1, "duplicate `quandle` line".into()));
                    }
                    let n = rest.trim();
                    if n.is_empty() || n.contains(char::is_whitespace) {
                        return Err(perr(rest_offset, "expected a single name".into()));
                    }
                    name = Some(n.to_string());
                }
                "gens" => {
                    for g in rest.split(',').map(str::trim) {
                        let ok = g.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                            && g.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'');
                        if !ok {
                            return Err(perr(rest_offset, format!("bad generator name {g:?}")));
                        }
                        generators.push(g.to_string());
                    }
                }
                "rel" => {
                    let Some((lhs, rhs)) = rest.split_once('=') else {
                        return Err(perr(rest_offset, "expected `lhs = rhs`".into()));
                    };
                    let lhs_col = rest_offset - 1;
                    let rhs_col = rest_offset + lhs.chars().count();
                    let l = parse_term(lhs).map_err(|e| e.relocate(line_no, lhs_col))?;
                    let r = parse_term(rhs).map_err(|e| e.relocate(line_no, rhs_col))?;
                    relations.push((l, r));
                }
                other => {
                    return Err(perr(indent + 1, format!("unknown directive `{other}`")));
                }
            }
        }
        let name = name.unwrap_or_else(|| "Q".to_string());
        Self::new(name, generators, relations)
    }

    /// The `.qdl` text, accepted by [`Presentation::parse_dsl`].
    pub fn to_dsl(&self) -> String {
        let mut s = format!("quandle {}\n", self.name);
        if !self.generators.is_empty() {
            s.push_str(&format!("gens {}\n", self.generators.join(", ")));
        }
        for (l, r) in &self.relations {
            s.push_str(&format!("rel {l} = {r}\n"));
        }
        s
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dsl())
    }
}

/// Two generators `a`, `b` and the two relations
/// `a |> (a |> b) = b |> (a |> b)` and
/// `a |> (a |> (a |> b)) = b |> (a |> (a |> b))`.
pub fn thompson_presentation() -> Presentation {
    Presentation::parse_dsl(
        "quandle P\n\
         gens a, b\n\
         rel a |> (a |> b) = b |> (a |> b)\n\
         rel a |> (a |> (a |> b)) = b |> (a |> (a |> b))\n",
    )
    .expect("built-in presentation parses")
}

/// Generators `p0..p{n-1}` with every relation `pj |> pk = p{k+1}` that stays
/// inside that range (`j < k <= n - 2`).
pub fn truncated_thompson_presentation(n: usize) -> Presentation {
    let generators: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let mut relations = Vec::new();
    for k in 1..n.saturating_sub(1) {
        for j in 0..k {
            relations.push((
                Term::act(Term::gen(&generators[j]), Term::gen(&generators[k])),
                Term::gen(&generators[k + 1]),
            ));
        }
    }
    Presentation::new(format!("P_trunc{n}"), generators, relations).expect("well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dsl_round_trip() {
        let p = thompson_presentation();
        assert_eq!(p.generators(), &["a", "b"]);
        assert_eq!(p.relations().len(), 2);
        assert_eq!(Presentation::parse_dsl(&p.to_dsl()).unwrap(), p);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<Presentation>(&json).unwrap(), p);
    }

    #[test]
    fn comments_and_multiple_gens_lines() {
        let text = "# header\nquandle Q  # trailing\n\ngens a\ngens b, c\nrel a |> b = c\n";
        let p = Presentation::parse_dsl(text).unwrap();
        assert_eq!(p.name(), "Q");
        assert_eq!(p.generators(), &["a", "b", "c"]);
    }

    #[test]
    fn dsl_errors() {
        assert_eq!(
            Presentation::parse_dsl("gens a\nrel a |> z = a\n").unwrap_err(),
            TermError::Undeclared("z".into())
        );
        assert_eq!(
            Presentation::parse_dsl("gens a, a\n").unwrap_err(),
            TermError::DuplicateGenerator("a".into())
        );
        assert_eq!(
            Presentation::parse_dsl("gens a, b\nrel a |> (b = a\n").unwrap_err(),
            TermError::Parse { line: 2, col: 13, msg: "expected `)`".into() }
        );
        assert_eq!(
            Presentation::parse_dsl("gens a, b, c\nrel a = a |> b <| c\n").unwrap_err(),
            TermError::MixedOperators { line: 2, col: 16 }
        );
        assert!(matches!(
            Presentation::parse_dsl("gens a\nfoo a\n"),
            Err(TermError::Parse { line: 2, col: 1, .. })
        ));
        assert!(matches!(Presentation::parse_dsl("gens a\nrel a\n"), Err(TermError::Parse { line: 2, .. })));
    }

    #[test]
    fn truncated_relations() {
        let p = truncated_thompson_presentation(6);
        assert_eq!(p.generators().len(), 6);
        // j < k <= 4
        assert_eq!(p.relations().len(), 10);
        assert_eq!(p.relations()[0].0.to_string(), "p0 |> p1");
    }
}
