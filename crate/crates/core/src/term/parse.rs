use super::{OpKind, Term, TermError};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Op(OpKind),
    Open,
    Close,
}

/// Tokens with 1-based column.
fn lex(text: &str) -> Result<Vec<(Tok, usize)>, TermError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            c if c.is_whitespace() => i += 1,
            '(' => {
                out.push((Tok::Open, col));
                i += 1;
            }
            ')' => {
                out.push((Tok::Close, col));
                i += 1;
            }
            '|' if chars.get(i + 1) == Some(&'>') => {
                out.push((Tok::Op(OpKind::Act), col));
                i += 2;
            }
            '<' if chars.get(i + 1) == Some(&'|') => {
                out.push((Tok::Op(OpKind::ActInv), col));
                i += 2;
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            }
            other => {
                return Err(TermError::Parse { line: 1, col, msg: format!("unexpected character {other:?}") });
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn err(&self, msg: impl Into<String>) -> TermError {
        TermError::Parse { line: 1, col: self.col(), msg: msg.into() }
    }

    /// `chain := atom (OP atom)*`, one operator kind per chain, folded right.
    fn chain(&mut self) -> Result<Term, TermError> {
        let mut operands = vec![self.atom()?];
        let mut ops: Vec<(OpKind, usize)> = Vec::new();
        while let Some((Tok::Op(kind), col)) = self.toks.get(self.pos).cloned() {
            self.pos += 1;
            ops.push((kind, col));
            operands.push(self.atom()?);
        }
        if let Some(&(first, _)) = ops.first() {
            if let Some(&(_, col)) = ops.iter().find(|(k, _)| *k != first) {
                return Err(TermError::MixedOperators { line: 1, col });
            }
        }
        let mut acc = operands.pop().expect("at least one operand");
        while let (Some(left), Some((kind, _))) = (operands.pop(), ops.pop()) {
            acc = Term::Op(Box::new(left), kind, Box::new(acc));
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Term, TermError> {
        match self.toks.get(self.pos).cloned() {
            Some((Tok::Ident(name), _)) => {
                self.pos += 1;
                Ok(Term::Gen(name))
            }
            Some((Tok::Open, _)) => {
                self.pos += 1;
                let inner = self.chain()?;
                match self.toks.get(self.pos) {
                    Some((Tok::Close, _)) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(self.err("expected `)`")),
                }
            }
            Some((Tok::Close, _)) => Err(self.err("unexpected `)`")),
            Some((Tok::Op(k), _)) => Err(self.err(format!("expected a term before `{}`", k.symbol()))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses `term := atom | atom OP term` with `OP` one of `|>`, `<|`.
pub fn parse_term(text: &str) -> Result<Term, TermError> {
    let toks = lex(text)?;
    let mut parser = Parser { toks, pos: 0, end_col: text.chars().count() + 1 };
    let term = parser.chain()?;
    if parser.pos != parser.toks.len() {
        return Err(parser.err("unexpected trailing input"));
    }
    Ok(term)
}
