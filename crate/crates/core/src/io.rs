//! Text formats for structures, relations and results.
//!
//! A structure file lists its states with their labels, then its
//! transitions. Everything after `#` on a line is ignored, as are blank
//! lines.
//!
//! ```text
//! states 3
//! label 0 p
//! label 1 p ready
//! label 2
//! transitions 2
//! 0 1
//! 1 2
//! ```
//!
//! Atoms match `[A-Za-z_][A-Za-z0-9_]*`; a state may have no atoms.
//! Transition lines may be written `trans <src> <dst>` as well.
//!
//! A relation file holds one pair `u v` per line. It may also contain the
//! `block` and `leq` lines written by [`serialize_result`], so a computed
//! preorder can be fed back to the checker.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::kripke::{KripkeStructure, Label, StateId};
use crate::relation::Relation;
use crate::result::SimulationResult;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    DanglingState { id: usize, num_states: usize },
    DuplicateState(usize),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(msg) => f.write_str(msg),
            ParseErrorKind::DanglingState { id, num_states } => {
                write!(f, "state {id} is outside 0..{num_states}")
            }
            ParseErrorKind::DuplicateState(id) => write!(f, "state {id} is declared twice"),
        }
    }
}

/// A parse failure at a 1-based line and column.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

impl<'a> Line<'a> {
    fn error(&self, index: usize, kind: ParseErrorKind) -> ParseError {
        let column = self
            .tokens
            .get(index)
            .or(self.tokens.last())
            .map_or(1, |t| t.column);
        ParseError {
            line: self.number,
            column,
            kind,
        }
    }

    fn syntax(&self, index: usize, msg: impl Into<String>) -> ParseError {
        self.error(index, ParseErrorKind::Syntax(msg.into()))
    }

    fn number_at(&self, index: usize) -> Result<usize, ParseError> {
        let token = self
            .tokens
            .get(index)
            .ok_or_else(|| self.syntax(index, "expected a number"))?;
        token
            .text
            .parse()
            .map_err(|_| self.syntax(index, format!("`{}` is not a number", token.text)))
    }

    fn state_at(&self, index: usize, num_states: usize) -> Result<usize, ParseError> {
        let id = self.number_at(index)?;
        if id >= num_states {
            return Err(self.error(index, ParseErrorKind::DanglingState { id, num_states }));
        }
        Ok(id)
    }

    fn expect_len(&self, len: usize) -> Result<(), ParseError> {
        if self.tokens.len() > len {
            return Err(self.syntax(len, format!("unexpected `{}`", self.tokens[len].text)));
        }
        Ok(())
    }
}

/// Non-blank lines with comments stripped, split into tokens.
fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (at, ch) in content.char_indices().chain(std::iter::once((content.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(at),
                (true, Some(s)) => {
                    tokens.push(Token {
                        text: &content[s..at],
                        column: content[..s].chars().count() + 1,
                    });
                    start = None;
                }
                _ => {}
            }
        }
        (!tokens.is_empty()).then_some(Line { number: i + 1, tokens })
    })
}

fn is_atom(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses the structure format described in the module docs.
pub fn parse_ks(text: &str) -> Result<KripkeStructure, ParseError> {
    let mut lines = lines(text).peekable();
    let end_of_input = |what: &str| ParseError {
        line: text.lines().count().max(1),
        column: 1,
        kind: ParseErrorKind::Syntax(format!("unexpected end of input, expected {what}")),
    };

    let header = lines.next().ok_or_else(|| end_of_input("`states`"))?;
    if header.tokens[0].text != "states" {
        return Err(header.syntax(0, "expected `states <N>`"));
    }
    let num_states = header.number_at(1)?;
    header.expect_len(2)?;

    let mut labels: Vec<Option<Label>> = vec![None; num_states];
    for _ in 0..num_states {
        let line = lines.next().ok_or_else(|| end_of_input("`label`"))?;
        if line.tokens[0].text != "label" {
            return Err(line.syntax(0, "expected `label <id> <atom>*`"));
        }
        let id = line.state_at(1, num_states)?;
        if labels[id].is_some() {
            return Err(line.error(1, ParseErrorKind::DuplicateState(id)));
        }
        for (i, t) in line.tokens.iter().enumerate().skip(2) {
            if !is_atom(t.text) {
                return Err(line.syntax(i, format!("`{}` is not an atom", t.text)));
            }
        }
        labels[id] = Some(Label::new(line.tokens[2..].iter().map(|t| t.text)));
    }

    let header = lines.next().ok_or_else(|| end_of_input("`transitions`"))?;
    if header.tokens[0].text != "transitions" {
        return Err(header.syntax(0, "expected `transitions <M>`"));
    }
    let num_transitions = header.number_at(1)?;
    header.expect_len(2)?;

    let mut transitions = Vec::with_capacity(num_transitions);
    for _ in 0..num_transitions {
        let line = lines.next().ok_or_else(|| end_of_input("a transition"))?;
        let offset = usize::from(line.tokens[0].text == "trans");
        let src = line.state_at(offset, num_states)?;
        let dst = line.state_at(offset + 1, num_states)?;
        line.expect_len(offset + 2)?;
        transitions.push((src, dst));
    }
    if let Some(line) = lines.next() {
        return Err(line.syntax(0, "unexpected content after the last transition"));
    }
    let labels = labels.into_iter().map(|l| l.expect("every state was declared")).collect();
    Ok(KripkeStructure::new(labels, transitions).expect("transitions were range checked"))
}

/// Writes `k` in the structure format: states ascending, atoms sorted,
/// transitions ascending.
pub fn serialize_ks(k: &KripkeStructure) -> String {
    let mut out = format!("states {}\n", k.num_states());
    for s in k.states() {
        write!(out, "label {s}").unwrap();
        for atom in k.label(s).atoms() {
            write!(out, " {atom}").unwrap();
        }
        out.push('\n');
    }
    writeln!(out, "transitions {}", k.num_transitions()).unwrap();
    for (s, t) in k.transitions() {
        writeln!(out, "{s} {t}").unwrap();
    }
    out
}

/// Parses a relation over `num_states` states. Accepts `u v` pair lines,
/// `leq u v` lines and `block <i>: <states>` lines, the last relating all
/// listed states to each other. Duplicates are ignored.
pub fn parse_relation(text: &str, num_states: usize) -> Result<Relation, ParseError> {
    let mut r = Relation::empty(num_states);
    for line in lines(text) {
        match line.tokens[0].text {
            "block" => {
                let label = line.tokens.get(1).map(|t| t.text).unwrap_or("");
                if !label.ends_with(':') || label[..label.len() - 1].parse::<usize>().is_err() {
                    return Err(line.syntax(1, "expected `block <i>: <states>`"));
                }
                let members = (2..line.tokens.len())
                    .map(|i| line.state_at(i, num_states))
                    .collect::<Result<Vec<_>, _>>()?;
                for &x in &members {
                    for &y in &members {
                        r.insert(StateId(x), StateId(y));
                    }
                }
            }
            "leq" => {
                let x = line.state_at(1, num_states)?;
                let y = line.state_at(2, num_states)?;
                line.expect_len(3)?;
                r.insert(StateId(x), StateId(y));
            }
            _ => {
                let x = line.state_at(0, num_states)?;
                let y = line.state_at(1, num_states)?;
                line.expect_len(2)?;
                r.insert(StateId(x), StateId(y));
            }
        }
    }
    Ok(r)
}

/// One `u v` line per pair, lexicographically.
pub fn serialize_relation(r: &Relation) -> String {
    r.pairs().map(|(x, y)| format!("{x} {y}\n")).collect()
}

/// `block <i>: <states>` lines in canonical order.
pub fn serialize_partition(result: &SimulationResult) -> String {
    let mut out = String::new();
    for (i, block) in result.blocks().iter().enumerate() {
        write!(out, "block {i}:").unwrap();
        for s in block {
            write!(out, " {s}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// The partition followed by `leq u v` lines for the preorder. Unless
/// `full` is set, pairs inside one block, reflexive ones included, are
/// left out since the block lines already imply them.
pub fn serialize_result(result: &SimulationResult, full: bool) -> String {
    let mut out = serialize_partition(result);
    let n = result.num_states();
    for x in (0..n).map(StateId) {
        for y in (0..n).map(StateId) {
            if result.simulates(x, y) && (full || !result.equivalent(x, y)) {
                writeln!(out, "leq {x} {y}").unwrap();
            }
        }
    }
    out
}
