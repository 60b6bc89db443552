//! Lexical layer of the scenario format: comments, sections and positioned
//! tokens. Interpretation of the keywords lives in the parent module.
//!
//! ```text
//! # comment
//! meta
//! id P1
//! complex Dbar
//! edge a1 Q1 Q2
//! ```
//!
//! A line whose first word is a section keyword opens a new section; every
//! other non-blank line belongs to the section above it.

use std::str::FromStr;

use num_bigint::BigInt;

use super::ScenarioError;
use crate::intlin::IntMatrix;

pub(crate) const SECTION_KEYWORDS: [&str; 5] = ["meta", "complex", "map", "torus", "expected"];

#[derive(Clone, Copy, Debug)]
pub(crate) struct Token<'a> {
    pub text: &'a str,
    pub line: usize,
    pub column: usize,
}

impl<'a> Token<'a> {
    pub fn error(&self, msg: impl Into<String>) -> ScenarioError {
        ScenarioError::Parse { line: self.line, column: self.column, message: msg.into() }
    }

    pub fn parse<T: FromStr>(&self, what: &str) -> Result<T, ScenarioError> {
        self.text.parse().map_err(|_| self.error(format!("expected {what}, found {:?}", self.text)))
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Line<'a> {
    pub number: usize,
    pub tokens: Vec<Token<'a>>,
}

impl<'a> Line<'a> {
    pub fn keyword(&self) -> &Token<'a> {
        &self.tokens[0]
    }

    pub fn args(&self) -> &[Token<'a>] {
        &self.tokens[1..]
    }

    /// Position just past the last token, for "missing argument" errors.
    fn end(&self) -> (usize, usize) {
        let last = self.tokens.last().expect("lines are never empty");
        (self.number, last.column + last.text.chars().count())
    }

    pub fn missing(&self, what: &str) -> ScenarioError {
        let (line, column) = self.end();
        ScenarioError::Parse { line, column, message: format!("missing {what}") }
    }

    /// Exactly `n` arguments.
    pub fn expect_args(&self, n: usize) -> Result<&[Token<'a>], ScenarioError> {
        let args = self.args();
        match args.len().cmp(&n) {
            std::cmp::Ordering::Equal => Ok(args),
            std::cmp::Ordering::Less => Err(self.missing(&format!("argument (expected {n})"))),
            std::cmp::Ordering::Greater => Err(args[n].error(format!("unexpected argument (expected {n})"))),
        }
    }

    pub fn single(&self) -> Result<&Token<'a>, ScenarioError> {
        Ok(&self.expect_args(1)?[0])
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Section<'a> {
    pub header: Line<'a>,
    pub lines: Vec<Line<'a>>,
}

impl<'a> Section<'a> {
    pub fn name(&self) -> &'a str {
        self.header.keyword().text
    }
}

fn tokenize(number: usize, text: &str) -> Line<'_> {
    let content = text.split('#').next().unwrap_or("");
    let mut tokens = Vec::new();
    let mut start = None;
    for (col, (i, ch)) in content.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((i, col + 1)),
            (true, Some((s, c))) => {
                tokens.push(Token { text: &content[s..i], line: number, column: c });
                start = None;
            }
            _ => {}
        }
    }
    if let Some((s, c)) = start {
        tokens.push(Token { text: &content[s..], line: number, column: c });
    }
    Line { number, tokens }
}

/// Splits a document into sections.
pub(crate) fn sections(text: &str) -> Result<Vec<Section<'_>>, ScenarioError> {
    let mut out: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = tokenize(i + 1, raw);
        if line.tokens.is_empty() {
            continue;
        }
        if SECTION_KEYWORDS.contains(&line.keyword().text) {
            out.push(Section { header: line, lines: Vec::new() });
        } else if let Some(section) = out.last_mut() {
            section.lines.push(line);
        } else {
            return Err(line.keyword().error("expected a section header"));
        }
    }
    Ok(out)
}

/// Integer rows separated by `;`, as in `1 0 ; 0 3`. Every row must have the
/// same length.
pub(crate) fn matrix(line: &Line<'_>, tokens: &[Token<'_>]) -> Result<IntMatrix, ScenarioError> {
    let mut rows: Vec<Vec<BigInt>> = vec![Vec::new()];
    for t in tokens {
        let mut pieces = t.text.split(';').peekable();
        let mut offset = 0;
        while let Some(piece) = pieces.next() {
            if !piece.is_empty() {
                let at = Token { text: piece, line: t.line, column: t.column + offset };
                rows.last_mut().expect("rows is never empty").push(at.parse("an integer")?);
            }
            offset += piece.chars().count() + 1;
            if pieces.peek().is_some() {
                rows.push(Vec::new());
            }
        }
    }
    if rows.last().is_some_and(Vec::is_empty) && rows.len() > 1 {
        rows.pop();
    }
    let cols = rows[0].len();
    if cols == 0 {
        return Err(line.missing("matrix entries"));
    }
    if let Some(r) = rows.iter().position(|r| r.len() != cols) {
        let first = tokens.first().unwrap_or(line.keyword());
        return Err(first.error(format!("row {} has {} entries, expected {cols}", r + 1, rows[r].len())));
    }
    Ok(IntMatrix::from_big_rows(rows, cols))
}

/// A row of integers.
pub(crate) fn vector(line: &Line<'_>, tokens: &[Token<'_>]) -> Result<Vec<BigInt>, ScenarioError> {
    if tokens.is_empty() {
        return Err(line.missing("vector entries"));
    }
    tokens.iter().map(|t| t.parse("an integer")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_and_comments() {
        let s = sections("# header\nmeta\n  id P1 # trailing\n\ncomplex D\nvertices Q\n").unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].lines[0].tokens.len(), 2);
        assert_eq!(s[0].lines[0].tokens[1].column, 6);
        assert_eq!(s[1].header.args()[0].text, "D");
    }

    #[test]
    fn content_before_a_section_is_rejected() {
        let err = sections("id P1\nmeta\n").unwrap_err();
        assert_eq!(err, ScenarioError::Parse { line: 1, column: 1, message: "expected a section header".into() });
    }

    #[test]
    fn matrices_parse_with_flexible_spacing() {
        let line = tokenize(1, "isogeny 1 2; -2 1");
        assert_eq!(matrix(&line, line.args()).unwrap(), IntMatrix::from_rows(&[[1, 2], [-2, 1]]));
        let line = tokenize(1, "isogeny 1 2 ; -2 1 ;");
        assert_eq!(matrix(&line, line.args()).unwrap(), IntMatrix::from_rows(&[[1, 2], [-2, 1]]));
    }

    #[test]
    fn ragged_and_bad_matrices_report_positions() {
        let line = tokenize(4, "isogeny 1 2; x 1");
        assert_eq!(
            matrix(&line, line.args()),
            Err(ScenarioError::Parse { line: 4, column: 14, message: "expected an integer, found \"x\"".into() })
        );
        let line = tokenize(4, "isogeny 1 2; 1");
        assert!(matches!(matrix(&line, line.args()), Err(ScenarioError::Parse { .. })));
    }
}
