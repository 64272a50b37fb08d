//! Code files.
//!
//! The canonical text form is whitespace separated:
//!
//! ```text
//! # comment lines start with '#'
//! q n M
//! s_1 s_2 ... s_n      (M rows, symbols in [0, q))
//! ```
//!
//! The structured form is a JSON document with the same fields plus optional
//! metadata and, when a run produced one, a violation or certificate block.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::attack::Certificate;
use crate::error::{Error, Result};
use crate::model::{Code, Symbol, Word};
use crate::verifier::Violation;

pub const STRUCTURED_FORMAT_TAG: &str = "listdec-code/1";

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub notes: BTreeMap<String, String>,
}

/// Structured (JSON) variant of the code file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeDocument {
    pub format: String,
    pub q: u32,
    pub n: usize,
    pub words: Vec<Vec<Symbol>>,
    #[serde(default)]
    pub metadata: Metadata,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violation: Option<Violation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

impl CodeDocument {
    pub fn new(code: &Code, metadata: Metadata) -> Self {
        CodeDocument {
            format: STRUCTURED_FORMAT_TAG.to_string(),
            q: code.q(),
            n: code.n(),
            words: code.words().iter().map(|w| w.symbols().to_vec()).collect(),
            metadata,
            violation: None,
            certificate: None,
        }
    }

    pub fn code(&self) -> Result<Code> {
        Code::new(self.q, self.n, self.words.iter().cloned().map(Word::new).collect())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: CodeDocument =
            serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })?;
        if doc.format != STRUCTURED_FORMAT_TAG {
            return Err(Error::Parse { line: 1, message: format!("unknown format tag '{}'", doc.format) });
        }
        Ok(doc)
    }
}

/// Renders a code in the canonical text form.
pub fn to_text(code: &Code) -> String {
    let mut out = format!("{} {} {}\n", code.q(), code.n(), code.len());
    for w in code.words() {
        let row: Vec<String> = w.symbols().iter().map(|s| s.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Parses the canonical text form. Errors carry the 1-based line number.
pub fn parse_text(text: &str) -> Result<Code> {
    let err = |line: usize, message: String| Error::Parse { line, message };
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or_else(|| err(1, "missing header 'q n M'".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(err(hline, format!("header must have 3 fields 'q n M', found {}", fields.len())));
    }
    let parse_field = |s: &str, name: &str| -> Result<usize> {
        s.parse::<usize>().map_err(|_| err(hline, format!("header field {name} = '{s}' is not an integer")))
    };
    let q = parse_field(fields[0], "q")?;
    let n = parse_field(fields[1], "n")?;
    let m = parse_field(fields[2], "M")?;
    if q < 2 || q > Symbol::MAX as usize {
        return Err(err(hline, format!("alphabet size q = {q} out of range")));
    }
    if n == 0 {
        return Err(err(hline, "block length n must be positive".into()));
    }

    let mut words = Vec::with_capacity(m);
    let mut first_line = std::collections::HashMap::with_capacity(m);
    for (lineno, line) in lines {
        if words.len() == m {
            return Err(err(lineno, format!("more than M = {m} rows")));
        }
        let symbols = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<Symbol>().map_err(|_| err(lineno, format!("'{tok}' is not a symbol"))).and_then(|s| {
                    if (s as usize) < q {
                        Ok(s)
                    } else {
                        Err(err(lineno, format!("symbol {s} >= q = {q}")))
                    }
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if symbols.len() != n {
            return Err(err(lineno, format!("row has {} symbols, expected n = {n}", symbols.len())));
        }
        let word = Word::new(symbols);
        if let Some(prev) = first_line.insert(word.clone(), lineno) {
            return Err(err(lineno, format!("duplicate word (first seen on line {prev})")));
        }
        words.push(word);
    }
    if words.len() != m {
        return Err(err(text.lines().count().max(1), format!("expected M = {m} rows, found {}", words.len())));
    }
    Code::new(q as u32, n, words)
}

fn looks_structured(path: &Path, text: &str) -> bool {
    path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{')
}

/// Loads either file form, detected by extension or leading `{`.
pub fn load_document(path: impl AsRef<Path>) -> Result<CodeDocument> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    if looks_structured(path, &text) {
        CodeDocument::from_json(&text)
    } else {
        Ok(CodeDocument::new(&parse_text(&text)?, Metadata::default()))
    }
}

pub fn load_code(path: impl AsRef<Path>) -> Result<Code> {
    load_document(path)?.code()
}

/// Saves in structured form when the path ends in `.json`, text otherwise.
pub fn save_code(code: &Code, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if path.extension().is_some_and(|e| e == "json") {
        save_document(&CodeDocument::new(code, Metadata::default()), path)
    } else {
        fs::write(path, to_text(code))?;
        Ok(())
    }
}

pub fn save_document(doc: &CodeDocument, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, doc.to_json()?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_repetition_code() {
        let c = parse_text("# repetition\n2 3 2\n0 0 0\n1 1 1\n").unwrap();
        assert_eq!(c.q(), 2);
        assert_eq!(c.n(), 3);
        assert_eq!(c.words(), &["000".parse().unwrap(), "111".parse::<Word>().unwrap()]);
    }

    fn parse_line(text: &str) -> usize {
        match parse_text(text) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_duplicates_with_line() {
        assert_eq!(parse_line("2 3 2\n0 0 0\n0 0 0\n"), 3);
    }

    #[test]
    fn rejects_out_of_alphabet_symbol() {
        assert_eq!(parse_line("3 2 1\n# c\n0 5\n"), 3);
    }

    #[test]
    fn rejects_ragged_rows_and_bad_headers() {
        assert_eq!(parse_line("2 3 2\n0 0 0\n1 1\n"), 3);
        assert_eq!(parse_line("2 3\n"), 1);
        assert_eq!(parse_line("2 x 1\n"), 1);
        assert_eq!(parse_line("2 2 1\n0 0\n1 1\n"), 3);
        assert!(matches!(parse_text("2 2 2\n0 0\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_text(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn structured_round_trip_keeps_metadata() {
        let c = parse_text("4 2 2\n0 3\n2 1\n").unwrap();
        let meta = Metadata { seed: Some(7), construction: Some("random".into()), ..Default::default() };
        let doc = CodeDocument::new(&c, meta.clone());
        let back = CodeDocument::from_json(&doc.to_json().unwrap()).unwrap();
        assert_eq!(back.metadata, meta);
        assert_eq!(back.code().unwrap(), c);
    }

    #[test]
    fn structured_rejects_unknown_tag() {
        let text = r#"{"format":"other","q":2,"n":1,"words":[[0]]}"#;
        assert!(matches!(CodeDocument::from_json(text), Err(Error::Parse { .. })));
    }
}
