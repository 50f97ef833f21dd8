//! Structure files.
//!
//! ```text
//! format 1
//! size 2
//! E: 0 1
//! A:
//! ```
//!
//! One fact per line; relations not mentioned are empty.

use std::fmt::Write;

use crate::error::ParseError;
use crate::formula::{RelName, Vocabulary};
use crate::structure::{Element, FiniteStructure};

pub fn parse_structure(text: &str, vocab: &Vocabulary) -> Result<FiniteStructure, ParseError> {
    let mut size: Option<usize> = None;
    let mut structure: Option<FiniteStructure> = None;
    let mut seen_format = false;
    for (li, raw) in text.lines().enumerate() {
        let line = li + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("format") {
            if seen_format || size.is_some() || rest.trim() != "1" {
                return Err(ParseError::new(
                    line,
                    1,
                    "unsupported or misplaced format line",
                ));
            }
            seen_format = true;
            continue;
        }
        if let Some(rest) = content.strip_prefix("size") {
            if size.is_some() {
                return Err(ParseError::new(line, 1, "duplicate size line"));
            }
            let n: usize = rest
                .trim()
                .parse()
                .map_err(|_| ParseError::new(line, 6, "expected a positive integer size"))?;
            let s = FiniteStructure::new(vocab.clone(), n)
                .map_err(|e| ParseError::new(line, 1, e.to_string()))?;
            size = Some(n);
            structure = Some(s);
            continue;
        }
        let Some(s) = structure.as_mut() else {
            return Err(ParseError::new(line, 1, "fact before `size` line"));
        };
        let (name, tuple) = content
            .split_once(':')
            .ok_or_else(|| ParseError::new(line, 1, "expected `REL: e1 e2 ...`"))?;
        let name = name.trim();
        let rel = RelName::new(name);
        let Some(arity) = vocab.arity(&rel) else {
            return Err(ParseError::new(
                line,
                1,
                format!("undeclared relation `{name}`"),
            ));
        };
        let mut elems: Vec<Element> = Vec::new();
        for tok in tuple.split_whitespace() {
            let e: u64 = tok
                .parse()
                .map_err(|_| ParseError::new(line, 1, format!("bad element `{tok}`")))?;
            if e as usize >= s.size() {
                return Err(ParseError::new(
                    line,
                    1,
                    format!("element {e} out of range for size {}", s.size()),
                ));
            }
            elems.push(e as Element);
        }
        if elems.len() != arity {
            return Err(ParseError::new(
                line,
                1,
                format!(
                    "relation `{name}` has arity {arity}, got {} elements",
                    elems.len()
                ),
            ));
        }
        s.set(&rel, &elems, true)
            .map_err(|e| ParseError::new(line, 1, e.to_string()))?;
    }
    structure.ok_or_else(|| ParseError::new(1, 1, "missing `size` line"))
}

pub fn print_structure(s: &FiniteStructure) -> String {
    let mut out = String::from("format 1\n");
    writeln!(out, "size {}", s.size()).unwrap();
    for (name, _) in s.vocabulary().iter() {
        for t in s.tuples(name).expect("own vocabulary") {
            out.push_str(name.as_str());
            out.push(':');
            for e in t {
                write!(out, " {e}").unwrap();
            }
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn voc() -> Vocabulary {
        Vocabulary::from_pairs([("E", 2), ("P", 1)]).unwrap()
    }

    #[test]
    fn parses_examples() {
        let s = parse_structure("size 2\nE: 0 1", &voc()).unwrap();
        assert_eq!(s.size(), 2);
        assert_eq!(s.tuples(&RelName::new("E")).unwrap(), vec![vec![0, 1]]);

        let s = parse_structure("size 1", &voc()).unwrap();
        assert_eq!(s.fact_count(), 0);
    }

    #[test]
    fn rejects_out_of_range_and_arity() {
        let e = parse_structure("size 2\nE: 0 5", &voc()).unwrap_err();
        assert!(e.message.contains("out of range"));
        let e = parse_structure("size 2\nE: 0", &voc()).unwrap_err();
        assert!(e.message.contains("arity"));
    }

    #[test]
    fn roundtrip() {
        let s = parse_structure("format 1\nsize 3\nE: 2 1\nE: 0 0\nP: 1\n", &voc()).unwrap();
        assert_eq!(parse_structure(&print_structure(&s), &voc()).unwrap(), s);
    }
}
