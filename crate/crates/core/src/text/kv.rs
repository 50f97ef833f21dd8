//! Structured report text: a nested key/value tree.
//!
//! ```text
//! format 1
//! spectrum {
//!   sentence "two elements"
//!   point {
//!     n 2
//!     member yes
//!     @time_us 41
//!   }
//! }
//! ```
//!
//! Keys starting with `@` carry volatile data (timings) and are skipped by
//! [`KvTree::stable`].

use std::fmt::Write;

use crate::error::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KvValue {
    Scalar(String),
    Tree(KvTree),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KvTree {
    pub entries: Vec<(String, KvValue)>,
}

impl KvTree {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.entries
            .push((key.to_string(), KvValue::Scalar(value.to_string())));
        self
    }

    pub fn push_tree(&mut self, key: &str, tree: KvTree) -> &mut Self {
        self.entries.push((key.to_string(), KvValue::Tree(tree)));
        self
    }

    pub fn get(&self, key: &str) -> Option<&KvValue> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn scalar(&self, key: &str) -> Option<&str> {
        match self.get(key) {
            Some(KvValue::Scalar(s)) => Some(s),
            _ => None,
        }
    }

    /// Scalar entries in insertion order.
    pub fn scalars(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().filter_map(|(k, v)| match v {
            KvValue::Scalar(s) => Some((k.as_str(), s.as_str())),
            KvValue::Tree(_) => None,
        })
    }

    pub fn trees<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a KvTree> + 'a {
        self.entries.iter().filter_map(move |(k, v)| match v {
            KvValue::Tree(t) if k == key => Some(t),
            _ => None,
        })
    }

    /// Copy without volatile (`@`) entries.
    pub fn stable(&self) -> KvTree {
        KvTree {
            entries: self
                .entries
                .iter()
                .filter(|(k, _)| !k.starts_with('@'))
                .map(|(k, v)| {
                    let v = match v {
                        KvValue::Tree(t) => KvValue::Tree(t.stable()),
                        s => s.clone(),
                    };
                    (k.clone(), v)
                })
                .collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("format 1\n");
        write_tree(self, 0, &mut out);
        out
    }

    pub fn parse(text: &str) -> Result<KvTree, ParseError> {
        let mut stack: Vec<(String, KvTree)> = vec![(String::new(), KvTree::new())];
        let mut seen_header = false;
        for (li, raw) in text.lines().enumerate() {
            let line = li + 1;
            let t = raw.trim();
            if t.is_empty() {
                continue;
            }
            if !seen_header {
                if t != "format 1" {
                    return Err(ParseError::new(line, 1, "expected `format 1`"));
                }
                seen_header = true;
                continue;
            }
            if t == "}" {
                if stack.len() < 2 {
                    return Err(ParseError::new(line, 1, "unbalanced `}`"));
                }
                let (k, tree) = stack.pop().unwrap();
                stack.last_mut().unwrap().1.push_tree(&k, tree);
                continue;
            }
            let (key, rest) = match t.split_once(' ') {
                Some((k, r)) => (k, r.trim()),
                None => return Err(ParseError::new(line, 1, "expected `key value` or `key {`")),
            };
            if rest == "{" {
                stack.push((key.to_string(), KvTree::new()));
            } else {
                let v = unquote(rest)
                    .ok_or_else(|| ParseError::new(line, key.len() + 2, "bad value"))?;
                stack.last_mut().unwrap().1.push(key, v);
            }
        }
        if stack.len() != 1 {
            return Err(ParseError::new(
                text.lines().count().max(1),
                1,
                "unclosed `{`",
            ));
        }
        Ok(stack.pop().unwrap().1)
    }
}

fn is_bare(s: &str) -> bool {
    !s.is_empty()
        && s != "{"
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || "_-+./:<>=".contains(c))
}

fn quote(s: &str) -> String {
    if is_bare(s) {
        return s.to_string();
    }
    let mut out = String::from("\"");
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn unquote(s: &str) -> Option<String> {
    if let Some(inner) = s.strip_prefix('"') {
        let inner = inner.strip_suffix('"')?;
        let mut out = String::new();
        let mut chars = inner.chars();
        while let Some(c) = chars.next() {
            if c == '\\' {
                match chars.next()? {
                    'n' => out.push('\n'),
                    other => out.push(other),
                }
            } else {
                out.push(c);
            }
        }
        Some(out)
    } else if is_bare(s) {
        Some(s.to_string())
    } else {
        None
    }
}

fn write_tree(t: &KvTree, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    for (k, v) in &t.entries {
        match v {
            KvValue::Scalar(s) => writeln!(out, "{pad}{k} {}", quote(s)).unwrap(),
            KvValue::Tree(sub) => {
                writeln!(out, "{pad}{k} {{").unwrap();
                write_tree(sub, depth + 1, out);
                writeln!(out, "{pad}}}").unwrap();
            }
        }
    }
}
