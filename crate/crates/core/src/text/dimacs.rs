//! DIMACS CNF export.

use std::fmt::Write;

use crate::error::ParseError;
use crate::ground::{Cnf, GroundFormula};

/// `p cnf` header, one `c i = ATOM` line per ground atom, then clauses.
pub fn print_dimacs(cnf: &Cnf, labels: &[String]) -> String {
    let mut out = String::new();
    writeln!(out, "p cnf {} {}", cnf.num_vars, cnf.clauses.len()).unwrap();
    for (i, l) in labels.iter().enumerate() {
        writeln!(out, "c {} = {l}", i + 1).unwrap();
    }
    for c in &cnf.clauses {
        for l in c {
            write!(out, "{l} ").unwrap();
        }
        out.push_str("0\n");
    }
    out
}

pub fn atom_labels(g: &GroundFormula) -> Vec<String> {
    g.atoms.iter().map(|a| a.to_string()).collect()
}

/// Reads back clauses; comments are skipped.
pub fn parse_dimacs(text: &str) -> Result<Cnf, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (li, raw) in text.lines().enumerate() {
        let t = raw.trim();
        if t.is_empty() || t.starts_with('c') {
            continue;
        }
        if let Some(rest) = t.strip_prefix("p cnf") {
            let nums: Vec<usize> = rest
                .split_whitespace()
                .map(|x| x.parse())
                .collect::<Result<_, _>>()
                .map_err(|_| ParseError::new(li + 1, 1, "bad header"))?;
            if nums.len() != 2 || header.is_some() {
                return Err(ParseError::new(li + 1, 1, "bad header"));
            }
            header = Some((nums[0], nums[1]));
            continue;
        }
        for tok in t.split_whitespace() {
            let v: i32 = tok
                .parse()
                .map_err(|_| ParseError::new(li + 1, 1, format!("bad literal `{tok}`")))?;
            if v == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(v);
            }
        }
    }
    let (num_vars, count) = header.ok_or_else(|| ParseError::new(1, 1, "missing header"))?;
    if !current.is_empty() || clauses.len() != count {
        return Err(ParseError::new(1, 1, "clause count does not match header"));
    }
    Ok(Cnf {
        num_vars,
        atoms: num_vars,
        clauses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::RelName;
    use crate::ground::{lit, to_cnf, GroundAtom};

    #[test]
    fn empty_and_single() {
        let g = GroundFormula::new(vec![]);
        assert_eq!(print_dimacs(&to_cnf(&g), &[]), "p cnf 0 0\n");

        let mut g = GroundFormula::new(vec![GroundAtom {
            relation: RelName::new("E"),
            tuple: vec![0, 1],
        }]);
        g.push_conjunct(&[[lit(0, false)]]);
        let text = print_dimacs(&to_cnf(&g), &atom_labels(&g));
        assert_eq!(text, "p cnf 1 1\nc 1 = E(0,1)\n1 0\n");
        assert_eq!(parse_dimacs(&text).unwrap().clauses, vec![vec![1]]);
    }
}
