//! Turing machine files.
//!
//! ```text
//! format 1
//! tapes 1
//! states q0 qa qr
//! symbols 0 1 _
//! blank _
//! start q0
//! accept qa
//! transitions
//! q0 0 -> qa 0 S
//! q0 1 -> qr 1 S
//! ```
//!
//! A transition line is `STATE READ… -> STATE WRITE… MOVE…` with one read,
//! write and move (`L`, `R`, `S`) per tape. The alphabet must contain `0`
//! and `1`. An optional `input msb-first` line reverses the input.

use std::fmt::Write;

use crate::error::{ParseError, TmError};
use crate::turing::{InputOrder, Machine, Move, Transition};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum TmParseError {
    #[error(transparent)]
    Syntax(#[from] ParseError),
    #[error(transparent)]
    Invalid(#[from] TmError),
}

pub fn parse_tm(text: &str) -> Result<Machine, TmParseError> {
    let mut tapes = None;
    let mut states: Option<Vec<String>> = None;
    let mut symbols: Option<Vec<String>> = None;
    let mut blank = None;
    let mut start = None;
    let mut accept = None;
    let mut input_order = InputOrder::LsbFirst;
    let mut raw_transitions: Vec<(usize, Vec<String>)> = Vec::new();
    let mut in_transitions = false;
    let mut seen_format = false;

    for (li, raw) in text.lines().enumerate() {
        let line = li + 1;
        let t = raw.split('#').next().unwrap_or("").trim();
        if t.is_empty() {
            continue;
        }
        let words: Vec<String> = t.split_whitespace().map(str::to_string).collect();
        if in_transitions {
            raw_transitions.push((line, words));
            continue;
        }
        let key = words[0].as_str();
        let rest = &words[1..];
        let one = || -> Result<String, ParseError> {
            match rest {
                [v] => Ok(v.clone()),
                _ => Err(ParseError::new(line, 1, format!("`{key}` takes one value"))),
            }
        };
        match key {
            "format" => {
                if seen_format || one()? != "1" {
                    return Err(ParseError::new(line, 1, "unsupported format").into());
                }
                seen_format = true;
            }
            "tapes" => {
                let n: usize = one()?
                    .parse()
                    .map_err(|_| ParseError::new(line, 7, "expected a tape count"))?;
                tapes = Some(n);
            }
            "states" => states = Some(rest.to_vec()),
            "symbols" => symbols = Some(rest.to_vec()),
            "blank" => blank = Some(one()?),
            "start" => start = Some(one()?),
            "accept" => accept = Some(one()?),
            "input" => {
                input_order = match one()?.as_str() {
                    "lsb-first" => InputOrder::LsbFirst,
                    "msb-first" => InputOrder::MsbFirst,
                    _ => {
                        return Err(
                            ParseError::new(line, 7, "expected lsb-first or msb-first").into()
                        )
                    }
                }
            }
            "transitions" => in_transitions = true,
            other => return Err(ParseError::new(line, 1, format!("unknown key `{other}`")).into()),
        }
    }

    let missing = |what: &str| ParseError::new(1, 1, format!("missing `{what}`"));
    let tapes = tapes.ok_or_else(|| missing("tapes"))?;
    let states = states.ok_or_else(|| missing("states"))?;
    let symbols = symbols.ok_or_else(|| missing("symbols"))?;
    let state = |s: &str| {
        states
            .iter()
            .position(|x| x == s)
            .ok_or_else(|| TmError::UndeclaredState(s.to_string()))
    };
    let symbol = |s: &str| {
        symbols
            .iter()
            .position(|x| x == s)
            .ok_or_else(|| TmError::UndeclaredSymbol(s.to_string()))
    };
    let blank = symbol(&blank.ok_or_else(|| missing("blank"))?)?;
    let start = state(&start.ok_or_else(|| missing("start"))?)?;
    let accept = state(&accept.ok_or_else(|| missing("accept"))?)?;
    let zero = symbol("0")?;
    let one = symbol("1")?;

    let mut transitions = Vec::new();
    for (line, words) in raw_transitions {
        let arrow = words
            .iter()
            .position(|w| w == "->")
            .ok_or_else(|| ParseError::new(line, 1, "expected `->`"))?;
        let (lhs, rhs) = (&words[..arrow], &words[arrow + 1..]);
        if lhs.len() != 1 + tapes {
            return Err(TmError::TapeCountMismatch {
                tapes,
                found: lhs.len().saturating_sub(1),
            }
            .into());
        }
        if rhs.len() != 1 + 2 * tapes {
            return Err(TmError::TapeCountMismatch {
                tapes,
                found: rhs.len().saturating_sub(1) / 2,
            }
            .into());
        }
        let moves = rhs[1 + tapes..]
            .iter()
            .map(|m| match m.as_str() {
                "L" => Ok(Move::Left),
                "R" => Ok(Move::Right),
                "S" => Ok(Move::Stay),
                other => Err(ParseError::new(line, 1, format!("bad move `{other}`"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        transitions.push(Transition {
            from: state(&lhs[0])?,
            read: lhs[1..]
                .iter()
                .map(|s| symbol(s))
                .collect::<Result<_, _>>()?,
            to: state(&rhs[0])?,
            write: rhs[1..1 + tapes]
                .iter()
                .map(|s| symbol(s))
                .collect::<Result<_, _>>()?,
            moves,
        });
    }
    let m = Machine {
        tapes,
        states,
        symbols,
        start,
        accept,
        blank,
        zero,
        one,
        input_order,
        transitions,
    };
    m.validate()?;
    Ok(m)
}

pub fn print_tm(m: &Machine) -> String {
    let mut out = String::from("format 1\n");
    writeln!(out, "tapes {}", m.tapes).unwrap();
    writeln!(out, "states {}", m.states.join(" ")).unwrap();
    writeln!(out, "symbols {}", m.symbols.join(" ")).unwrap();
    writeln!(out, "blank {}", m.symbols[m.blank]).unwrap();
    writeln!(out, "start {}", m.states[m.start]).unwrap();
    writeln!(out, "accept {}", m.states[m.accept]).unwrap();
    if m.input_order == InputOrder::MsbFirst {
        out.push_str("input msb-first\n");
    }
    out.push_str("transitions\n");
    for t in &m.transitions {
        out.push_str(&m.states[t.from]);
        for a in &t.read {
            write!(out, " {}", m.symbols[*a]).unwrap();
        }
        write!(out, " -> {}", m.states[t.to]).unwrap();
        for a in &t.write {
            write!(out, " {}", m.symbols[*a]).unwrap();
        }
        for mv in &t.moves {
            write!(out, " {}", mv.letter()).unwrap();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const PARITY: &str = "format 1\ntapes 1\nstates q0 qa qr\nsymbols 0 1 _\nblank _\nstart q0\naccept qa\ntransitions\nq0 0 -> qa 0 S\nq0 1 -> qr 1 S\n";

    #[test]
    fn parity_parses() {
        let m = parse_tm(PARITY).unwrap();
        assert_eq!(m.tapes, 1);
        assert_eq!(m.states.len(), 3);
        assert_eq!(print_tm(&m), PARITY);
    }

    #[test]
    fn immediate_accept() {
        let m = parse_tm("tapes 1\nstates qa q1\nsymbols 0 1 _\nblank _\nstart qa\naccept qa\n")
            .unwrap();
        assert_eq!(m.start, m.accept);
    }

    #[test]
    fn moving_accept_is_rejected() {
        let e = parse_tm(&format!("{PARITY}qa 0 -> qa 0 R\n")).unwrap_err();
        assert!(matches!(
            e,
            TmParseError::Invalid(TmError::AcceptNotAbsorbing(..))
        ));
    }

    #[test]
    fn undeclared_symbol() {
        let e = parse_tm(&format!("{PARITY}q0 2 -> qa 0 S\n")).unwrap_err();
        assert_eq!(
            e,
            TmParseError::Invalid(TmError::UndeclaredSymbol("2".into()))
        );
    }
}
