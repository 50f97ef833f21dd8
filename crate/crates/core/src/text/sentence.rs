//! Sentence documents: a `rel NAME ARITY;` declaration block followed by one
//! formula.
//!
//! ```text
//! format 1
//! rel E 2;
//! forall x exists y E(x,y)
//! ```
//!
//! Precedence, loosest first: `<->`, `->` (right associative), `|`, `&`,
//! then the prefix forms `!`, `forall v`, `exists v`. A quantifier scopes
//! over the single prefix-level formula that follows it.

use std::fmt::Write;

use crate::error::ParseError;
use crate::formula::{Formula, RelName, Var, Vocabulary};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SentenceDocument {
    pub vocabulary: Vocabulary,
    pub formula: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Num(u64),
    LParen,
    RParen,
    Comma,
    Semi,
    Colon,
    Amp,
    Bar,
    Bang,
    Arrow,
    DArrow,
    Eq,
}

#[derive(Clone, Debug)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub(crate) fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    for (li, raw) in text.lines().enumerate() {
        let line = li + 1;
        let content = raw.split('#').next().unwrap_or("");
        let chars: Vec<char> = content.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            let push = |tok: Tok, out: &mut Vec<Spanned>| out.push(Spanned { tok, line, col });
            match c {
                ' ' | '\t' | '\r' => {
                    i += 1;
                }
                '(' => {
                    push(Tok::LParen, &mut out);
                    i += 1;
                }
                ')' => {
                    push(Tok::RParen, &mut out);
                    i += 1;
                }
                ',' => {
                    push(Tok::Comma, &mut out);
                    i += 1;
                }
                ';' => {
                    push(Tok::Semi, &mut out);
                    i += 1;
                }
                ':' => {
                    push(Tok::Colon, &mut out);
                    i += 1;
                }
                '&' => {
                    push(Tok::Amp, &mut out);
                    i += 1;
                }
                '|' => {
                    push(Tok::Bar, &mut out);
                    i += 1;
                }
                '!' => {
                    push(Tok::Bang, &mut out);
                    i += 1;
                }
                '=' => {
                    push(Tok::Eq, &mut out);
                    i += 1;
                }
                '-' if chars.get(i + 1) == Some(&'>') => {
                    push(Tok::Arrow, &mut out);
                    i += 2;
                }
                '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                    push(Tok::DArrow, &mut out);
                    i += 3;
                }
                c if c.is_ascii_digit() => {
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let s: String = chars[start..i].iter().collect();
                    let n = s.parse().map_err(|_| {
                        ParseError::new(line, col, format!("number `{s}` too large"))
                    })?;
                    push(Tok::Num(n), &mut out);
                }
                c if c.is_alphabetic() || c == '_' => {
                    let start = i;
                    while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                        i += 1;
                    }
                    push(Tok::Ident(chars[start..i].iter().collect()), &mut out);
                }
                other => {
                    return Err(ParseError::new(
                        line,
                        col,
                        format!("unexpected character `{other}`"),
                    ))
                }
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    vocab: &'a Vocabulary,
    end: (usize, usize),
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn peek_at(&self, off: usize) -> Option<&Tok> {
        self.toks.get(self.pos + off).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|s| (s.line, s.col))
            .unwrap_or(self.end)
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        let (l, c) = self.here();
        ParseError::new(l, c, msg)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if !is_keyword(s) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.imp()?;
        while self.peek() == Some(&Tok::DArrow) {
            self.pos += 1;
            let rhs = self.imp()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let rhs = self.imp()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Tok::Bar) {
            self.pos += 1;
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::Amp) {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Bang) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Ident(k)) if k == "forall" || k == "exists" => {
                let universal = k == "forall";
                self.pos += 1;
                let v = self.ident("variable after quantifier")?;
                let body = self.unary()?;
                Ok(if universal {
                    Formula::forall(v.as_str(), body)
                } else {
                    Formula::exists(v.as_str(), body)
                })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                let open = self.here();
                self.pos += 1;
                if self.pos >= self.toks.len() {
                    return Err(ParseError::new(open.0, open.1, "unclosed `(`"));
                }
                let inner = self.iff()?;
                if self.peek() != Some(&Tok::RParen) {
                    if self.pos >= self.toks.len() {
                        return Err(ParseError::new(open.0, open.1, "unclosed `(`"));
                    }
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(Tok::Ident(name)) if !is_keyword(&name) => {
                let at = self.here();
                match self.peek_at(1) {
                    Some(Tok::LParen) => {
                        self.pos += 2;
                        let mut args = Vec::new();
                        if self.peek() != Some(&Tok::RParen) {
                            loop {
                                args.push(Var::new(&self.ident("variable")?));
                                if self.peek() == Some(&Tok::Comma) {
                                    self.pos += 1;
                                } else {
                                    break;
                                }
                            }
                        }
                        self.expect(Tok::RParen, "`)`")?;
                        self.relation_atom(name, args, at)
                    }
                    Some(Tok::Eq) => {
                        self.pos += 2;
                        let rhs = self.ident("variable after `=`")?;
                        Ok(Formula::eq(name.as_str(), rhs.as_str()))
                    }
                    _ => {
                        self.pos += 1;
                        self.relation_atom(name, Vec::new(), at)
                    }
                }
            }
            None => Err(self.err("unexpected end of input")),
            Some(_) => Err(self.err("expected a formula")),
        }
    }

    fn relation_atom(
        &self,
        name: String,
        args: Vec<Var>,
        at: (usize, usize),
    ) -> Result<Formula, ParseError> {
        let rel = RelName::new(&name);
        match self.vocab.arity(&rel) {
            None => Err(ParseError::new(
                at.0,
                at.1,
                format!("undeclared relation `{name}`"),
            )),
            Some(a) if a != args.len() => Err(ParseError::new(
                at.0,
                at.1,
                format!(
                    "relation `{name}` has arity {a}, given {} arguments",
                    args.len()
                ),
            )),
            Some(_) => Ok(Formula::Atom(rel, args)),
        }
    }
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "forall" | "exists" | "rel" | "format")
}

fn end_position(text: &str) -> (usize, usize) {
    let lines: Vec<&str> = text.lines().collect();
    match lines.last() {
        Some(l) => (lines.len(), l.chars().count() + 1),
        None => (1, 1),
    }
}

/// Skips an optional `format 1` header. Other versions are rejected.
pub(crate) fn skip_format(toks: &[Spanned], pos: &mut usize) -> Result<(), ParseError> {
    if let Some(Spanned {
        tok: Tok::Ident(k),
        line,
        col,
    }) = toks.get(*pos)
    {
        if k == "format" {
            match toks.get(*pos + 1) {
                Some(Spanned {
                    tok: Tok::Num(1), ..
                }) => {
                    *pos += 2;
                    Ok(())
                }
                _ => Err(ParseError::new(*line, *col, "unsupported format version")),
            }
        } else {
            Ok(())
        }
    } else {
        Ok(())
    }
}

pub fn parse_sentence(text: &str) -> Result<SentenceDocument, ParseError> {
    let toks = lex(text)?;
    let mut pos = 0;
    skip_format(&toks, &mut pos)?;
    let mut vocab = Vocabulary::new();
    while let Some(Spanned {
        tok: Tok::Ident(k),
        line,
        col,
    }) = toks.get(pos)
    {
        if k != "rel" {
            break;
        }
        let (line, col) = (*line, *col);
        let name = match toks.get(pos + 1) {
            Some(Spanned {
                tok: Tok::Ident(n), ..
            }) if !is_keyword(n) => n.clone(),
            _ => {
                return Err(ParseError::new(
                    line,
                    col,
                    "expected relation name after `rel`",
                ))
            }
        };
        let arity = match toks.get(pos + 2) {
            Some(Spanned {
                tok: Tok::Num(a), ..
            }) => *a as usize,
            _ => return Err(ParseError::new(line, col, "expected arity")),
        };
        match toks.get(pos + 3) {
            Some(Spanned { tok: Tok::Semi, .. }) => {}
            _ => return Err(ParseError::new(line, col, "expected `;` after declaration")),
        }
        vocab
            .add(RelName::new(&name), arity)
            .map_err(|e| ParseError::new(line, col, e.to_string()))?;
        pos += 4;
    }
    let mut p = Parser {
        toks,
        pos,
        vocab: &vocab,
        end: end_position(text),
    };
    let formula = p.iff()?;
    if p.pos < p.toks.len() {
        return Err(p.err("trailing input after formula"));
    }
    Ok(SentenceDocument {
        vocabulary: vocab,
        formula,
    })
}

/// Parses a bare formula against a known vocabulary.
pub fn parse_formula(text: &str, vocab: &Vocabulary) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        vocab,
        end: end_position(text),
    };
    let f = p.iff()?;
    if p.pos < p.toks.len() {
        return Err(p.err("trailing input after formula"));
    }
    Ok(f)
}

const IFF: u8 = 0;
const IMP: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const PREFIX: u8 = 4;

pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, 0, &mut out);
    out
}

type Writer<'a> = Box<dyn Fn(&mut String) + 'a>;

fn write_formula(f: &Formula, min: u8, out: &mut String) {
    let (level, body): (u8, Writer<'_>) = match f {
        Formula::Eq(a, b) => (
            PREFIX,
            Box::new(move |o: &mut String| write!(o, "{a} = {b}").unwrap()),
        ),
        Formula::Atom(r, args) => (
            PREFIX,
            Box::new(move |o: &mut String| {
                if args.is_empty() {
                    o.push_str(r.as_str());
                } else {
                    write!(o, "{r}(").unwrap();
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            o.push(',');
                        }
                        o.push_str(a.as_str());
                    }
                    o.push(')');
                }
            }),
        ),
        Formula::Not(a) => (
            PREFIX,
            Box::new(move |o: &mut String| {
                o.push('!');
                write_formula(a, PREFIX, o);
            }),
        ),
        Formula::Forall(v, a) | Formula::Exists(v, a) => {
            let kw = if matches!(f, Formula::Forall(..)) {
                "forall"
            } else {
                "exists"
            };
            (
                PREFIX,
                Box::new(move |o: &mut String| {
                    write!(o, "{kw} {v} ").unwrap();
                    write_formula(a, PREFIX, o);
                }),
            )
        }
        Formula::And(a, b) => (AND, binary(a, b, " & ", AND, AND + 1)),
        Formula::Or(a, b) => (OR, binary(a, b, " | ", OR, OR + 1)),
        Formula::Implies(a, b) => (IMP, binary(a, b, " -> ", IMP + 1, IMP)),
        Formula::Iff(a, b) => (IFF, binary(a, b, " <-> ", IFF, IFF + 1)),
    };
    if level < min {
        out.push('(');
        body(out);
        out.push(')');
    } else {
        body(out);
    }
}

fn binary<'a>(
    a: &'a Formula,
    b: &'a Formula,
    op: &'static str,
    lmin: u8,
    rmin: u8,
) -> Box<dyn Fn(&mut String) + 'a> {
    Box::new(move |o: &mut String| {
        write_formula(a, lmin, o);
        o.push_str(op);
        write_formula(b, rmin, o);
    })
}

pub fn print_sentence(doc: &SentenceDocument) -> String {
    let mut out = String::from("format 1\n");
    for (name, arity) in doc.vocabulary.iter() {
        writeln!(out, "rel {name} {arity};").unwrap();
    }
    out.push_str(&print_formula(&doc.formula));
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_quantifier_prefix() {
        let doc = parse_sentence("rel E 2; forall x exists y E(x,y)").unwrap();
        assert_eq!(
            doc.formula,
            Formula::forall("x", Formula::exists("y", Formula::atom("E", ["x", "y"])))
        );
        assert_eq!(doc.vocabulary.arity(&RelName::new("E")), Some(2));
    }

    #[test]
    fn parses_tautology() {
        let doc = parse_sentence("rel P 1; forall x (P(x) | !P(x))").unwrap();
        let p = Formula::atom("P", ["x"]);
        assert_eq!(
            doc.formula,
            Formula::forall("x", Formula::or(p.clone(), Formula::not(p)))
        );
    }

    #[test]
    fn unclosed_paren_reports_its_position() {
        let err = parse_sentence("forall x (").unwrap_err();
        assert_eq!((err.line, err.column), (1, 10));
    }

    #[test]
    fn undeclared_and_arity_errors() {
        assert!(parse_sentence("exists x P(x)")
            .unwrap_err()
            .message
            .contains("undeclared"));
        assert!(parse_sentence("rel P 1; exists x P(x,x)")
            .unwrap_err()
            .message
            .contains("arity"));
    }

    #[test]
    fn roundtrip_simple() {
        let doc = parse_sentence("rel P 1; exists x P(x)").unwrap();
        assert_eq!(parse_sentence(&print_sentence(&doc)).unwrap(), doc);
    }

    #[test]
    fn associativity_is_preserved() {
        let voc = Vocabulary::from_pairs([("A", 0), ("B", 0), ("C", 0)]).unwrap();
        for src in [
            "A & (B & C)",
            "(A & B) & C",
            "A -> B -> C",
            "(A -> B) -> C",
            "A <-> (B <-> C)",
            "!(A | B) & C",
            "forall x (x = x & A)",
            "forall x x = x & A",
        ] {
            let f = parse_formula(src, &voc).unwrap();
            let printed = print_formula(&f);
            assert_eq!(
                parse_formula(&printed, &voc).unwrap(),
                f,
                "{src} -> {printed}"
            );
        }
    }

    #[test]
    fn comments_and_format_header() {
        let doc = parse_sentence("format 1\n# a comment\nrel A 0; # trailing\nA | !A\n").unwrap();
        assert_eq!(doc.vocabulary.len(), 1);
        assert!(parse_sentence("format 2\nrel A 0; A").is_err());
    }
}
