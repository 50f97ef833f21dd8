//! First-order formulas over a purely relational vocabulary with equality.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::LogicError;

/// A variable identifier. Cheap to clone.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: &str) -> Self {
        Var(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var::new(s)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A relation symbol name.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelName(Arc<str>);

impl RelName {
    pub fn new(name: &str) -> Self {
        RelName(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for RelName {
    fn from(s: &str) -> Self {
        RelName::new(s)
    }
}

impl fmt::Display for RelName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for RelName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An ordered list of relation symbols with their arities. Equality is not
/// part of the vocabulary.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    relations: Vec<(RelName, usize)>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<'a>(
        pairs: impl IntoIterator<Item = (&'a str, usize)>,
    ) -> Result<Self, LogicError> {
        let mut v = Vocabulary::new();
        for (name, arity) in pairs {
            v.add(RelName::new(name), arity)?;
        }
        Ok(v)
    }

    pub fn add(&mut self, name: RelName, arity: usize) -> Result<(), LogicError> {
        if self.arity(&name).is_some() {
            return Err(LogicError::DuplicateRelation(name.to_string()));
        }
        self.relations.push((name, arity));
        Ok(())
    }

    /// Adds the relation unless it is already declared with the same arity.
    pub fn ensure(&mut self, name: RelName, arity: usize) -> Result<(), LogicError> {
        match self.arity(&name) {
            Some(a) if a == arity => Ok(()),
            Some(a) => Err(LogicError::ArityMismatch {
                relation: name.to_string(),
                expected: a,
                found: arity,
            }),
            None => {
                self.relations.push((name, arity));
                Ok(())
            }
        }
    }

    pub fn arity(&self, name: &RelName) -> Option<usize> {
        self.relations
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, a)| *a)
    }

    pub fn contains(&self, name: &RelName) -> bool {
        self.arity(name).is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&RelName, usize)> {
        self.relations.iter().map(|(n, a)| (n, *a))
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn max_arity(&self) -> usize {
        self.relations.iter().map(|(_, a)| *a).max().unwrap_or(0)
    }

    /// Number of fact positions at domain size `n`, saturating.
    pub fn fact_positions(&self, n: usize) -> usize {
        self.relations
            .iter()
            .map(|(_, a)| n.saturating_pow(*a as u32))
            .fold(0usize, |acc, x| acc.saturating_add(x))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Formula {
    Eq(Var, Var),
    Atom(RelName, Vec<Var>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
}

/// Shorthand constructors. Variable and relation names are given as `&str`.
impl Formula {
    pub fn eq(a: impl Into<Var>, b: impl Into<Var>) -> Self {
        Formula::Eq(a.into(), b.into())
    }

    pub fn atom<V: Into<Var>>(rel: &str, args: impl IntoIterator<Item = V>) -> Self {
        Formula::Atom(
            RelName::new(rel),
            args.into_iter().map(Into::into).collect(),
        )
    }

    pub fn atom_vars(rel: &RelName, args: &[Var]) -> Self {
        Formula::Atom(rel.clone(), args.to_vec())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(v: impl Into<Var>, body: Formula) -> Self {
        Formula::Forall(v.into(), Box::new(body))
    }

    pub fn exists(v: impl Into<Var>, body: Formula) -> Self {
        Formula::Exists(v.into(), Box::new(body))
    }

    pub fn forall_all(vars: &[Var], body: Formula) -> Self {
        vars.iter()
            .rev()
            .fold(body, |acc, v| Formula::forall(v.clone(), acc))
    }

    pub fn exists_all(vars: &[Var], body: Formula) -> Self {
        vars.iter()
            .rev()
            .fold(body, |acc, v| Formula::exists(v.clone(), acc))
    }

    /// Balanced conjunction. Returns `None` for an empty list.
    pub fn and_all(items: Vec<Formula>) -> Option<Formula> {
        balanced(items, Formula::and)
    }

    /// Balanced disjunction. Returns `None` for an empty list.
    pub fn or_all(items: Vec<Formula>) -> Option<Formula> {
        balanced(items, Formula::or)
    }

    /// A contradiction built from equality on `v`.
    pub fn falsum(v: impl Into<Var>) -> Formula {
        let v = v.into();
        Formula::not(Formula::Eq(v.clone(), v))
    }

    /// A tautology built from equality on `v`.
    pub fn verum(v: impl Into<Var>) -> Formula {
        let v = v.into();
        Formula::Eq(v.clone(), v)
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Eq(..) | Formula::Atom(..))
    }

    /// Immediate subformulas.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Eq(..) | Formula::Atom(..) => vec![],
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => vec![a],
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => vec![a, b],
        }
    }

    pub fn free_variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        collect_free(self, &mut bound, &mut out);
        out
    }

    /// Free variables in order of first occurrence (left to right).
    pub fn free_variables_ordered(&self) -> Vec<Var> {
        let mut out = Vec::new();
        let mut bound = Vec::new();
        collect_free_ordered(self, &mut bound, &mut out);
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_variables().is_empty()
    }

    /// All variable identifiers that occur anywhere, bound or free.
    pub fn variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Eq(a, b) => {
                out.insert(a.clone());
                out.insert(b.clone());
            }
            Formula::Atom(_, args) => out.extend(args.iter().cloned()),
            Formula::Forall(v, _) | Formula::Exists(v, _) => {
                out.insert(v.clone());
            }
            _ => {}
        });
        out
    }

    pub fn distinct_variable_count(&self) -> usize {
        self.variables().len()
    }

    /// Relation symbols used, with the arities they are used at.
    pub fn relations(&self) -> BTreeSet<(RelName, usize)> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom(r, args) = f {
                out.insert((r.clone(), args.len()));
            }
        });
        out
    }

    pub fn max_arity(&self) -> usize {
        self.relations().iter().map(|(_, a)| *a).max().unwrap_or(0)
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    /// Pre-order traversal. Uses an explicit stack so deep formulas are fine.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            f(node);
            let ch = node.children();
            for c in ch.into_iter().rev() {
                stack.push(c);
            }
        }
    }

    /// Checks that every relation atom is declared with a matching arity.
    pub fn check_vocabulary(&self, vocab: &Vocabulary) -> Result<(), LogicError> {
        for (r, a) in self.relations() {
            match vocab.arity(&r) {
                None => return Err(LogicError::UnknownRelation(r.to_string())),
                Some(d) if d != a => {
                    return Err(LogicError::ArityMismatch {
                        relation: r.to_string(),
                        expected: d,
                        found: a,
                    })
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Conjuncts of a top-level conjunction tree.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            match f {
                Formula::And(a, b) => {
                    stack.push(b);
                    stack.push(a);
                }
                other => out.push(other),
            }
        }
        out
    }

    /// Negation normal form: no `->`/`<->`, negations only directly above atoms.
    /// Introduces no new variable identifiers.
    pub fn to_nnf(&self) -> Formula {
        nnf(self, true)
    }

    pub fn is_nnf(&self) -> bool {
        let mut ok = true;
        self.visit(&mut |f| match f {
            Formula::Implies(..) | Formula::Iff(..) => ok = false,
            Formula::Not(inner) if !inner.is_atomic() => ok = false,
            _ => {}
        });
        ok
    }
}

pub fn free_variables(f: &Formula) -> BTreeSet<Var> {
    f.free_variables()
}

pub fn distinct_variable_count(f: &Formula) -> usize {
    f.distinct_variable_count()
}

pub fn to_negation_normal_form(f: &Formula) -> Formula {
    f.to_nnf()
}

fn balanced(mut items: Vec<Formula>, join: fn(Formula, Formula) -> Formula) -> Option<Formula> {
    match items.len() {
        0 => None,
        1 => items.pop(),
        n => {
            let right = items.split_off(n / 2);
            let l = balanced(items, join)?;
            let r = balanced(right, join)?;
            Some(join(l, r))
        }
    }
}

fn collect_free(f: &Formula, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
    match f {
        Formula::Eq(a, b) => {
            for v in [a, b] {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            }
        }
        Formula::Atom(_, args) => {
            for v in args {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            }
        }
        Formula::Not(a) => collect_free(a, bound, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            collect_free(a, bound, out);
            collect_free(b, bound, out);
        }
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            bound.push(v.clone());
            collect_free(body, bound, out);
            bound.pop();
        }
    }
}

fn collect_free_ordered(f: &Formula, bound: &mut Vec<Var>, out: &mut Vec<Var>) {
    let push = |v: &Var, bound: &Vec<Var>, out: &mut Vec<Var>| {
        if !bound.contains(v) && !out.contains(v) {
            out.push(v.clone());
        }
    };
    match f {
        Formula::Eq(a, b) => {
            push(a, bound, out);
            push(b, bound, out);
        }
        Formula::Atom(_, args) => {
            for v in args {
                push(v, bound, out);
            }
        }
        Formula::Not(a) => collect_free_ordered(a, bound, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            collect_free_ordered(a, bound, out);
            collect_free_ordered(b, bound, out);
        }
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            bound.push(v.clone());
            collect_free_ordered(body, bound, out);
            bound.pop();
        }
    }
}

fn nnf(f: &Formula, positive: bool) -> Formula {
    use Formula::*;
    match (f, positive) {
        (Eq(..) | Atom(..), true) => f.clone(),
        (Eq(..) | Atom(..), false) => Formula::not(f.clone()),
        (Not(a), p) => nnf(a, !p),
        (And(a, b), true) => Formula::and(nnf(a, true), nnf(b, true)),
        (And(a, b), false) => Formula::or(nnf(a, false), nnf(b, false)),
        (Or(a, b), true) => Formula::or(nnf(a, true), nnf(b, true)),
        (Or(a, b), false) => Formula::and(nnf(a, false), nnf(b, false)),
        (Implies(a, b), true) => Formula::or(nnf(a, false), nnf(b, true)),
        (Implies(a, b), false) => Formula::and(nnf(a, true), nnf(b, false)),
        (Iff(a, b), true) => Formula::or(
            Formula::and(nnf(a, true), nnf(b, true)),
            Formula::and(nnf(a, false), nnf(b, false)),
        ),
        (Iff(a, b), false) => Formula::or(
            Formula::and(nnf(a, true), nnf(b, false)),
            Formula::and(nnf(a, false), nnf(b, true)),
        ),
        (Forall(v, body), true) => Formula::forall(v.clone(), nnf(body, true)),
        (Forall(v, body), false) => Formula::exists(v.clone(), nnf(body, false)),
        (Exists(v, body), true) => Formula::exists(v.clone(), nnf(body, true)),
        (Exists(v, body), false) => Formula::forall(v.clone(), nnf(body, false)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Var {
        Var::new(s)
    }

    #[test]
    fn free_variables_examples() {
        let f = Formula::forall("x", Formula::forall("y", Formula::eq("x", "y")));
        assert!(f.free_variables().is_empty());

        let g = Formula::and(
            Formula::atom("E", ["x", "y"]),
            Formula::exists("y", Formula::atom("P", ["y"])),
        );
        assert_eq!(g.free_variables(), [v("x"), v("y")].into_iter().collect());

        let h = Formula::or(
            Formula::atom("P", ["x"]),
            Formula::not(Formula::atom("P", ["x"])),
        );
        assert_eq!(h.free_variables(), [v("x")].into_iter().collect());
    }

    #[test]
    fn distinct_variable_count_examples() {
        let f = Formula::forall("x", Formula::exists("y", Formula::atom("E", ["x", "y"])));
        assert_eq!(f.distinct_variable_count(), 2);

        let g = Formula::forall(
            "x",
            Formula::implies(
                Formula::atom("P", ["x"]),
                Formula::exists("x", Formula::atom("Q", ["x"])),
            ),
        );
        assert_eq!(g.distinct_variable_count(), 1);

        // shift expansion through a third variable
        let shifted = Formula::forall(
            "z",
            Formula::implies(
                Formula::atom("SUC", ["x", "z"]),
                Formula::atom("S", ["z", "y"]),
            ),
        );
        assert_eq!(shifted.distinct_variable_count(), 3);
    }

    #[test]
    fn nnf_examples() {
        let p = Formula::atom("P", ["x"]);
        assert_eq!(Formula::not(Formula::not(p.clone())).to_nnf(), p);

        let f = Formula::not(Formula::forall("x", p.clone()));
        assert_eq!(f.to_nnf(), Formula::exists("x", Formula::not(p.clone())));

        let a = Formula::atom("A", ["x"]);
        let b = Formula::atom("B", ["y"]);
        let g = Formula::not(Formula::and(a.clone(), Formula::exists("y", b.clone())));
        assert_eq!(
            g.to_nnf(),
            Formula::or(Formula::not(a), Formula::forall("y", Formula::not(b)))
        );
    }

    #[test]
    fn ordered_free_variables_follow_first_occurrence() {
        let f = Formula::and(Formula::atom("E", ["y", "x"]), Formula::atom("P", ["z"]));
        assert_eq!(f.free_variables_ordered(), vec![v("y"), v("x"), v("z")]);
    }

    #[test]
    fn vocabulary_rejects_duplicates() {
        let mut voc = Vocabulary::from_pairs([("E", 2), ("A", 0)]).unwrap();
        assert!(voc.add(RelName::new("E"), 1).is_err());
        assert_eq!(voc.fact_positions(3), 10);
    }

    #[test]
    fn balanced_conjunction_depth_is_logarithmic() {
        let items: Vec<_> = (0..1024).map(|_| Formula::atom("P", ["x"])).collect();
        let f = Formula::and_all(items).unwrap();
        fn depth(f: &Formula) -> usize {
            1 + f.children().iter().map(|c| depth(c)).max().unwrap_or(0)
        }
        assert_eq!(depth(&f), 11);
        assert_eq!(f.conjuncts().len(), 1024);
    }
}
