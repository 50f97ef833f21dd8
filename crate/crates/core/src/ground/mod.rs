//! Grounding of normalized sentences over `[N]` into conjunctions of DNF
//! blocks, and satisfiability of the result.

mod cdcl;
mod cnf;
mod sat;

pub use cnf::{cnf_satisfiable, to_cnf, Cnf};
pub use sat::{
    all_solutions, literal_set_consistent, literal_set_consistent_counted, satisfiable,
    satisfiable_cdcl, satisfiable_cdcl_with_stats, satisfiable_with_stats, SatStats, Witness,
};

use std::collections::HashSet;
use std::fmt;

use crate::formula::{Formula, RelName, Var};
use crate::normalize::{NormalizedSentence, Quantifier};
use crate::structure::{Element, FiniteStructure};

/// Signed atom reference: `atom << 1 | negated`.
pub type Lit = u32;

pub fn lit(atom: usize, negated: bool) -> Lit {
    (atom as u32) << 1 | negated as u32
}

pub fn lit_atom(l: Lit) -> usize {
    (l >> 1) as usize
}

pub fn lit_negated(l: Lit) -> bool {
    l & 1 == 1
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundAtom {
    pub relation: RelName,
    pub tuple: Vec<Element>,
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.relation)?;
        for (i, e) in self.tuple.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

/// `C₁ ∧ ⋯ ∧ C_m` with every `C_i` a disjunction of literal conjunctions.
/// Stored flat: `conjunct_ends[i]` indexes `disjunct_ends`, which indexes
/// `lits`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroundFormula {
    pub atoms: Vec<GroundAtom>,
    lits: Vec<Lit>,
    disjunct_ends: Vec<usize>,
    conjunct_ends: Vec<usize>,
}

impl GroundFormula {
    pub fn new(atoms: Vec<GroundAtom>) -> Self {
        GroundFormula {
            atoms,
            ..Default::default()
        }
    }

    /// Appends a conjunct given as disjuncts of literals.
    pub fn push_conjunct<D: AsRef<[Lit]>>(&mut self, disjuncts: &[D]) {
        for d in disjuncts {
            for l in d.as_ref() {
                assert!(
                    lit_atom(*l) < self.atoms.len(),
                    "literal refers to unknown atom"
                );
            }
            self.lits.extend_from_slice(d.as_ref());
            self.disjunct_ends.push(self.lits.len());
        }
        self.conjunct_ends.push(self.disjunct_ends.len());
    }

    pub fn conjunct_count(&self) -> usize {
        self.conjunct_ends.len()
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    /// Total literal occurrences.
    pub fn size(&self) -> usize {
        self.lits.len()
    }

    pub fn disjunct_count(&self) -> usize {
        self.disjunct_ends.len()
    }

    fn disjunct_range(&self, c: usize) -> std::ops::Range<usize> {
        let start = if c == 0 { 0 } else { self.conjunct_ends[c - 1] };
        start..self.conjunct_ends[c]
    }

    pub fn disjunct_lits(&self, d: usize) -> &[Lit] {
        let start = if d == 0 { 0 } else { self.disjunct_ends[d - 1] };
        &self.lits[start..self.disjunct_ends[d]]
    }

    /// Global disjunct indices of conjunct `c`.
    pub fn disjuncts_of(&self, c: usize) -> std::ops::Range<usize> {
        self.disjunct_range(c)
    }

    pub fn conjunct(&self, c: usize) -> Vec<&[Lit]> {
        self.disjunct_range(c)
            .map(|d| self.disjunct_lits(d))
            .collect()
    }

    /// Truth value under a total assignment.
    pub fn evaluate(&self, values: &[bool]) -> bool {
        (0..self.conjunct_count()).all(|c| {
            self.disjuncts_of(c).any(|d| {
                self.disjunct_lits(d)
                    .iter()
                    .all(|l| values[lit_atom(*l)] != lit_negated(*l))
            })
        })
    }

    pub fn atom_index(&self, atom: &GroundAtom) -> Option<usize> {
        self.atoms.binary_search(atom).ok()
    }

    pub fn literal_label(&self, l: Lit) -> String {
        let a = &self.atoms[lit_atom(l)];
        if lit_negated(l) {
            format!("!{a}")
        } else {
            a.to_string()
        }
    }

    /// Decodes an assignment into a structure over `ns`'s full vocabulary.
    /// Atoms absent from the formula are false; pinned relations are copied.
    pub fn decode(
        &self,
        ns: &NormalizedSentence,
        n: usize,
        values: &[bool],
        pins: Option<&FiniteStructure>,
    ) -> FiniteStructure {
        let mut s = FiniteStructure::new(ns.vocabulary(), n).expect("grounded sizes fit");
        for (a, v) in self.atoms.iter().zip(values) {
            if *v {
                s.set(&a.relation, &a.tuple, true)
                    .expect("atoms come from the vocabulary");
            }
        }
        if let Some(p) = pins {
            for (r, _) in p.vocabulary().iter() {
                if s.vocabulary().contains(r) {
                    for t in p.tuples(r).expect("own vocabulary") {
                        s.set(r, &t, true).expect("same size");
                    }
                }
            }
        }
        s
    }
}

#[derive(Clone, Debug)]
enum TLit {
    Eq(usize, usize, bool),
    Pinned {
        rel: usize,
        args: Vec<usize>,
        negated: bool,
    },
    Free {
        rel: usize,
        args: Vec<usize>,
        negated: bool,
    },
}

struct Template {
    /// number of slots; the last one is existential when `existential`
    width: usize,
    existential: bool,
    disjuncts: Vec<Vec<TLit>>,
}

struct RelInfo {
    arity: usize,
    offset: u64,
}

/// Grounding context shared by the storing and the counting paths.
struct Grounder<'a> {
    n: usize,
    rels: Vec<RelInfo>,
    names: Vec<RelName>,
    pins: Option<&'a FiniteStructure>,
    pin_index: Vec<Option<usize>>,
    templates: Vec<Template>,
}

impl<'a> Grounder<'a> {
    fn new(ns: &NormalizedSentence, n: usize, pins: Option<&'a FiniteStructure>) -> Self {
        assert!(n >= 1, "domain must be non-empty");
        let vocab = ns.vocabulary();
        // name-sorted offsets make raw keys follow the canonical atom order
        let mut names: Vec<(RelName, usize)> = vocab.iter().map(|(r, a)| (r.clone(), a)).collect();
        names.sort();
        let mut rels = Vec::new();
        let mut offset = 0u64;
        for (_, a) in &names {
            rels.push(RelInfo { arity: *a, offset });
            offset += (n as u64).pow(*a as u32);
        }
        let pin_index = names
            .iter()
            .map(|(r, _)| pins.and_then(|p| p.relation_index(r)))
            .collect();
        let names: Vec<RelName> = names.into_iter().map(|(r, _)| r).collect();
        let mut g = Grounder {
            n,
            rels,
            names,
            pins,
            pin_index,
            templates: Vec::new(),
        };
        for c in &ns.clauses {
            let t = g.template(c.prefix.as_slice(), &c.matrix);
            g.templates.push(t);
        }
        g
    }

    fn template(&self, prefix: &[(Quantifier, Var)], matrix: &Formula) -> Template {
        let slot = |v: &Var| {
            prefix
                .iter()
                .position(|(_, p)| p == v)
                .expect("clause is closed")
        };
        let dnf = crate::normalize::dnf_of(matrix).expect("matrix is DNF");
        let disjuncts = dnf
            .into_iter()
            .map(|d| {
                d.into_iter()
                    .map(|l| {
                        let (negated, atom) = match l {
                            Formula::Not(a) => (true, &**a),
                            a => (false, a),
                        };
                        match atom {
                            Formula::Eq(a, b) => TLit::Eq(slot(a), slot(b), negated),
                            Formula::Atom(r, args) => {
                                let rel = self.names.binary_search(r).expect("declared relation");
                                let args = args.iter().map(slot).collect();
                                if self.pin_index[rel].is_some() {
                                    TLit::Pinned { rel, args, negated }
                                } else {
                                    TLit::Free { rel, args, negated }
                                }
                            }
                            _ => unreachable!("literal"),
                        }
                    })
                    .collect()
            })
            .collect();
        Template {
            width: prefix.len(),
            existential: prefix.last().is_some_and(|(q, _)| *q == Quantifier::Exists),
            disjuncts,
        }
    }

    fn index(&self, args: &[usize], point: &[Element]) -> u64 {
        let mut idx = 0u64;
        for s in args {
            idx = idx * self.n as u64 + point[*s] as u64;
        }
        idx
    }

    /// Instantiates a disjunct; `None` when it is false. Raw literals are
    /// `key << 1 | negated` with `key` the global dense atom position.
    fn instantiate(&self, d: &[TLit], point: &[Element], out: &mut Vec<u64>) -> bool {
        out.clear();
        for l in d {
            match l {
                TLit::Eq(a, b, neg) => {
                    if (point[*a] == point[*b]) == *neg {
                        return false;
                    }
                }
                TLit::Pinned { rel, args, negated } => {
                    let p = self.pins.expect("pinned");
                    let v = p.holds_raw(
                        self.pin_index[*rel].unwrap(),
                        self.index(args, point) as usize,
                    );
                    if v == *negated {
                        return false;
                    }
                }
                TLit::Free { rel, args, negated } => {
                    let key = self.rels[*rel].offset + self.index(args, point);
                    out.push(key << 1 | *negated as u64);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        // complementary pair sits next to each other after sorting
        !out.windows(2).any(|w| w[0] >> 1 == w[1] >> 1)
    }

    /// Emits every conjunct to `sink` as a list of disjuncts.
    fn run(&self, sink: &mut dyn FnMut(&[Vec<u64>])) {
        let n = self.n;
        let mut buf = Vec::new();
        let mut conj: Vec<Vec<u64>> = Vec::new();
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        for t in &self.templates {
            let outer = if t.existential { t.width - 1 } else { t.width };
            let inner = if t.existential { n } else { 1 };
            let mut point = vec![0 as Element; t.width];
            let total = n.pow(outer as u32);
            for _ in 0..total {
                conj.clear();
                seen.clear();
                let mut trivially_true = false;
                'inner: for e in 0..inner {
                    if t.existential {
                        point[t.width - 1] = e as Element;
                    }
                    for d in &t.disjuncts {
                        if !self.instantiate(d, &point, &mut buf) {
                            continue;
                        }
                        if buf.is_empty() {
                            trivially_true = true;
                            break 'inner;
                        }
                        if seen.insert(buf.clone()) {
                            conj.push(buf.clone());
                        }
                    }
                }
                if !trivially_true {
                    sink(&conj);
                }
                // odometer over the universal slots, last slot fastest
                for s in (0..outer).rev() {
                    point[s] += 1;
                    if (point[s] as usize) < n {
                        break;
                    }
                    point[s] = 0;
                }
            }
        }
    }

    fn atom_of_key(&self, key: u64) -> GroundAtom {
        let r = self.rels.partition_point(|ri| ri.offset <= key) - 1;
        let info = &self.rels[r];
        let mut idx = key - info.offset;
        let mut tuple = vec![0; info.arity];
        for i in (0..info.arity).rev() {
            tuple[i] = (idx % self.n as u64) as Element;
            idx /= self.n as u64;
        }
        GroundAtom {
            relation: self.names[r].clone(),
            tuple,
        }
    }
}

/// Grounds `ns` over `[n]`.
pub fn ground(ns: &NormalizedSentence, n: usize) -> GroundFormula {
    ground_pinned(ns, n, None)
}

/// Grounds `ns` over `[n]` with the relations of `pins` fixed to their
/// interpretation there; literals over them are resolved like equality.
pub fn ground_pinned(
    ns: &NormalizedSentence,
    n: usize,
    pins: Option<&FiniteStructure>,
) -> GroundFormula {
    if let Some(p) = pins {
        assert_eq!(p.size(), n, "pinned structure has the grounding size");
    }
    let g = Grounder::new(ns, n, pins);
    let mut raw: Vec<u64> = Vec::new();
    let mut disjunct_ends = Vec::new();
    let mut conjunct_ends = Vec::new();
    g.run(&mut |c| {
        for d in c {
            raw.extend_from_slice(d);
            disjunct_ends.push(raw.len());
        }
        conjunct_ends.push(disjunct_ends.len());
    });
    let mut keys: Vec<u64> = raw.iter().map(|l| l >> 1).collect();
    keys.sort_unstable();
    keys.dedup();
    let atoms = keys.iter().map(|k| g.atom_of_key(*k)).collect();
    // keys are sorted, so the remap keeps literals sorted within disjuncts
    let lits = raw
        .iter()
        .map(|l| lit(keys.binary_search(&(l >> 1)).unwrap(), l & 1 == 1))
        .collect();
    GroundFormula {
        atoms,
        lits,
        disjunct_ends,
        conjunct_ends,
    }
}

/// Literal count of `ground_pinned(ns, n, pins)` without storing it.
pub fn measure_size_pinned(
    ns: &NormalizedSentence,
    n: usize,
    pins: Option<&FiniteStructure>,
) -> usize {
    let g = Grounder::new(ns, n, pins);
    let mut size = 0;
    g.run(&mut |c| size += c.iter().map(Vec::len).sum::<usize>());
    size
}

pub fn measure_size(ns: &NormalizedSentence, n: usize) -> usize {
    measure_size_pinned(ns, n, None)
}

/// `Σ_clauses |matrix literals| · N^{prefix length}`; an upper bound on
/// [`measure_size`].
pub fn size_bound(ns: &NormalizedSentence, n: usize) -> usize {
    ns.clauses
        .iter()
        .map(|c| {
            let lits: usize = c.dnf().expect("DNF").iter().map(Vec::len).sum();
            lits * n.pow(c.prefix.len() as u32)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normalize::{normalize, Clause};
    use crate::text::sentence::parse_sentence;

    fn clauses_only(clauses: Vec<Clause>, rels: &[(&str, usize)]) -> NormalizedSentence {
        NormalizedSentence {
            base: crate::Vocabulary::from_pairs(rels.iter().copied()).unwrap(),
            aux: crate::Vocabulary::new(),
            root: RelName::new("unused"),
            budget: 3,
            clauses,
        }
    }

    #[test]
    fn unit_clause() {
        let ns = clauses_only(
            vec![Clause::universal(vec![], Formula::atom::<&str>("A", []))],
            &[("A", 0)],
        );
        let g = ground(&ns, 3);
        assert_eq!(g.conjunct_count(), 1);
        assert_eq!(g.disjunct_count(), 1);
        assert_eq!(g.size(), 1);
    }

    #[test]
    fn irreflexive() {
        let ns = clauses_only(
            vec![Clause::universal(
                vec![Var::new("x")],
                Formula::not(Formula::atom("E", ["x", "x"])),
            )],
            &[("E", 2)],
        );
        let g = ground(&ns, 1);
        assert_eq!(g.conjunct_count(), 1);
        assert_eq!(g.conjunct(0), vec![&[lit(0, true)][..]]);
        assert_eq!(g.atoms[0].to_string(), "E(0,0)");
        assert_eq!(measure_size(&ns, 4), 4);
    }

    #[test]
    fn forall_exists() {
        let ns = clauses_only(
            vec![Clause::universal_existential(
                vec![Var::new("x")],
                Var::new("y"),
                Formula::atom("E", ["x", "y"]),
            )],
            &[("E", 2)],
        );
        let g = ground(&ns, 2);
        assert_eq!(g.conjunct_count(), 2);
        for c in 0..2 {
            assert_eq!(g.conjunct(c).len(), 2);
        }
        assert_eq!(measure_size(&ns, 4), 16);
    }

    #[test]
    fn equality_is_resolved() {
        let doc = parse_sentence("rel E 2; forall x forall y (x = y | E(x,y))").unwrap();
        let ns = normalize(&doc.formula, 2).unwrap();
        let g = ground(&ns, 3);
        let vocab = ns.vocabulary();
        assert!(g.atoms.iter().all(|a| vocab.contains(&a.relation)));
        assert!(g.size() <= size_bound(&ns, 3));
        assert_eq!(g.size(), measure_size(&ns, 3));
    }

    #[test]
    fn atoms_are_canonically_ordered() {
        let doc = parse_sentence("rel P 1; rel E 2; forall x exists y (E(y,x) & P(y))").unwrap();
        let ns = normalize(&doc.formula, 2).unwrap();
        let g = ground(&ns, 3);
        assert!(g.atoms.windows(2).all(|w| w[0] < w[1]));
    }
}
