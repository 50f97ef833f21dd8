//! Normal form for k-variable sentences: an existential block of auxiliary
//! relations over a conjunction of clauses `∀x̄ ψ` and `∀x̄ ∃v ψ` with
//! quantifier-free DNF matrices.
//!
//! Each non-atomic subformula θ with free variables v̄ gets a relation
//! `R_θ(v̄)` and clauses stating `R_θ(v̄) ↔ θ'` where θ' refers to the
//! relations of the immediate subformulas. Atoms stand for themselves.

use std::collections::{BTreeSet, HashMap};

use crate::error::NormalizeError;
use crate::formula::{Formula, RelName, Var, Vocabulary};
use crate::text::sentence::SentenceDocument;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// `∀x₁…∀x_q ψ`
    Universal,
    /// `∀x₁…∀x_{q−1} ∃x_q ψ`
    UniversalExistential,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub prefix: Vec<(Quantifier, Var)>,
    pub matrix: Formula,
}

impl Clause {
    pub fn universal(vars: Vec<Var>, matrix: Formula) -> Self {
        Clause {
            prefix: vars.into_iter().map(|v| (Quantifier::Forall, v)).collect(),
            matrix,
        }
    }

    pub fn universal_existential(mut vars: Vec<Var>, last: Var, matrix: Formula) -> Self {
        vars.retain(|v| *v != last);
        let mut prefix: Vec<_> = vars.into_iter().map(|v| (Quantifier::Forall, v)).collect();
        prefix.push((Quantifier::Exists, last));
        Clause { prefix, matrix }
    }

    /// `None` when the prefix is not of the form `∀*∃?`.
    pub fn shape(&self) -> Option<Shape> {
        let n = self.prefix.len();
        let all_forall = |s: &[(Quantifier, Var)]| s.iter().all(|(q, _)| *q == Quantifier::Forall);
        if all_forall(&self.prefix) {
            Some(Shape::Universal)
        } else if all_forall(&self.prefix[..n - 1]) && self.prefix[n - 1].0 == Quantifier::Exists {
            Some(Shape::UniversalExistential)
        } else {
            None
        }
    }

    pub fn to_formula(&self) -> Formula {
        self.prefix
            .iter()
            .rev()
            .fold(self.matrix.clone(), |acc, (q, v)| match q {
                Quantifier::Forall => Formula::forall(v.clone(), acc),
                Quantifier::Exists => Formula::exists(v.clone(), acc),
            })
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        let mut vs = self.matrix.variables();
        vs.extend(self.prefix.iter().map(|(_, v)| v.clone()));
        vs
    }

    /// Disjuncts of the matrix as literal lists, or `None` if it is not DNF.
    pub fn dnf(&self) -> Option<Vec<Vec<&Formula>>> {
        dnf_of(&self.matrix)
    }
}

/// Splits a formula in DNF into its disjuncts of literals.
pub fn dnf_of(f: &Formula) -> Option<Vec<Vec<&Formula>>> {
    let mut out = Vec::new();
    let mut stack = vec![f];
    while let Some(g) = stack.pop() {
        match g {
            Formula::Or(a, b) => {
                stack.push(b);
                stack.push(a);
            }
            other => {
                let lits = other.conjuncts();
                if !lits.iter().all(|l| is_literal(l)) {
                    return None;
                }
                out.push(lits);
            }
        }
    }
    Some(out)
}

pub fn is_literal(f: &Formula) -> bool {
    match f {
        Formula::Eq(..) | Formula::Atom(..) => true,
        Formula::Not(a) => a.is_atomic(),
        _ => false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedSentence {
    pub base: Vocabulary,
    pub aux: Vocabulary,
    pub root: RelName,
    pub budget: usize,
    pub clauses: Vec<Clause>,
}

impl NormalizedSentence {
    /// Base relations followed by auxiliary relations.
    pub fn vocabulary(&self) -> Vocabulary {
        let mut v = self.base.clone();
        for (r, a) in self.aux.iter() {
            v.ensure(r.clone(), a).expect("aux names are fresh");
        }
        v
    }

    /// Conjunction of all clauses.
    pub fn to_formula(&self) -> Formula {
        Formula::and_all(self.clauses.iter().map(Clause::to_formula).collect())
            .unwrap_or_else(|| Formula::forall("x", Formula::verum("x")))
    }

    pub fn to_document(&self) -> SentenceDocument {
        SentenceDocument {
            vocabulary: self.vocabulary(),
            formula: self.to_formula(),
        }
    }
}

struct Normalizer {
    base: Vocabulary,
    aux: Vocabulary,
    clauses: Vec<Clause>,
    memo: HashMap<Formula, Formula>,
    next: usize,
}

impl Normalizer {
    fn fresh(&mut self, arity: usize) -> RelName {
        loop {
            self.next += 1;
            let mut name = format!("R_{}", self.next);
            while self.base.contains(&RelName::new(&name)) {
                name.push('_');
            }
            let rel = RelName::new(&name);
            if !self.aux.contains(&rel) {
                self.aux.add(rel.clone(), arity).expect("fresh");
                return rel;
            }
        }
    }

    /// Returns the positive atom standing for `f`.
    fn reference(&mut self, f: &Formula) -> Formula {
        if f.is_atomic() {
            return f.clone();
        }
        if let Some(r) = self.memo.get(f) {
            return r.clone();
        }
        let fv = f.free_variables_ordered();
        let rel = self.fresh(fv.len());
        let head = Formula::atom_vars(&rel, &fv);
        match f {
            Formula::Not(a) => {
                let a = (**a).clone();
                self.biconditional(&fv, &head, &[a], |v| !v[0]);
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                let la = self.reference(a);
                let lb = self.reference(b);
                if matches!(f, Formula::And(..)) {
                    self.biconditional(&fv, &head, &[la, lb], |v| v[0] && v[1]);
                } else {
                    self.biconditional(&fv, &head, &[la, lb], |v| v[0] || v[1]);
                }
            }
            Formula::Forall(v, a) => {
                let la = self.reference(a);
                let mut vars = fv.clone();
                vars.push(v.clone());
                // R → L for every v; ¬R → some v with ¬L
                let m1 = truth_table_dnf(&[head.clone(), la.clone()], |t| !t[0] || t[1]);
                let m2 = truth_table_dnf(&[head.clone(), la], |t| t[0] || !t[1]);
                self.clauses.push(Clause::universal(vars.clone(), m1));
                self.clauses
                    .push(Clause::universal_existential(vars, v.clone(), m2));
            }
            Formula::Exists(v, a) => {
                let la = self.reference(a);
                let mut vars = fv.clone();
                vars.push(v.clone());
                let m1 = truth_table_dnf(&[head.clone(), la.clone()], |t| t[0] || !t[1]);
                let m2 = truth_table_dnf(&[head.clone(), la], |t| !t[0] || t[1]);
                self.clauses.push(Clause::universal(vars.clone(), m1));
                self.clauses
                    .push(Clause::universal_existential(vars, v.clone(), m2));
            }
            Formula::Implies(..) | Formula::Iff(..) | Formula::Eq(..) | Formula::Atom(..) => {
                unreachable!("input is in negation normal form")
            }
        }
        self.memo.insert(f.clone(), head.clone());
        head
    }

    fn biconditional(
        &mut self,
        vars: &[Var],
        head: &Formula,
        parts: &[Formula],
        body: impl Fn(&[bool]) -> bool,
    ) {
        let mut atoms = vec![head.clone()];
        let mut index = Vec::new();
        for p in parts {
            match atoms.iter().position(|a| a == p) {
                Some(i) => index.push(i),
                None => {
                    index.push(atoms.len());
                    atoms.push(p.clone());
                }
            }
        }
        let matrix = truth_table_dnf(&atoms, |t| {
            let args: Vec<bool> = index.iter().map(|i| t[*i]).collect();
            t[0] == body(&args)
        });
        self.clauses.push(Clause::universal(vars.to_vec(), matrix));
    }
}

/// DNF made of all prime implicants of the boolean function `f` over `atoms`.
pub fn truth_table_dnf(atoms: &[Formula], f: impl Fn(&[bool]) -> bool) -> Formula {
    let n = atoms.len();
    assert!(n <= 6, "truth tables are for small bodies");
    let truth: Vec<bool> = (0..1usize << n)
        .map(|m| f(&(0..n).map(|i| m >> i & 1 == 1).collect::<Vec<_>>()))
        .collect();
    // cube: per atom 0 = absent, 1 = positive, 2 = negative
    let covers = |cube: &[u8]| {
        (0..1usize << n).all(|m| {
            let fits = (0..n).all(|i| match cube[i] {
                1 => m >> i & 1 == 1,
                2 => m >> i & 1 == 0,
                _ => true,
            });
            !fits || truth[m]
        })
    };
    let mut primes = Vec::new();
    let total = 3usize.pow(n as u32);
    for c in 0..total {
        let cube: Vec<u8> = (0..n)
            .map(|i| (c / 3usize.pow(i as u32) % 3) as u8)
            .collect();
        if !covers(&cube) {
            continue;
        }
        let prime = (0..n).filter(|i| cube[*i] != 0).all(|i| {
            let mut wider = cube.clone();
            wider[i] = 0;
            !covers(&wider)
        });
        if prime {
            primes.push(cube);
        }
    }
    // longer cubes later reads better: sort by literal count, stable
    primes.sort_by_key(|c| c.iter().filter(|x| **x != 0).count());
    let disjuncts: Vec<Formula> = primes
        .into_iter()
        .map(|cube| {
            let lits: Vec<Formula> = (0..n)
                .filter(|i| cube[*i] != 0)
                .map(|i| {
                    if cube[i] == 1 {
                        atoms[i].clone()
                    } else {
                        Formula::not(atoms[i].clone())
                    }
                })
                .collect();
            Formula::and_all(lits).expect("a non-constant function has no empty prime")
        })
        .collect();
    Formula::or_all(disjuncts).expect("function is satisfiable")
}

/// Normal form of the sentence `f` within a budget of `k` variables.
pub fn normalize(f: &Formula, k: usize) -> Result<NormalizedSentence, NormalizeError> {
    if !f.is_sentence() {
        return Err(NormalizeError::NotASentence);
    }
    let used = f.distinct_variable_count();
    if used > k {
        return Err(NormalizeError::VariableBudget { used, budget: k });
    }
    let mut base = Vocabulary::new();
    for (r, a) in f.relations() {
        base.add(r, a)?;
    }
    let nnf = f.to_nnf();
    let mut n = Normalizer {
        base: base.clone(),
        aux: Vocabulary::new(),
        clauses: Vec::new(),
        memo: HashMap::new(),
        next: 0,
    };
    let root_ref = n.reference(&nnf);
    let root = match &root_ref {
        Formula::Atom(r, args) if args.is_empty() && n.aux.contains(r) => r.clone(),
        other => {
            // a bare nullary base atom: link it to a fresh root
            let rel = n.fresh(0);
            let head = Formula::atom_vars(&rel, &[]);
            let other = other.clone();
            n.biconditional(&[], &head, &[other], |v| v[0]);
            rel
        }
    };
    n.clauses
        .push(Clause::universal(vec![], Formula::atom_vars(&root, &[])));
    Ok(NormalizedSentence {
        base,
        aux: n.aux,
        root,
        budget: k,
        clauses: n.clauses,
    })
}

/// Lists violations of the normal-form invariants; empty when all hold.
pub fn verify_shape(ns: &NormalizedSentence) -> Vec<String> {
    let vocab = ns.vocabulary();
    let mut diags = Vec::new();
    let mut units = 0;
    for (i, c) in ns.clauses.iter().enumerate() {
        if c.shape().is_none() {
            diags.push(format!("clause {i}: prefix not ∀*∃?"));
        }
        if c.dnf().is_none() {
            diags.push(format!("clause {i}: matrix not DNF"));
        }
        let used = c.variables().len();
        if used > ns.budget {
            diags.push(format!(
                "clause {i}: uses {used} variables, budget is {}",
                ns.budget
            ));
        }
        let bound: BTreeSet<Var> = c.prefix.iter().map(|(_, v)| v.clone()).collect();
        if bound.len() != c.prefix.len() {
            diags.push(format!("clause {i}: prefix repeats a variable"));
        }
        for v in c.matrix.free_variables() {
            if !bound.contains(&v) {
                diags.push(format!("clause {i}: variable {v} is not quantified"));
            }
        }
        if let Err(e) = c.matrix.check_vocabulary(&vocab) {
            diags.push(format!("clause {i}: {e}"));
        }
        if let (true, Formula::Atom(r, args)) = (c.prefix.is_empty(), &c.matrix) {
            if args.is_empty() && ns.aux.contains(r) {
                units += 1;
            }
        }
    }
    if units != 1 {
        diags.push(format!(
            "expected exactly one positive arity-0 unit clause, found {units}"
        ));
    }
    diags
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::sentence::parse_sentence;

    fn norm(text: &str, k: usize) -> NormalizedSentence {
        let doc = parse_sentence(text).unwrap();
        normalize(&doc.formula, k).unwrap()
    }

    #[test]
    fn exists_p() {
        let ns = norm("rel P 1; exists x P(x)", 1);
        assert_eq!(ns.aux.len(), 1);
        assert_eq!(ns.clauses.len(), 3);
        assert_eq!(ns.aux.arity(&ns.root), Some(0));
        assert_eq!(ns.clauses[0].shape(), Some(Shape::Universal));
        assert_eq!(ns.clauses[1].shape(), Some(Shape::UniversalExistential));
        assert!(verify_shape(&ns).is_empty());
    }

    #[test]
    fn forall_exists_edge() {
        let ns = norm("rel E 2; forall x exists y E(x,y)", 2);
        // ∃y E(x,y) and ∀x∃y E(x,y)
        assert_eq!(ns.aux.len(), 2);
        assert_eq!(ns.clauses.len(), 5);
        let shapes: Vec<_> = ns.clauses.iter().map(|c| c.shape().unwrap()).collect();
        assert_eq!(
            shapes
                .iter()
                .filter(|s| **s == Shape::UniversalExistential)
                .count(),
            2
        );
        assert!(verify_shape(&ns).is_empty());
    }

    #[test]
    fn nullary_root_is_linked() {
        let ns = norm("rel A 0; A", 0);
        assert_eq!(ns.aux.len(), 1);
        assert_eq!(ns.clauses.len(), 2);
        assert!(verify_shape(&ns).is_empty());
    }

    #[test]
    fn shared_subformulas() {
        let ns = norm("rel P 1; (exists x P(x)) & (exists x P(x))", 1);
        // ∃xP(x) once, the conjunction once
        assert_eq!(ns.aux.len(), 2);
    }

    #[test]
    fn budget_is_checked() {
        let doc = parse_sentence("rel E 2; forall x exists y E(x,y)").unwrap();
        assert_eq!(
            normalize(&doc.formula, 1),
            Err(NormalizeError::VariableBudget { used: 2, budget: 1 })
        );
    }

    #[test]
    fn diagnostics() {
        let mut ns = norm("rel E 2; forall x exists y E(x,y)", 2);
        ns.clauses.push(Clause {
            prefix: vec![
                (Quantifier::Exists, Var::new("x")),
                (Quantifier::Forall, Var::new("y")),
            ],
            matrix: Formula::atom("E", ["x", "y"]),
        });
        let d = verify_shape(&ns);
        assert!(d.iter().any(|m| m.contains("prefix not ∀*∃?")), "{d:?}");

        let mut ns = norm("rel E 2; forall x exists y E(x,y)", 2);
        let e = |a, b| Formula::atom("E", [a, b]);
        ns.clauses.push(Clause::universal(
            vec![Var::new("x"), Var::new("y")],
            Formula::and(
                Formula::or(e("x", "y"), e("y", "x")),
                Formula::or(e("x", "x"), e("y", "y")),
            ),
        ));
        assert!(verify_shape(&ns)
            .iter()
            .any(|m| m.contains("matrix not DNF")));
    }

    #[test]
    fn prime_implicants_of_and() {
        let atoms = [
            Formula::atom("R", ["x"]),
            Formula::atom("A", ["x"]),
            Formula::atom("B", ["x"]),
        ];
        let f = truth_table_dnf(&atoms, |t| t[0] == (t[1] && t[2]));
        let d = dnf_of(&f).unwrap();
        assert_eq!(d.len(), 3);
        assert_eq!(d.iter().map(|c| c.len()).sum::<usize>(), 7);
    }
}
