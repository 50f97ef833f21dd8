//! Tarskian evaluation by direct quantifier expansion over `[N]`.
//!
//! Formulas are first lowered to a slot-indexed form so that repeated
//! evaluation (structure enumeration, axiom checks) does no name lookups.

use crate::error::LogicError;
use crate::formula::{Formula, Var};
use crate::structure::{Assignment, Element, FiniteStructure};

#[derive(Debug, Clone)]
enum Node {
    Eq(usize, usize),
    Atom(usize, Vec<usize>),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
    Iff(Box<Node>, Box<Node>),
    Forall(usize, Box<Node>),
    Exists(usize, Box<Node>),
}

/// A formula bound to a structure's vocabulary layout.
#[derive(Debug, Clone)]
pub struct CompiledFormula {
    root: Node,
    slots: Vec<Var>,
}

impl CompiledFormula {
    pub fn new(f: &Formula, s: &FiniteStructure) -> Result<Self, LogicError> {
        f.check_vocabulary(s.vocabulary())?;
        let slots: Vec<Var> = f.variables().into_iter().collect();
        let root = lower(f, s, &slots);
        Ok(CompiledFormula { root, slots })
    }

    /// Evaluates under `a`, which must cover every free variable.
    pub fn eval(&self, s: &FiniteStructure, a: &Assignment) -> Result<bool, LogicError> {
        let mut env = vec![Element::MAX; self.slots.len()];
        for (i, v) in self.slots.iter().enumerate() {
            if let Some(&e) = a.get(v) {
                if e as usize >= s.size() {
                    return Err(LogicError::ElementOutOfRange {
                        element: e as u64,
                        size: s.size(),
                    });
                }
                env[i] = e;
            }
        }
        self.check_bound(&self.root, &mut vec![false; env.len()], &env)?;
        Ok(run(&self.root, s, &mut env))
    }

    /// Evaluates a sentence (or a formula whose free slots are irrelevant).
    pub fn eval_sentence(&self, s: &FiniteStructure) -> bool {
        let mut env = vec![0; self.slots.len()];
        run(&self.root, s, &mut env)
    }

    fn check_bound(
        &self,
        n: &Node,
        bound: &mut Vec<bool>,
        env: &[Element],
    ) -> Result<(), LogicError> {
        let check = |i: usize, bound: &Vec<bool>| {
            if !bound[i] && env[i] == Element::MAX {
                Err(LogicError::UnboundVariable(self.slots[i].to_string()))
            } else {
                Ok(())
            }
        };
        match n {
            Node::Eq(a, b) => {
                check(*a, bound)?;
                check(*b, bound)
            }
            Node::Atom(_, args) => args.iter().try_for_each(|i| check(*i, bound)),
            Node::Not(a) => self.check_bound(a, bound, env),
            Node::And(a, b) | Node::Or(a, b) | Node::Implies(a, b) | Node::Iff(a, b) => {
                self.check_bound(a, bound, env)?;
                self.check_bound(b, bound, env)
            }
            Node::Forall(v, body) | Node::Exists(v, body) => {
                let old = bound[*v];
                bound[*v] = true;
                let r = self.check_bound(body, bound, env);
                bound[*v] = old;
                r
            }
        }
    }
}

fn lower(f: &Formula, s: &FiniteStructure, slots: &[Var]) -> Node {
    let slot = |v: &Var| slots.binary_search(v).expect("variable collected");
    match f {
        Formula::Eq(a, b) => Node::Eq(slot(a), slot(b)),
        Formula::Atom(r, args) => Node::Atom(
            s.relation_index(r).expect("vocabulary checked"),
            args.iter().map(slot).collect(),
        ),
        Formula::Not(a) => Node::Not(Box::new(lower(a, s, slots))),
        Formula::And(a, b) => Node::And(Box::new(lower(a, s, slots)), Box::new(lower(b, s, slots))),
        Formula::Or(a, b) => Node::Or(Box::new(lower(a, s, slots)), Box::new(lower(b, s, slots))),
        Formula::Implies(a, b) => {
            Node::Implies(Box::new(lower(a, s, slots)), Box::new(lower(b, s, slots)))
        }
        Formula::Iff(a, b) => Node::Iff(Box::new(lower(a, s, slots)), Box::new(lower(b, s, slots))),
        Formula::Forall(v, body) => Node::Forall(slot(v), Box::new(lower(body, s, slots))),
        Formula::Exists(v, body) => Node::Exists(slot(v), Box::new(lower(body, s, slots))),
    }
}

fn run(n: &Node, s: &FiniteStructure, env: &mut [Element]) -> bool {
    match n {
        Node::Eq(a, b) => env[*a] == env[*b],
        Node::Atom(r, args) => {
            let size = s.size();
            let idx = args
                .iter()
                .fold(0usize, |acc, i| acc * size + env[*i] as usize);
            s.holds_raw(*r, idx)
        }
        Node::Not(a) => !run(a, s, env),
        Node::And(a, b) => run(a, s, env) && run(b, s, env),
        Node::Or(a, b) => run(a, s, env) || run(b, s, env),
        Node::Implies(a, b) => !run(a, s, env) || run(b, s, env),
        Node::Iff(a, b) => run(a, s, env) == run(b, s, env),
        Node::Forall(v, body) => {
            let saved = env[*v];
            let mut ok = true;
            for e in 0..s.size() as Element {
                env[*v] = e;
                if !run(body, s, env) {
                    ok = false;
                    break;
                }
            }
            env[*v] = saved;
            ok
        }
        Node::Exists(v, body) => {
            let saved = env[*v];
            let mut ok = false;
            for e in 0..s.size() as Element {
                env[*v] = e;
                if run(body, s, env) {
                    ok = true;
                    break;
                }
            }
            env[*v] = saved;
            ok
        }
    }
}

pub fn evaluate(f: &Formula, s: &FiniteStructure, a: &Assignment) -> Result<bool, LogicError> {
    CompiledFormula::new(f, s)?.eval(s, a)
}

pub fn evaluate_sentence(f: &Formula, s: &FiniteStructure) -> Result<bool, LogicError> {
    evaluate(f, s, &Assignment::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Vocabulary;

    fn all_equal() -> Formula {
        Formula::forall("x", Formula::forall("y", Formula::eq("x", "y")))
    }

    #[test]
    fn equality_semantics() {
        let voc = Vocabulary::new();
        let s1 = FiniteStructure::new(voc.clone(), 1).unwrap();
        let s2 = FiniteStructure::new(voc, 2).unwrap();
        assert!(evaluate_sentence(&all_equal(), &s1).unwrap());
        assert!(!evaluate_sentence(&all_equal(), &s2).unwrap());
    }

    fn lt(a: &str, b: &str) -> Formula {
        Formula::atom("LT", [a, b])
    }

    /// Strict total order axioms for LT.
    fn total_order() -> Formula {
        let irrefl = Formula::forall("x", Formula::not(lt("x", "x")));
        let trans = Formula::forall(
            "x",
            Formula::forall(
                "y",
                Formula::forall(
                    "z",
                    Formula::implies(Formula::and(lt("x", "y"), lt("y", "z")), lt("x", "z")),
                ),
            ),
        );
        let total = Formula::forall(
            "x",
            Formula::forall(
                "y",
                Formula::or(
                    Formula::or(lt("x", "y"), Formula::eq("x", "y")),
                    lt("y", "x"),
                ),
            ),
        );
        Formula::and_all(vec![irrefl, trans, total]).unwrap()
    }

    #[test]
    fn canonical_order_satisfies_total_order_axioms() {
        let voc = Vocabulary::from_pairs([("LT", 2)]).unwrap();
        let mut s = FiniteStructure::new(voc.clone(), 3).unwrap();
        for a in 0..3 {
            for b in a + 1..3 {
                s.insert("LT", &[a, b]).unwrap();
            }
        }
        assert!(evaluate_sentence(&total_order(), &s).unwrap());

        // brute-force oracle: count all LT interpretations on 3 elements that
        // satisfy the axioms; exactly the 3! linear orders do.
        let mut count = 0;
        for mask in 0u32..(1 << 9) {
            let mut t = FiniteStructure::new(voc.clone(), 3).unwrap();
            for i in 0..9u32 {
                if mask >> i & 1 == 1 {
                    t.insert("LT", &[i / 3, i % 3]).unwrap();
                }
            }
            if evaluate_sentence(&total_order(), &t).unwrap() {
                count += 1;
            }
        }
        assert_eq!(count, 6);
    }

    #[test]
    fn unbound_variable_is_an_error() {
        let voc = Vocabulary::from_pairs([("P", 1)]).unwrap();
        let s = FiniteStructure::new(voc, 2).unwrap();
        let f = Formula::atom("P", ["x"]);
        assert!(matches!(
            evaluate(&f, &s, &Assignment::new()),
            Err(LogicError::UnboundVariable(_))
        ));
        let mut a = Assignment::new();
        a.insert(Var::new("x"), 1);
        assert!(!evaluate(&f, &s, &a).unwrap());
    }

    #[test]
    fn vocabulary_mismatch_is_an_error() {
        let voc = Vocabulary::from_pairs([("P", 1)]).unwrap();
        let s = FiniteStructure::new(voc, 2).unwrap();
        let f = Formula::exists("x", Formula::atom("Q", ["x"]));
        assert!(evaluate_sentence(&f, &s).is_err());
        let g = Formula::exists("x", Formula::atom("P", ["x", "x"]));
        assert!(evaluate_sentence(&g, &s).is_err());
    }

    #[test]
    fn nullary_atoms_are_presence_of_empty_tuple() {
        let voc = Vocabulary::from_pairs([("A", 0)]).unwrap();
        let mut s = FiniteStructure::new(voc, 2).unwrap();
        let a = Formula::atom::<&str>("A", []);
        assert!(!evaluate_sentence(&a, &s).unwrap());
        s.insert("A", &[]).unwrap();
        assert!(evaluate_sentence(&a, &s).unwrap());
    }
}
