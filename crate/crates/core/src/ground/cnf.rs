use super::{lit_atom, lit_negated, GroundFormula};

/// Clauses over DIMACS variables `1..=num_vars`. Variables `1..=atoms` are
/// the ground atoms in order; the rest are disjunct selectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: usize,
    pub atoms: usize,
    pub clauses: Vec<Vec<i32>>,
}

/// Selector encoding: a conjunct with a single disjunct becomes unit
/// clauses; otherwise each disjunct gets a selector `s`, one clause asks for
/// some selector and `¬s ∨ l` ties each selector to its literals.
pub fn to_cnf(g: &GroundFormula) -> Cnf {
    let var = |l: u32| {
        let v = lit_atom(l) as i32 + 1;
        if lit_negated(l) {
            -v
        } else {
            v
        }
    };
    let mut next = g.atom_count() as i32;
    let mut clauses = Vec::new();
    for c in 0..g.conjunct_count() {
        let ds: Vec<usize> = g.disjuncts_of(c).collect();
        if ds.len() == 1 {
            for l in g.disjunct_lits(ds[0]) {
                clauses.push(vec![var(*l)]);
            }
            continue;
        }
        let mut some = Vec::new();
        for d in ds {
            next += 1;
            some.push(next);
            for l in g.disjunct_lits(d) {
                clauses.push(vec![-next, var(*l)]);
            }
        }
        clauses.push(some);
    }
    Cnf {
        num_vars: next as usize,
        atoms: g.atom_count(),
        clauses,
    }
}

/// Plain DPLL with unit propagation; a second, independent decision path.
pub fn cnf_satisfiable(cnf: &Cnf) -> Option<Vec<bool>> {
    fn value(assign: &[i8], l: i32) -> i8 {
        let v = assign[l.unsigned_abs() as usize];
        if l < 0 {
            -v
        } else {
            v
        }
    }
    fn dpll(clauses: &[Vec<i32>], assign: &mut Vec<i8>) -> bool {
        let mut trail = Vec::new();
        loop {
            let mut changed = false;
            for c in clauses {
                let mut open = None;
                let mut open_count = 0;
                let mut sat = false;
                for l in c {
                    match value(assign, *l) {
                        1 => {
                            sat = true;
                            break;
                        }
                        0 => {
                            open_count += 1;
                            open = Some(*l);
                        }
                        _ => {}
                    }
                }
                if sat {
                    continue;
                }
                match (open_count, open) {
                    (0, _) => {
                        for v in trail {
                            assign[v] = 0;
                        }
                        return false;
                    }
                    (1, Some(l)) => {
                        let v = l.unsigned_abs() as usize;
                        assign[v] = if l > 0 { 1 } else { -1 };
                        trail.push(v);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                break;
            }
        }
        let Some(v) = (1..assign.len()).find(|v| assign[*v] == 0) else {
            return true;
        };
        for val in [1, -1] {
            assign[v] = val;
            if dpll(clauses, assign) {
                return true;
            }
        }
        assign[v] = 0;
        for v in trail {
            assign[v] = 0;
        }
        false
    }
    let mut assign = vec![0i8; cnf.num_vars + 1];
    dpll(&cnf.clauses, &mut assign).then(|| assign[1..].iter().map(|v| *v == 1).collect())
}

#[cfg(test)]
mod tests {
    use super::super::{lit, GroundAtom, Lit};
    use super::*;
    use crate::formula::RelName;

    fn g(n: usize) -> GroundFormula {
        GroundFormula::new(
            (0..n)
                .map(|i| GroundAtom {
                    relation: RelName::new("P"),
                    tuple: vec![i as u32],
                })
                .collect(),
        )
    }

    #[test]
    fn unit_literal() {
        let mut f = g(1);
        f.push_conjunct(&[[lit(0, false)]]);
        let c = to_cnf(&f);
        assert_eq!(c.clauses, vec![vec![1]]);
    }

    #[test]
    fn two_single_literal_disjuncts() {
        let mut f = g(2);
        f.push_conjunct(&[[lit(0, false)], [lit(1, true)]]);
        let c = to_cnf(&f);
        assert_eq!(c.num_vars, 4);
        assert_eq!(c.clauses, vec![vec![-3, 1], vec![-4, -2], vec![3, 4]]);
        assert!(cnf_satisfiable(&c).is_some());
    }

    #[test]
    fn empty_conjunct_is_empty_clause() {
        let mut f = g(1);
        f.push_conjunct::<[Lit; 1]>(&[]);
        let c = to_cnf(&f);
        assert_eq!(c.clauses, vec![Vec::<i32>::new()]);
        assert!(cnf_satisfiable(&c).is_none());
    }
}
