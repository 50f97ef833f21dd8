use super::cdcl::cdcl_solve;
use super::{lit, lit_atom, lit_negated, GroundFormula, Lit};

/// Sorts a copy of `ls` and scans adjacent pairs for `p`, `¬p`.
pub fn literal_set_consistent(ls: &[Lit]) -> bool {
    literal_set_consistent_counted(ls).0
}

/// Like [`literal_set_consistent`], also returning the number of literal
/// comparisons made.
pub fn literal_set_consistent_counted(ls: &[Lit]) -> (bool, usize) {
    let mut sorted = ls.to_vec();
    let mut comparisons = 0usize;
    sorted.sort_by(|a, b| {
        comparisons += 1;
        a.cmp(b)
    });
    for w in sorted.windows(2) {
        comparisons += 1;
        if lit_atom(w[0]) == lit_atom(w[1]) && w[0] != w[1] {
            return (false, comparisons);
        }
    }
    (true, comparisons)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// Value per atom; atoms left open by the search are false.
    pub values: Vec<bool>,
    /// Chosen disjunct (global index) per conjunct.
    pub chosen: Vec<usize>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SatStats {
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
}

struct Solver<'g> {
    g: &'g GroundFormula,
    value: Vec<i8>,
    trail: Vec<u32>,
    /// disjuncts containing each literal, CSR by literal
    occ_start: Vec<usize>,
    occ: Vec<u32>,
    disj_conj: Vec<u32>,
    disj_len: Vec<u32>,
    disj_false: Vec<u32>,
    disj_true: Vec<u32>,
    conj_alive: Vec<u32>,
    conj_sat: Vec<u32>,
    queue: Vec<u32>,
    /// conjuncts that lost a disjunct, most recent last
    touched: Vec<u32>,
    stats: SatStats,
}

struct Frame {
    conj: usize,
    next: usize,
    trail_len: usize,
    touched_len: usize,
}

impl<'g> Solver<'g> {
    fn new(g: &'g GroundFormula) -> Self {
        let nlits = g.atom_count() * 2;
        let nd = g.disjunct_count();
        let mut counts = vec![0usize; nlits + 1];
        let mut disj_conj = vec![0u32; nd];
        let mut disj_len = vec![0u32; nd];
        for c in 0..g.conjunct_count() {
            for d in g.disjuncts_of(c) {
                disj_conj[d] = c as u32;
                let lits = g.disjunct_lits(d);
                disj_len[d] = lits.len() as u32;
                for l in lits {
                    counts[*l as usize + 1] += 1;
                }
            }
        }
        for i in 0..nlits {
            counts[i + 1] += counts[i];
        }
        let mut fill = counts.clone();
        let mut occ = vec![0u32; counts[nlits]];
        for d in 0..nd {
            for l in g.disjunct_lits(d) {
                occ[fill[*l as usize]] = d as u32;
                fill[*l as usize] += 1;
            }
        }
        let mut conj_alive = vec![0u32; g.conjunct_count()];
        let mut conj_sat = vec![0u32; g.conjunct_count()];
        let mut queue = Vec::new();
        for c in 0..g.conjunct_count() {
            for d in g.disjuncts_of(c) {
                conj_alive[c] += 1;
                if disj_len[d] == 0 {
                    conj_sat[c] += 1;
                }
            }
            if conj_sat[c] == 0 && conj_alive[c] <= 1 {
                queue.push(c as u32);
            }
        }
        Solver {
            g,
            value: vec![0; g.atom_count()],
            trail: Vec::new(),
            occ_start: counts,
            occ,
            disj_conj,
            disj_len,
            disj_false: vec![0; nd],
            disj_true: vec![0; nd],
            conj_alive,
            conj_sat,
            queue,
            touched: Vec::new(),
            stats: SatStats::default(),
        }
    }

    fn occurrences(&self, l: Lit) -> std::ops::Range<usize> {
        self.occ_start[l as usize]..self.occ_start[l as usize + 1]
    }

    /// Makes literal `l` true. The atom must be unassigned.
    fn assign(&mut self, l: Lit) {
        let a = lit_atom(l);
        self.value[a] = if lit_negated(l) { -1 } else { 1 };
        self.trail.push(l);
        for i in self.occurrences(l ^ 1) {
            let d = self.occ[i] as usize;
            self.disj_false[d] += 1;
            if self.disj_false[d] == 1 {
                let c = self.disj_conj[d] as usize;
                self.touched.push(c as u32);
                self.conj_alive[c] -= 1;
                if self.conj_sat[c] == 0 && self.conj_alive[c] <= 1 {
                    self.queue.push(c as u32);
                }
            }
        }
        for i in self.occurrences(l) {
            let d = self.occ[i] as usize;
            self.disj_true[d] += 1;
            if self.disj_true[d] == self.disj_len[d] {
                self.conj_sat[self.disj_conj[d] as usize] += 1;
            }
        }
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let l = self.trail.pop().unwrap();
            self.value[lit_atom(l)] = 0;
            for i in self.occurrences(l ^ 1) {
                let d = self.occ[i] as usize;
                if self.disj_false[d] == 1 {
                    self.conj_alive[self.disj_conj[d] as usize] += 1;
                }
                self.disj_false[d] -= 1;
            }
            for i in self.occurrences(l) {
                let d = self.occ[i] as usize;
                if self.disj_true[d] == self.disj_len[d] {
                    self.conj_sat[self.disj_conj[d] as usize] -= 1;
                }
                self.disj_true[d] -= 1;
            }
        }
        self.queue.clear();
    }

    fn lit_value(&self, l: Lit) -> i8 {
        let v = self.value[lit_atom(l)];
        if lit_negated(l) {
            -v
        } else {
            v
        }
    }

    /// Assigns every literal of disjunct `d`; false on a clash.
    fn choose(&mut self, d: usize) -> bool {
        let g = self.g;
        for l in g.disjunct_lits(d) {
            match self.lit_value(*l) {
                1 => {}
                -1 => return false,
                _ => self.assign(*l),
            }
        }
        true
    }

    fn propagate(&mut self) -> bool {
        while let Some(c) = self.queue.pop() {
            let c = c as usize;
            if self.conj_sat[c] > 0 {
                continue;
            }
            match self.conj_alive[c] {
                0 => {
                    self.stats.conflicts += 1;
                    return false;
                }
                1 => {
                    let d = self
                        .g
                        .disjuncts_of(c)
                        .find(|d| self.disj_false[*d] == 0)
                        .expect("one disjunct alive");
                    self.stats.propagations += 1;
                    if !self.choose(d) {
                        self.stats.conflicts += 1;
                        return false;
                    }
                }
                _ => {}
            }
        }
        true
    }

    /// The most recently touched open conjunct, so that search follows the
    /// chain of consequences of the last choice; otherwise the open
    /// conjunct with the fewest consistent disjuncts.
    fn pick(&self) -> Option<usize> {
        let recent = self
            .touched
            .iter()
            .rev()
            .map(|c| *c as usize)
            .find(|c| self.conj_sat[*c] == 0);
        if recent.is_some() {
            return recent;
        }
        let mut best: Option<(u32, usize)> = None;
        for c in 0..self.conj_alive.len() {
            if self.conj_sat[c] == 0 {
                let a = self.conj_alive[c];
                if best.is_none_or(|(b, _)| a < b) {
                    best = Some((a, c));
                    if a <= 2 {
                        break;
                    }
                }
            }
        }
        best.map(|(_, c)| c)
    }

    fn solve(&mut self) -> bool {
        if !self.propagate() {
            return false;
        }
        let mut stack: Vec<Frame> = Vec::new();
        let mut descend = true;
        loop {
            if descend {
                let Some(c) = self.pick() else {
                    return true;
                };
                stack.push(Frame {
                    conj: c,
                    next: self.g.disjuncts_of(c).start,
                    trail_len: self.trail.len(),
                    touched_len: self.touched.len(),
                });
            }
            let Some(frame) = stack.last_mut() else {
                return false;
            };
            let end = self.g.disjuncts_of(frame.conj).end;
            let (trail_len, touched_len) = (frame.trail_len, frame.touched_len);
            let mut progressed = false;
            while frame.next < end {
                let d = frame.next;
                frame.next += 1;
                if self.disj_false[d] != 0 {
                    continue;
                }
                self.stats.decisions += 1;
                if self.choose(d) && self.propagate() {
                    progressed = true;
                    break;
                }
                self.undo_to(trail_len);
                self.touched.truncate(touched_len);
                // `frame` is still the top of the stack
            }
            if progressed {
                descend = true;
            } else {
                stack.pop();
                match stack.last() {
                    Some(parent) => {
                        let (t, k) = (parent.trail_len, parent.touched_len);
                        self.undo_to(t);
                        self.touched.truncate(k);
                    }
                    None => return false,
                }
                descend = false;
            }
        }
    }

    fn witness(&self) -> Witness {
        certify(self.g, self.value.iter().map(|v| *v == 1).collect())
    }
}

/// Picks a satisfied disjunct per conjunct and re-checks the assignment.
fn certify(g: &GroundFormula, values: Vec<bool>) -> Witness {
    let holds = |l: &Lit| values[lit_atom(*l)] != lit_negated(*l);
    let chosen: Vec<usize> = (0..g.conjunct_count())
        .map(|c| {
            g.disjuncts_of(c)
                .find(|d| g.disjunct_lits(*d).iter().all(holds))
                .expect("every conjunct is satisfied")
        })
        .collect();
    let union: Vec<Lit> = chosen
        .iter()
        .flat_map(|d| g.disjunct_lits(*d).iter().copied())
        .collect();
    assert!(literal_set_consistent(&union), "chosen disjuncts clash");
    assert!(g.evaluate(&values), "witness fails re-evaluation");
    Witness { values, chosen }
}

/// Chronological backtracking over one disjunct choice per conjunct.
/// Conjuncts left with a single consistent disjunct are decided without
/// branching; otherwise the open conjunct with the fewest consistent
/// disjuncts is branched on. A returned witness has been re-checked.
pub fn satisfiable(g: &GroundFormula) -> Option<Witness> {
    satisfiable_with_stats(g).0
}

pub fn satisfiable_with_stats(g: &GroundFormula) -> (Option<Witness>, SatStats) {
    let mut s = Solver::new(g);
    let sat = s.solve();
    let w = sat.then(|| s.witness());
    (w, s.stats)
}

/// Clause-learning search over the selector encoding; the default decision
/// procedure for large formulas. A returned witness has been re-checked.
pub fn satisfiable_cdcl(g: &GroundFormula) -> Option<Witness> {
    satisfiable_cdcl_with_stats(g).0
}

pub fn satisfiable_cdcl_with_stats(g: &GroundFormula) -> (Option<Witness>, SatStats) {
    let (values, stats) = cdcl_solve(g);
    (values.map(|v| certify(g, v)), stats)
}

/// Distinct projections of satisfying assignments onto `project` atoms, up
/// to `limit` of them.
pub fn all_solutions(g: &GroundFormula, project: &[usize], limit: usize) -> Vec<Vec<bool>> {
    let mut g = g.clone();
    let mut out = Vec::new();
    while out.len() < limit {
        let Some(w) = satisfiable_cdcl(&g) else {
            break;
        };
        let proj: Vec<bool> = project.iter().map(|a| w.values[*a]).collect();
        let block: Vec<[Lit; 1]> = project
            .iter()
            .zip(&proj)
            .map(|(a, v)| [lit(*a, *v)])
            .collect();
        out.push(proj);
        if block.is_empty() {
            break;
        }
        g.push_conjunct(&block);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::GroundAtom;
    use super::*;
    use crate::formula::RelName;
    use rand::{Rng, SeedableRng};

    fn atoms(n: usize) -> Vec<GroundAtom> {
        (0..n)
            .map(|i| GroundAtom {
                relation: RelName::new("P"),
                tuple: vec![i as u32],
            })
            .collect()
    }

    #[test]
    fn consistency_examples() {
        assert!(literal_set_consistent(&[lit(0, false), lit(1, true)]));
        assert!(!literal_set_consistent(&[lit(3, false), lit(3, true)]));
        assert!(literal_set_consistent(&[]));
    }

    #[test]
    fn trivial_formulas() {
        let g = GroundFormula::new(vec![]);
        assert_eq!(satisfiable(&g).unwrap().values, Vec::<bool>::new());
        let mut g = GroundFormula::new(atoms(1));
        g.push_conjunct::<[Lit; 1]>(&[]);
        assert!(satisfiable(&g).is_none());
        assert!(satisfiable_cdcl(&g).is_none());
    }

    #[test]
    fn agrees_with_truth_tables() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..300 {
            let na = rng.gen_range(1..=8);
            let mut g = GroundFormula::new(atoms(na));
            for _ in 0..rng.gen_range(0..8) {
                let ds: Vec<Vec<Lit>> = (0..rng.gen_range(0..4))
                    .map(|_| {
                        (0..rng.gen_range(1..4))
                            .map(|_| lit(rng.gen_range(0..na), rng.gen()))
                            .collect()
                    })
                    .collect();
                g.push_conjunct(&ds);
            }
            let brute = (0..1u32 << na)
                .any(|m| g.evaluate(&(0..na).map(|i| m >> i & 1 == 1).collect::<Vec<_>>()));
            assert_eq!(satisfiable(&g).is_some(), brute);
            assert_eq!(satisfiable_cdcl(&g).is_some(), brute);
        }
    }

    #[test]
    fn all_solutions_counts_models() {
        // (a ∨ b) over two atoms: 3 models
        let mut g = GroundFormula::new(atoms(2));
        g.push_conjunct(&[[lit(0, false)], [lit(1, false)]]);
        assert_eq!(all_solutions(&g, &[0, 1], 10).len(), 3);
    }
}
