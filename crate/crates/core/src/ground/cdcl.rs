//! Conflict-driven clause learning over the selector encoding of a ground
//! formula: two watched literals, first-UIP learning, activity-ordered
//! decisions, phase saving and Luby restarts.

use super::{GroundFormula, SatStats};

const UNDEF: u32 = u32::MAX;

/// Clauses in one arena: `[len, lit, lit, …]` per clause.
struct Clauses {
    arena: Vec<u32>,
}

impl Clauses {
    fn lits(&self, c: u32) -> &[u32] {
        let c = c as usize;
        let n = self.arena[c] as usize;
        &self.arena[c + 1..c + 1 + n]
    }

    fn lits_mut(&mut self, c: u32) -> &mut [u32] {
        let c = c as usize;
        let n = self.arena[c] as usize;
        &mut self.arena[c + 1..c + 1 + n]
    }

    fn push(&mut self, lits: &[u32]) -> u32 {
        let c = self.arena.len() as u32;
        self.arena.push(lits.len() as u32);
        self.arena.extend_from_slice(lits);
        c
    }
}

#[derive(Clone, Copy)]
struct Watch {
    clause: u32,
    blocker: u32,
}

/// Max-heap of variables keyed by activity.
struct Heap {
    heap: Vec<u32>,
    pos: Vec<u32>,
}

impl Heap {
    fn new(n: usize) -> Self {
        Heap {
            heap: (0..n as u32).collect(),
            pos: (0..n as u32).collect(),
        }
    }

    fn contains(&self, v: u32) -> bool {
        self.pos[v as usize] != UNDEF
    }

    fn up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let p = (i - 1) / 2;
            if act[self.heap[p] as usize] >= act[v as usize] {
                break;
            }
            self.heap[i] = self.heap[p];
            self.pos[self.heap[i] as usize] = i as u32;
            i = p;
        }
        self.heap[i] = v;
        self.pos[v as usize] = i as u32;
    }

    fn down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        loop {
            let l = 2 * i + 1;
            if l >= self.heap.len() {
                break;
            }
            let r = l + 1;
            let c =
                if r < self.heap.len() && act[self.heap[r] as usize] > act[self.heap[l] as usize] {
                    r
                } else {
                    l
                };
            if act[self.heap[c] as usize] <= act[v as usize] {
                break;
            }
            self.heap[i] = self.heap[c];
            self.pos[self.heap[i] as usize] = i as u32;
            i = c;
        }
        self.heap[i] = v;
        self.pos[v as usize] = i as u32;
    }

    fn insert(&mut self, v: u32, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.heap.push(v);
        let i = self.heap.len() - 1;
        self.up(i, act);
    }

    fn pop(&mut self, act: &[f64]) -> Option<u32> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().unwrap();
        self.pos[top as usize] = UNDEF;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last as usize] = 0;
            self.down(0, act);
        }
        Some(top)
    }
}

struct Cdcl {
    clauses: Clauses,
    watches: Vec<Vec<Watch>>,
    value: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<u32>,
    phase: Vec<bool>,
    trail: Vec<u32>,
    trail_lim: Vec<usize>,
    head: usize,
    act: Vec<f64>,
    inc: f64,
    heap: Heap,
    seen: Vec<bool>,
    stats: SatStats,
}

fn luby(mut i: u64) -> u64 {
    let mut size = 1u64;
    let mut seq = 0u32;
    while size < i + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != i {
        size = (size - 1) >> 1;
        seq -= 1;
        i %= size;
    }
    1 << seq
}

impl Cdcl {
    /// Only the first `decide` variables are ever branched on.
    fn new(vars: usize, decide: usize) -> Self {
        Cdcl {
            clauses: Clauses { arena: Vec::new() },
            watches: vec![Vec::new(); 2 * vars],
            value: vec![0; vars],
            level: vec![0; vars],
            reason: vec![UNDEF; vars],
            phase: vec![false; vars],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            head: 0,
            act: vec![0.0; vars],
            inc: 1.0,
            heap: Heap::new(decide),
            seen: vec![false; vars],
            stats: SatStats::default(),
        }
    }

    fn lit_value(&self, l: u32) -> i8 {
        let v = self.value[(l >> 1) as usize];
        if l & 1 == 1 {
            -v
        } else {
            v
        }
    }

    fn enqueue(&mut self, l: u32, reason: u32) {
        let v = (l >> 1) as usize;
        self.value[v] = if l & 1 == 1 { -1 } else { 1 };
        self.level[v] = self.trail_lim.len() as u32;
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Adds an input clause at level 0; false when the formula is refuted.
    fn add_clause(&mut self, lits: &mut Vec<u32>) -> bool {
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[0] ^ 1 == w[1]) {
            return true;
        }
        lits.retain(|l| self.lit_value(*l) != -1);
        if lits.iter().any(|l| self.lit_value(*l) == 1) {
            return true;
        }
        match lits.len() {
            0 => false,
            1 => {
                self.enqueue(lits[0], UNDEF);
                true
            }
            _ => {
                let c = self.clauses.push(lits);
                self.watch(c);
                true
            }
        }
    }

    fn watch(&mut self, c: u32) {
        let ls = self.clauses.lits(c);
        let (a, b) = (ls[0], ls[1]);
        self.watches[a as usize].push(Watch {
            clause: c,
            blocker: b,
        });
        self.watches[b as usize].push(Watch {
            clause: c,
            blocker: a,
        });
    }

    /// Returns a conflicting clause, if any.
    fn propagate(&mut self) -> Option<u32> {
        while self.head < self.trail.len() {
            let p = self.trail[self.head];
            self.head += 1;
            self.stats.propagations += 1;
            let false_lit = p ^ 1;
            let mut ws = std::mem::take(&mut self.watches[false_lit as usize]);
            let mut i = 0;
            let mut j = 0;
            let mut conflict = None;
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.lit_value(w.blocker) == 1 {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let c = w.clause;
                let ls = self.clauses.lits_mut(c);
                if ls[0] == false_lit {
                    ls.swap(0, 1);
                }
                let first = ls[0];
                let len = ls.len();
                let nw = Watch {
                    clause: c,
                    blocker: first,
                };
                if first != w.blocker && self.lit_value(first) == 1 {
                    ws[j] = nw;
                    j += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..len {
                    let l = self.clauses.lits(c)[k];
                    if self.lit_value(l) != -1 {
                        let ls = self.clauses.lits_mut(c);
                        ls.swap(1, k);
                        self.watches[l as usize].push(nw);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = nw;
                j += 1;
                if self.lit_value(first) == -1 {
                    conflict = Some(c);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, c);
                }
            }
            ws.truncate(j);
            // new watches for `false_lit` may have been pushed meanwhile
            let added = std::mem::take(&mut self.watches[false_lit as usize]);
            ws.extend(added);
            self.watches[false_lit as usize] = ws;
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    fn bump(&mut self, v: usize) {
        self.act[v] += self.inc;
        if self.act[v] > 1e100 {
            for a in &mut self.act {
                *a *= 1e-100;
            }
            self.inc *= 1e-100;
        }
        if v < self.heap.pos.len() && self.heap.contains(v as u32) {
            let i = self.heap.pos[v] as usize;
            self.heap.up(i, &self.act);
        }
    }

    /// First-UIP clause (asserting literal first) and the backjump level.
    fn analyze(&mut self, mut confl: u32) -> (Vec<u32>, u32) {
        let mut learnt = vec![0u32];
        let mut pending = 0;
        let mut p = UNDEF;
        let mut idx = self.trail.len();
        let level = self.trail_lim.len() as u32;
        loop {
            let ls: Vec<u32> = self.clauses.lits(confl).to_vec();
            for &q in ls.iter().skip(if p == UNDEF { 0 } else { 1 }) {
                let v = (q >> 1) as usize;
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump(v);
                    if self.level[v] >= level {
                        pending += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[(self.trail[idx] >> 1) as usize] {
                    break;
                }
            }
            p = self.trail[idx];
            let v = (p >> 1) as usize;
            self.seen[v] = false;
            pending -= 1;
            if pending == 0 {
                break;
            }
            confl = self.reason[v];
        }
        learnt[0] = p ^ 1;
        // drop literals implied by the rest of the clause
        let keep: Vec<bool> = learnt
            .iter()
            .enumerate()
            .map(|(i, l)| i == 0 || !self.redundant(*l))
            .collect();
        for l in &learnt {
            self.seen[(l >> 1) as usize] = false;
        }
        let mut learnt: Vec<u32> = learnt
            .into_iter()
            .zip(keep)
            .filter(|(_, k)| *k)
            .map(|(l, _)| l)
            .collect();
        let mut back = 0;
        if learnt.len() > 1 {
            let mut m = 1;
            for i in 2..learnt.len() {
                if self.level[(learnt[i] >> 1) as usize] > self.level[(learnt[m] >> 1) as usize] {
                    m = i;
                }
            }
            learnt.swap(1, m);
            back = self.level[(learnt[1] >> 1) as usize];
        }
        self.inc *= 1.0 / 0.95;
        (learnt, back)
    }

    /// Local minimization: `l` is redundant when every other literal of its
    /// reason is already in the clause (or fixed at level 0).
    fn redundant(&self, l: u32) -> bool {
        let v = (l >> 1) as usize;
        let r = self.reason[v];
        if r == UNDEF {
            return false;
        }
        self.clauses.lits(r).iter().skip(1).all(|q| {
            let w = (q >> 1) as usize;
            self.seen[w] || self.level[w] == 0
        })
    }

    fn cancel_until(&mut self, level: u32) {
        if self.trail_lim.len() as u32 <= level {
            return;
        }
        let keep = self.trail_lim[level as usize];
        for i in (keep..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = (l >> 1) as usize;
            self.phase[v] = l & 1 == 0;
            self.value[v] = 0;
            self.reason[v] = UNDEF;
            if v < self.heap.pos.len() {
                self.heap.insert(v as u32, &self.act);
            }
        }
        self.trail.truncate(keep);
        self.trail_lim.truncate(level as usize);
        self.head = keep;
    }

    fn decide(&mut self) -> Option<u32> {
        while let Some(v) = self.heap.pop(&self.act) {
            if self.value[v as usize] == 0 {
                return Some(v << 1 | u32::from(!self.phase[v as usize]));
            }
        }
        None
    }

    fn solve(&mut self) -> bool {
        if self.propagate().is_some() {
            return false;
        }
        let mut restart = 0u64;
        loop {
            let mut budget = 100 * luby(restart);
            restart += 1;
            loop {
                if let Some(confl) = self.propagate() {
                    self.stats.conflicts += 1;
                    if self.trail_lim.is_empty() {
                        return false;
                    }
                    let (learnt, back) = self.analyze(confl);
                    self.cancel_until(back);
                    if learnt.len() == 1 {
                        self.enqueue(learnt[0], UNDEF);
                    } else {
                        let c = self.clauses.push(&learnt);
                        self.watch(c);
                        self.enqueue(learnt[0], c);
                    }
                    budget = budget.saturating_sub(1);
                } else if budget == 0 {
                    self.cancel_until(0);
                    break;
                } else {
                    let Some(l) = self.decide() else {
                        return true;
                    };
                    self.stats.decisions += 1;
                    self.trail_lim.push(self.trail.len());
                    self.enqueue(l, UNDEF);
                }
            }
        }
    }
}

/// Largest number of clauses a conjunct may expand to by distribution
/// before it is encoded with selector variables instead.
const DISTRIBUTE_LIMIT: usize = 64;

fn product_size(g: &GroundFormula, c: usize) -> usize {
    g.disjuncts_of(c)
        .map(|d| g.disjunct_lits(d).len())
        .try_fold(1usize, |acc, n| {
            acc.checked_mul(n).filter(|p| *p <= DISTRIBUTE_LIMIT)
        })
        .unwrap_or(usize::MAX)
}

/// Loads `g` as clauses. Small conjuncts are distributed into plain CNF so
/// that literals shared by every disjunct propagate; larger ones give each
/// multi-literal disjunct a selector implying its literals, while a
/// single-literal disjunct is its own selector. False when `g` is refuted
/// while loading.
fn load(g: &GroundFormula) -> (Cdcl, bool) {
    let atoms = g.atom_count();
    let mut extra = 0usize;
    for c in 0..g.conjunct_count() {
        if product_size(g, c) == usize::MAX {
            extra += g
                .disjuncts_of(c)
                .filter(|d| g.disjunct_lits(*d).len() > 1)
                .count();
        }
    }
    // once every atom is assigned without conflict, each conjunct has a
    // disjunct with no false literal, so selectors never need decisions
    let mut s = Cdcl::new(atoms + extra, atoms);
    let mut next = atoms as u32;
    let mut clause = Vec::new();
    for c in 0..g.conjunct_count() {
        let ds = g.disjuncts_of(c);
        if product_size(g, c) != usize::MAX {
            let mut pick = vec![0usize; ds.len()];
            loop {
                clause.clear();
                clause.extend(ds.clone().zip(&pick).map(|(d, i)| g.disjunct_lits(d)[*i]));
                if !s.add_clause(&mut clause) {
                    return (s, false);
                }
                let mut i = 0;
                loop {
                    if i == pick.len() {
                        break;
                    }
                    pick[i] += 1;
                    if pick[i] < g.disjunct_lits(ds.start + i).len() {
                        break;
                    }
                    pick[i] = 0;
                    i += 1;
                }
                if i == pick.len() {
                    break;
                }
            }
            continue;
        }
        let mut some = Vec::new();
        for d in ds {
            let lits = g.disjunct_lits(d);
            if lits.len() == 1 {
                some.push(lits[0]);
                continue;
            }
            let sel = next << 1;
            next += 1;
            some.push(sel);
            for l in lits {
                clause.clear();
                clause.extend([sel ^ 1, *l]);
                if !s.add_clause(&mut clause) {
                    return (s, false);
                }
            }
        }
        if !s.add_clause(&mut some) {
            return (s, false);
        }
    }
    (s, true)
}

/// Atom values of a model of `g`, or `None` when it is unsatisfiable.
pub fn cdcl_solve(g: &GroundFormula) -> (Option<Vec<bool>>, SatStats) {
    let (mut s, ok) = load(g);
    if !ok || !s.solve() {
        return (None, s.stats);
    }
    let values = s.value[..g.atom_count()].iter().map(|v| *v == 1).collect();
    (Some(values), s.stats)
}
