//! Nondeterministic multi-tape Turing machines and a bounded simulator.
//!
//! Conventions: the input `BINARY(N)` is written least significant bit first
//! on tape 0 starting at cell 0 (unless the machine declares `msb-first`),
//! every head starts at cell 0, and moving left from cell 0 kills the branch.
//! A time bound `T` admits runs with at most `T - 1` steps, i.e. `T`
//! configurations, matching a space-time diagram with `T` rows. A space
//! bound `S` admits head positions `0..S`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write;
use std::time::Instant;

use crate::error::TmError;
use crate::model_eval::{Method, SpectrumPoint, SpectrumReport};

pub type StateId = usize;
pub type SymbolId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    Left,
    Right,
    Stay,
}

impl Move {
    pub fn delta(self) -> i64 {
        match self {
            Move::Left => -1,
            Move::Right => 1,
            Move::Stay => 0,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Move::Left => 'L',
            Move::Right => 'R',
            Move::Stay => 'S',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum InputOrder {
    #[default]
    LsbFirst,
    MsbFirst,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub from: StateId,
    pub read: Vec<SymbolId>,
    pub to: StateId,
    pub write: Vec<SymbolId>,
    pub moves: Vec<Move>,
}

/// A validated machine description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Machine {
    pub tapes: usize,
    pub states: Vec<String>,
    pub symbols: Vec<String>,
    pub start: StateId,
    pub accept: StateId,
    pub blank: SymbolId,
    pub zero: SymbolId,
    pub one: SymbolId,
    pub input_order: InputOrder,
    pub transitions: Vec<Transition>,
}

impl Machine {
    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q]
    }

    pub fn symbol_name(&self, a: SymbolId) -> &str {
        &self.symbols[a]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    pub fn symbol_id(&self, name: &str) -> Option<SymbolId> {
        self.symbols.iter().position(|s| s == name)
    }

    /// Checks the structural invariants: indices in range, tuple widths, and
    /// an absorbing accept state (only self-loops that stay put).
    pub fn validate(&self) -> Result<(), TmError> {
        if self.tapes == 0 {
            return Err(TmError::Invalid("at least one tape is required".into()));
        }
        let nq = self.states.len();
        let ns = self.symbols.len();
        for q in [self.start, self.accept] {
            if q >= nq {
                return Err(TmError::UndeclaredState(format!("#{q}")));
            }
        }
        for a in [self.blank, self.zero, self.one] {
            if a >= ns {
                return Err(TmError::UndeclaredSymbol(format!("#{a}")));
            }
        }
        if self.blank == self.zero || self.blank == self.one || self.zero == self.one {
            return Err(TmError::Invalid(
                "blank, 0 and 1 must be distinct symbols".into(),
            ));
        }
        let mut names = HashSet::new();
        for s in &self.states {
            if !names.insert(s) {
                return Err(TmError::Invalid(format!("state `{s}` declared twice")));
            }
        }
        let mut names = HashSet::new();
        for s in &self.symbols {
            if !names.insert(s) {
                return Err(TmError::Invalid(format!("symbol `{s}` declared twice")));
            }
        }
        for t in &self.transitions {
            for len in [t.read.len(), t.write.len(), t.moves.len()] {
                if len != self.tapes {
                    return Err(TmError::TapeCountMismatch {
                        tapes: self.tapes,
                        found: len,
                    });
                }
            }
            if t.from >= nq || t.to >= nq {
                return Err(TmError::UndeclaredState(format!("#{}", t.from.max(t.to))));
            }
            if let Some(a) = t.read.iter().chain(&t.write).find(|a| **a >= ns) {
                return Err(TmError::UndeclaredSymbol(format!("#{a}")));
            }
            if t.from == self.accept
                && (t.to != self.accept || t.moves.iter().any(|m| *m != Move::Stay))
            {
                return Err(TmError::AcceptNotAbsorbing(
                    self.states[self.accept].clone(),
                    format!(
                        "transition to `{}` with moves {}",
                        self.states[t.to],
                        t.moves.iter().map(|m| m.letter()).collect::<String>()
                    ),
                ));
            }
        }
        Ok(())
    }

    /// Transitions from `state` reading `read`.
    pub fn applicable<'a>(
        &'a self,
        state: StateId,
        read: &'a [SymbolId],
    ) -> impl Iterator<Item = &'a Transition> + 'a {
        self.transitions
            .iter()
            .filter(move |t| t.from == state && t.read == read)
    }

    /// Transitions plus identity self-loops in the accept state, one per read
    /// tuple. Runs that reach acceptance can then be padded to any length.
    pub fn transitions_with_accept_loops(&self) -> Vec<Transition> {
        let mut out = self.transitions.clone();
        let ns = self.symbols.len();
        let mut read = vec![0; self.tapes];
        loop {
            let t = Transition {
                from: self.accept,
                read: read.clone(),
                to: self.accept,
                write: read.clone(),
                moves: vec![Move::Stay; self.tapes],
            };
            if !out.contains(&t) {
                out.push(t);
            }
            // odometer over read tuples
            let mut i = 0;
            loop {
                if i == self.tapes {
                    return out;
                }
                read[i] += 1;
                if read[i] < ns {
                    break;
                }
                read[i] = 0;
                i += 1;
            }
        }
    }

    /// Initial tape contents for `input` (bits, least significant first).
    pub fn initial_configuration(&self, input: &[u8]) -> Configuration {
        let mut tape0: Vec<SymbolId> = input
            .iter()
            .map(|b| if *b == 0 { self.zero } else { self.one })
            .collect();
        if self.input_order == InputOrder::MsbFirst {
            tape0.reverse();
        }
        let mut tapes = vec![Vec::new(); self.tapes];
        tapes[0] = tape0;
        let mut c = Configuration {
            state: self.start,
            heads: vec![0; self.tapes],
            tapes,
        };
        c.normalize(self.blank);
        c
    }
}

/// A machine configuration. Tape contents are stored without trailing blanks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub state: StateId,
    pub heads: Vec<usize>,
    pub tapes: Vec<Vec<SymbolId>>,
}

impl Configuration {
    pub fn read(&self, tape: usize, cell: usize, blank: SymbolId) -> SymbolId {
        self.tapes[tape].get(cell).copied().unwrap_or(blank)
    }

    fn normalize(&mut self, blank: SymbolId) {
        for t in &mut self.tapes {
            while t.last() == Some(&blank) {
                t.pop();
            }
        }
    }

    fn scanned(&self, blank: SymbolId) -> Vec<SymbolId> {
        (0..self.heads.len())
            .map(|i| self.read(i, self.heads[i], blank))
            .collect()
    }

    /// Applies `t`; `None` when a head would leave the tape to the left.
    pub fn step(&self, t: &Transition, blank: SymbolId) -> Option<Configuration> {
        let mut next = self.clone();
        next.state = t.to;
        for i in 0..self.heads.len() {
            let h = self.heads[i];
            let tape = &mut next.tapes[i];
            if tape.len() <= h {
                tape.resize(h + 1, blank);
            }
            tape[h] = t.write[i];
            let nh = h as i64 + t.moves[i].delta();
            if nh < 0 {
                return None;
            }
            next.heads[i] = nh as usize;
        }
        next.normalize(blank);
        Some(next)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Accepts,
    Rejects,
    BoundExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunVerdict {
    pub outcome: Outcome,
    /// Steps of the accepting run, or the deepest level explored otherwise.
    pub steps: usize,
    /// Largest head position reached, plus one.
    pub cells: usize,
    pub run: Option<Vec<Configuration>>,
    pub configurations: usize,
}

impl RunVerdict {
    pub fn accepts(&self) -> bool {
        self.outcome == Outcome::Accepts
    }
}

pub const DEFAULT_CONFIGURATION_CAP: usize = 2_000_000;

/// Bits of `n`, least significant first. `n >= 1`.
pub fn binary_of(n: u64) -> Vec<u8> {
    assert!(n >= 1, "binary_of needs a positive integer");
    let mut out = Vec::new();
    let mut m = n;
    while m > 0 {
        out.push((m & 1) as u8);
        m >>= 1;
    }
    out
}

/// Breadth-first exploration of the configuration graph with deduplication.
pub fn simulate(
    tm: &Machine,
    input: &[u8],
    time_bound: usize,
    space_bound: usize,
    config_cap: usize,
) -> Result<RunVerdict, TmError> {
    assert!(
        time_bound >= 1 && space_bound >= 1,
        "bounds must be positive"
    );
    let start = tm.initial_configuration(input);
    let mut nodes: Vec<(Configuration, usize, Option<usize>)> = vec![(start.clone(), 0, None)];
    let mut index: HashMap<Configuration, usize> = HashMap::new();
    index.insert(start, 0);
    let mut queue = VecDeque::from([0usize]);
    let mut bound_hit = false;
    let mut max_depth = 0;
    let mut cells = 1;

    while let Some(id) = queue.pop_front() {
        let (conf, depth, _) = nodes[id].clone();
        max_depth = max_depth.max(depth);
        cells = cells.max(conf.heads.iter().max().copied().unwrap_or(0) + 1);
        if conf.state == tm.accept {
            let mut run = Vec::new();
            let mut cur = Some(id);
            while let Some(i) = cur {
                run.push(nodes[i].0.clone());
                cur = nodes[i].2;
            }
            run.reverse();
            return Ok(RunVerdict {
                outcome: Outcome::Accepts,
                steps: depth,
                cells,
                run: Some(run),
                configurations: nodes.len(),
            });
        }
        let read = conf.scanned(tm.blank);
        for t in tm.applicable(conf.state, &read) {
            let Some(next) = conf.step(t, tm.blank) else {
                continue;
            };
            if depth + 1 >= time_bound || next.heads.iter().any(|h| *h >= space_bound) {
                bound_hit = true;
                continue;
            }
            if index.contains_key(&next) {
                continue;
            }
            if nodes.len() >= config_cap {
                return Err(TmError::ConfigurationCap(config_cap));
            }
            let nid = nodes.len();
            index.insert(next.clone(), nid);
            nodes.push((next, depth + 1, Some(id)));
            queue.push_back(nid);
        }
    }
    Ok(RunVerdict {
        outcome: if bound_hit {
            Outcome::BoundExceeded
        } else {
            Outcome::Rejects
        },
        steps: max_depth,
        cells,
        run: None,
        configurations: nodes.len(),
    })
}

/// Depth-first search with memoization of the largest remaining budget for
/// which a configuration is known not to accept. Independent of [`simulate`].
pub fn accepts_dfs(tm: &Machine, input: &[u8], time_bound: usize, space_bound: usize) -> bool {
    fn go(
        tm: &Machine,
        c: &Configuration,
        remaining: usize,
        space: usize,
        memo: &mut HashMap<Configuration, usize>,
    ) -> bool {
        if c.state == tm.accept {
            return true;
        }
        if remaining == 0 || memo.get(c).is_some_and(|r| *r >= remaining) {
            return false;
        }
        let read = c.scanned(tm.blank);
        for t in tm.applicable(c.state, &read) {
            if let Some(n) = c.step(t, tm.blank) {
                if n.heads.iter().all(|h| *h < space) && go(tm, &n, remaining - 1, space, memo) {
                    return true;
                }
            }
        }
        memo.insert(c.clone(), remaining);
        false
    }
    let start = tm.initial_configuration(input);
    go(tm, &start, time_bound - 1, space_bound, &mut HashMap::new())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    Linear,
    Poly(u32),
    PolyHalf(u32),
}

impl BoundKind {
    /// `(time, space)` bounds for input `n`.
    pub fn bounds(self, n: u64) -> (usize, usize) {
        let b = match self {
            BoundKind::Linear => n,
            BoundKind::Poly(k) => n.pow(k),
            BoundKind::PolyHalf(k) => n.pow(k) * isqrt(n - 1),
        };
        (b as usize, b as usize)
    }
}

pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

pub fn run_binary(
    tm: &Machine,
    n: u64,
    bound: BoundKind,
    config_cap: usize,
) -> Result<RunVerdict, TmError> {
    let (t, s) = bound.bounds(n);
    simulate(tm, &binary_of(n), t.max(1), s.max(1), config_cap)
}

/// Membership of `n` in the machine's set. Bound-exceeded counts as rejection.
pub fn accepts_binary(tm: &Machine, n: u64, bound: BoundKind) -> Result<bool, TmError> {
    Ok(run_binary(tm, n, bound, DEFAULT_CONFIGURATION_CAP)?.accepts())
}

pub fn spectrum_oracle(
    tm: &Machine,
    range: std::ops::RangeInclusive<u64>,
    bound: BoundKind,
    config_cap: usize,
) -> Result<SpectrumReport, TmError> {
    let mut points = Vec::new();
    for n in range {
        let t0 = Instant::now();
        let v = run_binary(tm, n, bound, config_cap)?;
        points.push(SpectrumPoint {
            n: n as usize,
            member: v.accepts(),
            note: (v.outcome == Outcome::BoundExceeded).then(|| "bound-exceeded".to_string()),
            elapsed: t0.elapsed(),
        });
    }
    Ok(SpectrumReport {
        sentence: "machine".to_string(),
        method: Method::Simulation,
        points,
    })
}

/// Step table of a run, one configuration per line.
pub fn format_run(tm: &Machine, run: &[Configuration]) -> String {
    let mut out = String::new();
    for (step, c) in run.iter().enumerate() {
        write!(out, "{step:>4} {:<8}", tm.state_name(c.state)).unwrap();
        for (i, h) in c.heads.iter().enumerate() {
            let width = (c.tapes[i].len()).max(h + 1);
            out.push_str(" |");
            for cell in 0..width {
                let s = tm.symbol_name(c.read(i, cell, tm.blank));
                if cell == *h {
                    write!(out, "[{s}]").unwrap();
                } else {
                    write!(out, " {s} ").unwrap();
                }
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn machine(transitions: Vec<Transition>, states: &[&str]) -> Machine {
        Machine {
            tapes: 1,
            states: states.iter().map(|s| s.to_string()).collect(),
            symbols: vec!["0".into(), "1".into(), "_".into()],
            start: 0,
            accept: 1,
            blank: 2,
            zero: 0,
            one: 1,
            input_order: InputOrder::LsbFirst,
            transitions,
        }
    }

    fn t(from: usize, read: usize, to: usize, write: usize, m: Move) -> Transition {
        Transition {
            from,
            read: vec![read],
            to,
            write: vec![write],
            moves: vec![m],
        }
    }

    fn parity() -> Machine {
        machine(
            vec![t(0, 0, 1, 0, Move::Stay), t(0, 1, 2, 1, Move::Stay)],
            &["q0", "qa", "qr"],
        )
    }

    #[test]
    fn binary_examples() {
        assert_eq!(binary_of(1), vec![1]);
        assert_eq!(binary_of(6), vec![0, 1, 1]);
        assert_eq!(binary_of(13), vec![1, 0, 1, 1]);
    }

    #[test]
    fn immediate_accept_and_stuck_start() {
        let mut m = machine(vec![], &["q0", "qa"]);
        m.start = 1;
        let v = simulate(&m, &[1, 0, 1], 1, 1, 100).unwrap();
        assert_eq!(v.outcome, Outcome::Accepts);
        assert_eq!(v.steps, 0);

        let stuck = machine(vec![], &["q0", "qa"]);
        assert_eq!(
            simulate(&stuck, &[1], 5, 5, 100).unwrap().outcome,
            Outcome::Rejects
        );
    }

    #[test]
    fn parity_machine_decides_evenness() {
        let m = parity();
        for n in 2..=32u64 {
            assert_eq!(
                accepts_binary(&m, n, BoundKind::Linear).unwrap(),
                n % 2 == 0,
                "n={n}"
            );
        }
        assert!(!accepts_binary(&m, 7, BoundKind::Linear).unwrap());
    }

    #[test]
    fn bounds_examples() {
        assert_eq!(BoundKind::PolyHalf(2).bounds(10), (300, 300));
        assert_eq!(BoundKind::Poly(2).bounds(5), (25, 25));
        assert_eq!(BoundKind::Linear.bounds(5), (5, 5));
    }

    #[test]
    fn time_bound_counts_rows() {
        // walk right three times then accept
        let m = machine(
            vec![
                t(0, 1, 3, 1, Move::Right),
                t(3, 0, 4, 0, Move::Right),
                t(4, 1, 1, 1, Move::Stay),
            ],
            &["q0", "qa", "qr", "q1", "q2"],
        );
        // input 5 = 101: q0 -R-> q1 -R-> q2 -S-> qa: 3 steps, 4 rows
        assert_eq!(
            simulate(&m, &[1, 0, 1], 4, 5, 100).unwrap().outcome,
            Outcome::Accepts
        );
        assert_eq!(
            simulate(&m, &[1, 0, 1], 3, 5, 100).unwrap().outcome,
            Outcome::BoundExceeded
        );
        assert_eq!(
            simulate(&m, &[1, 0, 1], 4, 2, 100).unwrap().outcome,
            Outcome::BoundExceeded
        );
    }

    #[test]
    fn accept_must_be_absorbing() {
        let m = machine(vec![t(1, 0, 1, 0, Move::Right)], &["q0", "qa"]);
        assert!(matches!(m.validate(), Err(TmError::AcceptNotAbsorbing(..))));
        let ok = machine(vec![t(1, 0, 1, 0, Move::Stay)], &["q0", "qa"]);
        assert!(ok.validate().is_ok());
    }

    #[test]
    fn accepting_run_replays() {
        let m = parity();
        let v = run_binary(&m, 10, BoundKind::Linear, 1000).unwrap();
        let run = v.run.unwrap();
        assert_eq!(run.len(), 2);
        for w in run.windows(2) {
            let read = w[0].scanned(m.blank);
            assert!(m
                .applicable(w[0].state, &read)
                .any(|t| w[0].step(t, m.blank).as_ref() == Some(&w[1])));
        }
        assert_eq!(run.last().unwrap().state, m.accept);
    }

    #[test]
    fn isqrt_matches_floor_sqrt() {
        for n in 0..2000u64 {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
        }
    }
}
