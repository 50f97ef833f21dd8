//! Transition, frame, initial and acceptance axioms for one machine.

use crate::error::CompileError;
use crate::formula::{Formula, RelName, Var};
use crate::turing::{Machine, Move, StateId, SymbolId, Transition};

use super::grid::{Dir, Grid, Point};
use super::{label_names, names, AxiomGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Label {
    sym: SymbolId,
    head: Option<StateId>,
}

/// Labels of cells `x−1, x, x+1`; `None` where the cell is off the grid.
type Triple = [Option<Label>; 3];

/// What a head in state `q` reading `a` may do: `(write, move, next state)`.
type Moves<'a> = dyn Fn(StateId, SymbolId) -> Vec<(SymbolId, Move, StateId)> + 'a;

struct Ctx<'a> {
    tm: &'a Machine,
    grid: &'a Grid,
    sym: Vec<Vec<RelName>>,
    st: Vec<Vec<RelName>>,
    cap: usize,
    windows: usize,
}

fn and_all(parts: Vec<Formula>) -> Formula {
    Formula::and_all(parts).expect("non-empty conjunction")
}

impl Ctx<'_> {
    fn label(&self, tape: usize, l: Label, p: &Point) -> Formula {
        let s = self.grid.label(&self.sym[tape][l.sym], p);
        let h = match l.head {
            Some(q) => self.grid.label(&self.st[tape][q], p),
            None => self.no_head(tape, p),
        };
        Formula::and(s, h)
    }

    fn no_head(&self, tape: usize, p: &Point) -> Formula {
        and_all(
            self.st[tape]
                .iter()
                .map(|r| Formula::not(self.grid.label(r, p)))
                .collect(),
        )
    }

    fn any_head(&self, tape: usize, p: &Point) -> Formula {
        Formula::or_all(
            self.st[tape]
                .iter()
                .map(|r| self.grid.label(r, p))
                .collect(),
        )
        .expect("machines have states")
    }

    fn triple(&self, tape: usize, t: &Triple, p: &Point) -> Formula {
        let mut parts = Vec::new();
        if let Some(l) = t[0] {
            parts.push(self.grid.shift(Dir::Left, p, &|q| self.label(tape, l, q)));
        }
        parts.push(self.label(tape, t[1].expect("centre cell"), p));
        if let Some(l) = t[2] {
            parts.push(self.grid.shift(Dir::Right, p, &|q| self.label(tape, l, q)));
        }
        and_all(parts)
    }

    fn flag(&self, on: bool, f: Formula) -> Formula {
        if on {
            f
        } else {
            Formula::not(f)
        }
    }

    /// `⋀_φ (φ → ψ_φ)` over every locally realizable window of `tape`.
    fn windows(
        &mut self,
        tape: usize,
        p: &Point,
        head_states: &[StateId],
        moves: &Moves,
    ) -> Result<Vec<Formula>, CompileError> {
        let nsym = self.tm.symbols.len();
        let mut cell_labels: Vec<Label> = (0..nsym).map(|a| Label { sym: a, head: None }).collect();
        for a in 0..nsym {
            for q in head_states {
                cell_labels.push(Label {
                    sym: a,
                    head: Some(*q),
                });
            }
        }
        let mut out = Vec::new();
        for (first, last) in [(false, false), (true, false), (false, true), (true, true)] {
            let left: Vec<Option<Label>> = if first {
                vec![None]
            } else {
                cell_labels.iter().copied().map(Some).collect()
            };
            let right: Vec<Option<Label>> = if last {
                vec![None]
            } else {
                cell_labels.iter().copied().map(Some).collect()
            };
            for l in &left {
                for c in &cell_labels {
                    for r in &right {
                        let w: Triple = [*l, Some(*c), *r];
                        let heads = w.iter().flatten().filter(|x| x.head.is_some()).count();
                        if heads > 1 {
                            continue;
                        }
                        self.windows += 1;
                        if self.windows > self.cap {
                            return Err(CompileError::WindowCap { cap: self.cap });
                        }
                        let next = successors(&w, moves);
                        let phi = and_all(vec![
                            self.flag(first, self.grid.first_cell(p)),
                            self.flag(last, self.grid.last_cell(p)),
                            self.triple(tape, &w, p),
                        ]);
                        let psi = self.grid.shift(Dir::Down, p, &|q| {
                            Formula::or_all(next.iter().map(|t| self.triple(tape, t, q)).collect())
                                .unwrap_or_else(|| Formula::falsum(q.cell[0].clone()))
                        });
                        out.push(Formula::implies(phi, psi));
                    }
                }
            }
        }
        Ok(out)
    }
}

fn successors(w: &Triple, moves: &Moves) -> Vec<Triple> {
    let mut cleared = *w;
    for l in cleared.iter_mut().flatten() {
        l.head = None;
    }
    let mut out = Vec::new();
    let head = w
        .iter()
        .enumerate()
        .find_map(|(i, l)| l.and_then(|l| l.head.map(|q| (i, q, l.sym))));
    match head {
        Some((h, q, a)) => {
            for (write, mv, to) in moves(q, a) {
                let mut t = cleared;
                t[h].as_mut().expect("head cell").sym = write;
                let nh = h as i64 + mv.delta();
                if (0..3).contains(&nh) {
                    match t[nh as usize].as_mut() {
                        Some(cell) => cell.head = Some(to),
                        None => continue,
                    }
                }
                if !out.contains(&t) {
                    out.push(t);
                }
            }
        }
        None => {
            // no head within reach: the centre keeps its symbol and stays
            // head-free; the neighbours are settled by their own windows
            out.push([None, cleared[1], None]);
        }
    }
    out
}

/// Axioms other than order and arithmetic, tagged by group, and the number
/// of window implications.
pub(crate) fn machine_axioms(
    tm: &Machine,
    grid: &Grid,
    cap: usize,
) -> Result<(Vec<(AxiomGroup, Formula)>, usize), CompileError> {
    let (sym, st) = label_names(tm);
    let mut cx = Ctx {
        tm,
        grid,
        sym,
        st,
        cap,
        windows: 0,
    };
    let mut out = Vec::new();
    for f in transition_axioms(&mut cx)? {
        out.push((AxiomGroup::Transition, f));
    }
    for f in frame_axioms(&cx) {
        out.push((AxiomGroup::HeadUniqueness, f));
    }
    for f in initial_axioms(&cx) {
        out.push((AxiomGroup::Initial, f));
    }
    let p = grid.origin();
    out.push((
        AxiomGroup::Acceptance,
        grid.exists_point(&p, grid.label(&cx.st[0][tm.accept], &p)),
    ));
    Ok((out, cx.windows))
}

fn transition_axioms(cx: &mut Ctx) -> Result<Vec<Formula>, CompileError> {
    let tm = cx.tm;
    let grid = cx.grid;
    let p = grid.origin();
    let taus = tm.transitions_with_accept_loops();
    let all_states: Vec<StateId> = (0..tm.states.len()).collect();
    let general = |q: StateId, a: SymbolId| -> Vec<(SymbolId, Move, StateId)> {
        taus.iter()
            .filter(|t| t.from == q && t.read[0] == a)
            .map(|t| (t.write[0], t.moves[0], t.to))
            .collect()
    };
    let mut out = Vec::new();
    if tm.tapes > 1 {
        out.extend(step_axioms(cx, &taus)?);
    } else if grid.paired {
        // the row of r cannot be quantified separately within the budget,
        // so windows range over all head states at once
        let ws = cx.windows(0, &p, &all_states, &general)?;
        out.push(grid.forall_point(&p, and_all(ws)));
    } else if tm.tapes == 1 {
        for q in 0..tm.states.len() {
            let ws = cx.windows(0, &p, &[q], &general)?;
            let here = Formula::exists_all(&p.cell, grid.label(&cx.st[0][q], &p));
            out.push(Formula::forall_all(
                &p.time,
                Formula::implies(here, Formula::forall_all(&p.cell, and_all(ws))),
            ));
        }
    }
    Ok(out)
}

/// Multi-tape transitions: `STEP_j` names the transition taken at a row.
/// In the flat and lex grids it is a relation on time coordinates; in the
/// paired grid the row is not a tuple of variables, so `STEP_j` labels grid
/// points and is kept constant along each row.
fn step_axioms(cx: &mut Ctx, taus: &[Transition]) -> Result<Vec<Formula>, CompileError> {
    let grid = cx.grid;
    let p = grid.origin();
    let paired = grid.paired;
    let step = |j: usize, p: &Point| {
        let rel = RelName::new(&names::step(j));
        if paired {
            grid.label(&rel, p)
        } else {
            Formula::atom_vars(&rel, &p.time_args())
        }
    };
    let over_rows = |body: Formula| {
        if paired {
            grid.forall_point(&p, body)
        } else {
            Formula::forall_all(&p.time, body)
        }
    };
    let mut out = Vec::new();
    let last_row = if paired {
        grid.last_row(&p)
    } else {
        and_all(
            p.time
                .iter()
                .map(|y| Formula::atom(names::MAX, [y.clone()]))
                .collect(),
        )
    };
    out.push(over_rows(Formula::implies(
        Formula::not(last_row),
        Formula::or_all((0..taus.len()).map(|j| step(j, &p)).collect()).expect("accept loops"),
    )));
    let mut pairs = Vec::new();
    for j in 0..taus.len() {
        for k in j + 1..taus.len() {
            pairs.push(Formula::not(Formula::and(step(j, &p), step(k, &p))));
        }
    }
    if let Some(f) = Formula::and_all(pairs) {
        out.push(over_rows(f));
    }
    if paired {
        let same: Vec<Formula> = (0..taus.len())
            .map(|j| Formula::iff(step(j, &p), grid.shift(Dir::Right, &p, &|q| step(j, q))))
            .collect();
        out.push(grid.forall_point(
            &p,
            Formula::implies(Formula::not(grid.last_cell(&p)), and_all(same)),
        ));
    }
    let all_states: Vec<StateId> = (0..cx.tm.states.len()).collect();
    for (j, tau) in taus.iter().enumerate() {
        if !paired {
            let applicable = and_all(
                (0..cx.tm.tapes)
                    .map(|i| {
                        Formula::exists_all(
                            &p.cell,
                            Formula::and(
                                grid.label(&cx.st[i][tau.from], &p),
                                grid.label(&cx.sym[i][tau.read[i]], &p),
                            ),
                        )
                    })
                    .collect(),
            );
            out.push(over_rows(Formula::implies(step(j, &p), applicable)));
        }
        // without the applicability axiom, a head in another state or on
        // another symbol has no successor under STEP_j
        let head_states = if paired {
            &all_states[..]
        } else {
            &[tau.from][..]
        };
        let mut ws = Vec::new();
        for i in 0..cx.tm.tapes {
            let moves = |q: StateId, a: SymbolId| {
                if q == tau.from && a == tau.read[i] {
                    vec![(tau.write[i], tau.moves[i], tau.to)]
                } else {
                    Vec::new()
                }
            };
            ws.extend(cx.windows(i, &p, head_states, &moves)?);
        }
        out.push(if paired {
            grid.forall_point(&p, Formula::implies(step(j, &p), and_all(ws)))
        } else {
            Formula::forall_all(
                &p.time,
                Formula::implies(step(j, &p), Formula::forall_all(&p.cell, and_all(ws))),
            )
        });
    }
    Ok(out)
}

fn frame_axioms(cx: &Ctx) -> Vec<Formula> {
    let grid = cx.grid;
    let p = grid.origin();
    let mut out = Vec::new();
    for tape in 0..cx.tm.tapes {
        let syms: Vec<Formula> = cx.sym[tape].iter().map(|r| grid.label(r, &p)).collect();
        let mut one = vec![Formula::or_all(syms.clone()).expect("machines have symbols")];
        for a in 0..syms.len() {
            for b in a + 1..syms.len() {
                one.push(Formula::not(Formula::and(syms[a].clone(), syms[b].clone())));
            }
        }
        out.push(grid.forall_point(&p, and_all(one)));
        let sts: Vec<Formula> = cx.st[tape].iter().map(|r| grid.label(r, &p)).collect();
        let mut pairs = Vec::new();
        for a in 0..sts.len() {
            for b in a + 1..sts.len() {
                pairs.push(Formula::not(Formula::and(sts[a].clone(), sts[b].clone())));
            }
        }
        if let Some(f) = Formula::and_all(pairs) {
            out.push(grid.forall_point(&p, f));
        }
        if !grid.paired {
            out.push(Formula::forall_all(
                &p.time,
                Formula::exists_all(&p.cell, cx.any_head(tape, &p)),
            ));
        }
        if grid.digits == 1 && !grid.paired {
            // ∀y∀x(head(x,y) → ∀z(head(z,y) → z = x))
            let z = grid.spare(&p.vars());
            let mut other = p.clone();
            other.cell[0] = z.clone();
            out.push(Formula::forall_all(
                &p.vars(),
                Formula::implies(
                    cx.any_head(tape, &p),
                    Formula::forall(
                        z.clone(),
                        Formula::implies(
                            cx.any_head(tape, &other),
                            Formula::eq(z, p.cell[0].clone()),
                        ),
                    ),
                ),
            ));
        }
    }
    out
}

/// `body(i, spare)` at the input bit index `i` of the cell of `p`; false
/// when that index is not below `N`.
fn at_bit_index(grid: &Grid, p: &Point, body: &dyn Fn(&Var, &Var) -> Formula) -> Formula {
    let mut parts: Vec<Formula> = p.cell[1..]
        .iter()
        .map(|d| Formula::atom(names::MIN, [d.clone()]))
        .collect();
    match &p.pair {
        None => {
            let s = grid.spare(&p.vars());
            parts.push(body(&p.cell[0], &s));
        }
        Some(r) => {
            // i = x1·R + π_x(r)
            let (a, b) = (p.time[0].clone(), p.time[1].clone());
            let c = grid.spare(&p.vars());
            let x1 = p.cell[0].clone();
            let inner = Formula::exists(
                c.clone(),
                Formula::and(
                    Formula::atom(names::ADD, [b.clone(), a.clone(), c.clone()]),
                    body(&c, &a),
                ),
            );
            let inner = Formula::exists(
                b.clone(),
                Formula::and(Formula::atom(names::MUL, [x1, c.clone(), b.clone()]), inner),
            );
            let inner = Formula::exists(
                c.clone(),
                Formula::and(Formula::atom(names::IS_R, [c.clone()]), inner),
            );
            parts.push(Formula::exists(
                a.clone(),
                Formula::exists(
                    b.clone(),
                    Formula::and(
                        Formula::atom(names::PROJECT, [r.clone(), a.clone(), b.clone()]),
                        inner,
                    ),
                ),
            ));
        }
    }
    and_all(parts)
}

fn initial_axioms(cx: &Ctx) -> Vec<Formula> {
    let tm = cx.tm;
    let grid = cx.grid;
    let p = grid.origin();
    let input = |i: &Var| Formula::atom(names::INPUT, [i.clone()]);
    let one = at_bit_index(grid, &p, &|i, _| input(i));
    let zero = at_bit_index(grid, &p, &|i, s| {
        Formula::and(
            Formula::not(input(i)),
            Formula::exists(
                s.clone(),
                Formula::and(Formula::atom(names::LT, [i.clone(), s.clone()]), input(s)),
            ),
        )
    });
    let mut out = Vec::new();
    for tape in 0..tm.tapes {
        let sym = |a: SymbolId| grid.label(&cx.sym[tape][a], &p);
        let mut parts = Vec::new();
        if tape == 0 {
            parts.push(Formula::iff(sym(tm.one), one.clone()));
            parts.push(Formula::iff(sym(tm.zero), zero.clone()));
            parts.push(Formula::iff(
                sym(tm.blank),
                Formula::and(Formula::not(one.clone()), Formula::not(zero.clone())),
            ));
        } else {
            parts.push(sym(tm.blank));
        }
        parts.push(Formula::iff(
            grid.label(&cx.st[tape][tm.start], &p),
            grid.first_cell(&p),
        ));
        for q in 0..tm.states.len() {
            if q != tm.start {
                parts.push(Formula::not(grid.label(&cx.st[tape][q], &p)));
            }
        }
        out.push(grid.forall_point(&p, Formula::implies(grid.first_row(&p), and_all(parts))));
    }
    out
}
