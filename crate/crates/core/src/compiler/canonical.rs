//! Canonical interpretations of the order and arithmetic relations, and the
//! encoding of machine runs as grid models.

use crate::error::{CompileError, LogicError};
use crate::formula::{RelName, Vocabulary};
use crate::structure::{Element, FiniteStructure};
use crate::turing::{isqrt, Configuration, Machine};

use super::{label_names, names, CompilationReport, Construction};

/// Every relation with a fixed meaning, in the order they are filled.
pub const FIXED: [&str; 20] = [
    names::LT,
    names::SUC,
    names::MIN,
    names::MAX,
    names::DOUBLE,
    names::HALF,
    names::DIV,
    names::BIT,
    names::INPUT,
    names::ADD,
    names::MUL,
    names::IS_R,
    names::LESS_R,
    names::LESS_R2,
    names::PROJECT,
    names::RCYC,
    names::SUCX,
    names::SUCY,
    names::MINX,
    names::MINY,
];

fn holds(rel: &str, n: usize, t: &[usize]) -> bool {
    let r = isqrt(n.saturating_sub(1) as u64) as usize;
    let m = n - 1;
    match (rel, t) {
        (names::LT, [x, y]) => x < y,
        (names::SUC, [x, y]) => x + 1 == *y,
        (names::MIN, [x]) => *x == 0,
        (names::MAX, [x]) => *x == m,
        (names::DOUBLE, [x, y]) => *x == 2 * y,
        (names::HALF, [x, y]) => *x == y / 2,
        (names::DIV, [x, y]) => *x == m.checked_shr(*y as u32).unwrap_or(0),
        (names::BIT, [y]) => m.checked_shr(*y as u32).unwrap_or(0) & 1 == 1,
        (names::INPUT, [y]) => n.checked_shr(*y as u32).unwrap_or(0) & 1 == 1,
        (names::ADD, [x, y, z]) => x + y == *z,
        (names::MUL, [x, y, z]) => x * y == *z,
        (names::IS_R, [x]) => *x == r,
        (names::LESS_R, [x]) => *x < r,
        (names::LESS_R2, [x]) => *x < r * r,
        (names::PROJECT, [q, x, y]) => *q < r * r && *x == q % r && *y == q / r,
        (names::RCYC, [x, y]) => *x < r && *y == (x + 1) % r,
        (names::SUCX, [a, b]) => {
            *a < r * r && *b < r * r && a / r == b / r && b % r == (a % r + 1) % r
        }
        (names::SUCY, [a, b]) => {
            *a < r * r && *b < r * r && a % r == b % r && b / r == (a / r + 1) % r
        }
        (names::MINX, [a]) => *a < r * r && a % r == 0,
        (names::MINY, [a]) => *a < r * r && a / r == 0,
        _ => unreachable!("{rel} with arity {}", t.len()),
    }
}

/// The relations of `vocab` named in `relations`, with their canonical
/// interpretation on `[n]`.
pub fn canonical_structure(
    vocab: &Vocabulary,
    n: usize,
    relations: &[&str],
) -> Result<FiniteStructure, LogicError> {
    let mut v = Vocabulary::new();
    for (r, a) in vocab.iter() {
        if relations.contains(&r.as_str()) && FIXED.contains(&r.as_str()) {
            v.add(r.clone(), a)?;
        }
    }
    let mut s = FiniteStructure::new(v.clone(), n)?;
    fill(&mut s, &v, n)?;
    Ok(s)
}

fn fill(s: &mut FiniteStructure, v: &Vocabulary, n: usize) -> Result<(), LogicError> {
    for (r, arity) in v.iter() {
        if !FIXED.contains(&r.as_str()) {
            continue;
        }
        let mut t = vec![0usize; arity];
        loop {
            if holds(r.as_str(), n, &t) {
                let e: Vec<Element> = t.iter().map(|x| *x as Element).collect();
                s.set(r, &e, true)?;
            }
            let mut i = arity;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                t[i] += 1;
                if t[i] < n {
                    break;
                }
                t[i] = 0;
            }
            if t.iter().all(|x| *x == 0) {
                break;
            }
        }
    }
    Ok(())
}

/// The order relations `LT`, `SUC`, `MIN`, `MAX` of `vocab`.
pub fn order_structure(vocab: &Vocabulary, n: usize) -> Result<FiniteStructure, LogicError> {
    canonical_structure(vocab, n, &names::ORDER)
}

/// Width and height of the grid at size `n`.
pub fn grid_side(construction: Construction, n: usize) -> usize {
    let (_, s) = construction.bound_kind().bounds(n as u64);
    s
}

fn digits(mut v: usize, n: usize, k: usize) -> Vec<Element> {
    let mut out = vec![0; k];
    for d in out.iter_mut().rev() {
        *d = (v % n) as Element;
        v /= n;
    }
    out
}

/// Relation arguments of grid point `(cell, time)`.
pub fn point_args(construction: Construction, n: usize, cell: usize, time: usize) -> Vec<Element> {
    match construction {
        Construction::ThreeVar => vec![cell as Element, time as Element],
        Construction::TwoKPlus1(k) => {
            let mut a = digits(cell, n, k);
            a.extend(digits(time, n, k));
            a
        }
        Construction::TwoKPlus2(k) => {
            let r = isqrt(n as u64 - 1) as usize;
            let mut a = digits(cell / r, n, k);
            a.extend(digits(time / r, n, k));
            a.push((cell % r + (time % r) * r) as Element);
            a
        }
    }
}

/// The model of the compiled sentence described by an accepting `run` on
/// input `n`: canonical arithmetic, and row `t` of the grid showing
/// configuration `t` (the last configuration repeats once the run ends).
pub fn encode_run(
    report: &CompilationReport,
    tm: &Machine,
    n: usize,
    run: &[Configuration],
) -> Result<FiniteStructure, CompileError> {
    let mut v = Vocabulary::new();
    for (r, a) in report.sentence.relations() {
        v.add(r, a)?;
    }
    let mut s = FiniteStructure::new(v.clone(), n)?;
    fill(&mut s, &v, n)?;
    let c = report.construction;
    let side = grid_side(c, n);
    if run.is_empty() || run.len() > side {
        return Err(CompileError::Unsupported(format!(
            "run of {} configurations on a grid with {side} rows",
            run.len()
        )));
    }
    let (sym, st) = label_names(tm);
    let taus = tm.transitions_with_accept_loops();
    for time in 0..side {
        let conf = &run[time.min(run.len() - 1)];
        for cell in 0..side {
            let args = point_args(c, n, cell, time);
            for tape in 0..tm.tapes {
                s.set(&sym[tape][conf.read(tape, cell, tm.blank)], &args, true)?;
                if conf.heads[tape] == cell {
                    s.set(&st[tape][conf.state], &args, true)?;
                }
            }
        }
        if tm.tapes > 1 && time + 1 < side {
            let next = &run[(time + 1).min(run.len() - 1)];
            let read: Vec<usize> = (0..tm.tapes)
                .map(|i| conf.read(i, conf.heads[i], tm.blank))
                .collect();
            let j = taus
                .iter()
                .position(|t| {
                    t.from == conf.state
                        && t.read == read
                        && conf.step(t, tm.blank).as_ref() == Some(next)
                })
                .ok_or_else(|| CompileError::Unsupported("run is not a machine run".into()))?;
            let rel = RelName::new(&names::step(j));
            if let Construction::TwoKPlus2(_) = c {
                for cell in 0..side {
                    s.set(&rel, &point_args(c, n, cell, time), true)?;
                }
            } else {
                let targs = point_args(c, n, 0, time);
                s.set(&rel, &targs[targs.len() / 2..], true)?;
            }
        }
    }
    Ok(s)
}
