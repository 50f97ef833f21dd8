//! Grid points and shift operators.
//!
//! A grid point is a tuple of variables: the cell coordinate as `k` digits,
//! the time coordinate as `k` digits, and for the paired construction an
//! extra variable `r` whose projections refine both coordinates. Digits are
//! stored least significant first. Formulas over points are built by
//! closures so that a shift can re-instantiate its argument at a point
//! whose variables were rebound.

use crate::formula::{Formula, RelName, Var};

use super::names;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point {
    pub cell: Vec<Var>,
    pub time: Vec<Var>,
    pub pair: Option<Var>,
}

impl Point {
    pub fn vars(&self) -> Vec<Var> {
        let mut v: Vec<Var> = self.cell.iter().chain(&self.time).cloned().collect();
        v.extend(self.pair.clone());
        v
    }

    /// Relation arguments: cell digits, then time digits (most significant
    /// first), then the pair variable.
    pub fn args(&self) -> Vec<Var> {
        let mut v: Vec<Var> = self.cell.iter().rev().cloned().collect();
        v.extend(self.time.iter().rev().cloned());
        v.extend(self.pair.clone());
        v
    }

    pub fn time_args(&self) -> Vec<Var> {
        self.time.iter().rev().cloned().collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dir {
    /// next cell
    Right,
    /// previous cell
    Left,
    /// next time step
    Down,
}

/// The variable pool and coordinate layout of one construction.
#[derive(Clone, Debug)]
pub struct Grid {
    pub digits: usize,
    pub paired: bool,
    pub pool: Vec<Var>,
}

impl Grid {
    /// Flat grid over `{x, y, z}`.
    pub fn flat() -> Self {
        Grid {
            digits: 1,
            paired: false,
            pool: ["x", "y", "z"].iter().map(|s| Var::new(s)).collect(),
        }
    }

    /// `[N]^k × [N]^k` over `x1…xk, y1…yk, z`.
    pub fn lex(k: usize) -> Self {
        assert!(k >= 1);
        let mut pool: Vec<Var> = (1..=k).map(|i| Var::new(&format!("x{i}"))).collect();
        pool.extend((1..=k).map(|i| Var::new(&format!("y{i}"))));
        pool.push(Var::new("z"));
        Grid {
            digits: k,
            paired: false,
            pool,
        }
    }

    /// `[N]^k × [N]^k × [N]` over `x1…xk, y1…yk, r, z`.
    pub fn paired(k: usize) -> Self {
        let mut g = Grid::lex(k);
        g.pool.insert(2 * k, Var::new("r"));
        g.paired = true;
        g
    }

    pub fn origin(&self) -> Point {
        let k = self.digits;
        Point {
            cell: self.pool[..k].to_vec(),
            time: self.pool[k..2 * k].to_vec(),
            pair: self.paired.then(|| self.pool[2 * k].clone()),
        }
    }

    /// First pool variable outside `avoid`.
    pub fn spare(&self, avoid: &[Var]) -> Var {
        self.pool
            .iter()
            .find(|v| !avoid.contains(v))
            .cloned()
            .expect("variable pool has a spare")
    }

    pub fn label(&self, rel: &RelName, p: &Point) -> Formula {
        Formula::atom_vars(rel, &p.args())
    }

    /// `φ` read at the neighbouring point in direction `dir`. Vacuously
    /// true where that neighbour does not exist.
    pub fn shift(&self, dir: Dir, p: &Point, phi: &dyn Fn(&Point) -> Formula) -> Formula {
        if self.paired {
            self.shift_paired(dir, p, phi)
        } else {
            self.shift_digits(dir, p, phi)
        }
    }

    /// Carry-propagating shift of the cell (or time) digits.
    fn shift_digits(&self, dir: Dir, p: &Point, phi: &dyn Fn(&Point) -> Formula) -> Formula {
        let digits = match dir {
            Dir::Right | Dir::Left => &p.cell,
            Dir::Down => &p.time,
        };
        let forward = dir != Dir::Left;
        let (edge, reset) = if forward {
            (names::MAX, names::MIN)
        } else {
            (names::MIN, names::MAX)
        };
        let s = self.spare(&p.vars());
        let mut parts = Vec::new();
        for i in 0..digits.len() {
            let mut guard: Vec<Formula> = digits[..i]
                .iter()
                .map(|d| Formula::atom(edge, [d.clone()]))
                .collect();
            guard.push(if forward {
                Formula::atom(names::SUC, [digits[i].clone(), s.clone()])
            } else {
                Formula::atom(names::SUC, [s.clone(), digits[i].clone()])
            });
            let mut q = p.clone();
            let target = match dir {
                Dir::Right | Dir::Left => &mut q.cell,
                Dir::Down => &mut q.time,
            };
            target[i] = s.clone();
            let body = if i == 0 {
                phi(&q)
            } else {
                let mut keep: Vec<Var> = match dir {
                    Dir::Right | Dir::Left => q.cell[i..].iter().chain(&q.time).cloned().collect(),
                    Dir::Down => q.time[i..].iter().chain(&q.cell).cloned().collect(),
                };
                keep.extend(q.pair.clone());
                let m = self.spare(&keep);
                let target = match dir {
                    Dir::Right | Dir::Left => &mut q.cell,
                    Dir::Down => &mut q.time,
                };
                for d in target[..i].iter_mut() {
                    *d = m.clone();
                }
                Formula::forall(
                    m.clone(),
                    Formula::implies(Formula::atom(reset, [m.clone()]), phi(&q)),
                )
            };
            let guard = Formula::and_all(guard).expect("non-empty");
            parts.push(Formula::forall(s.clone(), Formula::implies(guard, body)));
        }
        Formula::and_all(parts).expect("at least one digit")
    }

    fn shift_paired(&self, dir: Dir, p: &Point, phi: &dyn Fn(&Point) -> Formula) -> Formula {
        let r = p.pair.clone().expect("paired point");
        let s = self.spare(&p.vars());
        let (succ, min) = match dir {
            Dir::Right | Dir::Left => (names::SUCX, names::MINX),
            Dir::Down => (names::SUCY, names::MINY),
        };
        let (guard, wrap_at) = match dir {
            Dir::Left => (Formula::atom(succ, [s.clone(), r.clone()]), r.clone()),
            _ => (Formula::atom(succ, [r.clone(), s.clone()]), s.clone()),
        };
        let mut q = p.clone();
        q.pair = Some(s.clone());
        let wrapped = self.shift_digits(dir, &q, phi);
        let wraps = Formula::atom(min, [wrap_at]);
        Formula::forall(
            s.clone(),
            Formula::implies(
                guard,
                Formula::or(
                    Formula::and(wraps.clone(), wrapped),
                    Formula::and(Formula::not(wraps), phi(&q)),
                ),
            ),
        )
    }

    fn all(&self, rel: &str, vars: &[Var]) -> Vec<Formula> {
        vars.iter()
            .map(|v| Formula::atom(rel, [v.clone()]))
            .collect()
    }

    fn pair_edge(&self, p: &Point, succ: &str, min: &str) -> Formula {
        // π(r) = R − 1: the cyclic successor wraps to 0
        let r = p.pair.clone().expect("paired point");
        let s = self.spare(&p.vars());
        Formula::exists(
            s.clone(),
            Formula::and(Formula::atom(succ, [r, s.clone()]), Formula::atom(min, [s])),
        )
    }

    pub fn first_cell(&self, p: &Point) -> Formula {
        let mut parts = self.all(names::MIN, &p.cell);
        if let Some(r) = &p.pair {
            parts.push(Formula::atom(names::MINX, [r.clone()]));
        }
        Formula::and_all(parts).unwrap()
    }

    pub fn last_cell(&self, p: &Point) -> Formula {
        let mut parts = self.all(names::MAX, &p.cell);
        if p.pair.is_some() {
            parts.push(self.pair_edge(p, names::SUCX, names::MINX));
        }
        Formula::and_all(parts).unwrap()
    }

    pub fn last_row(&self, p: &Point) -> Formula {
        let mut parts = self.all(names::MAX, &p.time);
        if p.pair.is_some() {
            parts.push(self.pair_edge(p, names::SUCY, names::MINY));
        }
        Formula::and_all(parts).unwrap()
    }

    pub fn first_row(&self, p: &Point) -> Formula {
        let mut parts = self.all(names::MIN, &p.time);
        if let Some(r) = &p.pair {
            parts.push(Formula::atom(names::MINY, [r.clone()]));
        }
        Formula::and_all(parts).unwrap()
    }

    /// Quantifies all of `p`'s variables universally; the pair variable is
    /// restricted to `[R²]`.
    pub fn forall_point(&self, p: &Point, body: Formula) -> Formula {
        let body = match &p.pair {
            Some(r) => Formula::implies(Formula::atom(names::LESS_R2, [r.clone()]), body),
            None => body,
        };
        Formula::forall_all(&p.vars(), body)
    }

    pub fn exists_point(&self, p: &Point, body: Formula) -> Formula {
        let body = match &p.pair {
            Some(r) => Formula::and(Formula::atom(names::LESS_R2, [r.clone()]), body),
            None => body,
        };
        Formula::exists_all(&p.vars(), body)
    }
}
