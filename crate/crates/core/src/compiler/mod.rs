//! Compilation of Turing machines into first-order sentences whose spectra
//! are the machine's accepted inputs, in three variable budgets.

mod axioms;
mod canonical;
mod grid;
mod machine;
mod verify;

use std::fmt::Write;

use crate::error::CompileError;
use crate::formula::{Formula, RelName};
use crate::text::kv::KvTree;
use crate::turing::{BoundKind, InputOrder, Machine};

pub use axioms::{arithmetic_axioms_flat, arithmetic_axioms_paired, order_axioms};
pub use canonical::{
    canonical_structure, encode_run, grid_side, order_structure, point_args, FIXED,
};
pub use grid::{Dir, Grid, Point};
pub use verify::{
    verify_compilation, DifferentialReport, VerifyOptions, VerifyPoint, DEFAULT_N_MIN,
};

pub const DEFAULT_WINDOW_CAP: usize = 50_000;

pub mod names {
    pub const LT: &str = "LT";
    pub const SUC: &str = "SUC";
    pub const MIN: &str = "MIN";
    pub const MAX: &str = "MAX";
    pub const DOUBLE: &str = "DOUBLE";
    pub const HALF: &str = "HALF";
    pub const DIV: &str = "DIV";
    pub const BIT: &str = "BIT";
    pub const INPUT: &str = "INPUT";
    pub const ADD: &str = "ADD";
    pub const MUL: &str = "MUL";
    pub const IS_R: &str = "IS_R";
    pub const LESS_R: &str = "LESS_R";
    pub const LESS_R2: &str = "LESS_R2";
    pub const PROJECT: &str = "PROJECT";
    pub const RCYC: &str = "RCYC";
    pub const SUCX: &str = "SUCX";
    pub const SUCY: &str = "SUCY";
    pub const MINX: &str = "MINX";
    pub const MINY: &str = "MINY";

    pub const ORDER: [&str; 4] = [LT, SUC, MIN, MAX];

    fn part(name: &str, fallback: char, idx: usize) -> String {
        if !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            name.to_string()
        } else {
            format!("{fallback}{idx}")
        }
    }

    /// `SYMBOL_{tape}_{symbol}`, tapes numbered from 1.
    pub fn symbol(tape: usize, name: &str, idx: usize) -> String {
        format!("SYMBOL_{}_{}", tape + 1, part(name, 's', idx))
    }

    pub fn state(tape: usize, name: &str, idx: usize) -> String {
        format!("STATE_{}_{}", tape + 1, part(name, 'q', idx))
    }

    pub fn step(j: usize) -> String {
        format!("STEP_{j}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Construction {
    /// Three variables, binary relations, an `N × N` grid.
    ThreeVar,
    /// `2k+1` variables over `[N]^k × [N]^k`.
    TwoKPlus1(usize),
    /// `2k+2` variables over `N^k·R × N^k·R` with `R = ⌊√(N−1)⌋`.
    TwoKPlus2(usize),
}

impl Construction {
    pub fn grid(self) -> Grid {
        match self {
            Construction::ThreeVar => Grid::flat(),
            Construction::TwoKPlus1(k) => Grid::lex(k),
            Construction::TwoKPlus2(k) => Grid::paired(k),
        }
    }

    pub fn variable_bound(self) -> usize {
        match self {
            Construction::ThreeVar => 3,
            Construction::TwoKPlus1(k) => 2 * k + 1,
            Construction::TwoKPlus2(k) => 2 * k + 2,
        }
    }

    pub fn arity_bound(self) -> usize {
        match self {
            Construction::ThreeVar => 2,
            Construction::TwoKPlus1(k) => 2 * k,
            Construction::TwoKPlus2(k) => 2 * k + 1,
        }
    }

    /// Time and space available to the machine on input `N`.
    pub fn bound_kind(self) -> BoundKind {
        match self {
            Construction::ThreeVar => BoundKind::Linear,
            Construction::TwoKPlus1(k) => BoundKind::Poly(k as u32),
            Construction::TwoKPlus2(k) => BoundKind::PolyHalf(k as u32),
        }
    }

    pub fn name(self) -> String {
        match self {
            Construction::ThreeVar => "three-var".to_string(),
            Construction::TwoKPlus1(k) => format!("two-k-plus-1 k={k}"),
            Construction::TwoKPlus2(k) => format!("two-k-plus-2 k={k}"),
        }
    }

    fn check(self) -> Result<(), CompileError> {
        match self {
            Construction::ThreeVar => Ok(()),
            Construction::TwoKPlus1(k) if k < 1 => Err(CompileError::BadK { k, min: 1 }),
            Construction::TwoKPlus2(k) if k < 2 => Err(CompileError::BadK { k, min: 2 }),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxiomGroup {
    Order,
    Shift,
    Transition,
    HeadUniqueness,
    Arithmetic,
    Initial,
    Acceptance,
}

impl AxiomGroup {
    pub const ALL: [AxiomGroup; 7] = [
        AxiomGroup::Order,
        AxiomGroup::Shift,
        AxiomGroup::Transition,
        AxiomGroup::HeadUniqueness,
        AxiomGroup::Arithmetic,
        AxiomGroup::Initial,
        AxiomGroup::Acceptance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AxiomGroup::Order => "order",
            AxiomGroup::Shift => "shift",
            AxiomGroup::Transition => "transition",
            AxiomGroup::HeadUniqueness => "head-uniqueness",
            AxiomGroup::Arithmetic => "arithmetic",
            AxiomGroup::Initial => "initial",
            AxiomGroup::Acceptance => "acceptance",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CompilationReport {
    pub construction: Construction,
    /// Top-level axioms in emission order.
    pub axioms: Vec<(AxiomGroup, Formula)>,
    pub sentence: Formula,
    pub declared_variables: usize,
    pub measured_variables: usize,
    pub max_arity: usize,
    /// Window implications emitted by the transition axioms.
    pub windows: usize,
}

impl CompilationReport {
    pub fn group_count(&self, g: AxiomGroup) -> usize {
        self.axioms.iter().filter(|(h, _)| *h == g).count()
    }

    pub fn inventory(&self) -> Vec<(AxiomGroup, usize)> {
        AxiomGroup::ALL
            .iter()
            .map(|g| (*g, self.group_count(*g)))
            .collect()
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        writeln!(out, "construction        {}", self.construction.name()).unwrap();
        writeln!(out, "variables declared  {}", self.declared_variables).unwrap();
        writeln!(out, "variables measured  {}", self.measured_variables).unwrap();
        writeln!(out, "max arity           {}", self.max_arity).unwrap();
        writeln!(out, "windows             {}", self.windows).unwrap();
        writeln!(out, "size                {}", self.sentence.size()).unwrap();
        for (g, c) in self.inventory() {
            writeln!(out, "  {:<18}{c}", g.name()).unwrap();
        }
        writeln!(out, "  {:<18}{}", "total", self.axioms.len()).unwrap();
        out
    }

    pub fn to_kv(&self) -> KvTree {
        let mut t = KvTree::new();
        t.push("construction", self.construction.name())
            .push("declared_variables", self.declared_variables)
            .push("measured_variables", self.measured_variables)
            .push("max_arity", self.max_arity)
            .push("windows", self.windows)
            .push("size", self.sentence.size());
        let mut inv = KvTree::new();
        for (g, c) in self.inventory() {
            inv.push(g.name(), c);
        }
        inv.push("total", self.axioms.len());
        t.push_tree("inventory", inv);
        let mut root = KvTree::new();
        root.push_tree("compilation", t);
        root
    }
}

pub fn compile(
    tm: &Machine,
    construction: Construction,
) -> Result<CompilationReport, CompileError> {
    compile_with_cap(tm, construction, DEFAULT_WINDOW_CAP)
}

pub fn compile_with_cap(
    tm: &Machine,
    construction: Construction,
    window_cap: usize,
) -> Result<CompilationReport, CompileError> {
    construction.check()?;
    tm.validate()?;
    if tm.input_order == InputOrder::MsbFirst {
        return Err(CompileError::Unsupported(
            "input order msb-first; the grid writes the least significant bit at cell 0".into(),
        ));
    }
    if tm.zero == tm.blank || tm.one == tm.blank || tm.zero == tm.one {
        return Err(CompileError::Unsupported(
            "the symbols 0, 1 and blank must be distinct".into(),
        ));
    }
    let grid = construction.grid();
    let pool = grid.pool.clone();
    let mut axioms = Vec::new();
    for f in order_axioms(&pool[..3]) {
        axioms.push((AxiomGroup::Order, f));
    }
    let (body, windows) = machine::machine_axioms(tm, &grid, window_cap)?;
    for f in arithmetic_axioms_flat(&pool[..3]) {
        axioms.push((AxiomGroup::Arithmetic, f));
    }
    if grid.paired {
        let paired = arithmetic_axioms_paired(&pool[..5]);
        let (arith, shift) = paired.split_at(6);
        for f in arith {
            axioms.push((AxiomGroup::Arithmetic, f.clone()));
        }
        for f in shift {
            axioms.push((AxiomGroup::Shift, f.clone()));
        }
    }
    axioms.extend(body);
    let sentence = Formula::and_all(axioms.iter().map(|(_, f)| f.clone()).collect())
        .expect("axioms are never empty");
    Ok(CompilationReport {
        construction,
        declared_variables: construction.variable_bound(),
        measured_variables: sentence.distinct_variable_count(),
        max_arity: sentence.max_arity(),
        sentence,
        axioms,
        windows,
    })
}

/// Relation names of the grid labels, indexed `[tape][symbol]` and
/// `[tape][state]`.
pub(crate) fn label_names(tm: &Machine) -> (Vec<Vec<RelName>>, Vec<Vec<RelName>>) {
    let sym = (0..tm.tapes)
        .map(|i| {
            tm.symbols
                .iter()
                .enumerate()
                .map(|(a, s)| RelName::new(&names::symbol(i, s, a)))
                .collect()
        })
        .collect();
    let st = (0..tm.tapes)
        .map(|i| {
            tm.states
                .iter()
                .enumerate()
                .map(|(q, s)| RelName::new(&names::state(i, s, q)))
                .collect()
        })
        .collect();
    (sym, st)
}

impl CompilationReport {
    pub fn sentence_vocabulary(&self) -> crate::formula::Vocabulary {
        let mut v = crate::formula::Vocabulary::new();
        for (r, a) in self.sentence.relations() {
            v.add(r, a)
                .expect("relations of one formula have one arity each");
        }
        v
    }
}
