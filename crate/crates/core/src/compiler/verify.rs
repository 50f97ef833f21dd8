//! Differential check of compiled sentences against the simulator.

use std::fmt::Write;
use std::ops::RangeInclusive;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::CompileError;
use crate::eval::evaluate_sentence;
use crate::ground::{ground_pinned, satisfiable_cdcl};
use crate::normalize::normalize;
use crate::text::kv::KvTree;
use crate::turing::{run_binary, Machine, Outcome, DEFAULT_CONFIGURATION_CAP};

use super::{compile_with_cap, order_structure, Construction, DEFAULT_WINDOW_CAP};

pub const DEFAULT_N_MIN: usize = 4;

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub window_cap: usize,
    pub config_cap: usize,
    /// Decode every satisfying assignment into a structure and evaluate
    /// the compiled sentence on it.
    pub check_witness: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            window_cap: DEFAULT_WINDOW_CAP,
            config_cap: DEFAULT_CONFIGURATION_CAP,
            check_witness: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyPoint {
    pub n: usize,
    pub oracle: Outcome,
    pub ground: bool,
    pub atoms: usize,
    pub size: usize,
    /// Set when a decoded witness failed to satisfy the sentence.
    pub witness_failed: bool,
    pub elapsed: Duration,
}

impl VerifyPoint {
    pub fn agrees(&self) -> bool {
        !self.witness_failed && self.ground == (self.oracle == Outcome::Accepts)
    }
}

#[derive(Clone, Debug)]
pub struct DifferentialReport {
    pub construction: Construction,
    pub points: Vec<VerifyPoint>,
}

impl DifferentialReport {
    pub fn agreements(&self) -> usize {
        self.points.iter().filter(|p| p.agrees()).count()
    }

    pub fn disagreements(&self) -> Vec<usize> {
        self.points
            .iter()
            .filter(|p| !p.agrees())
            .map(|p| p.n)
            .collect()
    }

    pub fn bound_exceeded(&self) -> Vec<usize> {
        self.points
            .iter()
            .filter(|p| p.oracle == Outcome::BoundExceeded)
            .map(|p| p.n)
            .collect()
    }

    pub fn all_agree(&self) -> bool {
        self.points.iter().all(|p| p.agrees())
    }

    pub fn members(&self) -> Vec<usize> {
        self.points
            .iter()
            .filter(|p| p.ground)
            .map(|p| p.n)
            .collect()
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        writeln!(out, "construction  {}", self.construction.name()).unwrap();
        writeln!(
            out,
            "{:>6}  {:<15}{:<8}{:>10}{:>12}  verdict",
            "N", "simulator", "ground", "atoms", "size"
        )
        .unwrap();
        for p in &self.points {
            let oracle = match p.oracle {
                Outcome::Accepts => "accept",
                Outcome::Rejects => "reject",
                Outcome::BoundExceeded => "bound-exceeded",
            };
            let verdict = if p.witness_failed {
                "bad-witness"
            } else if p.agrees() {
                "agree"
            } else {
                "DISAGREE"
            };
            writeln!(
                out,
                "{:>6}  {:<15}{:<8}{:>10}{:>12}  {verdict}",
                p.n,
                oracle,
                if p.ground { "sat" } else { "unsat" },
                p.atoms,
                p.size
            )
            .unwrap();
        }
        writeln!(out, "agree {}/{}", self.agreements(), self.points.len()).unwrap();
        for p in &self.points {
            writeln!(out, "@time N={} {} us", p.n, p.elapsed.as_micros()).unwrap();
        }
        out
    }

    pub fn to_kv(&self) -> KvTree {
        let mut t = KvTree::new();
        t.push("construction", self.construction.name());
        for p in &self.points {
            let mut pt = KvTree::new();
            pt.push("n", p.n)
                .push("oracle", format!("{:?}", p.oracle).to_lowercase())
                .push("ground", if p.ground { "sat" } else { "unsat" })
                .push("atoms", p.atoms)
                .push("size", p.size)
                .push("agree", if p.agrees() { "yes" } else { "no" })
                .push("@time_us", p.elapsed.as_micros());
            t.push_tree("point", pt);
        }
        t.push("agreements", self.agreements())
            .push("total", self.points.len());
        let mut root = KvTree::new();
        root.push_tree("verification", t);
        root
    }
}

/// Compiles `tm`, grounds the sentence at every `N` in `range` with the
/// order fixed to the canonical one, and compares satisfiability with the
/// simulator's verdict under the construction's time and space bound.
pub fn verify_compilation(
    tm: &Machine,
    construction: Construction,
    range: RangeInclusive<usize>,
    opts: VerifyOptions,
) -> Result<DifferentialReport, CompileError> {
    let report = compile_with_cap(tm, construction, opts.window_cap)?;
    let ns = normalize(&report.sentence, construction.grid().pool.len())?;
    let vocab = ns.vocabulary();
    let bound = construction.bound_kind();
    let ns_ref = &ns;
    let points = range
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|n| {
            let t0 = Instant::now();
            let oracle = run_binary(tm, n as u64, bound, opts.config_cap)?.outcome;
            let pins = order_structure(&vocab, n)?;
            let g = ground_pinned(ns_ref, n, Some(&pins));
            let w = satisfiable_cdcl(&g);
            let mut witness_failed = false;
            if let (Some(w), true) = (&w, opts.check_witness) {
                let model = g.decode(ns_ref, n, &w.values, Some(&pins));
                let base = model.restrict(&report.sentence_vocabulary())?;
                witness_failed = !evaluate_sentence(&report.sentence, &base)?;
            }
            Ok(VerifyPoint {
                n,
                oracle,
                ground: w.is_some(),
                atoms: g.atom_count(),
                size: g.size(),
                witness_failed,
                elapsed: t0.elapsed(),
            })
        })
        .collect::<Result<Vec<_>, CompileError>>()?;
    Ok(DifferentialReport {
        construction,
        points,
    })
}
