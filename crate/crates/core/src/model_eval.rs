//! Finite model finding by exhaustive structure enumeration, and spectra.

use std::fmt::Write;
use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::ModelError;
use crate::eval::CompiledFormula;
use crate::formula::{Formula, Vocabulary};
use crate::ground::{ground, satisfiable};
use crate::normalize::normalize;
use crate::structure::FiniteStructure;
use crate::text::kv::KvTree;
use crate::text::sentence::print_formula;

pub const DEFAULT_ENUMERATION_CAP: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Enumeration,
    Grounding,
    Simulation,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Enumeration => "enumeration",
            Method::Grounding => "grounding",
            Method::Simulation => "simulation",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumPoint {
    pub n: usize,
    pub member: bool,
    pub note: Option<String>,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumReport {
    pub sentence: String,
    pub method: Method,
    pub points: Vec<SpectrumPoint>,
}

impl SpectrumReport {
    pub fn members(&self) -> Vec<usize> {
        self.points
            .iter()
            .filter(|p| p.member)
            .map(|p| p.n)
            .collect()
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        writeln!(out, "sentence  {}", self.sentence).unwrap();
        writeln!(out, "method    {}", self.method.name()).unwrap();
        writeln!(out, "{:>6}  member", "N").unwrap();
        for p in &self.points {
            write!(out, "{:>6}  {}", p.n, if p.member { "yes" } else { "no" }).unwrap();
            if let Some(note) = &p.note {
                write!(out, "  ({note})").unwrap();
            }
            out.push('\n');
        }
        let members: Vec<String> = self.members().iter().map(|n| n.to_string()).collect();
        writeln!(out, "spectrum  {{{}}}", members.join(", ")).unwrap();
        for p in &self.points {
            writeln!(out, "@time N={} {} us", p.n, p.elapsed.as_micros()).unwrap();
        }
        out
    }

    pub fn to_kv(&self) -> KvTree {
        let mut t = KvTree::new();
        t.push("sentence", &self.sentence)
            .push("method", self.method.name());
        for p in &self.points {
            let mut pt = KvTree::new();
            pt.push("n", p.n)
                .push("member", if p.member { "yes" } else { "no" });
            if let Some(note) = &p.note {
                pt.push("note", note);
            }
            pt.push("@time_us", p.elapsed.as_micros());
            t.push_tree("point", pt);
        }
        let members: Vec<String> = self.members().iter().map(|n| n.to_string()).collect();
        t.push("members", members.join(" "));
        let mut root = KvTree::new();
        root.push_tree("spectrum", t);
        root
    }
}

fn check_cap(v: &Vocabulary, n: usize, cap: usize) -> Result<usize, ModelError> {
    let positions = v.fact_positions(n);
    if positions > cap {
        return Err(ModelError::CapExceeded { positions, cap });
    }
    Ok(positions)
}

/// Calls `visit` on every structure over `v` with domain `[n]`, in the order
/// of the fact bitmask read as a binary counter (first fact position is the
/// least significant bit; positions run through relations in vocabulary
/// order, tuples lexicographically).
pub fn for_each_structure<B>(
    v: &Vocabulary,
    n: usize,
    cap: usize,
    mut visit: impl FnMut(&FiniteStructure) -> ControlFlow<B>,
) -> Result<Option<B>, ModelError> {
    check_cap(v, n, cap)?;
    let mut s = FiniteStructure::new(v.clone(), n)?;
    let slots: Vec<(usize, usize)> = (0..v.len())
        .flat_map(|r| (0..s.positions(r)).map(move |i| (r, i)))
        .collect();
    let mut bits = vec![false; slots.len()];
    loop {
        if let ControlFlow::Break(b) = visit(&s) {
            return Ok(Some(b));
        }
        let mut i = 0;
        loop {
            if i == bits.len() {
                return Ok(None);
            }
            bits[i] = !bits[i];
            s.set_raw(slots[i].0, slots[i].1, bits[i]);
            if bits[i] {
                break;
            }
            i += 1;
        }
    }
}

/// All structures over `v` with domain `[n]`, in [`for_each_structure`] order.
pub fn enumerate_structures(
    v: &Vocabulary,
    n: usize,
    cap: usize,
) -> Result<Vec<FiniteStructure>, ModelError> {
    let mut out = Vec::new();
    for_each_structure::<()>(v, n, cap, |s| {
        out.push(s.clone());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

fn sentence_vocabulary(f: &Formula) -> Result<Vocabulary, ModelError> {
    if !f.is_sentence() {
        return Err(ModelError::NotASentence(
            f.free_variables().iter().map(|v| v.to_string()).collect(),
        ));
    }
    let mut v = Vocabulary::new();
    for (r, a) in f.relations() {
        v.add(r, a)?;
    }
    Ok(v)
}

pub fn has_model_of_size(f: &Formula, n: usize, method: Method) -> Result<bool, ModelError> {
    has_model_of_size_capped(f, n, method, DEFAULT_ENUMERATION_CAP)
}

/// Whether `f` has a model with universe `[n]`. The enumeration cap bounds
/// the number of fact positions and is ignored by the grounding method.
pub fn has_model_of_size_capped(
    f: &Formula,
    n: usize,
    method: Method,
    cap: usize,
) -> Result<bool, ModelError> {
    let v = sentence_vocabulary(f)?;
    match method {
        Method::Enumeration => {
            let probe = FiniteStructure::new(v.clone(), n)?;
            let compiled = CompiledFormula::new(f, &probe)?;
            let found = for_each_structure(&v, n, cap, |s| {
                if compiled.eval_sentence(s) {
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            })?;
            Ok(found.is_some())
        }
        Method::Grounding | Method::Simulation => {
            let k = f.distinct_variable_count().max(1);
            let ns = normalize(f, k)?;
            Ok(satisfiable(&ground(&ns, n)).is_some())
        }
    }
}

/// Verdicts for every `N` in `1..=n_max`, computed concurrently per `N`.
pub fn spectrum_up_to(
    f: &Formula,
    n_max: usize,
    method: Method,
    cap: usize,
) -> Result<SpectrumReport, ModelError> {
    assert!(n_max >= 1, "range must be non-empty");
    let points = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let t0 = Instant::now();
            let member = has_model_of_size_capped(f, n, method, cap)?;
            Ok(SpectrumPoint {
                n,
                member,
                note: None,
                elapsed: t0.elapsed(),
            })
        })
        .collect::<Result<Vec<_>, ModelError>>()?;
    Ok(SpectrumReport {
        sentence: print_formula(f),
        method,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::sentence::parse_sentence;

    fn f(text: &str) -> Formula {
        parse_sentence(text).unwrap().formula
    }

    #[test]
    fn structure_counts() {
        let v = Vocabulary::from_pairs([("P", 1)]).unwrap();
        assert_eq!(enumerate_structures(&v, 1, 24).unwrap().len(), 2);
        let v = Vocabulary::from_pairs([("E", 2)]).unwrap();
        assert_eq!(enumerate_structures(&v, 2, 24).unwrap().len(), 16);
        let v = Vocabulary::from_pairs([("E", 2), ("P", 1)]).unwrap();
        let all = enumerate_structures(&v, 2, 24).unwrap();
        assert_eq!(all.len(), 64);
        let distinct: std::collections::HashSet<String> = all
            .iter()
            .map(crate::text::structure_file::print_structure)
            .collect();
        assert_eq!(distinct.len(), 64);
        assert_eq!(all[0].fact_count(), 0);
        assert_eq!(all[1].tuples(&"E".into()).unwrap(), vec![vec![0, 0]]);
    }

    #[test]
    fn cap_is_enforced() {
        let v = Vocabulary::from_pairs([("E", 2)]).unwrap();
        assert_eq!(
            enumerate_structures(&v, 5, 24).unwrap_err(),
            ModelError::CapExceeded {
                positions: 25,
                cap: 24
            }
        );
    }

    #[test]
    fn model_examples() {
        let two = f("exists x exists y !(x = y)");
        for m in [Method::Enumeration, Method::Grounding] {
            assert!(!has_model_of_size(&two, 1, m).unwrap());
            assert!(has_model_of_size(&two, 2, m).unwrap());
        }
        let serial = f("rel E 2; (forall x exists y E(x,y)) & forall x !E(x,x)");
        assert!(!has_model_of_size(&serial, 1, Method::Enumeration).unwrap());
        assert!(has_model_of_size(&serial, 2, Method::Enumeration).unwrap());
    }

    #[test]
    fn spectra() {
        let one = f("exists x forall y x = y");
        assert_eq!(
            spectrum_up_to(&one, 4, Method::Enumeration, 24)
                .unwrap()
                .members(),
            vec![1]
        );
        let two = f("exists x exists y !(x = y)");
        assert_eq!(
            spectrum_up_to(&two, 5, Method::Grounding, 24)
                .unwrap()
                .members(),
            vec![2, 3, 4, 5]
        );
    }

    #[test]
    fn report_formats() {
        let r =
            spectrum_up_to(&f("exists x exists y !(x = y)"), 3, Method::Enumeration, 24).unwrap();
        assert!(r.to_table().contains("spectrum  {2, 3}"));
        let kv = r.to_kv();
        let parsed = KvTree::parse(&kv.to_text()).unwrap();
        assert_eq!(parsed, kv);
        assert!(!parsed.stable().to_text().contains("@time"));
    }
}
