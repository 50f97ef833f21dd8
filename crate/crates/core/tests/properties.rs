use proptest::prelude::*;

use spectra_core::ground::{
    cnf_satisfiable, lit, satisfiable_cdcl, to_cnf, GroundAtom, GroundFormula, Lit,
};
use spectra_core::text::{
    parse_dimacs, parse_sentence, parse_structure, parse_tm, print_dimacs, print_formula,
    print_sentence, print_structure, print_tm,
};
use spectra_core::turing::{accepts_dfs, binary_of, simulate, Move, Outcome, Transition};
use spectra_core::{
    evaluate_sentence, satisfiable, Element, FiniteStructure, Formula, Machine, RelName, Vocabulary,
};

const VARS: [&str; 3] = ["x", "y", "z"];

fn formula() -> impl Strategy<Value = Formula> {
    let var = || prop::sample::select(VARS.to_vec());
    let leaf = prop_oneof![
        (var(), var()).prop_map(|(a, b)| Formula::eq(a, b)),
        (var(), var()).prop_map(|(a, b)| Formula::atom("E", [a, b])),
        var().prop_map(|a| Formula::atom("P", [a])),
    ];
    leaf.prop_recursive(5, 40, 2, move |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
            (var(), inner.clone()).prop_map(|(v, f)| Formula::forall(v, f)),
            (var(), inner).prop_map(|(v, f)| Formula::exists(v, f)),
        ]
    })
}

fn close(f: Formula) -> Formula {
    let free: Vec<_> = f.free_variables_ordered();
    free.iter()
        .rev()
        .fold(f, |acc, v| Formula::forall(v.clone(), acc))
}

fn vocab() -> Vocabulary {
    Vocabulary::from_pairs([("E", 2), ("P", 1)]).unwrap()
}

fn structure() -> impl Strategy<Value = FiniteStructure> {
    (1usize..=3).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * n + n).prop_map(move |bits| {
            let mut s = FiniteStructure::new(vocab(), n).unwrap();
            for (i, b) in bits.iter().enumerate() {
                if !b {
                    continue;
                }
                if i < n * n {
                    s.insert("E", &[(i / n) as Element, (i % n) as Element])
                        .unwrap();
                } else {
                    s.insert("P", &[(i - n * n) as Element]).unwrap();
                }
            }
            s
        })
    })
}

fn ground_formula() -> impl Strategy<Value = GroundFormula> {
    (1usize..=10).prop_flat_map(|atoms| {
        let l = (0..atoms, any::<bool>()).prop_map(|(a, n)| lit(a, n));
        let disjunct = prop::collection::vec(l, 1..=3);
        let conjunct = prop::collection::vec(disjunct, 1..=4);
        prop::collection::vec(conjunct, 1..=8).prop_map(move |cs| {
            let mut g = GroundFormula::new(
                (0..atoms)
                    .map(|i| GroundAtom {
                        relation: RelName::new("A"),
                        tuple: vec![i as Element],
                    })
                    .collect(),
            );
            for c in &cs {
                g.push_conjunct::<Vec<Lit>>(c);
            }
            g
        })
    })
}

/// One-tape machines over {0, 1, _} with three states; state 2 accepts.
fn machine() -> impl Strategy<Value = Machine> {
    let mv = prop::sample::select(vec![Move::Left, Move::Right, Move::Stay]);
    let t =
        (0usize..2, 0usize..3, 0usize..3, 0usize..3, mv).prop_map(|(from, read, to, write, m)| {
            Transition {
                from,
                read: vec![read],
                to,
                write: vec![write],
                moves: vec![m],
            }
        });
    prop::collection::vec(t, 0..8).prop_map(|mut transitions| {
        transitions.sort_by_key(|t| {
            (
                t.from,
                t.read.clone(),
                t.to,
                t.write.clone(),
                t.moves[0].letter(),
            )
        });
        transitions.dedup();
        Machine {
            tapes: 1,
            states: vec!["q0".into(), "q1".into(), "qa".into()],
            symbols: vec!["0".into(), "1".into(), "_".into()],
            start: 0,
            accept: 2,
            blank: 2,
            zero: 0,
            one: 1,
            input_order: Default::default(),
            transitions,
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn formula_print_parse_roundtrip(f in formula()) {
        let text = format!("rel E 2; rel P 1; {}", print_formula(&f));
        let doc = parse_sentence(&text);
        // open formulas are rejected by the sentence reader
        if f.is_sentence() {
            prop_assert_eq!(doc.unwrap().formula, f);
        }
    }

    #[test]
    fn sentence_document_roundtrip(f in formula()) {
        let f = close(f);
        let doc = parse_sentence(&format!("rel E 2; rel P 1; {}", print_formula(&f))).unwrap();
        prop_assert_eq!(parse_sentence(&print_sentence(&doc)).unwrap(), doc);
    }

    #[test]
    fn nnf_is_equivalent(f in formula(), s in structure()) {
        let f = close(f);
        let nnf = f.to_nnf();
        prop_assert!(nnf.is_nnf());
        prop_assert!(nnf.distinct_variable_count() <= f.distinct_variable_count());
        prop_assert_eq!(evaluate_sentence(&f, &s).unwrap(), evaluate_sentence(&nnf, &s).unwrap());
    }

    #[test]
    fn structure_print_parse_roundtrip(s in structure()) {
        prop_assert_eq!(parse_structure(&print_structure(&s), &vocab()).unwrap(), s);
    }

    #[test]
    fn solvers_agree(g in ground_formula()) {
        let bt = satisfiable(&g);
        let cdcl = satisfiable_cdcl(&g);
        let cnf = cnf_satisfiable(&to_cnf(&g));
        prop_assert_eq!(bt.is_some(), cdcl.is_some());
        prop_assert_eq!(bt.is_some(), cnf.is_some());
        for w in bt.iter().chain(&cdcl) {
            prop_assert!(g.evaluate(&w.values));
        }
    }

    #[test]
    fn dimacs_roundtrip(g in ground_formula()) {
        let cnf = to_cnf(&g);
        let labels: Vec<String> = g.atoms.iter().map(|a| a.to_string()).collect();
        let back = parse_dimacs(&print_dimacs(&cnf, &labels)).unwrap();
        prop_assert_eq!(back.num_vars, cnf.num_vars);
        prop_assert_eq!(back.clauses, cnf.clauses);
    }

    #[test]
    fn machine_print_parse_roundtrip(m in machine()) {
        prop_assert_eq!(parse_tm(&print_tm(&m)).unwrap(), m);
    }

    #[test]
    fn simulators_agree(m in machine(), n in 1u64..40, t in 1usize..12, s in 1usize..8) {
        let v = simulate(&m, &binary_of(n), t, s, 1_000_000).unwrap();
        prop_assert_eq!(v.outcome == Outcome::Accepts, accepts_dfs(&m, &binary_of(n), t, s));
        if let Some(run) = v.run {
            prop_assert!(run.len() <= t);
            prop_assert_eq!(run.last().unwrap().state, m.accept);
        }
    }
}
