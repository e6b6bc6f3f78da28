use syft_core::automata::{build_dfa, emp, minimize, progress, ExplicitDfa};
use syft_core::corpus::{all_traces, formula_corpus, language_mismatch};
use syft_core::ltlf::TraceEvaluator;
use syft_core::{to_nnf, Formula, Partition};

fn partition(atoms: &[&str]) -> Partition {
    // Split roles arbitrarily; the construction ignores them.
    let (x, y) = atoms.split_at(atoms.len() / 2);
    Partition::new(x.iter().copied(), y.iter().copied()).unwrap()
}

#[test]
fn dfa_language_matches_semantics() {
    let atoms = ["a", "b", "c"];
    let p = partition(&atoms);
    for f in formula_corpus(11, 220, &atoms, 4) {
        let d = build_dfa(&f, &p).unwrap();
        let m = minimize(&d);
        assert!(m.num_states() <= d.num_states());
        if let Some(t) = language_mismatch(&m, &f, 6) {
            panic!("minimal DFA of {f} disagrees on {t:?}");
        }
        if let Some(t) = language_mismatch(&d, &f, 5) {
            panic!("DFA of {f} disagrees on {t:?}");
        }
    }
}

#[test]
fn progression_is_sound() {
    let atoms = ["a", "b"];
    let universe: Vec<String> = atoms.iter().map(|s| s.to_string()).collect();
    let mut cols = Vec::new();
    for f in formula_corpus(5, 150, &atoms, 4) {
        let f = to_nnf(&f);
        let whole = TraceEvaluator::new(&f, &universe);
        for l in 0..4u32 {
            let r = progress(&f, l, &universe).unwrap();
            let rest = TraceEvaluator::new(&r, &universe);
            let at_end = emp(&r).unwrap();
            assert_eq!(whole.accepts(&[l], &mut cols), at_end, "{f} on [{l}]");
            for tail in all_traces(2, 3) {
                let mut t = vec![l];
                t.extend(&tail);
                assert_eq!(
                    whole.accepts(&t, &mut cols),
                    rest.accepts(&tail, &mut cols),
                    "{f} on {t:?}, residual {r}"
                );
            }
        }
    }
}

/// Number of Moore equivalence classes among reachable states.
fn moore_classes(d: &ExplicitDfa) -> usize {
    let n = d.num_states();
    let mut class: Vec<usize> = (0..n).map(|s| d.is_accepting(s) as usize).collect();
    loop {
        let mut signatures: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|s| {
                (
                    class[s],
                    d.row(s).iter().map(|&t| class[t as usize]).collect(),
                )
            })
            .collect();
        let mut sorted = signatures.clone();
        sorted.sort();
        sorted.dedup();
        let next: Vec<usize> = signatures
            .drain(..)
            .map(|sig| sorted.binary_search(&sig).unwrap())
            .collect();
        let before = class
            .iter()
            .collect::<std::collections::BTreeSet<_>>()
            .len();
        let after = next.iter().collect::<std::collections::BTreeSet<_>>().len();
        class = next;
        if before == after {
            return after;
        }
    }
}

fn reachable(d: &ExplicitDfa) -> usize {
    let mut seen = vec![false; d.num_states()];
    let mut stack = vec![d.initial()];
    seen[d.initial()] = true;
    while let Some(s) = stack.pop() {
        for &t in d.row(s) {
            if !seen[t as usize] {
                seen[t as usize] = true;
                stack.push(t as usize);
            }
        }
    }
    seen.iter().filter(|&&b| b).count()
}

#[test]
fn minimized_automata_are_minimal() {
    let atoms = ["a", "b", "c"];
    let p = partition(&atoms);
    for f in formula_corpus(23, 200, &atoms, 5) {
        let m = minimize(&build_dfa(&f, &p).unwrap());
        assert_eq!(m.initial(), 0);
        assert_eq!(reachable(&m), m.num_states(), "{f}");
        assert_eq!(moore_classes(&m), m.num_states(), "{f}");
        assert_eq!(minimize(&m), m, "{f}");
    }
}

#[test]
fn worked_examples_by_oracle() {
    let p = partition(&["a", "b"]);
    for text in [
        "F a", "a", "X b", "a U b", "G a", "true", "false", "WX false", "a | a",
    ] {
        let f = syft_core::parse(text).unwrap();
        let d = minimize(&build_dfa(&f, &p).unwrap());
        assert_eq!(language_mismatch(&d, &f, 6), None, "{text}");
    }
    let universe = vec!["a".to_string(), "b".to_string()];
    let r = progress(&to_nnf(&syft_core::parse("X b").unwrap()), 0b01, &universe).unwrap();
    assert_eq!(
        r,
        Formula::and(
            Formula::atom("b"),
            Formula::until(Formula::True, Formula::True)
        )
    );
}
