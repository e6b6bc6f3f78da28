use proptest::prelude::*;
use syft_core::automata::compile;
use syft_core::corpus::random_formula;
use syft_core::game::{oracle_search, solve_explicit, solve_symbolic};
use syft_core::strategy::{
    check_trace, run, verify_strategy, ExplicitTransducer, Strategy as _, SymbolicTransducer,
};
use syft_core::symbolic::encode;
use syft_core::{parse, Formula, Partition};

fn xy() -> Partition {
    Partition::new(["x"], ["y"]).unwrap()
}

#[test]
fn eventually_output_converges_quickly() {
    let d = compile(&parse("F y").unwrap(), &xy()).unwrap();
    assert_eq!(d.num_states(), 2);
    let mut sd = encode(&d).unwrap();
    let s = solve_symbolic(&mut sd).unwrap();
    assert!(s.realizable);
    assert!(s.iterations <= 2);
    assert_eq!(solve_explicit(&d).realizable, s.realizable);
}

#[test]
fn eventually_input_keeps_accepting_region() {
    let d = compile(&parse("F x").unwrap(), &xy()).unwrap();
    let mut sd = encode(&d).unwrap();
    let s = solve_symbolic(&mut sd).unwrap();
    assert!(!s.realizable);
    assert_eq!(s.w, sd.acc());
    assert_eq!(s.history.len(), 1);
    let e = solve_explicit(&d);
    assert!(!e.realizable);
    let accepting: Vec<bool> = (0..d.num_states()).map(|q| d.is_accepting(q)).collect();
    assert_eq!(e.winning, accepting);
}

fn formula_strategy() -> impl Strategy<Value = Formula> {
    any::<u64>().prop_map(|seed| {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        random_formula(&mut rng, &["x", "y", "z"], 4)
    })
}

/// Every input sequence of length `len`, as letters over `nx` inputs.
fn input_words(nx: usize, len: usize) -> Vec<Vec<u32>> {
    let k = 1u32 << nx;
    (0..k.pow(len as u32))
        .map(|mut c| {
            (0..len)
                .map(|_| {
                    let x = c % k;
                    c /= k;
                    x
                })
                .collect()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn solvers_and_strategies_agree(f in formula_strategy()) {
        let p = Partition::new(["x"], ["y", "z"]).unwrap();
        let d = compile(&f, &p).unwrap();
        let n = d.num_states();
        let e = solve_explicit(&d);
        let mut sd = encode(&d).unwrap();
        let s = solve_symbolic(&mut sd).unwrap();
        prop_assert_eq!(e.realizable, s.realizable, "{}", f);
        prop_assert_eq!(e.realizable, oracle_search(&d, n + 1), "{}", f);
        prop_assert_eq!(e.initial_winning, s.initial_winning);
        for q in 0..n {
            prop_assert_eq!(sd.eval(s.w, sd.code(q), 0).unwrap(), e.winning[q], "{} state {}", f, q);
        }
        if !e.realizable {
            prop_assert!(SymbolicTransducer::new(sd, &s).is_err());
            return Ok(());
        }
        let ex = ExplicitTransducer::from_solution(&d, &e).unwrap();
        let sy = SymbolicTransducer::new(sd, &s).unwrap();
        prop_assert!(verify_strategy(&d, &ex, n).unwrap());
        prop_assert!(verify_strategy(&d, &sy, n).unwrap());
        // Every long enough input sequence ends in an accepted, satisfying play.
        for word in input_words(1, n) {
            for r in [run(&ex, &word).unwrap(), run(&sy, &word).unwrap()] {
                prop_assert!(r.accepted_at.is_some(), "{} on {:?}", f, word);
                prop_assert!(check_trace(&f, &p, &r), "{} on {:?}", f, word);
            }
        }
        // The tabulated symbolic transducer behaves like the original.
        let sd = sy.automaton();
        let table = ExplicitTransducer::tabulate(&sy, |q| sd.decode(q as u32)).unwrap();
        prop_assert!(verify_strategy(&d, &table, n).unwrap());
        let back = ExplicitTransducer::from_json(&table.to_json().unwrap()).unwrap();
        prop_assert_eq!(back.output(back.initial()).unwrap(), table.output(table.initial()).unwrap());
    }
}
