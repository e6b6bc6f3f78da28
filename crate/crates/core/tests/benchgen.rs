use syft_core::automata::compile;
use syft_core::benchgen::{basis, gen_rc, run_suite, BenchConfig, Engine, SuiteOptions};
use syft_core::game::{oracle_search, solve_explicit, solve_symbolic};
use syft_core::symbolic::encode;

#[test]
fn basis_labels_match_the_oracle() {
    let b = basis();
    for (i, case) in b.iter().enumerate() {
        let d = compile(&case.template, &case.partition).unwrap();
        let expected = i < 10;
        assert_eq!(
            oracle_search(&d, d.num_states() + 1),
            expected,
            "{}",
            case.name
        );
        assert_eq!(solve_explicit(&d).realizable, expected, "{}", case.name);
        assert_eq!(
            solve_symbolic(&mut encode(&d).unwrap()).unwrap().realizable,
            expected
        );
    }
}

#[test]
fn suite_rows_and_agreement() {
    let b = basis();
    let mut cases = Vec::new();
    for seed in 0..8 {
        let cfg = BenchConfig {
            conjuncts: 2,
            pool: 3,
            seed,
            count: 2,
        };
        cases.extend(gen_rc(&cfg, &b).unwrap());
    }
    let engines = [Engine::Explicit, Engine::Symbolic];
    let rows = run_suite(&cases, &engines, &SuiteOptions::default());
    assert_eq!(rows.len(), cases.len() * engines.len());
    for pair in rows.chunks(2) {
        assert_eq!(pair[0].name, pair[1].name);
        assert!(pair[0].verdict.completed() && pair[1].verdict.completed());
        assert_eq!(pair[0].verdict, pair[1].verdict, "{}", pair[0].name);
        assert_eq!(pair[0].states, pair[1].states);
    }
}
