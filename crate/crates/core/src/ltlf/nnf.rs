use super::Formula;

/// Pushes negations onto atoms and eliminates `->`, `F` and `G`
/// (`F φ = true U φ`, `G φ = false R φ`).
pub fn to_nnf(f: &Formula) -> Formula {
    nnf(f, false)
}

fn nnf(f: &Formula, negate: bool) -> Formula {
    use Formula::*;
    match (f, negate) {
        (True, false) | (False, true) => True,
        (True, true) | (False, false) => False,
        (Atom(_), false) => f.clone(),
        (Atom(_), true) => Formula::not(f.clone()),
        (Not(a), n) => nnf(a, !n),
        (And(a, b), false) => Formula::and(nnf(a, false), nnf(b, false)),
        (And(a, b), true) => Formula::or(nnf(a, true), nnf(b, true)),
        (Or(a, b), false) => Formula::or(nnf(a, false), nnf(b, false)),
        (Or(a, b), true) => Formula::and(nnf(a, true), nnf(b, true)),
        (Next(a), false) => Formula::next(nnf(a, false)),
        (Next(a), true) => Formula::weak_next(nnf(a, true)),
        (WeakNext(a), false) => Formula::weak_next(nnf(a, false)),
        (WeakNext(a), true) => Formula::next(nnf(a, true)),
        (Until(a, b), false) => Formula::until(nnf(a, false), nnf(b, false)),
        (Until(a, b), true) => Formula::release(nnf(a, true), nnf(b, true)),
        (Release(a, b), false) => Formula::release(nnf(a, false), nnf(b, false)),
        (Release(a, b), true) => Formula::until(nnf(a, true), nnf(b, true)),
        (Eventually(a), false) => Formula::until(True, nnf(a, false)),
        (Eventually(a), true) => Formula::release(False, nnf(a, true)),
        (Always(a), false) => Formula::release(False, nnf(a, false)),
        (Always(a), true) => Formula::until(True, nnf(a, true)),
        (Implies(a, b), false) => Formula::or(nnf(a, true), nnf(b, false)),
        (Implies(a, b), true) => Formula::and(nnf(a, false), nnf(b, true)),
    }
}

/// Negations only on atoms, and no `->`, `F`, `G`.
pub fn is_nnf(f: &Formula) -> bool {
    use Formula::*;
    match f {
        True | False | Atom(_) => true,
        Not(a) => matches!(**a, Atom(_)),
        Eventually(_) | Always(_) | Implies(..) => false,
        And(a, b) | Or(a, b) | Until(a, b) | Release(a, b) => is_nnf(a) && is_nnf(b),
        Next(a) | WeakNext(a) => is_nnf(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltlf::parse;

    fn a(n: &str) -> Formula {
        Formula::atom(n)
    }

    #[test]
    fn dualities() {
        assert_eq!(
            to_nnf(&Formula::not(Formula::next(a("a")))),
            Formula::weak_next(Formula::not(a("a")))
        );
        assert_eq!(
            to_nnf(&Formula::not(Formula::until(a("a"), a("b")))),
            Formula::release(Formula::not(a("a")), Formula::not(a("b")))
        );
        assert_eq!(to_nnf(&Formula::not(Formula::not(a("a")))), a("a"));
    }

    #[test]
    fn abbreviations_are_expanded() {
        let f = to_nnf(&parse("F a -> G b").unwrap());
        assert_eq!(
            f,
            Formula::or(
                Formula::release(Formula::False, Formula::not(a("a"))),
                Formula::release(Formula::False, a("b"))
            )
        );
        assert!(is_nnf(&f));
        assert!(!is_nnf(&parse("!(a & b)").unwrap()));
        assert!(!is_nnf(&parse("F a").unwrap()));
    }
}
