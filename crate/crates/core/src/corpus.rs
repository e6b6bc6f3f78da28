//! Seeded random formulas for property checks and benchmarks.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::automata::{ExplicitDfa, Letter};
use crate::ltlf::{Formula, TraceEvaluator};

/// Random formula over `atoms` with at most `depth` nested operators. Every
/// syntactic form can appear, including the abbreviations.
pub fn random_formula<R: Rng>(rng: &mut R, atoms: &[&str], depth: usize) -> Formula {
    if depth == 0 || rng.gen_ratio(1, 5) {
        return match rng.gen_range(0..10) {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::atom(atoms[rng.gen_range(0..atoms.len())]),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..12) {
        0 => Formula::not(random_formula(rng, atoms, d)),
        1 => Formula::and(random_formula(rng, atoms, d), random_formula(rng, atoms, d)),
        2 => Formula::or(random_formula(rng, atoms, d), random_formula(rng, atoms, d)),
        3 => Formula::next(random_formula(rng, atoms, d)),
        4 => Formula::weak_next(random_formula(rng, atoms, d)),
        5 => Formula::until(random_formula(rng, atoms, d), random_formula(rng, atoms, d)),
        6 => Formula::release(random_formula(rng, atoms, d), random_formula(rng, atoms, d)),
        7 => Formula::eventually(random_formula(rng, atoms, d)),
        8 => Formula::always(random_formula(rng, atoms, d)),
        9 => Formula::implies(random_formula(rng, atoms, d), random_formula(rng, atoms, d)),
        10 => Formula::atom(atoms[rng.gen_range(0..atoms.len())]),
        _ => Formula::not(Formula::atom(atoms[rng.gen_range(0..atoms.len())])),
    }
}

/// `count` formulas from a fixed seed.
pub fn formula_corpus(seed: u64, count: usize, atoms: &[&str], depth: usize) -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_formula(&mut rng, atoms, depth))
        .collect()
}

/// All traces over `width` atoms with lengths in `1..=max_len`, as letters.
pub fn all_traces(width: usize, max_len: usize) -> impl Iterator<Item = Vec<u32>> {
    let letters = 1u64 << width;
    (1..=max_len).flat_map(move |len| {
        (0..letters.pow(len as u32)).map(move |mut code| {
            (0..len)
                .map(|_| {
                    let l = (code % letters) as u32;
                    code /= letters;
                    l
                })
                .collect()
        })
    })
}

/// First trace of length `1..=max_len` on which `d` and the formula
/// disagree, if any. Traces are enumerated by prepending letters, so each
/// formula column is computed once per suffix.
pub fn language_mismatch(d: &ExplicitDfa, f: &Formula, max_len: usize) -> Option<Vec<u32>> {
    let universe: Vec<String> = d.partition().atoms().cloned().collect();
    let eval = TraceEvaluator::new(f, &universe);
    let mut cols = vec![false; eval.width() * max_len];
    let mut reversed = Vec::with_capacity(max_len);
    mismatch_below(
        d,
        &eval,
        d.num_letters() as u32,
        max_len,
        &mut reversed,
        &mut cols,
    )
}

fn mismatch_below(
    d: &ExplicitDfa,
    eval: &TraceEvaluator,
    letters: u32,
    max_len: usize,
    reversed: &mut Vec<u32>,
    cols: &mut [bool],
) -> Option<Vec<u32>> {
    let depth = reversed.len();
    if depth == max_len {
        return None;
    }
    let w = eval.width();
    for l in 0..letters {
        let (done, rest) = cols.split_at_mut(depth * w);
        let next = depth.checked_sub(1).map(|p| &done[p * w..]);
        eval.column(l, next, &mut rest[..w]);
        reversed.push(l);
        let state = reversed
            .iter()
            .rev()
            .fold(d.initial(), |s, &x| d.successor(s, Letter(x)));
        if d.is_accepting(state) != eval.root(&rest[..w]) {
            return Some(reversed.iter().rev().copied().collect());
        }
        if let Some(t) = mismatch_below(d, eval, letters, max_len, reversed, cols) {
            return Some(t);
        }
        reversed.pop();
    }
    None
}
