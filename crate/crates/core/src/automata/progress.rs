//! Formula progression: the obligation left on the suffix after one letter.

use crate::error::{Error, Result};
use crate::ltlf::Formula;

/// One-step unfolding of an NNF formula: a positive boolean combination of
/// current-letter literals and obligations deferred to the suffix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Step {
    Const(bool),
    Lit { bit: u32, positive: bool },
    Defer(Formula),
    And(Vec<Step>),
    Or(Vec<Step>),
}

fn non_empty_suffix() -> Formula {
    Formula::until(Formula::True, Formula::True)
}

fn empty_suffix_allowed() -> Formula {
    Formula::release(Formula::False, Formula::False)
}

impl Step {
    fn and(items: Vec<Step>) -> Step {
        Step::junction(items, true)
    }

    fn or(items: Vec<Step>) -> Step {
        Step::junction(items, false)
    }

    fn junction(items: Vec<Step>, is_and: bool) -> Step {
        let mut flat = Vec::with_capacity(items.len());
        for item in items {
            match item {
                Step::Const(b) if b == is_and => {}
                Step::Const(_) => return Step::Const(!is_and),
                Step::And(inner) if is_and => flat.extend(inner),
                Step::Or(inner) if !is_and => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => Step::Const(is_and),
            1 => flat.pop().unwrap(),
            _ if is_and => Step::And(flat),
            _ => Step::Or(flat),
        }
    }

    /// Substitutes a value for one letter bit.
    pub(crate) fn assign(&self, bit: u32, value: bool) -> Step {
        match self {
            Step::Lit { bit: b, positive } if *b == bit => Step::Const(value == *positive),
            Step::And(items) => Step::and(items.iter().map(|s| s.assign(bit, value)).collect()),
            Step::Or(items) => Step::or(items.iter().map(|s| s.assign(bit, value)).collect()),
            other => other.clone(),
        }
    }

    pub(crate) fn first_literal(&self) -> Option<u32> {
        match self {
            Step::Lit { bit, .. } => Some(*bit),
            Step::And(items) | Step::Or(items) => items.iter().find_map(Step::first_literal),
            _ => None,
        }
    }

    /// Residual formula of a literal-free step.
    pub(crate) fn residual(&self) -> Formula {
        let raw = match self {
            Step::Const(true) => Formula::True,
            Step::Const(false) => Formula::False,
            Step::Defer(f) => f.clone(),
            Step::Lit { .. } => {
                unreachable!("literals must be assigned before taking the residual")
            }
            Step::And(items) => Formula::conjunction(items.iter().map(Step::residual)),
            Step::Or(items) => Formula::disjunction(items.iter().map(Step::residual)),
        };
        canonical(&raw)
    }
}

/// Unfolds `f` by one position. Atom bits come from `bit_of`.
pub(crate) fn unfold<B>(f: &Formula, bit_of: &B) -> Result<Step>
where
    B: Fn(&str) -> Option<u32>,
{
    use Formula as F;
    Ok(match f {
        F::True => Step::Const(true),
        F::False => Step::Const(false),
        F::Atom(a) => Step::Lit {
            bit: bit_of(a).ok_or_else(|| Error::UnknownAtom(a.to_string()))?,
            positive: true,
        },
        F::Not(inner) => match &**inner {
            F::Atom(a) => Step::Lit {
                bit: bit_of(a).ok_or_else(|| Error::UnknownAtom(a.to_string()))?,
                positive: false,
            },
            _ => return Err(Error::NotNnf(f.to_string())),
        },
        F::And(a, b) => Step::and(vec![unfold(a, bit_of)?, unfold(b, bit_of)?]),
        F::Or(a, b) => Step::or(vec![unfold(a, bit_of)?, unfold(b, bit_of)?]),
        F::Next(a) => Step::and(vec![
            Step::Defer((**a).clone()),
            Step::Defer(non_empty_suffix()),
        ]),
        F::WeakNext(a) => Step::or(vec![
            Step::Defer((**a).clone()),
            Step::Defer(empty_suffix_allowed()),
        ]),
        F::Until(a, b) => Step::or(vec![
            unfold(b, bit_of)?,
            Step::and(vec![unfold(a, bit_of)?, Step::Defer(f.clone())]),
        ]),
        F::Release(a, b) => Step::and(vec![
            unfold(b, bit_of)?,
            Step::or(vec![unfold(a, bit_of)?, Step::Defer(f.clone())]),
        ]),
        F::Eventually(_) | F::Always(_) | F::Implies(..) => {
            return Err(Error::NotNnf(f.to_string()))
        }
    })
}

/// Progresses an NNF formula through `letter`, whose bit k is the value of
/// `universe[k]`. Atoms outside the universe are an error.
pub fn progress(f: &Formula, letter: u32, universe: &[String]) -> Result<Formula> {
    let bit_of = |a: &str| universe.iter().position(|u| u == a).map(|k| k as u32);
    let mut step = unfold(f, &bit_of)?;
    while let Some(bit) = step.first_literal() {
        step = step.assign(bit, letter >> bit & 1 == 1);
    }
    Ok(step.residual())
}

/// Whether the obligation `f` is discharged when no letters remain.
pub fn emp(f: &Formula) -> Result<bool> {
    use Formula as F;
    Ok(match f {
        F::True => true,
        F::False => false,
        F::Atom(_) => false,
        F::Not(inner) if matches!(**inner, F::Atom(_)) => true,
        F::And(a, b) => emp(a)? && emp(b)?,
        F::Or(a, b) => emp(a)? || emp(b)?,
        F::Next(_) | F::Until(..) => false,
        F::WeakNext(_) | F::Release(..) => true,
        _ => return Err(Error::NotNnf(f.to_string())),
    })
}

/// Boolean normal form of a residual: nested conjunctions and disjunctions
/// are flattened, constants folded, operands sorted and deduplicated,
/// complementary literals collapsed and absorbed operands dropped. Temporal
/// operators are left untouched.
pub fn canonical(f: &Formula) -> Formula {
    match f {
        Formula::And(..) => canonical_junction(f, true),
        Formula::Or(..) => canonical_junction(f, false),
        _ => f.clone(),
    }
}

fn junction_operands(f: &Formula, is_and: bool, out: &mut Vec<Formula>) {
    match f {
        Formula::And(a, b) if is_and => {
            junction_operands(a, is_and, out);
            junction_operands(b, is_and, out);
        }
        Formula::Or(a, b) if !is_and => {
            junction_operands(a, is_and, out);
            junction_operands(b, is_and, out);
        }
        other => out.push(other.clone()),
    }
}

fn canonical_junction(f: &Formula, is_and: bool) -> Formula {
    let (unit, zero) = if is_and {
        (Formula::True, Formula::False)
    } else {
        (Formula::False, Formula::True)
    };
    let mut raw = Vec::new();
    junction_operands(f, is_and, &mut raw);
    let mut ops = Vec::with_capacity(raw.len());
    for op in raw {
        let c = canonical(&op);
        // Canonicalizing an operand can surface a same-kind junction.
        junction_operands(&c, is_and, &mut ops);
    }
    if ops.contains(&zero) {
        return zero;
    }
    ops.retain(|o| *o != unit);
    ops.sort();
    ops.dedup();
    for o in &ops {
        if let Formula::Not(inner) = o {
            if ops.binary_search(inner).is_ok() {
                return zero;
            }
        }
    }
    // Absorption: a ∧ (a ∨ b) = a and a ∨ (a ∧ b) = a.
    let snapshot = ops.clone();
    ops.retain(|o| {
        let inner_kind = matches!(
            (o, is_and),
            (Formula::Or(..), true) | (Formula::And(..), false)
        );
        if !inner_kind {
            return true;
        }
        let mut inner = Vec::new();
        junction_operands(o, !is_and, &mut inner);
        !snapshot
            .iter()
            .any(|other| other != o && inner.contains(other))
    });
    let rebuild = if is_and {
        Formula::conjunction
    } else {
        Formula::disjunction
    };
    rebuild(ops)
}
