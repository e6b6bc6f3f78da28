//! LTLf formulas, traces and the input/output partition.

mod eval;
mod nnf;
mod parse;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

pub use eval::{eval_trace, TraceEvaluator};
pub use nnf::{is_nnf, to_nnf};
pub use parse::parse;

use crate::error::{Error, ParseError, Result};

/// LTLf abstract syntax. Equality is structural.
///
/// Variant order matters: it is the derived `Ord` used to sort the operands
/// of canonical conjunctions and disjunctions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(Arc<str>),
    Not(Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Next(Arc<Formula>),
    WeakNext(Arc<Formula>),
    Until(Arc<Formula>, Arc<Formula>),
    Release(Arc<Formula>, Arc<Formula>),
    Eventually(Arc<Formula>),
    Always(Arc<Formula>),
    Implies(Arc<Formula>, Arc<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Arc::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Arc::new(l), Arc::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Arc::new(l), Arc::new(r))
    }

    pub fn next(f: Formula) -> Formula {
        Formula::Next(Arc::new(f))
    }

    pub fn weak_next(f: Formula) -> Formula {
        Formula::WeakNext(Arc::new(f))
    }

    pub fn until(l: Formula, r: Formula) -> Formula {
        Formula::Until(Arc::new(l), Arc::new(r))
    }

    pub fn release(l: Formula, r: Formula) -> Formula {
        Formula::Release(Arc::new(l), Arc::new(r))
    }

    pub fn eventually(f: Formula) -> Formula {
        Formula::Eventually(Arc::new(f))
    }

    pub fn always(f: Formula) -> Formula {
        Formula::Always(Arc::new(f))
    }

    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::Implies(Arc::new(l), Arc::new(r))
    }

    /// Conjunction of all items, `True` when empty.
    pub fn conjunction<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        let mut items: Vec<Formula> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else {
            return Formula::True;
        };
        while let Some(f) = items.pop() {
            acc = Formula::and(f, acc);
        }
        acc
    }

    /// Disjunction of all items, `False` when empty.
    pub fn disjunction<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        let mut items: Vec<Formula> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else {
            return Formula::False;
        };
        while let Some(f) = items.pop() {
            acc = Formula::or(f, acc);
        }
        acc
    }

    /// Number of syntax nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn children(&self) -> Vec<&Formula> {
        use Formula::*;
        match self {
            True | False | Atom(_) => vec![],
            Not(a) | Next(a) | WeakNext(a) | Eventually(a) | Always(a) => vec![a],
            And(a, b) | Or(a, b) | Until(a, b) | Release(a, b) | Implies(a, b) => vec![a, b],
        }
    }

    /// Renames atoms through `rename`; atoms it maps to `None` are kept.
    pub fn rename_atoms<F>(&self, rename: &F) -> Formula
    where
        F: Fn(&str) -> Option<String>,
    {
        use Formula::*;
        let r = |f: &Arc<Formula>| Arc::new(f.rename_atoms(rename));
        match self {
            True => True,
            False => False,
            Atom(a) => match rename(a) {
                Some(n) => Formula::atom(&n),
                None => self.clone(),
            },
            Not(a) => Not(r(a)),
            And(a, b) => And(r(a), r(b)),
            Or(a, b) => Or(r(a), r(b)),
            Next(a) => Next(r(a)),
            WeakNext(a) => WeakNext(r(a)),
            Until(a, b) => Until(r(a), r(b)),
            Release(a, b) => Release(r(a), r(b)),
            Eventually(a) => Eventually(r(a)),
            Always(a) => Always(r(a)),
            Implies(a, b) => Implies(r(a), r(b)),
        }
    }
}

/// Exact set of atom names occurring in `f`.
pub fn atoms_of(f: &Formula) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    let mut stack = vec![f];
    while let Some(g) = stack.pop() {
        if let Formula::Atom(a) = g {
            out.insert(a.to_string());
        }
        stack.extend(g.children());
    }
    out
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

const KEYWORDS: &[&str] = &["true", "false", "X", "WX", "F", "G", "U", "R"];

pub(crate) fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

/// Fully parenthesized concrete syntax accepted back by [`parse`].
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Formula::*;
        match self {
            True => write!(f, "true"),
            False => write!(f, "false"),
            Atom(a) => write!(f, "{a}"),
            Not(a) => write!(f, "!{a}"),
            Next(a) => write!(f, "X {a}"),
            WeakNext(a) => write!(f, "WX {a}"),
            Eventually(a) => write!(f, "F {a}"),
            Always(a) => write!(f, "G {a}"),
            And(a, b) => write!(f, "({a} & {b})"),
            Or(a, b) => write!(f, "({a} | {b})"),
            Until(a, b) => write!(f, "({a} U {b})"),
            Release(a, b) => write!(f, "({a} R {b})"),
            Implies(a, b) => write!(f, "({a} -> {b})"),
        }
    }
}

/// Split of the atom universe into environment-controlled inputs and
/// controller-owned outputs. Order is significant: it fixes letter bit
/// positions (inputs first, then outputs) and variable orders.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Partition {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
}

impl Partition {
    pub fn new<I, O, S, T>(inputs: I, outputs: O) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        O: IntoIterator<Item = T>,
        S: Into<String>,
        T: Into<String>,
    {
        let p = Partition {
            inputs: inputs.into_iter().map(Into::into).collect(),
            outputs: outputs.into_iter().map(Into::into).collect(),
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for name in self.atoms() {
            if !is_identifier(name) || is_keyword(name) {
                return Err(Error::Partition(format!(
                    "`{name}` is not a valid atom name"
                )));
            }
            if !seen.insert(name) {
                return Err(Error::Partition(format!(
                    "`{name}` declared more than once"
                )));
            }
        }
        Ok(())
    }

    /// Parses the two-line `.inputs:` / `.outputs:` format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut inputs = None;
        let mut outputs = None;
        for (lineno, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (slot, rest) = if let Some(rest) = trimmed.strip_prefix(".inputs:") {
                (&mut inputs, rest)
            } else if let Some(rest) = trimmed.strip_prefix(".outputs:") {
                (&mut outputs, rest)
            } else {
                return Err(
                    ParseError::new(lineno + 1, 1, "expected `.inputs:` or `.outputs:`").into(),
                );
            };
            if slot.is_some() {
                return Err(ParseError::new(lineno + 1, 1, "section declared twice").into());
            }
            *slot = Some(
                rest.split_whitespace()
                    .map(str::to_string)
                    .collect::<Vec<_>>(),
            );
        }
        let inputs = inputs.ok_or_else(|| Error::Partition("missing `.inputs:` line".into()))?;
        let outputs = outputs.ok_or_else(|| Error::Partition("missing `.outputs:` line".into()))?;
        Partition::new(inputs, outputs)
    }

    /// Inputs followed by outputs.
    pub fn atoms(&self) -> impl Iterator<Item = &String> {
        self.inputs.iter().chain(self.outputs.iter())
    }

    pub fn len(&self) -> usize {
        self.inputs.len() + self.outputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Letter bit of `name`, if declared.
    pub fn position(&self, name: &str) -> Option<usize> {
        self.atoms().position(|a| a == name)
    }

    pub fn is_input(&self, name: &str) -> bool {
        self.inputs.iter().any(|a| a == name)
    }

    /// Fails unless every atom of `f` is declared.
    pub fn covers(&self, f: &Formula) -> Result<()> {
        match atoms_of(f).into_iter().find(|a| self.position(a).is_none()) {
            Some(a) => Err(Error::UnknownAtom(a)),
            None => Ok(()),
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, ".inputs: {}", self.inputs.join(" "))?;
        writeln!(f, ".outputs: {}", self.outputs.join(" "))
    }
}

/// Finite sequence of propositional interpretations.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Trace {
    pub steps: Vec<BTreeSet<String>>,
}

impl Trace {
    pub fn new(steps: Vec<BTreeSet<String>>) -> Self {
        Trace { steps }
    }

    /// Builds a trace from steps given as lists of true atoms.
    pub fn from_names(steps: &[&[&str]]) -> Self {
        Trace {
            steps: steps
                .iter()
                .map(|s| s.iter().map(|a| a.to_string()).collect())
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Parses one step per line, each a comma-separated list of
    /// `name=0`/`name=1` pairs. Blank lines are steps with every atom false;
    /// lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut steps = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim_start().starts_with('#') {
                continue;
            }
            steps.push(parse_assignment_line(line, lineno + 1)?);
        }
        Ok(Trace { steps })
    }
}

/// Parses `a=1, b=0` into the set of atoms assigned 1.
pub(crate) fn parse_assignment_line(line: &str, lineno: usize) -> Result<BTreeSet<String>> {
    let mut step = BTreeSet::new();
    let mut column = 1;
    for item in line.split(',') {
        let token = item.trim();
        if !token.is_empty() {
            let (name, value) = token.split_once('=').ok_or_else(|| {
                ParseError::new(
                    lineno,
                    column,
                    format!("expected `name=0|1`, found `{token}`"),
                )
            })?;
            let name = name.trim();
            if !is_identifier(name) {
                return Err(
                    ParseError::new(lineno, column, format!("invalid atom name `{name}`")).into(),
                );
            }
            match value.trim() {
                "1" => {
                    step.insert(name.to_string());
                }
                "0" => {}
                v => {
                    return Err(ParseError::new(
                        lineno,
                        column,
                        format!("expected 0 or 1, found `{v}`"),
                    )
                    .into())
                }
            }
        }
        column += item.len() + 1;
    }
    Ok(step)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atoms_of_examples() {
        assert!(atoms_of(&Formula::True).is_empty());
        let f = Formula::until(Formula::atom("a"), Formula::next(Formula::atom("b")));
        assert_eq!(atoms_of(&f), ["a", "b"].map(String::from).into());
        let g = Formula::and(Formula::atom("a"), Formula::not(Formula::atom("a")));
        assert_eq!(atoms_of(&g), ["a"].map(String::from).into());
    }

    #[test]
    fn partition_file() {
        let p = Partition::parse(".inputs: a b\n.outputs: c\n").unwrap();
        assert_eq!(p.inputs, vec!["a", "b"]);
        assert_eq!(p.outputs, vec!["c"]);
        assert_eq!(p.position("c"), Some(2));
        assert_eq!(p.to_string(), ".inputs: a b\n.outputs: c\n");
        let empty = Partition::parse(".inputs:\n.outputs: y\n").unwrap();
        assert!(empty.inputs.is_empty());
    }

    #[test]
    fn partition_errors() {
        assert!(matches!(
            Partition::parse(".inputs: a\n.outputs: a\n"),
            Err(Error::Partition(_))
        ));
        assert!(matches!(
            Partition::parse(".inputs: a\n"),
            Err(Error::Partition(_))
        ));
        assert!(matches!(
            Partition::parse(".inputs: a\nfoo\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            Partition::parse(".inputs: X\n.outputs:\n"),
            Err(Error::Partition(_))
        ));
    }

    #[test]
    fn trace_file() {
        let t = Trace::parse("a=1, b=0\n\nb=1\n").unwrap();
        assert_eq!(t, Trace::from_names(&[&["a"], &[], &["b"]]));
        assert!(Trace::parse("a=2\n").is_err());
        assert!(Trace::parse("a\n").is_err());
    }

    #[test]
    fn covers_reports_unknown_atom() {
        let p = Partition::new(["a"], ["b"]).unwrap();
        let f = parse("a U c").unwrap();
        assert!(matches!(p.covers(&f), Err(Error::UnknownAtom(a)) if a == "c"));
    }
}
