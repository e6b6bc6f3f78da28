//! Explicit DFAs over the alphabet `2^(X ∪ Y)`, built by formula progression.

mod build;
mod export;
mod minimize;
mod progress;

use std::fmt;

pub use build::{build_dfa, build_dfa_with, compile, BuildOptions, MAX_EXPLICIT_ATOMS};
pub use export::{export_dot, export_table};
pub use minimize::minimize;
pub use progress::{canonical, emp, progress};

use crate::error::{Error, Result};
use crate::ltlf::{Formula, Partition};

/// Interpretation of the atom universe: bit k is the value of atom k, with
/// inputs occupying the low bits and outputs the bits above them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Letter(pub u32);

impl Letter {
    /// Combines an input letter and an output letter.
    pub fn join(x: u32, y: u32, input_width: usize) -> Letter {
        Letter(x | y << input_width)
    }

    pub fn bit(self, k: usize) -> bool {
        self.0 >> k & 1 == 1
    }

    /// `width` characters of `0`/`1`, atom 0 first. The empty letter prints as `-`.
    pub fn bits(self, width: usize) -> String {
        if width == 0 {
            return "-".to_string();
        }
        (0..width)
            .map(|k| if self.bit(k) { '1' } else { '0' })
            .collect()
    }

    /// Inverse of [`Letter::bits`].
    pub fn from_bits(text: &str) -> Option<Letter> {
        if text == "-" {
            return Some(Letter(0));
        }
        if text.is_empty() || text.len() > 32 {
            return None;
        }
        let mut v = 0u32;
        for (k, c) in text.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v |= 1 << k,
                _ => return None,
            }
        }
        Some(Letter(v))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#b}", self.0)
    }
}

/// Complete deterministic automaton with a row-major transition table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitDfa {
    partition: Partition,
    labels: Vec<Formula>,
    initial: usize,
    accepting: Vec<bool>,
    delta: Vec<u32>,
}

impl ExplicitDfa {
    /// Checks totality and index ranges. `delta[s * 2^|P| + l]` is the
    /// successor of `s` on letter `l`.
    pub fn new(
        partition: Partition,
        labels: Vec<Formula>,
        initial: usize,
        accepting: Vec<bool>,
        delta: Vec<u32>,
    ) -> Result<Self> {
        let n = labels.len();
        if partition.len() > MAX_EXPLICIT_ATOMS {
            return Err(Error::TooManyAtoms {
                count: partition.len(),
                limit: MAX_EXPLICIT_ATOMS,
            });
        }
        let k = 1usize << partition.len();
        if n == 0 {
            return Err(Error::MalformedDfa("no states".into()));
        }
        if initial >= n {
            return Err(Error::MalformedDfa(format!(
                "initial state {initial} out of range"
            )));
        }
        if accepting.len() != n {
            return Err(Error::MalformedDfa(
                "accepting flags do not match the state count".into(),
            ));
        }
        if delta.len() != n * k {
            return Err(Error::MalformedDfa(format!(
                "expected {} transitions, found {}",
                n * k,
                delta.len()
            )));
        }
        if let Some(bad) = delta.iter().find(|&&t| t as usize >= n) {
            return Err(Error::MalformedDfa(format!("successor {bad} out of range")));
        }
        Ok(ExplicitDfa {
            partition,
            labels,
            initial,
            accepting,
            delta,
        })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn num_states(&self) -> usize {
        self.labels.len()
    }

    /// `2^|P|`.
    pub fn num_letters(&self) -> usize {
        1 << self.partition.len()
    }

    pub fn width(&self) -> usize {
        self.partition.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, s: usize) -> bool {
        self.accepting[s]
    }

    pub fn accepting_states(&self) -> Vec<usize> {
        (0..self.num_states())
            .filter(|&s| self.accepting[s])
            .collect()
    }

    /// Residual formula the state was built from.
    pub fn label(&self, s: usize) -> &Formula {
        &self.labels[s]
    }

    pub fn successor(&self, s: usize, l: Letter) -> usize {
        self.delta[s * self.num_letters() + l.0 as usize] as usize
    }

    /// Successors of `s`, indexed by letter.
    pub fn row(&self, s: usize) -> &[u32] {
        let k = self.num_letters();
        &self.delta[s * k..(s + 1) * k]
    }

    /// State reached after reading `letters` from the initial state.
    pub fn run(&self, letters: &[u32]) -> usize {
        letters
            .iter()
            .fold(self.initial, |s, &l| self.successor(s, Letter(l)))
    }

    pub fn accepts(&self, letters: &[u32]) -> bool {
        self.accepting[self.run(letters)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn letter_bits_round_trip() {
        assert_eq!(Letter(0b101).bits(4), "1010");
        assert_eq!(Letter::from_bits("1010"), Some(Letter(0b101)));
        assert_eq!(Letter(0).bits(0), "-");
        assert_eq!(Letter::from_bits("-"), Some(Letter(0)));
        assert_eq!(Letter::from_bits("012"), None);
        assert_eq!(Letter::join(0b1, 0b10, 2), Letter(0b1001));
    }

    #[test]
    fn validation() {
        let p = Partition::new(["a"], Vec::<String>::new()).unwrap();
        let ok = ExplicitDfa::new(p.clone(), vec![Formula::True], 0, vec![true], vec![0, 0]);
        assert!(ok.is_ok());
        assert!(ExplicitDfa::new(p.clone(), vec![Formula::True], 0, vec![true], vec![0]).is_err());
        assert!(
            ExplicitDfa::new(p.clone(), vec![Formula::True], 1, vec![true], vec![0, 0]).is_err()
        );
        assert!(ExplicitDfa::new(p, vec![Formula::True], 0, vec![true], vec![0, 1]).is_err());
    }
}
