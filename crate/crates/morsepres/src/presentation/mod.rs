//! Finite group presentations.

mod canonical;
mod moves;
mod parse;
mod snf;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::words::{GenId, Word, WordError};

pub use canonical::canonical_equivalence;
pub use moves::{eliminate_generator, Move, MoveLog, Recorder};
pub(crate) use moves::eliminate_in_place;
pub use parse::parse_presentation;
pub use snf::{smith_normal_form, AbelianInvariants};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("invalid generator name `{0}`")]
    InvalidName(String),
    #[error("letter refers to generator #{0}, which is not declared")]
    UndeclaredIndex(u32),
    #[error("relator index {0} out of range")]
    BadRelator(usize),
    #[error("generator index {0} out of range")]
    BadGenerator(u32),
    #[error("relator {0} is not trivial")]
    NotTrivial(usize),
    #[error("cannot multiply relator {0} by itself")]
    SelfMultiply(usize),
    #[error("generator #{gen} must occur once, in relator {relator} only")]
    NotIsolated { gen: u32, relator: usize },
    #[error("integer overflow in Smith normal form")]
    Overflow,
    #[error("presentation too large for exhaustive comparison ({0} generators, limit 4)")]
    TooLarge(usize),
    #[error(transparent)]
    Word(#[from] WordError),
}

pub(crate) fn valid_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic())
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Generators (by display name) and relator words.
///
/// Equality ignores the `origin` tag.
#[derive(Clone, Debug, Default)]
pub struct Presentation {
    gens: Vec<String>,
    relators: Vec<Word>,
    origin: Option<String>,
}

impl PartialEq for Presentation {
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens && self.relators == other.relators
    }
}

impl Eq for Presentation {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub n: usize,
    pub m: usize,
    pub l: usize,
    pub deficiency: i64,
}

impl Presentation {
    pub fn new<S: Into<String>>(gens: Vec<S>, relators: Vec<Word>) -> Result<Self, PresentationError> {
        let gens: Vec<String> = gens.into_iter().map(Into::into).collect();
        for (i, g) in gens.iter().enumerate() {
            if !valid_name(g) {
                return Err(PresentationError::InvalidName(g.clone()));
            }
            if gens[..i].contains(g) {
                return Err(PresentationError::DuplicateGenerator(g.clone()));
            }
        }
        for r in &relators {
            if let Some(l) = r.letters().iter().find(|l| l.gen.index() >= gens.len()) {
                return Err(PresentationError::UndeclaredIndex(l.gen.0));
            }
        }
        Ok(Presentation { gens, relators, origin: None })
    }

    pub fn empty() -> Self {
        Presentation::default()
    }

    pub fn with_origin(mut self, origin: impl Into<String>) -> Self {
        self.origin = Some(origin.into());
        self
    }

    pub fn origin(&self) -> Option<&str> {
        self.origin.as_deref()
    }

    pub fn generators(&self) -> &[String] {
        &self.gens
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn gen(&self, name: &str) -> Option<GenId> {
        self.gens.iter().position(|g| g == name).map(|i| GenId(i as u32))
    }

    pub fn num_generators(&self) -> usize {
        self.gens.len()
    }

    pub fn num_relators(&self) -> usize {
        self.relators.len()
    }

    pub fn stats(&self) -> Stats {
        let (n, m) = (self.gens.len(), self.relators.len());
        Stats {
            n,
            m,
            l: self.relators.iter().map(Word::len).sum(),
            deficiency: n as i64 - m as i64,
        }
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Word::len).sum()
    }

    pub fn is_balanced(&self) -> bool {
        self.gens.len() == self.relators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty() && self.relators.is_empty()
    }

    pub fn has_trivial_relator(&self) -> bool {
        self.relators.iter().any(Word::is_empty)
    }

    /// Row `i` holds the exponent sums of relator `i`.
    pub fn abelianization_matrix(&self) -> Vec<Vec<i64>> {
        self.relators
            .iter()
            .map(|r| (0..self.gens.len()).map(|j| r.exponent_sum(GenId(j as u32))).collect())
            .collect()
    }

    pub fn abelian_invariants(&self) -> Result<AbelianInvariants, PresentationError> {
        AbelianInvariants::of_matrix(&self.abelianization_matrix(), self.gens.len())
    }

    pub(crate) fn relators_mut(&mut self) -> &mut Vec<Word> {
        &mut self.relators
    }

    pub(crate) fn gens_mut(&mut self) -> &mut Vec<String> {
        &mut self.gens
    }

    pub(crate) fn relator(&self, i: usize) -> Result<&Word, PresentationError> {
        self.relators.get(i).ok_or(PresentationError::BadRelator(i))
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{} | ", self.gens.join(","))?;
        for (i, r) in self.relators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", r.display(&self.gens))?;
        }
        write!(f, ">")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stats_examples() {
        let p = parse_presentation("<x,y | x^2, x*y^-2>").unwrap();
        assert_eq!(p.stats(), Stats { n: 2, m: 2, l: 5, deficiency: 0 });
        let e = parse_presentation("< | >").unwrap();
        assert_eq!(e.stats(), Stats { n: 0, m: 0, l: 0, deficiency: 0 });
        let ak2 = parse_presentation("<x,y | x*y*x*(y*x*y)^-1, x^2*y^-3>");
        assert!(ak2.is_err(), "parentheses are not part of the grammar");
        let ak2 = parse_presentation("<x,y | x*y*x*y^-1*x^-1*y^-1, x^2*y^-3>").unwrap();
        assert_eq!(ak2.stats().l, 11);
    }

    #[test]
    fn abelianization_examples() {
        let p = parse_presentation("<x,y | x^2, x*y^-2>").unwrap();
        assert_eq!(p.abelianization_matrix(), vec![vec![2, 0], vec![1, -2]]);
        assert!(Presentation::empty().abelianization_matrix().is_empty());
        let c = parse_presentation("<x,y | [x,y]>").unwrap();
        assert_eq!(c.abelianization_matrix(), vec![vec![0, 0]]);
    }

    #[test]
    fn constructor_validation() {
        assert!(matches!(
            Presentation::new(vec!["x", "x"], vec![]),
            Err(PresentationError::DuplicateGenerator(_))
        ));
        assert!(matches!(
            Presentation::new(vec!["1x"], vec![]),
            Err(PresentationError::InvalidName(_))
        ));
        let w = Word::gen_power(GenId(3), 1);
        assert!(matches!(
            Presentation::new(vec!["x"], vec![w]),
            Err(PresentationError::UndeclaredIndex(3))
        ));
    }
}
