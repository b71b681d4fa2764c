//! Discrete Morse matchings on presentation complexes.
//!
//! A balanced presentation is turned into its subdivided 2-complex, a random
//! acyclic matching on the face poset is collapsed into a smaller presentation
//! of the same Q**-class, and a greedy Tietze-style simplifier tries to finish
//! the job. Successful searches are stored as replayable certificates.

pub mod cli;
pub mod complex;
pub mod matching;
pub mod morse;
pub mod presentation;
pub mod search;
pub mod simplify;
pub mod words;

use thiserror::Error;

pub use complex::{presentation_complex, CellId, Complex2, FacePoset};
pub use matching::Matching;
pub use morse::morse_presentation;
pub use presentation::{parse_presentation, Presentation};
pub use simplify::{simplified, SimplifyConfig};
pub use words::{GenId, Letter, Word};

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Word(#[from] words::WordError),
    #[error(transparent)]
    Presentation(#[from] presentation::PresentationError),
    #[error(transparent)]
    Complex(#[from] complex::ComplexError),
    #[error(transparent)]
    Matching(#[from] matching::MatchingError),
    #[error(transparent)]
    Morse(#[from] morse::MorseError),
    #[error(transparent)]
    Search(#[from] search::SearchError),
    #[error("{0}: {1}")]
    Io(String, String),
}
