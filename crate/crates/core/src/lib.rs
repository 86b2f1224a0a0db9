//! Effective topology for omega-regular languages: automata, determinization,
//! Borel classification, open-modulo-meager decompositions, and continuity
//! restrictions for rational functions on infinite words.

pub mod alphabet;
pub mod automaton;
pub mod error;
pub mod format;
pub mod baire;
pub mod determinize;
pub mod graph;
pub mod membership;
pub mod ops;
pub mod topology;
pub mod transducer;
pub mod word;

pub use alphabet::Alphabet;
pub use automaton::{AcceptanceMode, BuchiAutomaton, FiniteAutomaton, MullerAutomaton, StateId};
pub use error::{Error, Result};
pub use word::UPWord;
