//! Generation of natural-language sentences from UNL semantic networks,
//! driven by a dictionary and a transformation grammar.

pub mod engine;
pub mod eval;
pub mod fixtures;
pub mod grammar;
pub mod lexicon;
pub mod morphology;
pub mod token;
pub mod unl;

pub use token::Token;
