//! Minimal relations, the fellow-traveller constant and the γ-canonical word acceptor.

pub mod build;
pub mod export;
pub mod relations;

pub use build::{Acceptor, AcceptorState, StatePathProfile, Target, TransitionMatrix};
pub use export::{export_dot, export_json};
pub use relations::{
    fellow_traveller_constant, minimal_relations, LetterClass, MinimalRelation, NormalForm,
    ShortlexRules,
};
