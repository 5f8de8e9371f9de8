//! Presentations of finitely generated abelian groups and exact element arithmetic.

pub mod alphabet;
pub mod presentation;
pub mod snf;
pub mod structure;

pub use alphabet::{Letter, LetterInfo, OrderedAlphabet, Word};
pub use presentation::GroupSpec;
pub use snf::{smith_normal_form, IntMatrix, SmithForm};
pub use structure::{relation_matrix, AbelianStructure, Column, Element};
