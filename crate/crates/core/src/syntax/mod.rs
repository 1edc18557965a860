//! The object language: kinds, types, terms, and their well-formedness.

pub mod logic;
pub mod signature;
pub mod term;
pub mod types;

pub use signature::{infer_type, kind_of, term_subst, type_of, Signature, TypingError};
pub use term::{alpha_eq, ftv_term, fv_term, term_type_subst, Term, Var};
pub use types::{ftv_type, name, type_subst, Kind, Name, Type, TypeFormer};
