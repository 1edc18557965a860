//! The trusted core.
//!
//! [`Thm`] values can only be produced by [`apply_rule`] (and the thin
//! wrappers in [`rules`]), by replaying a recorded derivation, or by the
//! theory extension mechanisms in [`crate::theory`]. Everything else in the
//! crate, tactics included, goes through these entry points.

pub mod conv;
pub mod derived;
pub mod rules;
pub mod thm;
pub mod unwind;

use thiserror::Error;

use crate::lattice::{Label, LatticeError, Scheme};
use crate::syntax::TypingError;

pub use rules::{apply_rule, replay};
pub use thm::{context_of, formula_of, label_of, proof_of, Context, Param, ProofNode, RuleId, Thm};
pub use unwind::{normalize_lifts, unwind_classical};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("SideConditionViolated in {rule}: {reason}")]
    SideConditionViolated { rule: RuleId, reason: String },
    #[error("LabelMismatch in {rule}: premises carry {left} and {right}; lift them first")]
    LabelMismatch {
        rule: RuleId,
        left: Label,
        right: Label,
    },
    #[error("ArityError: {rule} takes {expected} premises, got {found}")]
    ArityError {
        rule: RuleId,
        expected: usize,
        found: usize,
    },
    #[error("malformed parameters for {rule}: {reason}")]
    BadParams { rule: RuleId, reason: String },
    #[error("TypeError in {rule}: {source}")]
    TypeError { rule: RuleId, source: TypingError },
    #[error("NotAbove: cannot move a theorem from {from} to {to}")]
    NotAbove { from: Label, to: Label },
    #[error("UnboundScheme: {0} is not available in the active lattice")]
    UnboundScheme(Scheme),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("unknown theory axiom {0}")]
    UnknownAxiom(String),
    #[error("PolymorphicAxiomInProof: {0}")]
    PolymorphicAxiomInProof(String),
    #[error("LabelOutOfRange: {0}")]
    LabelOutOfRange(String),
    #[error("replay failed at node path {path:?}: {source}")]
    Replay {
        path: Vec<usize>,
        source: Box<KernelError>,
    },
}

pub type Result<T, E = KernelError> = std::result::Result<T, E>;
