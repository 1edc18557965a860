//! Backward proof: goal states, tactics, tacticals and the session server.

mod goal;
pub mod protocol;
mod run;
mod tactic;
mod tactics;

use thiserror::Error;

use crate::frontend::ParseError;
use crate::kernel::KernelError;
use crate::lattice::{Label, LatticeError};

pub use goal::{Goal, GoalState, Justify, RenderedGoal, Step};
pub use run::{apply_tactic, run_tactics};
pub use tactic::{parse_tactic, Fact, Tactic, TacticExpr};

#[derive(Clone, Debug, Error)]
pub enum EngineError {
    #[error("tactic failed: {0}")]
    TacticFails(String),
    #[error("no goals left")]
    NoGoals,
    #[error("{0} goal(s) remain")]
    GoalsRemain(usize),
    #[error("cannot drop a goal at {from} to {to}: {to} is not below {from}")]
    NotBelow { from: Label, to: Label },
    #[error("justification does not match its goal: {0}")]
    JustificationMismatch(String),
    #[error("nothing to undo")]
    NothingToUndo,
    #[error("{0}")]
    Kernel(#[from] KernelError),
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Lattice(#[from] LatticeError),
}

pub type Result<T, E = EngineError> = std::result::Result<T, E>;

pub(crate) fn fails(reason: impl Into<String>) -> EngineError {
    EngineError::TacticFails(reason.into())
}
