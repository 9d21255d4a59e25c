use thiserror::Error;

use crate::ground::{Bounds, GroundError, Interpretation};
use crate::solver::SolveError;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Ground(#[from] GroundError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("no interpretation within bounds ({0}) makes the theory consistent")]
    NoInterpretation(Bounds),
    #[error("theory is not deterministic: {count} answer sets under {gamma}")]
    NotDeterministic { gamma: Interpretation, count: usize },
    #[error("theory truncated after step {step} is not deterministic under {gamma}")]
    TruncatedNotDeterministic { gamma: Interpretation, step: u32 },
    #[error("theory is inconsistent under {0}")]
    Inconsistent(Interpretation),
    #[error("`{0}` does not hold in the answer set")]
    TargetNotInModel(String),
    #[error("more than {0} proofs; the proof search was stopped")]
    ProofLimit(usize),
    #[error("no change matches `{0}`")]
    NoMatchingChange(String),
    #[error("observation is not unexpected: {0}")]
    NotUnexpected(String),
}

pub type Result<T> = std::result::Result<T, Error>;
