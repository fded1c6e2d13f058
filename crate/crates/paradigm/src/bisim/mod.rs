//! Branching bisimulation: quotient construction via signature refinement,
//! equivalence checking, and a naive fixpoint oracle for cross-validation.

mod oracle;
mod quotient;
mod scc;

pub use oracle::{oracle_equivalent, ORACLE_STATE_BOUND};
pub use quotient::{branching_quotient, equivalent, BlockMap, Distinguishing, Equivalence};
pub use scc::collapse_tau_scc;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BisimError {
    #[error("oracle limited to {bound} combined states, got {got}")]
    OracleBound { bound: usize, got: usize },
}
