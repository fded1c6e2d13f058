//! The Paradigm domain model and its validation.

mod types;
mod validate;

pub use types::{
    ComponentInstance, ConsistencyRule, ParadigmModel, Participant, Partition, PartitionEntry,
    Phase, PhaseTransfer, Role, Std, StdTransition, Trap,
};
pub use validate::{
    validate_model, validate_partition, validate_role, validate_std, Severity, ValidationReport,
    Violation,
};
