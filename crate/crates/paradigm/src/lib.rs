//! Toolkit for the Paradigm coordination modelling language.
//!
//! Paradigm describes collaborating components at two levels: a *detailed*
//! state-transition diagram per component, and per-collaboration *global*
//! diagrams whose states are phases (temporary behavioural constraints) and
//! whose steps are trap-labelled phase transfers. Consistency rules couple one
//! conductor transition with participant phase transfers.
//!
//! The crate provides:
//!
//! - [`model`]: the domain types (STDs, phases, traps, partitions, roles,
//!   consistency rules) and their validation,
//! - [`lts`]: flat labelled transition systems with structured labels,
//!   multi-way synchronized composition under encapsulation, hiding,
//!   renaming, and Aldebaran (`.aut`) interchange,
//! - [`bisim`]: branching bisimulation equivalence checking and quotient
//!   construction, plus a naive fixpoint oracle for cross-validation,
//! - [`translate`]: the encoding of a Paradigm model as a network of
//!   synchronized LTSs (detailed, global, and conductor processes),
//! - [`reduce`]: detection of globally inert detailed transitions and the
//!   first-reduce then-compose construction of reduced state spaces,
//! - [`generate`]: builders for the bundled client/server model family.

pub mod bisim;
pub mod generate;
pub mod lts;
pub mod model;
pub mod reduce;
pub mod translate;

mod par;

pub use lts::{
    compose, Composition, Label, LabelKind, LabelPattern, LabelSet, Lts, SyncRule, SyncRuleSet,
};
pub use model::{ParadigmModel, ValidationReport};
