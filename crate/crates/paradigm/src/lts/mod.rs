//! Labelled transition systems with structured labels: composition under
//! multi-way synchronization and encapsulation, hiding, renaming,
//! reachability, and interchange formats.

mod aut;
mod compose;
mod dot;
mod label;
mod ops;
mod sync;
mod system;

pub use aut::{export_aut, import_aut, AutError};
pub use compose::{compose, ComposeError, Composition};
pub use dot::export_dot;
pub use label::{Label, LabelKind, LabelPattern, LabelSet};
pub use ops::{hide, rename};
pub use sync::{SyncRule, SyncRuleError, SyncRuleSet};
pub use system::{Lts, LtsBuilder, LtsError};
