//! Label-level operations: hiding and renaming.

use std::collections::HashMap;

use super::label::{Label, LabelSet};
use super::system::{Lts, LtsBuilder};

/// Renames every transition label matched by `set` to `tau`; states are
/// untouched. Transitions that become identical collapse into one.
pub fn hide(lts: &Lts, set: &LabelSet) -> Lts {
    relabel(lts, |label| {
        if set.matches(label) {
            Label::Tau
        } else {
            label.clone()
        }
    })
}

/// Label-wise substitution; labels without an entry are unchanged.
pub fn rename(lts: &Lts, map: &HashMap<Label, Label>) -> Lts {
    relabel(lts, |label| {
        map.get(label).cloned().unwrap_or_else(|| label.clone())
    })
}

fn relabel(lts: &Lts, f: impl Fn(&Label) -> Label) -> Lts {
    let mapped: Vec<Label> = lts.labels().iter().map(f).collect();
    let mut builder = LtsBuilder::new();
    match lts.state_names() {
        Some(names) => {
            for name in names {
                builder.add_state(Some(name.clone()));
            }
        }
        None => builder.add_states(lts.num_states()),
    }
    for &(s, l, t) in lts.raw_transitions() {
        builder.add_transition(s, mapped[l as usize].clone(), t);
    }
    builder
        .build(lts.initial())
        .expect("relabelling preserves shape")
}
