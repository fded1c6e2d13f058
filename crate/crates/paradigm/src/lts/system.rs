//! The flat labelled transition system representation.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use super::label::Label;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LtsError {
    #[error("state index {index} out of range (state count {count})")]
    StateOutOfRange { index: u32, count: u32 },
    #[error("an LTS needs at least one state")]
    NoStates,
}

/// An indexed labelled transition system.
///
/// Labels are interned: `labels` is sorted and transition entries refer to it
/// by position. Transitions are sorted by `(source, label, target)` and
/// duplicates are collapsed, so two structurally equal systems compare equal
/// and render identically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lts {
    num_states: u32,
    initial: u32,
    labels: Vec<Label>,
    transitions: Vec<(u32, u32, u32)>,
    /// Offsets into `transitions` per source state (CSR layout).
    offsets: Vec<u32>,
    state_names: Option<Vec<String>>,
}

impl Lts {
    pub fn num_states(&self) -> u32 {
        self.num_states
    }

    pub fn initial(&self) -> u32 {
        self.initial
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.len()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, id: u32) -> &Label {
        &self.labels[id as usize]
    }

    pub fn label_id(&self, label: &Label) -> Option<u32> {
        self.labels.binary_search(label).ok().map(|i| i as u32)
    }

    /// All transitions as `(source, label id, target)`, sorted.
    pub fn raw_transitions(&self) -> &[(u32, u32, u32)] {
        &self.transitions
    }

    pub fn transitions(&self) -> impl Iterator<Item = (u32, &Label, u32)> + '_ {
        self.transitions
            .iter()
            .map(|&(s, l, t)| (s, &self.labels[l as usize], t))
    }

    /// Outgoing transitions of `state` as `(label id, target)`, sorted.
    pub fn outgoing(&self, state: u32) -> &[(u32, u32, u32)] {
        let lo = self.offsets[state as usize] as usize;
        let hi = self.offsets[state as usize + 1] as usize;
        &self.transitions[lo..hi]
    }

    pub fn state_names(&self) -> Option<&[String]> {
        self.state_names.as_deref()
    }

    pub fn state_name(&self, state: u32) -> String {
        match &self.state_names {
            Some(names) => names[state as usize].clone(),
            None => state.to_string(),
        }
    }

    /// `(state count, transition count, label alphabet)`.
    pub fn stats(&self) -> (u32, usize, BTreeSet<Label>) {
        let alphabet: BTreeSet<Label> = self
            .transitions
            .iter()
            .map(|&(_, l, _)| self.labels[l as usize].clone())
            .collect();
        (self.num_states, self.transitions.len(), alphabet)
    }

    /// States without outgoing transitions.
    pub fn deadlock_states(&self) -> Vec<u32> {
        (0..self.num_states)
            .filter(|&s| self.outgoing(s).is_empty())
            .collect()
    }

    /// The restriction to states reachable from the initial state, renumbered
    /// in breadth-first discovery order.
    pub fn reachable(&self) -> Lts {
        let mut index: HashMap<u32, u32> = HashMap::new();
        let mut order: Vec<u32> = Vec::new();
        let mut queue = VecDeque::new();
        index.insert(self.initial, 0);
        order.push(self.initial);
        queue.push_back(self.initial);
        while let Some(s) = queue.pop_front() {
            for &(_, _, t) in self.outgoing(s) {
                if let std::collections::hash_map::Entry::Vacant(slot) = index.entry(t) {
                    slot.insert(order.len() as u32);
                    order.push(t);
                    queue.push_back(t);
                }
            }
        }
        let mut builder = LtsBuilder::new();
        for &old in &order {
            builder.add_state(self.state_names.as_ref().map(|n| n[old as usize].clone()));
        }
        for &(s, l, t) in &self.transitions {
            if let (Some(&ns), Some(&nt)) = (index.get(&s), index.get(&t)) {
                builder.add_transition(ns, self.labels[l as usize].clone(), nt);
            }
        }
        builder.build(0).expect("reachable part is well formed")
    }
}

impl fmt::Display for Lts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "lts({} states, {} transitions, initial {})",
            self.num_states,
            self.transitions.len(),
            self.initial
        )
    }
}

/// Incremental construction of an [`Lts`]; `build` canonicalizes label ids
/// and transition order.
#[derive(Debug, Default)]
pub struct LtsBuilder {
    names: Vec<Option<String>>,
    transitions: Vec<(u32, Label, u32)>,
}

impl LtsBuilder {
    pub fn new() -> Self {
        LtsBuilder::default()
    }

    pub fn add_state(&mut self, name: Option<String>) -> u32 {
        self.names.push(name);
        (self.names.len() - 1) as u32
    }

    pub fn add_states(&mut self, count: u32) {
        for _ in 0..count {
            self.names.push(None);
        }
    }

    pub fn num_states(&self) -> u32 {
        self.names.len() as u32
    }

    pub fn add_transition(&mut self, src: u32, label: Label, dst: u32) {
        self.transitions.push((src, label, dst));
    }

    pub fn build(self, initial: u32) -> Result<Lts, LtsError> {
        let num_states = self.names.len() as u32;
        if num_states == 0 {
            return Err(LtsError::NoStates);
        }
        if initial >= num_states {
            return Err(LtsError::StateOutOfRange {
                index: initial,
                count: num_states,
            });
        }
        for &(s, _, t) in &self.transitions {
            for index in [s, t] {
                if index >= num_states {
                    return Err(LtsError::StateOutOfRange {
                        index,
                        count: num_states,
                    });
                }
            }
        }

        let mut labels: Vec<Label> = self
            .transitions
            .iter()
            .map(|(_, l, _)| l.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        labels.sort();
        let id_of = |label: &Label| labels.binary_search(label).unwrap() as u32;

        let mut transitions: Vec<(u32, u32, u32)> = self
            .transitions
            .iter()
            .map(|(s, l, t)| (*s, id_of(l), *t))
            .collect();
        transitions.sort_unstable();
        transitions.dedup();

        let mut offsets = vec![0u32; num_states as usize + 1];
        for &(s, _, _) in &transitions {
            offsets[s as usize + 1] += 1;
        }
        for i in 0..num_states as usize {
            offsets[i + 1] += offsets[i];
        }

        let state_names = if self.names.iter().all(|n| n.is_some()) {
            Some(self.names.into_iter().map(Option::unwrap).collect())
        } else {
            None
        };

        Ok(Lts {
            num_states,
            initial,
            labels,
            transitions,
            offsets,
            state_names,
        })
    }
}
