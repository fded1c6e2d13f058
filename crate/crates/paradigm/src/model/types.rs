//! Domain types for Paradigm models.
//!
//! Everything is immutable after construction; consistency is established by
//! the validators in [`super::validate`], not by constructors.

/// A transition of a state-transition diagram.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StdTransition {
    pub source: String,
    pub action: String,
    pub target: String,
}

impl StdTransition {
    pub fn new(
        source: impl Into<String>,
        action: impl Into<String>,
        target: impl Into<String>,
    ) -> Self {
        StdTransition {
            source: source.into(),
            action: action.into(),
            target: target.into(),
        }
    }
}

/// A state-transition diagram: the detailed behaviour of a component, and
/// also the shape of phases and of the global diagram of a role.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Std {
    pub name: String,
    pub states: Vec<String>,
    pub actions: Vec<String>,
    pub transitions: Vec<StdTransition>,
    pub initial: String,
}

impl Std {
    /// Builds an STD, deriving the action set from the transitions in order
    /// of first occurrence.
    pub fn new(
        name: impl Into<String>,
        states: Vec<String>,
        transitions: Vec<StdTransition>,
        initial: impl Into<String>,
    ) -> Self {
        let mut actions: Vec<String> = Vec::new();
        for t in &transitions {
            if !actions.contains(&t.action) {
                actions.push(t.action.clone());
            }
        }
        Std {
            name: name.into(),
            states,
            actions,
            transitions,
            initial: initial.into(),
        }
    }

    pub fn has_state(&self, state: &str) -> bool {
        self.states.iter().any(|s| s == state)
    }

    pub fn has_transition(&self, t: &StdTransition) -> bool {
        self.transitions.contains(t)
    }
}

/// A phase: a sub-STD restricting the owner's behaviour while imposed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Phase {
    pub name: String,
    pub states: Vec<String>,
    pub transitions: Vec<StdTransition>,
}

impl Phase {
    pub fn has_state(&self, state: &str) -> bool {
        self.states.iter().any(|s| s == state)
    }
}

/// A trap of a phase: a non-empty set of states that phase transitions
/// cannot leave; entering it commits the component to a phase transfer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trap {
    pub name: String,
    pub states: Vec<String>,
}

impl Trap {
    pub fn contains(&self, state: &str) -> bool {
        self.states.iter().any(|s| s == state)
    }
}

/// One phase together with its declared traps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionEntry {
    pub phase: Phase,
    pub traps: Vec<Trap>,
}

/// A partition of an STD into phases with traps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub name: String,
    pub owner: String,
    pub entries: Vec<PartitionEntry>,
}

impl Partition {
    pub fn phase(&self, name: &str) -> Option<&PartitionEntry> {
        self.entries.iter().find(|e| e.phase.name == name)
    }
}

/// A trap-labelled step of a role's global diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseTransfer {
    pub from: String,
    pub trap: String,
    pub to: String,
}

impl PhaseTransfer {
    pub fn new(from: impl Into<String>, trap: impl Into<String>, to: impl Into<String>) -> Self {
        PhaseTransfer {
            from: from.into(),
            trap: trap.into(),
            to: to.into(),
        }
    }
}

/// A role: the global diagram of one instance over one partition. States of
/// the global diagram are phase names, its actions are trap names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Role {
    pub partition: String,
    pub initial_phase: String,
    pub transfers: Vec<PhaseTransfer>,
}

impl Role {
    /// The global diagram as a plain STD over phase names.
    pub fn global_std(&self, name: impl Into<String>) -> Std {
        let mut states: Vec<String> = Vec::new();
        let mut push = |s: &String| {
            if !states.contains(s) {
                states.push(s.clone());
            }
        };
        push(&self.initial_phase);
        for t in &self.transfers {
            push(&t.from);
            push(&t.to);
        }
        let transitions = self
            .transfers
            .iter()
            .map(|t| StdTransition::new(t.from.clone(), t.trap.clone(), t.to.clone()))
            .collect();
        Std::new(name, states, transitions, self.initial_phase.clone())
    }
}

/// A named occurrence of an STD, possibly replicated, with the roles it
/// plays. A pure conductor has no roles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentInstance {
    pub name: String,
    pub std: String,
    pub roles: Vec<Role>,
}

impl ComponentInstance {
    pub fn role_over(&self, partition: &str) -> Option<&Role> {
        self.roles.iter().find(|r| r.partition == partition)
    }
}

/// One participant of a consistency rule: an instance, the partition naming
/// the role, and the phase transfer it contributes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Participant {
    pub instance: String,
    pub partition: String,
    pub transfer: PhaseTransfer,
}

/// A protocol step: one conductor transition coupled with one or more
/// participant phase transfers, fired synchronously once all named traps
/// have been entered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyRule {
    pub conductor: String,
    pub transition: StdTransition,
    pub participants: Vec<Participant>,
}

/// A whole Paradigm model: an ensemble of STDs, partitions, instances with
/// roles, designated conductors, and consistency rules.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParadigmModel {
    pub stds: Vec<Std>,
    pub partitions: Vec<Partition>,
    pub instances: Vec<ComponentInstance>,
    pub conductors: Vec<String>,
    pub rules: Vec<ConsistencyRule>,
}

impl ParadigmModel {
    pub fn std(&self, name: &str) -> Option<&Std> {
        self.stds.iter().find(|s| s.name == name)
    }

    pub fn partition(&self, name: &str) -> Option<&Partition> {
        self.partitions.iter().find(|p| p.name == name)
    }

    pub fn instance(&self, name: &str) -> Option<&ComponentInstance> {
        self.instances.iter().find(|i| i.name == name)
    }

    pub fn is_conductor(&self, name: &str) -> bool {
        self.conductors.iter().any(|c| c == name)
    }

    /// Instances that play at least one role, in declaration order.
    pub fn participants(&self) -> impl Iterator<Item = &ComponentInstance> {
        self.instances.iter().filter(|i| !i.roles.is_empty())
    }
}
