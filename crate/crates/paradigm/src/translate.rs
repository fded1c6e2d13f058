//! Translation of a Paradigm model into a network of synchronized LTSs.
//!
//! Each participant instance becomes a *detailed* process (one state per
//! detailed state, `ok?`-labelled steps, `at!` self-loops on queried states)
//! plus one *global* process per role. A global process runs over pairs of
//! the current phase and the set of traps registered as entered: `ok!`
//! self-loops grant permission for detailed steps allowed by the phase,
//! `at?` steps register the current detailed state when that refines the
//! trap knowledge, and `trap` steps perform phase transfers. Conductors keep
//! their detailed shape with labels renamed to `man`.
//!
//! Synchronization: `ok?(a)|ok!(a)` stays visible as `ok(a)`, `at!(s)|at?(s)`
//! becomes silent, and each consistency rule contributes
//! `man(l)|trap(t_1)|...|trap(t_k)` with the conductor's action label as the
//! visible result. Unmatched synchronization actions are blocked: per
//! component the set H of its `at`/`ok` labels, for the full system the set A
//! of all six synchronization kinds.

use std::collections::{BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::lts::{
    compose, ComposeError, Composition, Label, LabelKind, LabelSet, Lts, LtsBuilder, SyncRule,
    SyncRuleError, SyncRuleSet,
};
use crate::model::*;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TranslateError {
    #[error("unknown instance `{0}`")]
    UnknownInstance(String),
    #[error("instance `{instance}` has no role {index}")]
    UnknownRole { instance: String, index: usize },
    #[error("unknown partition `{0}`")]
    UnknownPartition(String),
    #[error("unknown std `{0}`")]
    UnknownStd(String),
    #[error("instance `{0}` plays roles, conductors must not")]
    ConductorHasRoles(String),
    #[error("instance `{0}` plays no role")]
    NoRoles(String),
    #[error("trap `{trap}` not declared for phase `{phase}`")]
    UnknownTrap { phase: String, trap: String },
    #[error(transparent)]
    Sync(#[from] SyncRuleError),
    #[error(transparent)]
    Compose(#[from] ComposeError),
}

/// A state of a global process: the current phase and the traps registered
/// as entered within it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnowledgeState {
    pub phase: String,
    pub known: BTreeSet<String>,
}

/// A translated role: the global LTS plus the knowledge state behind each
/// LTS state.
#[derive(Debug, Clone)]
pub struct GlobalTranslation {
    pub lts: Lts,
    pub nodes: Vec<KnowledgeState>,
}

/// Everything translated for one participant instance.
#[derive(Debug, Clone)]
pub struct InstanceTranslation {
    pub detailed: Lts,
    pub globals: Vec<GlobalTranslation>,
    /// Detailed states queried by some `at?` step of a global process.
    pub queried: BTreeSet<String>,
}

/// The whole model translated: participants, conductors, and the
/// synchronization rules.
#[derive(Debug, Clone)]
pub struct TranslationUnit {
    pub instances: Vec<(String, InstanceTranslation)>,
    pub conductors: Vec<(String, Lts)>,
    pub rules: SyncRuleSet,
}

impl TranslationUnit {
    pub fn instance(&self, name: &str) -> Option<&InstanceTranslation> {
        self.instances
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, t)| t)
    }
}

/// Which part of the system a composition slot holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartKind {
    Detailed,
    Global(usize),
    Conductor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartRef {
    pub instance: String,
    pub kind: PartKind,
}

/// The fully composed system with its part layout, for diagnostics.
#[derive(Debug, Clone)]
pub struct SystemTranslation {
    pub composition: Composition,
    pub parts: Vec<PartRef>,
    pub unit: TranslationUnit,
}

/// The encapsulation set H of one instance: all of its `at`/`ok` labels.
pub fn h_set(instance: &str) -> LabelSet {
    LabelSet::kinds_of(
        [
            LabelKind::AtSend,
            LabelKind::AtRecv,
            LabelKind::OkSend,
            LabelKind::OkRecv,
        ],
        instance,
    )
}

/// The system encapsulation set A: every synchronization kind.
pub fn a_set() -> LabelSet {
    LabelSet::kinds([
        LabelKind::Man,
        LabelKind::Trap,
        LabelKind::AtRecv,
        LabelKind::AtSend,
        LabelKind::OkRecv,
        LabelKind::OkSend,
    ])
}

/// An STD as a plain LTS, states in declaration order.
pub fn std_to_lts(std: &Std, instance: Option<&str>) -> Lts {
    let mut builder = LtsBuilder::new();
    let mut index = HashMap::new();
    for state in &std.states {
        let i = builder.add_state(Some(state.clone()));
        index.insert(state.as_str(), i);
    }
    for t in &std.transitions {
        builder.add_transition(
            index[t.source.as_str()],
            Label::act(LabelKind::Plain, t.action.clone(), instance),
            index[t.target.as_str()],
        );
    }
    builder
        .build(index[std.initial.as_str()])
        .expect("validated std")
}

fn lookup_instance<'m>(
    model: &'m ParadigmModel,
    name: &str,
) -> Result<&'m ComponentInstance, TranslateError> {
    model
        .instance(name)
        .ok_or_else(|| TranslateError::UnknownInstance(name.to_owned()))
}

fn lookup_std<'m>(model: &'m ParadigmModel, name: &str) -> Result<&'m Std, TranslateError> {
    model
        .std(name)
        .ok_or_else(|| TranslateError::UnknownStd(name.to_owned()))
}

/// Traps that are already entered the moment a phase is imposed: those
/// containing every state of the phase.
fn initially_entered(entry: &PartitionEntry) -> BTreeSet<String> {
    entry
        .traps
        .iter()
        .filter(|t| entry.phase.states.iter().all(|s| t.contains(s)))
        .map(|t| t.name.clone())
        .collect()
}

/// States the component may currently be in, given the registered traps:
/// the intersection of the known traps, or the whole phase when nothing is
/// known.
fn core_states(entry: &PartitionEntry, known: &BTreeSet<String>) -> Vec<String> {
    if known.is_empty() {
        return entry.phase.states.clone();
    }
    entry
        .phase
        .states
        .iter()
        .filter(|s| {
            entry
                .traps
                .iter()
                .filter(|t| known.contains(&t.name))
                .all(|t| t.contains(s))
        })
        .cloned()
        .collect()
}

/// Human-readable node name: the phase plus the most informative registered
/// traps in brackets, or `[triv]` when only the initially-entered traps are
/// known.
fn node_name(entry: &PartitionEntry, known: &BTreeSet<String>) -> String {
    if *known == initially_entered(entry) {
        return format!("{}[triv]", entry.phase.name);
    }
    let trap_states = |name: &str| -> BTreeSet<&str> {
        entry
            .traps
            .iter()
            .find(|t| t.name == name)
            .map(|t| t.states.iter().map(String::as_str).collect())
            .unwrap_or_default()
    };
    let mut informative: Vec<&String> = known
        .iter()
        .filter(|t| {
            let ts = trap_states(t);
            !known.iter().any(|u| {
                let us = trap_states(u);
                u != *t && us.is_subset(&ts) && us != ts
            })
        })
        .collect();
    informative.sort();
    let names: Vec<&str> = informative.iter().map(|s| s.as_str()).collect();
    format!("{}[{}]", entry.phase.name, names.join(","))
}

/// Translates one role of an instance into its global process.
pub fn translate_global(
    model: &ParadigmModel,
    instance_name: &str,
    role_index: usize,
) -> Result<GlobalTranslation, TranslateError> {
    let instance = lookup_instance(model, instance_name)?;
    let role = instance
        .roles
        .get(role_index)
        .ok_or_else(|| TranslateError::UnknownRole {
            instance: instance_name.to_owned(),
            index: role_index,
        })?;
    let partition = model
        .partition(&role.partition)
        .ok_or_else(|| TranslateError::UnknownPartition(role.partition.clone()))?;
    let entry_of = |phase: &str| {
        partition
            .phase(phase)
            .ok_or_else(|| TranslateError::UnknownPartition(format!("{}.{phase}", partition.name)))
    };

    let initial = KnowledgeState {
        phase: role.initial_phase.clone(),
        known: initially_entered(entry_of(&role.initial_phase)?),
    };

    let mut nodes: Vec<KnowledgeState> = vec![initial.clone()];
    let mut index: HashMap<(String, BTreeSet<String>), u32> = HashMap::new();
    index.insert((initial.phase.clone(), initial.known.clone()), 0);
    let mut edges: Vec<(u32, Label, u32)> = Vec::new();
    let mut queue = VecDeque::from([0u32]);

    while let Some(current) = queue.pop_front() {
        let node = nodes[current as usize].clone();
        let entry = entry_of(&node.phase)?;
        let core = core_states(entry, &node.known);

        // Permissions: one ok! self-loop per action currently fireable.
        let mut permitted: BTreeSet<&String> = BTreeSet::new();
        for t in &entry.phase.transitions {
            if core.contains(&t.source) {
                permitted.insert(&t.action);
            }
        }
        for action in permitted {
            edges.push((
                current,
                Label::act(LabelKind::OkSend, action.clone(), Some(instance_name)),
                current,
            ));
        }

        let mut reach = |nodes: &mut Vec<KnowledgeState>,
                         queue: &mut VecDeque<u32>,
                         phase: String,
                         known: BTreeSet<String>|
         -> u32 {
            let key = (phase.clone(), known.clone());
            match index.get(&key) {
                Some(&i) => i,
                None => {
                    let i = nodes.len() as u32;
                    index.insert(key, i);
                    nodes.push(KnowledgeState { phase, known });
                    queue.push_back(i);
                    i
                }
            }
        };

        // Registrations: at?(s) wherever learning the current state grows
        // the trap knowledge.
        for state in &core {
            let mut grown = node.known.clone();
            for trap in &entry.traps {
                if trap.contains(state) {
                    grown.insert(trap.name.clone());
                }
            }
            if grown != node.known {
                debug_assert!(node.known.is_subset(&grown) && node.known != grown);
                let target = reach(&mut nodes, &mut queue, node.phase.clone(), grown);
                edges.push((
                    current,
                    Label::act(LabelKind::AtRecv, state.clone(), Some(instance_name)),
                    target,
                ));
            }
        }

        // Transfers: trap(t) for every entered trap with a transfer from this
        // phase; the target knowledge keeps every target trap the moving trap
        // fits into, plus the target phase's initially-entered traps.
        for trap_name in &node.known {
            for transfer in &role.transfers {
                if transfer.from != node.phase || &transfer.trap != trap_name {
                    continue;
                }
                let trap = entry
                    .traps
                    .iter()
                    .find(|t| &t.name == trap_name)
                    .ok_or_else(|| TranslateError::UnknownTrap {
                        phase: node.phase.clone(),
                        trap: trap_name.clone(),
                    })?;
                let target_entry = entry_of(&transfer.to)?;
                let mut known = initially_entered(target_entry);
                for t2 in &target_entry.traps {
                    if trap.states.iter().all(|s| t2.contains(s)) {
                        known.insert(t2.name.clone());
                    }
                }
                let target = reach(&mut nodes, &mut queue, transfer.to.clone(), known);
                edges.push((
                    current,
                    Label::act(LabelKind::Trap, trap_name.clone(), Some(instance_name)),
                    target,
                ));
            }
        }
    }

    let mut builder = LtsBuilder::new();
    for node in &nodes {
        builder.add_state(Some(node_name(entry_of(&node.phase)?, &node.known)));
    }
    for (s, label, t) in edges {
        builder.add_transition(s, label, t);
    }
    let lts = builder.build(0).expect("global process is well formed");
    Ok(GlobalTranslation { lts, nodes })
}

/// Translates the detailed process of an instance: `ok?` per transition and
/// an `at!` self-loop per queried state.
pub fn translate_detailed(
    model: &ParadigmModel,
    instance_name: &str,
    queried: &BTreeSet<String>,
) -> Result<Lts, TranslateError> {
    let instance = lookup_instance(model, instance_name)?;
    let std = lookup_std(model, &instance.std)?;
    let mut builder = LtsBuilder::new();
    let mut index = HashMap::new();
    for state in &std.states {
        let i = builder.add_state(Some(state.clone()));
        index.insert(state.as_str(), i);
    }
    for t in &std.transitions {
        builder.add_transition(
            index[t.source.as_str()],
            Label::act(LabelKind::OkRecv, t.action.clone(), Some(instance_name)),
            index[t.target.as_str()],
        );
    }
    for state in queried {
        if let Some(&i) = index.get(state.as_str()) {
            builder.add_transition(
                i,
                Label::act(LabelKind::AtSend, state.clone(), Some(instance_name)),
                i,
            );
        }
    }
    Ok(builder
        .build(index[std.initial.as_str()])
        .expect("validated std"))
}

/// Translates a conductor: its detailed shape with labels renamed to `man`.
pub fn translate_conductor(
    model: &ParadigmModel,
    instance_name: &str,
) -> Result<Lts, TranslateError> {
    let instance = lookup_instance(model, instance_name)?;
    if !instance.roles.is_empty() {
        return Err(TranslateError::ConductorHasRoles(instance_name.to_owned()));
    }
    let std = lookup_std(model, &instance.std)?;
    let mut builder = LtsBuilder::new();
    let mut index = HashMap::new();
    for state in &std.states {
        let i = builder.add_state(Some(state.clone()));
        index.insert(state.as_str(), i);
    }
    for t in &std.transitions {
        builder.add_transition(
            index[t.source.as_str()],
            Label::act(LabelKind::Man, t.action.clone(), Some(instance_name)),
            index[t.target.as_str()],
        );
    }
    Ok(builder
        .build(index[std.initial.as_str()])
        .expect("validated std"))
}

/// Two-pass translation of a participant: globals first, then the detailed
/// process over the queried states the globals actually ask about.
pub fn translate_component(
    model: &ParadigmModel,
    instance_name: &str,
) -> Result<InstanceTranslation, TranslateError> {
    let instance = lookup_instance(model, instance_name)?;
    let mut globals = Vec::new();
    let mut queried = BTreeSet::new();
    for role_index in 0..instance.roles.len() {
        let global = translate_global(model, instance_name, role_index)?;
        for (_, label, _) in global.lts.transitions() {
            if label.kind() == Some(LabelKind::AtRecv) {
                queried.insert(label.name().expect("at? carries a state").to_owned());
            }
        }
        globals.push(global);
    }
    let detailed = translate_detailed(model, instance_name, &queried)?;
    Ok(InstanceTranslation {
        detailed,
        globals,
        queried,
    })
}

/// The `ok?(a) | ok!(a) = ok(a)` rules of one instance, one per detailed
/// action.
pub fn ok_rules(
    model: &ParadigmModel,
    instance_name: &str,
) -> Result<Vec<SyncRule>, TranslateError> {
    let instance = lookup_instance(model, instance_name)?;
    let std = lookup_std(model, &instance.std)?;
    let mut rules = Vec::new();
    for action in &std.actions {
        rules.push(SyncRule::pair(
            Label::act(LabelKind::OkRecv, action.clone(), Some(instance_name)),
            Label::act(LabelKind::OkSend, action.clone(), Some(instance_name)),
            Label::act(LabelKind::Ok, action.clone(), Some(instance_name)),
        )?);
    }
    Ok(rules)
}

/// The silent `at!(s) | at?(s)` rules of one instance, one per queried state.
pub fn at_rules(instance_name: &str, queried: &BTreeSet<String>) -> Vec<SyncRule> {
    queried
        .iter()
        .map(|state| {
            SyncRule::pair(
                Label::act(LabelKind::AtSend, state.clone(), Some(instance_name)),
                Label::act(LabelKind::AtRecv, state.clone(), Some(instance_name)),
                Label::Tau,
            )
            .expect("two distinct operands")
        })
        .collect()
}

/// The `ok` and `at` rules of one instance.
pub fn instance_sync_rules(
    model: &ParadigmModel,
    instance_name: &str,
    queried: &BTreeSet<String>,
) -> Result<Vec<SyncRule>, TranslateError> {
    let mut rules = ok_rules(model, instance_name)?;
    rules.extend(at_rules(instance_name, queried));
    Ok(rules)
}

/// The rule a consistency rule contributes: the conductor's `man` label with
/// all participant `trap` labels, made visible as the conductor's action.
pub(crate) fn protocol_rule(rule: &ConsistencyRule) -> Result<SyncRule, TranslateError> {
    let mut operands = vec![Label::act(
        LabelKind::Man,
        rule.transition.action.clone(),
        Some(&rule.conductor),
    )];
    for p in &rule.participants {
        operands.push(Label::act(
            LabelKind::Trap,
            p.transfer.trap.clone(),
            Some(&p.instance),
        ));
    }
    Ok(SyncRule::new(
        operands,
        Label::act(LabelKind::Result, rule.transition.action.clone(), None),
    )?)
}

/// Translates every component and assembles the full rule set. Instances
/// without roles get the conductor treatment: no vertical constraints are
/// imposed on them, so they appear by their detailed shape alone.
pub fn translate_unit(model: &ParadigmModel) -> Result<TranslationUnit, TranslateError> {
    let mut instances = Vec::new();
    let mut conductors = Vec::new();
    let mut rules = Vec::new();
    for instance in &model.instances {
        if instance.roles.is_empty() {
            conductors.push((
                instance.name.clone(),
                translate_conductor(model, &instance.name)?,
            ));
        } else {
            let translation = translate_component(model, &instance.name)?;
            rules.extend(instance_sync_rules(
                model,
                &instance.name,
                &translation.queried,
            )?);
            instances.push((instance.name.clone(), translation));
        }
    }
    for rule in &model.rules {
        rules.push(protocol_rule(rule)?);
    }
    Ok(TranslationUnit {
        instances,
        conductors,
        rules: SyncRuleSet::new(rules)?,
    })
}

/// The full synchronization rule set of the model.
pub fn build_sync_rules(model: &ParadigmModel) -> Result<SyncRuleSet, TranslateError> {
    Ok(translate_unit(model)?.rules)
}

/// The combined detailed-and-global process of one instance: its parts
/// composed under the instance's `ok`/`at` rules with H blocked, leaving the
/// `trap` labels free as the interface to the protocol.
pub fn translate_component_dg(
    model: &ParadigmModel,
    instance_name: &str,
) -> Result<Lts, TranslateError> {
    let instance = lookup_instance(model, instance_name)?;
    if instance.roles.is_empty() {
        return Err(TranslateError::NoRoles(instance_name.to_owned()));
    }
    let translation = translate_component(model, instance_name)?;
    let rules = SyncRuleSet::new(instance_sync_rules(
        model,
        instance_name,
        &translation.queried,
    )?)?;
    let mut parts: Vec<&Lts> = vec![&translation.detailed];
    parts.extend(translation.globals.iter().map(|g| &g.lts));
    Ok(compose(&parts, &rules, &h_set(instance_name))?.lts)
}

/// Composes the whole system: per participant its detailed process followed
/// by its global processes, then the conductors, all under the full rule set
/// with A blocked.
pub fn translate_system_full(model: &ParadigmModel) -> Result<SystemTranslation, TranslateError> {
    let unit = translate_unit(model)?;
    let mut parts: Vec<&Lts> = Vec::new();
    let mut part_refs: Vec<PartRef> = Vec::new();
    for (name, translation) in &unit.instances {
        parts.push(&translation.detailed);
        part_refs.push(PartRef {
            instance: name.clone(),
            kind: PartKind::Detailed,
        });
        for (i, global) in translation.globals.iter().enumerate() {
            parts.push(&global.lts);
            part_refs.push(PartRef {
                instance: name.clone(),
                kind: PartKind::Global(i),
            });
        }
    }
    for (name, lts) in &unit.conductors {
        parts.push(lts);
        part_refs.push(PartRef {
            instance: name.clone(),
            kind: PartKind::Conductor,
        });
    }
    let composition = compose(&parts, &unit.rules, &a_set())?;
    Ok(SystemTranslation {
        composition,
        parts: part_refs,
        unit,
    })
}

/// The composed state space of the whole model.
pub fn translate_system(model: &ParadigmModel) -> Result<Lts, TranslateError> {
    Ok(translate_system_full(model)?.composition.lts)
}
