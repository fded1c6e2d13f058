//! State-space reduction by globally inert detailed transitions.
//!
//! A detailed transition is *globally inert* when no trap of any phase of
//! the participating instance separates its endpoints: for every phase
//! containing both endpoints and every trap of that phase, either both
//! endpoints lie inside the trap or both outside. Hiding a set of inert
//! actions and quotienting the detailed diagram modulo branching
//! bisimulation yields a reduced detailed process; composing reduced
//! components first and the system afterwards preserves the overall
//! behaviour while the generated state space shrinks.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::bisim::{branching_quotient, equivalent};
use crate::lts::{
    compose, hide, rename, Label, LabelKind, LabelSet, Lts, LtsBuilder, SyncRule, SyncRuleSet,
};
use crate::model::*;
use crate::translate::{
    a_set, h_set, protocol_rule, std_to_lts, translate_component, translate_component_dg,
    translate_unit, TranslateError,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReduceError {
    #[error("instance `{instance}`: action `{action}` not in its std")]
    UnknownAction { instance: String, action: String },
    #[error("instance `{instance}`: reduction not behaviour-preserving for the given action set")]
    Unsound { instance: String },
    #[error(transparent)]
    Translate(#[from] TranslateError),
}

/// Why a transition is not globally inert: the named trap of the named phase
/// contains one endpoint but not the other.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InertWitness {
    pub partition: String,
    pub phase: String,
    pub trap: String,
    pub inside: String,
    pub outside: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionInertness {
    pub transition: StdTransition,
    pub inert: bool,
    pub witness: Option<InertWitness>,
}

/// Inertness per transition and per action of one detailed STD.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InertReport {
    pub transitions: Vec<TransitionInertness>,
    /// Per action in declaration order: inert iff all its transitions are.
    pub actions: Vec<(String, bool)>,
}

impl InertReport {
    pub fn action_inert(&self, action: &str) -> bool {
        self.actions
            .iter()
            .find(|(a, _)| a == action)
            .map(|(_, inert)| *inert)
            .unwrap_or(false)
    }

    pub fn inert_actions(&self) -> BTreeSet<String> {
        self.actions
            .iter()
            .filter(|(_, inert)| *inert)
            .map(|(a, _)| a.clone())
            .collect()
    }
}

/// Classifies every transition of `std` against all given partitions.
pub fn inert_transitions(std: &Std, partitions: &[&Partition]) -> InertReport {
    let transitions: Vec<TransitionInertness> = std
        .transitions
        .iter()
        .map(|t| {
            let witness = partitions.iter().find_map(|partition| {
                partition.entries.iter().find_map(|entry| {
                    if !entry.phase.has_state(&t.source) || !entry.phase.has_state(&t.target) {
                        return None;
                    }
                    entry.traps.iter().find_map(|trap| {
                        let src_in = trap.contains(&t.source);
                        let dst_in = trap.contains(&t.target);
                        if src_in == dst_in {
                            return None;
                        }
                        let (inside, outside) = if src_in {
                            (t.source.clone(), t.target.clone())
                        } else {
                            (t.target.clone(), t.source.clone())
                        };
                        Some(InertWitness {
                            partition: partition.name.clone(),
                            phase: entry.phase.name.clone(),
                            trap: trap.name.clone(),
                            inside,
                            outside,
                        })
                    })
                })
            });
            TransitionInertness {
                transition: t.clone(),
                inert: witness.is_none(),
                witness,
            }
        })
        .collect();
    let actions = std
        .actions
        .iter()
        .map(|action| {
            let inert = transitions
                .iter()
                .filter(|t| &t.transition.action == action)
                .all(|t| t.inert);
            (action.clone(), inert)
        })
        .collect();
    InertReport {
        transitions,
        actions,
    }
}

/// The inertness report of an instance against all partitions of its roles.
pub fn inert_report_of(
    model: &ParadigmModel,
    instance_name: &str,
) -> Result<InertReport, ReduceError> {
    let instance = model
        .instance(instance_name)
        .ok_or_else(|| TranslateError::UnknownInstance(instance_name.to_owned()))?;
    let std = model
        .std(&instance.std)
        .ok_or_else(|| TranslateError::UnknownStd(instance.std.clone()))?;
    let partitions: Vec<&Partition> = instance
        .roles
        .iter()
        .map(|role| {
            model
                .partition(&role.partition)
                .ok_or_else(|| TranslateError::UnknownPartition(role.partition.clone()))
        })
        .collect::<Result<_, _>>()?;
    Ok(inert_transitions(std, &partitions))
}

/// The detailed STD quotiented modulo branching bisimulation after hiding
/// the given actions. Blocks are named by their sorted members.
///
/// Residual transitions keep their original action, even when the action was
/// hidden: a hidden step that crosses blocks is still a detailed step and
/// stays subject to phase permission after re-translation; only its
/// synchronization result turns silent. Hidden steps inside one block vanish.
#[derive(Debug, Clone)]
pub struct ReducedComponent {
    /// Block-level STD with the residual actions.
    pub std: Std,
    /// The quotient as an LTS, hidden residuals as genuine silent steps.
    pub lts: Lts,
    /// The action set that was hidden.
    pub hidden: BTreeSet<String>,
    /// Original state to block name.
    pub block_map: BTreeMap<String, String>,
    /// Members per block, in block order.
    pub blocks: Vec<Vec<String>>,
}

/// Hides `hidden` in the detailed STD and quotients the result. The hidden
/// set is not required to be inert; callers may probe unsound choices.
pub fn quotient_detailed(std: &Std, hidden: &BTreeSet<String>) -> ReducedComponent {
    let plain = std_to_lts(std, None);
    let silenced = hide(&plain, &LabelSet::plain_actions(hidden.iter().cloned()));
    let (quotient, map) = branching_quotient(&silenced);

    let mut blocks: Vec<Vec<String>> = vec![Vec::new(); map.num_blocks as usize];
    let mut block_map = BTreeMap::new();
    for (i, state) in std.states.iter().enumerate() {
        let block = map.map[i] as usize;
        blocks[block].push(state.clone());
        block_map.insert(state.clone(), quotient.state_name(block as u32));
    }
    for members in &mut blocks {
        members.sort();
    }

    let block_names: Vec<String> = (0..quotient.num_states())
        .map(|b| quotient.state_name(b))
        .collect();
    let mut transitions: Vec<StdTransition> = Vec::new();
    for t in &std.transitions {
        let src = block_map[&t.source].clone();
        let dst = block_map[&t.target].clone();
        if hidden.contains(&t.action) && src == dst {
            continue;
        }
        let residual = StdTransition::new(src, t.action.clone(), dst);
        if !transitions.contains(&residual) {
            transitions.push(residual);
        }
    }
    let reduced_std = Std::new(
        format!("Q{}", std.name),
        block_names,
        transitions,
        quotient.state_name(quotient.initial()),
    );
    ReducedComponent {
        std: reduced_std,
        lts: quotient,
        hidden: hidden.clone(),
        block_map,
        blocks,
    }
}

/// Re-translates a reduced detailed STD: residual steps become `ok?` (hidden
/// ones included, keeping them permission-gated), and a block containing
/// queried states gets one `at!` self-loop plus the adapted
/// `at!(block) | at?(state)` rules.
pub fn reduced_detailed_lts(
    rc: &ReducedComponent,
    instance_name: &str,
    queried: &BTreeSet<String>,
) -> (Lts, Vec<SyncRule>) {
    let mut builder = LtsBuilder::new();
    let mut index = HashMap::new();
    for (b, state) in rc.std.states.iter().enumerate() {
        builder.add_state(Some(state.clone()));
        index.insert(state.as_str(), b as u32);
    }
    for t in &rc.std.transitions {
        builder.add_transition(
            index[t.source.as_str()],
            Label::act(LabelKind::OkRecv, t.action.clone(), Some(instance_name)),
            index[t.target.as_str()],
        );
    }
    let mut rules = Vec::new();
    for (b, members) in rc.blocks.iter().enumerate() {
        let block_name = rc.std.states[b].clone();
        let shared: Vec<&String> = members.iter().filter(|m| queried.contains(*m)).collect();
        if shared.is_empty() {
            continue;
        }
        builder.add_transition(
            b as u32,
            Label::act(LabelKind::AtSend, block_name.clone(), Some(instance_name)),
            b as u32,
        );
        for state in shared {
            rules.push(
                SyncRule::pair(
                    Label::act(LabelKind::AtSend, block_name.clone(), Some(instance_name)),
                    Label::act(LabelKind::AtRecv, state.clone(), Some(instance_name)),
                    Label::Tau,
                )
                .expect("two distinct operands"),
            );
        }
    }
    let lts = builder
        .build(index[rc.std.initial.as_str()])
        .expect("reduced process is well formed");
    (lts, rules)
}

/// The `ok` rules of a reduced instance: permissions synchronize as usual,
/// but for hidden actions the joint step is silent.
fn adapted_ok_rules(
    model: &ParadigmModel,
    instance_name: &str,
    hidden: &BTreeSet<String>,
) -> Result<Vec<SyncRule>, ReduceError> {
    let instance = model
        .instance(instance_name)
        .ok_or_else(|| TranslateError::UnknownInstance(instance_name.to_owned()))?;
    let std = model
        .std(&instance.std)
        .ok_or_else(|| TranslateError::UnknownStd(instance.std.clone()))?;
    let mut rules = Vec::new();
    for action in &std.actions {
        let result = if hidden.contains(action) {
            Label::Tau
        } else {
            Label::act(LabelKind::Ok, action.clone(), Some(instance_name))
        };
        rules.push(
            SyncRule::pair(
                Label::act(LabelKind::OkRecv, action.clone(), Some(instance_name)),
                Label::act(LabelKind::OkSend, action.clone(), Some(instance_name)),
                result,
            )
            .map_err(TranslateError::from)?,
        );
    }
    Ok(rules)
}

fn check_actions_known(
    model: &ParadigmModel,
    instance_name: &str,
    actions: &BTreeSet<String>,
) -> Result<(), ReduceError> {
    let instance = model
        .instance(instance_name)
        .ok_or_else(|| TranslateError::UnknownInstance(instance_name.to_owned()))?;
    let std = model
        .std(&instance.std)
        .ok_or_else(|| TranslateError::UnknownStd(instance.std.clone()))?;
    for action in actions {
        if !std.actions.iter().any(|a| a == action) {
            return Err(ReduceError::UnknownAction {
                instance: instance_name.to_owned(),
                action: action.clone(),
            });
        }
    }
    Ok(())
}

/// The first-reduce composition of one instance: its reduced detailed
/// process composed with its global processes under the adapted rules.
pub fn reduced_component_composition(
    model: &ParadigmModel,
    instance_name: &str,
    hidden: &BTreeSet<String>,
) -> Result<Lts, ReduceError> {
    check_actions_known(model, instance_name, hidden)?;
    let instance = model
        .instance(instance_name)
        .ok_or_else(|| TranslateError::UnknownInstance(instance_name.to_owned()))?;
    if instance.roles.is_empty() {
        return Err(TranslateError::NoRoles(instance_name.to_owned()).into());
    }
    let std = model
        .std(&instance.std)
        .ok_or_else(|| TranslateError::UnknownStd(instance.std.clone()))?;
    let translation = translate_component(model, instance_name)?;
    let rc = quotient_detailed(std, hidden);
    let (reduced, adapted_at) = reduced_detailed_lts(&rc, instance_name, &translation.queried);
    let mut rules = adapted_ok_rules(model, instance_name, hidden)?;
    rules.extend(adapted_at);
    let rules = SyncRuleSet::new(rules).map_err(TranslateError::from)?;
    let mut parts: Vec<&Lts> = vec![&reduced];
    parts.extend(translation.globals.iter().map(|g| &g.lts));
    Ok(compose(&parts, &rules, &h_set(instance_name))
        .map_err(TranslateError::from)?
        .lts)
}

/// Checks that first-reduce then-compose preserves the component behaviour:
/// the reduced composition must be branching bisimilar to the full
/// detailed-and-global process with `ok(a)` hidden for every reduced action.
pub fn verify_reduction(
    model: &ParadigmModel,
    instance_name: &str,
    hidden: &BTreeSet<String>,
) -> Result<bool, ReduceError> {
    let left = reduced_component_composition(model, instance_name, hidden)?;
    let dg = translate_component_dg(model, instance_name)?;
    let ok_labels = LabelSet::exact_labels(
        hidden
            .iter()
            .map(|a| Label::act(LabelKind::Ok, a.clone(), Some(instance_name))),
    );
    let right = hide(&dg, &ok_labels);
    Ok(equivalent(&left, &right).holds())
}

/// Checks that coordination eliminates no detailed behaviour: the plain
/// detailed diagram must be branching bisimilar to the combined process with
/// all `trap` steps hidden. A `false` answer means the protocol's
/// constraints cut detailed runs, possibly up to a detailed-level deadlock.
pub fn verify_detailed_preservation(
    model: &ParadigmModel,
    instance_name: &str,
) -> Result<bool, ReduceError> {
    let instance = model
        .instance(instance_name)
        .ok_or_else(|| TranslateError::UnknownInstance(instance_name.to_owned()))?;
    let std = model
        .std(&instance.std)
        .ok_or_else(|| TranslateError::UnknownStd(instance.std.clone()))?;
    let dg = translate_component_dg(model, instance_name)?;
    let hidden = hide(&dg, &LabelSet::kinds_of([LabelKind::Trap], instance_name));

    let plain = std_to_lts(std, None);
    let map: HashMap<Label, Label> = std
        .actions
        .iter()
        .map(|a| {
            (
                Label::plain(a.clone()),
                Label::act(LabelKind::Ok, a.clone(), Some(instance_name)),
            )
        })
        .collect();
    let lifted = rename(&plain, &map);
    Ok(equivalent(&lifted, &hidden).holds())
}

/// Composes the system with every participant's detailed process replaced by
/// its reduced version.
///
/// `hidden` gives the action set per instance; instances not listed use
/// their maximal globally inert action set. Unless `force` is set, each
/// instance's reduction is verified behaviour-preserving first.
pub fn reduced_system(
    model: &ParadigmModel,
    hidden: &BTreeMap<String, BTreeSet<String>>,
    force: bool,
) -> Result<Lts, ReduceError> {
    let unit = translate_unit(model)?;

    struct ReducedPart {
        lts: Lts,
        rules: Vec<SyncRule>,
    }
    let mut reduced_parts: Vec<(String, ReducedPart)> = Vec::new();
    for (name, translation) in &unit.instances {
        let actions = match hidden.get(name) {
            Some(set) => {
                check_actions_known(model, name, set)?;
                set.clone()
            }
            None => inert_report_of(model, name)?.inert_actions(),
        };
        if !force && !verify_reduction(model, name, &actions)? {
            return Err(ReduceError::Unsound {
                instance: name.clone(),
            });
        }
        let instance = model.instance(name).expect("translated instance exists");
        let std = model.std(&instance.std).expect("translated std exists");
        let rc = quotient_detailed(std, &actions);
        let (lts, adapted_at) = reduced_detailed_lts(&rc, name, &translation.queried);
        let mut rules = adapted_ok_rules(model, name, &actions)?;
        rules.extend(adapted_at);
        reduced_parts.push((name.clone(), ReducedPart { lts, rules }));
    }

    let mut rules: Vec<SyncRule> = Vec::new();
    let mut parts: Vec<&Lts> = Vec::new();
    for ((name, part), (uname, translation)) in reduced_parts.iter().zip(&unit.instances) {
        debug_assert_eq!(name, uname);
        rules.extend(part.rules.iter().cloned());
        parts.push(&part.lts);
        parts.extend(translation.globals.iter().map(|g| &g.lts));
    }
    for (_, lts) in &unit.conductors {
        parts.push(lts);
    }
    for rule in &model.rules {
        rules.push(protocol_rule(rule)?);
    }
    let rules = SyncRuleSet::new(rules).map_err(TranslateError::from)?;
    Ok(compose(&parts, &rules, &a_set())
        .map_err(TranslateError::from)?
        .lts)
}
