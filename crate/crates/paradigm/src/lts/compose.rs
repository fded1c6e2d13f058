//! Parallel composition of LTS networks under multi-way synchronization and
//! encapsulation.

use std::collections::HashMap;

use thiserror::Error;

use super::label::{Label, LabelSet};
use super::sync::SyncRuleSet;
use super::system::{Lts, LtsBuilder};
use crate::par::map_slice;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComposeError {
    #[error("composition needs at least one part")]
    EmptyParts,
}

/// The result of exploring a composition: the reachable product LTS in
/// breadth-first numbering, plus the part-state tuple behind each composite
/// state.
#[derive(Debug, Clone)]
pub struct Composition {
    pub lts: Lts,
    pub tuples: Vec<Vec<u32>>,
}

/// Explores the reachable part of the product of `parts`.
///
/// Composite state 0 is the tuple of initial states; further states are
/// numbered in breadth-first discovery order, which makes the output
/// deterministic for fixed inputs. A single part may fire a transition on its
/// own only if its label is not matched by `block`. For every rule in `sync`,
/// as many distinct parts as the rule has operands may fire simultaneously,
/// one operand label each (blocked operands may still fire this way); the
/// composite transition carries the rule's result label unless that label is
/// itself matched by `block`.
pub fn compose(
    parts: &[&Lts],
    sync: &SyncRuleSet,
    block: &LabelSet,
) -> Result<Composition, ComposeError> {
    if parts.is_empty() {
        return Err(ComposeError::EmptyParts);
    }

    // Global label table over all parts and rule labels.
    let mut labels: Vec<Label> = parts
        .iter()
        .flat_map(|p| p.labels().iter().cloned())
        .chain(sync.rules().iter().flat_map(|r| {
            r.operands()
                .iter()
                .cloned()
                .chain(std::iter::once(r.result().clone()))
        }))
        .collect();
    labels.sort();
    labels.dedup();
    let gid_of = |label: &Label| labels.binary_search(label).unwrap() as u32;

    let blocked: Vec<bool> = labels.iter().map(|l| block.matches(l)).collect();

    // Per part, per state: sorted outgoing (global label id, target).
    let views: Vec<Vec<Vec<(u32, u32)>>> = parts
        .iter()
        .map(|part| {
            let mut out = vec![Vec::new(); part.num_states() as usize];
            for (s, label, t) in part.transitions() {
                out[s as usize].push((gid_of(label), t));
            }
            out
        })
        .collect();

    struct Rule {
        operands: Vec<u32>,
        result: u32,
        result_blocked: bool,
    }
    let rules: Vec<Rule> = sync
        .rules()
        .iter()
        .map(|r| Rule {
            operands: r.operands().iter().map(&gid_of).collect(),
            result: gid_of(r.result()),
            result_blocked: block.matches(r.result()),
        })
        .collect();

    let successors = |tuple: &Vec<u32>| -> Vec<(u32, Vec<u32>)> {
        let mut succs = Vec::new();
        for (p, view) in views.iter().enumerate() {
            for &(gid, dst) in &view[tuple[p] as usize] {
                if !blocked[gid as usize] {
                    let mut next = tuple.clone();
                    next[p] = dst;
                    succs.push((gid, next));
                }
            }
        }
        for rule in &rules {
            if rule.result_blocked {
                continue;
            }
            // Candidate (part, target) pairs per operand position.
            let candidates: Vec<Vec<(usize, u32)>> = rule
                .operands
                .iter()
                .map(|&gid| {
                    views
                        .iter()
                        .enumerate()
                        .flat_map(|(p, view)| {
                            view[tuple[p] as usize]
                                .iter()
                                .filter(move |&&(g, _)| g == gid)
                                .map(move |&(_, dst)| (p, dst))
                        })
                        .collect()
                })
                .collect();
            if candidates.iter().any(Vec::is_empty) {
                continue;
            }
            let mut chosen: Vec<(usize, u32)> = Vec::with_capacity(candidates.len());
            assign(&candidates, &mut chosen, &mut |assignment| {
                let mut next = tuple.clone();
                for &(p, dst) in assignment {
                    next[p] = dst;
                }
                succs.push((rule.result, next));
            });
        }
        succs
    };

    let init: Vec<u32> = parts.iter().map(|p| p.initial()).collect();
    let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut tuples: Vec<Vec<u32>> = Vec::new();
    index.insert(init.clone(), 0);
    tuples.push(init);

    let mut transitions: Vec<(u32, u32, u32)> = Vec::new();
    let mut level_start = 0usize;
    while level_start < tuples.len() {
        let frontier: Vec<(u32, Vec<u32>)> = (level_start..tuples.len())
            .map(|i| (i as u32, tuples[i].clone()))
            .collect();
        level_start = tuples.len();
        let expanded = map_slice(&frontier, |(_, tuple)| successors(tuple));
        for ((src, _), succs) in frontier.iter().zip(expanded) {
            for (gid, next) in succs {
                let dst = match index.get(&next) {
                    Some(&i) => i,
                    None => {
                        let i = tuples.len() as u32;
                        index.insert(next.clone(), i);
                        tuples.push(next);
                        i
                    }
                };
                transitions.push((*src, gid, dst));
            }
        }
    }

    let all_named = parts.iter().all(|p| p.state_names().is_some());
    let mut builder = LtsBuilder::new();
    for tuple in &tuples {
        let name = all_named.then(|| {
            let fields: Vec<String> = tuple
                .iter()
                .zip(parts)
                .map(|(&s, part)| part.state_name(s))
                .collect();
            format!("({})", fields.join(","))
        });
        builder.add_state(name);
    }
    for (s, gid, t) in transitions {
        builder.add_transition(s, labels[gid as usize].clone(), t);
    }
    let lts = builder.build(0).expect("composition is well formed");
    Ok(Composition { lts, tuples })
}

/// Enumerates assignments of one candidate per operand position with all
/// chosen parts distinct, in candidate order.
fn assign(
    candidates: &[Vec<(usize, u32)>],
    chosen: &mut Vec<(usize, u32)>,
    emit: &mut impl FnMut(&[(usize, u32)]),
) {
    if chosen.len() == candidates.len() {
        emit(chosen);
        return;
    }
    for &(p, dst) in &candidates[chosen.len()] {
        if chosen.iter().any(|&(q, _)| q == p) {
            continue;
        }
        chosen.push((p, dst));
        assign(candidates, chosen, emit);
        chosen.pop();
    }
}
