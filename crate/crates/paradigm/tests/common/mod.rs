//! Shared test helpers: an independent naive composition oracle and small
//! conveniences.

use std::collections::{BTreeSet, HashSet};

use paradigm::lts::{Label, LabelSet, Lts, SyncRuleSet};

#[allow(dead_code)]
pub fn action_set(names: &[&str]) -> BTreeSet<String> {
    names.iter().map(|s| (*s).to_string()).collect()
}

/// Reference composition: depth-first enumeration over explicit state
/// tuples with set-based bookkeeping, sharing no code with the engine's
/// breadth-first canonical exploration. Returns (states, transitions).
#[allow(dead_code)]
pub fn naive_compose_counts(
    parts: &[&Lts],
    sync: &SyncRuleSet,
    block: &LabelSet,
) -> (usize, usize) {
    type Tuple = Vec<u32>;
    let moves_of = |current: &Tuple| -> Vec<(Label, Tuple)> {
        let mut moves = Vec::new();
        for (p, part) in parts.iter().enumerate() {
            for (src, label, dst) in part.transitions() {
                if src != current[p] || block.matches(label) {
                    continue;
                }
                let mut next = current.clone();
                next[p] = dst;
                moves.push((label.clone(), next));
            }
        }
        for rule in sync.rules() {
            if block.matches(rule.result()) {
                continue;
            }
            // All ways to hand each operand to a distinct part.
            let mut partial: Vec<(Vec<usize>, Tuple)> = vec![(Vec::new(), current.clone())];
            for operand in rule.operands() {
                let mut extended = Vec::new();
                for (used, tuple) in &partial {
                    for (p, part) in parts.iter().enumerate() {
                        if used.contains(&p) {
                            continue;
                        }
                        for (src, label, dst) in part.transitions() {
                            if src != current[p] || label != operand {
                                continue;
                            }
                            let mut used = used.clone();
                            used.push(p);
                            let mut tuple = tuple.clone();
                            tuple[p] = dst;
                            extended.push((used, tuple));
                        }
                    }
                }
                partial = extended;
            }
            for (_, next) in partial {
                moves.push((rule.result().clone(), next));
            }
        }
        moves
    };

    let init: Tuple = parts.iter().map(|p| p.initial()).collect();
    let mut states: HashSet<Tuple> = HashSet::new();
    let mut transitions: HashSet<(Tuple, Label, Tuple)> = HashSet::new();
    let mut stack = vec![init.clone()];
    states.insert(init);
    while let Some(current) = stack.pop() {
        for (label, next) in moves_of(&current) {
            if states.insert(next.clone()) {
                stack.push(next.clone());
            }
            transitions.insert((current.clone(), label, next));
        }
    }
    (states.len(), transitions.len())
}
