//! Coarsest branching bisimulation by signature refinement.
//!
//! After tau-cycle contraction the partition starts with a single block and
//! is split on signatures sig(s) = {(a, block(s')) | s reaches s' over an
//! inert tau-path and an a-step}, where a tau-step inside the current block
//! is inert and contributes nothing. Splitting is monotone, so the refinement
//! stabilizes in at most one round per state.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::lts::{Label, Lts, LtsBuilder};
use crate::par::map_slice;

use super::scc::collapse_tau_scc;

/// Assignment of each state of an input LTS to its quotient block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockMap {
    pub map: Vec<u32>,
    pub num_blocks: u32,
}

impl BlockMap {
    pub fn block_of(&self, state: u32) -> u32 {
        self.map[state as usize]
    }

    /// Members of each block, in ascending state order.
    pub fn blocks(&self) -> Vec<Vec<u32>> {
        let mut blocks = vec![Vec::new(); self.num_blocks as usize];
        for (s, &b) in self.map.iter().enumerate() {
            blocks[b as usize].push(s as u32);
        }
        blocks
    }
}

/// Outcome of an equivalence check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent,
    Distinguished(Distinguishing),
}

impl Equivalence {
    pub fn holds(&self) -> bool {
        matches!(self, Equivalence::Equivalent)
    }
}

/// Debug aid naming the first refinement round that separated the two
/// initial states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distinguishing {
    pub round: usize,
}

impl fmt::Display for Distinguishing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "initial states separated in refinement round {}",
            self.round
        )
    }
}

type SignatureKey<'a> = (u32, &'a [(u32, u32)]);

struct Refinement {
    block: Vec<u32>,
    num_blocks: u32,
    signatures: Vec<Vec<(u32, u32)>>,
    round_counts: Vec<u32>,
    separated_round: Option<usize>,
}

/// Signature refinement over a tau-acyclic LTS.
fn refine(lts: &Lts, track: Option<(u32, u32)>) -> Refinement {
    let n = lts.num_states() as usize;
    let tau = lts.label_id(&Label::Tau);
    let states: Vec<u32> = (0..n as u32).collect();

    let mut block = vec![0u32; n];
    let mut num_blocks = 1u32;
    let mut round_counts = vec![1u32];
    let mut separated_round = None;
    let mut round = 0usize;

    loop {
        round += 1;
        let signatures = map_slice(&states, |&s| signature(lts, &block, tau, s));

        let mut ids: HashMap<SignatureKey, u32> = HashMap::new();
        let mut next = vec![0u32; n];
        for s in 0..n {
            let key = (block[s], signatures[s].as_slice());
            let fresh = ids.len() as u32;
            let id = *ids.entry(key).or_insert(fresh);
            next[s] = id;
        }
        let next_count = ids.len() as u32;
        if separated_round.is_none() {
            if let Some((a, b)) = track {
                if next[a as usize] != next[b as usize] {
                    separated_round = Some(round);
                }
            }
        }
        if next_count == num_blocks {
            return Refinement {
                block,
                num_blocks,
                signatures,
                round_counts,
                separated_round,
            };
        }
        block = next;
        num_blocks = next_count;
        round_counts.push(next_count);
    }
}

/// The branching signature of one state: visible steps and block-changing
/// tau-steps reachable over an inert tau-path inside the state's own block.
fn signature(lts: &Lts, block: &[u32], tau: Option<u32>, s: u32) -> Vec<(u32, u32)> {
    let home = block[s as usize];
    let mut sig: Vec<(u32, u32)> = Vec::new();
    let mut stack = vec![s];
    let mut visited: HashSet<u32> = HashSet::new();
    visited.insert(s);
    while let Some(u) = stack.pop() {
        for &(_, gid, v) in lts.outgoing(u) {
            let inert = Some(gid) == tau && block[v as usize] == home;
            if inert {
                if visited.insert(v) {
                    stack.push(v);
                }
            } else {
                sig.push((gid, block[v as usize]));
            }
        }
    }
    sig.sort_unstable();
    sig.dedup();
    sig
}

/// The coarsest branching bisimulation quotient.
///
/// Block numbering follows the smallest original member; block names join the
/// member names. The result has no tau self-loops and is branching bisimilar
/// to the input, witnessed by the returned [`BlockMap`].
pub fn branching_quotient(lts: &Lts) -> (Lts, BlockMap) {
    let (collapsed, scc_map) = collapse_tau_scc(lts);
    let refinement = refine(&collapsed, None);

    let n = lts.num_states() as usize;
    let map: Vec<u32> = (0..n)
        .map(|s| refinement.block[scc_map.map[s] as usize])
        .collect();
    let num_blocks = refinement.num_blocks;

    let mut member_names: Vec<Vec<String>> = vec![Vec::new(); num_blocks as usize];
    if lts.state_names().is_some() {
        for s in 0..n {
            member_names[map[s] as usize].push(lts.state_name(s as u32));
        }
    }

    let mut builder = LtsBuilder::new();
    for names in &mut member_names {
        if lts.state_names().is_some() {
            names.sort();
            builder.add_state(Some(names.join("+")));
        } else {
            builder.add_state(None);
        }
    }
    // At the fixpoint every member of a block carries the same signature, so
    // the first member found per block is representative.
    let mut seen = vec![false; num_blocks as usize];
    for s in 0..collapsed.num_states() {
        let b = refinement.block[s as usize];
        if seen[b as usize] {
            continue;
        }
        seen[b as usize] = true;
        for &(gid, target) in &refinement.signatures[s as usize] {
            builder.add_transition(b, collapsed.label(gid).clone(), target);
        }
    }
    let quotient = builder
        .build(map[lts.initial() as usize])
        .expect("quotient is well formed");
    (quotient, BlockMap { map, num_blocks })
}

/// True iff the initial states of the two systems are branching bisimilar;
/// on failure reports the refinement round that separated them.
pub fn equivalent(l1: &Lts, l2: &Lts) -> Equivalence {
    let mut builder = LtsBuilder::new();
    let offset = l1.num_states();
    match (l1.state_names(), l2.state_names()) {
        (Some(a), Some(b)) => {
            for name in a {
                builder.add_state(Some(format!("L:{name}")));
            }
            for name in b {
                builder.add_state(Some(format!("R:{name}")));
            }
        }
        _ => builder.add_states(offset + l2.num_states()),
    }
    for (s, label, t) in l1.transitions() {
        builder.add_transition(s, label.clone(), t);
    }
    for (s, label, t) in l2.transitions() {
        builder.add_transition(s + offset, label.clone(), t + offset);
    }
    let union = builder.build(l1.initial()).expect("union is well formed");

    let (collapsed, scc_map) = collapse_tau_scc(&union);
    let i1 = scc_map.map[l1.initial() as usize];
    let i2 = scc_map.map[(l2.initial() + offset) as usize];
    let refinement = refine(&collapsed, Some((i1, i2)));
    if refinement.block[i1 as usize] == refinement.block[i2 as usize] {
        Equivalence::Equivalent
    } else {
        Equivalence::Distinguished(Distinguishing {
            round: refinement
                .separated_round
                .unwrap_or(refinement.round_counts.len()),
        })
    }
}

/// Refinement diagnostics for property tests: block counts per round.
#[cfg(test)]
pub(crate) fn refinement_rounds(lts: &Lts) -> Vec<u32> {
    let (collapsed, _) = collapse_tau_scc(lts);
    refine(&collapsed, None).round_counts
}
