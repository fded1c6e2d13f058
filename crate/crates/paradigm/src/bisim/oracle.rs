//! Naive greatest-fixpoint equivalence oracle.
//!
//! Starts from the full relation between the two state sets and removes pairs
//! that violate the branching transfer condition in either direction until
//! nothing changes. Deliberately independent of the refinement-based checker;
//! intended for cross-validation on small systems.

use crate::lts::Lts;

use super::BisimError;

/// Combined state-count bound for [`oracle_equivalent`].
pub const ORACLE_STATE_BOUND: usize = 400;

pub fn oracle_equivalent(l1: &Lts, l2: &Lts) -> Result<bool, BisimError> {
    let n1 = l1.num_states() as usize;
    let n2 = l2.num_states() as usize;
    if n1 + n2 > ORACLE_STATE_BOUND {
        return Err(BisimError::OracleBound {
            bound: ORACLE_STATE_BOUND,
            got: n1 + n2,
        });
    }

    let mut related = vec![true; n1 * n2];
    loop {
        let mut changed = false;
        for s in 0..n1 {
            for t in 0..n2 {
                if !related[s * n2 + t] {
                    continue;
                }
                let forward = moves_matched(l1, l2, s as u32, t as u32, &|a, b| {
                    related[a as usize * n2 + b as usize]
                });
                let backward = moves_matched(l2, l1, t as u32, s as u32, &|a, b| {
                    related[b as usize * n2 + a as usize]
                });
                if !(forward && backward) {
                    related[s * n2 + t] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(related[l1.initial() as usize * n2 + l2.initial() as usize])
}

/// Checks that every move of `s` in `a` is answered by `t` in `b`: a silent
/// move may be answered by staying put on a related state, any move may be
/// answered after a silent path through states related to `s`.
fn moves_matched(a: &Lts, b: &Lts, s: u32, t: u32, related: &dyn Fn(u32, u32) -> bool) -> bool {
    'moves: for &(_, gid, s_next) in a.outgoing(s) {
        let label = a.label(gid);
        if label.is_tau() && related(s_next, t) {
            continue;
        }
        // Silent path from t through related intermediate states.
        let mut region = vec![t];
        let mut cursor = 0;
        while cursor < region.len() {
            let u = region[cursor];
            cursor += 1;
            for &(_, g, w) in b.outgoing(u) {
                if b.label(g).is_tau() && related(s, w) && !region.contains(&w) {
                    region.push(w);
                }
            }
        }
        for &u in &region {
            for &(_, g, t_next) in b.outgoing(u) {
                if b.label(g) == label && related(s_next, t_next) {
                    continue 'moves;
                }
            }
        }
        return false;
    }
    true
}
