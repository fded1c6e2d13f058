//! Contraction of tau-cycles.
//!
//! States on a cycle of silent steps are branching bisimilar (the relation
//! here is divergence-blind), so each maximal mutually tau-reachable set can
//! be contracted to one state before refinement.

use crate::lts::{Label, Lts, LtsBuilder};

use super::quotient::BlockMap;

/// Contracts every maximal set of states that are mutually reachable via
/// tau-only paths into a single state. Tau self-loops produced by the
/// contraction are dropped; visible self-loops survive. Component numbering
/// follows the smallest original member, so the output is canonical.
pub fn collapse_tau_scc(lts: &Lts) -> (Lts, BlockMap) {
    let n = lts.num_states() as usize;
    let tau = lts.label_id(&Label::Tau);

    let comp_raw = match tau {
        Some(tau) => tarjan(lts, tau),
        None => (0..n as u32).collect(),
    };

    // Renumber components by smallest member.
    let num_raw = comp_raw.iter().copied().max().map_or(0, |m| m + 1);
    let mut first_member = vec![u32::MAX; num_raw as usize];
    for (s, &c) in comp_raw.iter().enumerate() {
        first_member[c as usize] = first_member[c as usize].min(s as u32);
    }
    let mut order: Vec<u32> = (0..num_raw).collect();
    order.sort_by_key(|&c| first_member[c as usize]);
    let mut renumber = vec![0u32; num_raw as usize];
    for (new, &old) in order.iter().enumerate() {
        renumber[old as usize] = new as u32;
    }
    let comp: Vec<u32> = comp_raw.iter().map(|&c| renumber[c as usize]).collect();

    let mut names: Vec<Vec<String>> = vec![Vec::new(); num_raw as usize];
    if lts.state_names().is_some() {
        for s in 0..n {
            names[comp[s] as usize].push(lts.state_name(s as u32));
        }
    }

    let mut builder = LtsBuilder::new();
    for member_names in &mut names {
        if lts.state_names().is_some() {
            member_names.sort();
            builder.add_state(Some(member_names.join("+")));
        } else {
            builder.add_state(None);
        }
    }
    for (s, label, t) in lts.transitions() {
        let (cs, ct) = (comp[s as usize], comp[t as usize]);
        if cs == ct && label.is_tau() {
            continue;
        }
        builder.add_transition(cs, label.clone(), ct);
    }
    let collapsed = builder
        .build(comp[lts.initial() as usize])
        .expect("contraction preserves shape");
    let num_blocks = collapsed.num_states();
    (
        collapsed,
        BlockMap {
            map: comp,
            num_blocks,
        },
    )
}

/// Iterative Tarjan over the tau-edges only.
fn tarjan(lts: &Lts, tau: u32) -> Vec<u32> {
    let n = lts.num_states() as usize;
    const UNSEEN: u32 = u32::MAX;
    let mut index = vec![UNSEEN; n];
    let mut lowlink = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut next_index = 0u32;
    let mut next_comp = 0u32;

    // (state, position in its tau-successor list)
    let mut call: Vec<(u32, usize)> = Vec::new();
    let tau_succs = |s: u32| {
        lts.outgoing(s)
            .iter()
            .filter(move |&&(_, l, _)| l == tau)
            .map(|&(_, _, t)| t)
    };

    for root in 0..n as u32 {
        if index[root as usize] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root as usize] = next_index;
        lowlink[root as usize] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root as usize] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let succ = tau_succs(v).nth(*pos);
            match succ {
                Some(w) => {
                    *pos += 1;
                    if index[w as usize] == UNSEEN {
                        index[w as usize] = next_index;
                        lowlink[w as usize] = next_index;
                        next_index += 1;
                        stack.push(w);
                        on_stack[w as usize] = true;
                        call.push((w, 0));
                    } else if on_stack[w as usize] {
                        lowlink[v as usize] = lowlink[v as usize].min(index[w as usize]);
                    }
                }
                None => {
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        lowlink[parent as usize] =
                            lowlink[parent as usize].min(lowlink[v as usize]);
                    }
                    if lowlink[v as usize] == index[v as usize] {
                        loop {
                            let w = stack.pop().expect("scc stack non-empty");
                            on_stack[w as usize] = false;
                            comp[w as usize] = next_comp;
                            if w == v {
                                break;
                            }
                        }
                        next_comp += 1;
                    }
                }
            }
        }
    }
    comp
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contracts_a_three_state_tau_cycle() {
        let mut b = LtsBuilder::new();
        b.add_states(3);
        b.add_transition(0, Label::Tau, 1);
        b.add_transition(1, Label::Tau, 2);
        b.add_transition(2, Label::Tau, 0);
        let (collapsed, map) = collapse_tau_scc(&b.build(0).unwrap());
        assert_eq!(collapsed.num_states(), 1);
        assert_eq!(collapsed.num_transitions(), 0);
        assert_eq!(map.map, vec![0, 0, 0]);
    }

    #[test]
    fn tau_free_system_is_unchanged() {
        let mut b = LtsBuilder::new();
        b.add_states(2);
        b.add_transition(0, Label::plain("a"), 1);
        b.add_transition(1, Label::plain("b"), 0);
        let lts = b.build(0).unwrap();
        let (collapsed, map) = collapse_tau_scc(&lts);
        assert_eq!(collapsed, lts);
        assert_eq!(map.map, vec![0, 1]);
    }

    #[test]
    fn keeps_visible_edges_leaving_a_cycle() {
        let mut b = LtsBuilder::new();
        b.add_states(3);
        b.add_transition(0, Label::Tau, 1);
        b.add_transition(1, Label::Tau, 0);
        b.add_transition(1, Label::plain("a"), 2);
        let (collapsed, _) = collapse_tau_scc(&b.build(0).unwrap());
        assert_eq!(collapsed.num_states(), 2);
        assert_eq!(collapsed.num_transitions(), 1);
        let (_, label, _) = collapsed.transitions().next().unwrap();
        assert_eq!(label, &Label::plain("a"));
    }
}
