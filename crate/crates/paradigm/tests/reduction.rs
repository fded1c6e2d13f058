//! Inertness detection, detailed-diagram quotienting, and the
//! first-reduce then-compose construction against the published numbers.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::action_set;
use paradigm::bisim::{equivalent, oracle_equivalent};
use paradigm::generate::{client_server, Variant};
use paradigm::lts::{hide, LabelKind, LabelSet};
use paradigm::model::*;
use paradigm::reduce::*;
use paradigm::translate::{translate_component_dg, translate_system};

fn basic() -> ParadigmModel {
    client_server(Variant::Basic, 1)
}

/// A witness must name a real trap of a real phase that separates the
/// transition's endpoints.
fn witness_is_genuine(model: &ParadigmModel, entry: &TransitionInertness) {
    let witness = entry.witness.as_ref().expect("non-inert needs a witness");
    let partition = model.partition(&witness.partition).unwrap();
    let phase = partition.phase(&witness.phase).unwrap();
    assert!(phase.phase.has_state(&entry.transition.source));
    assert!(phase.phase.has_state(&entry.transition.target));
    let trap = phase.traps.iter().find(|t| t.name == witness.trap).unwrap();
    assert!(trap.contains(&witness.inside));
    assert!(!trap.contains(&witness.outside));
}

#[test]
fn basic_client_inert_actions_are_explain_and_leave() {
    let model = basic();
    let report = inert_report_of(&model, "Client1").unwrap();
    assert_eq!(report.inert_actions(), action_set(&["explain", "leave"]));
    for entry in &report.transitions {
        match entry.transition.action.as_str() {
            "explain" | "leave" => assert!(entry.inert),
            "enter" | "thank" => {
                assert!(!entry.inert);
                witness_is_genuine(&model, entry);
            }
            other => panic!("unexpected action {other}"),
        }
    }
    // The checking phase tells a waiting client apart from an absent one.
    let enter = report
        .transitions
        .iter()
        .find(|t| t.transition.action == "enter")
        .unwrap();
    let witness = enter.witness.as_ref().unwrap();
    assert_eq!(
        (witness.phase.as_str(), witness.trap.as_str()),
        ("Interrupt", "notYet")
    );
}

#[test]
fn withdrawing_a_request_is_not_inert() {
    let model = client_server(Variant::Return, 1);
    let report = inert_report_of(&model, "Client1").unwrap();
    assert_eq!(report.inert_actions(), action_set(&["explain", "leave"]));
    let ret = report
        .transitions
        .iter()
        .find(|t| t.transition.action == "return")
        .unwrap();
    assert!(!ret.inert);
    witness_is_genuine(&model, ret);
    let witness = ret.witness.as_ref().unwrap();
    assert_eq!(witness.phase, "Interrupt");
    assert!(witness.trap == "request" || witness.trap == "notYet");
}

#[test]
fn coarse_partition_makes_every_action_inert() {
    let model = client_server(Variant::Simple, 1);
    let report = inert_report_of(&model, "Client1").unwrap();
    assert_eq!(
        report.inert_actions(),
        action_set(&["enter", "explain", "thank", "leave"])
    );
}

#[test]
fn inertness_agrees_with_direct_definition_on_the_family() {
    for variant in [Variant::Basic, Variant::Return, Variant::Simple] {
        let model = client_server(variant, 1);
        let std = model.std("Client").unwrap();
        let partition = model.partition("CS").unwrap();
        let report = inert_transitions(std, &[partition]);
        for entry in &report.transitions {
            let t = &entry.transition;
            let direct = partition.entries.iter().all(|e| {
                if !e.phase.has_state(&t.source) || !e.phase.has_state(&t.target) {
                    return true;
                }
                e.traps
                    .iter()
                    .all(|trap| trap.contains(&t.source) == trap.contains(&t.target))
            });
            assert_eq!(entry.inert, direct, "{t:?} under {}", variant.name());
        }
    }
}

#[test]
fn quotient_with_inert_actions_merges_the_diagonals() {
    let model = basic();
    let rc = quotient_detailed(
        model.std("Client").unwrap(),
        &action_set(&["explain", "leave"]),
    );
    assert_eq!(
        rc.blocks,
        vec![
            vec!["AtDoor".to_string(), "Out".to_string()],
            vec!["Busy".to_string(), "Waiting".to_string()]
        ]
    );
    assert_eq!(rc.std.states, ["AtDoor+Out", "Busy+Waiting"]);
    assert_eq!(rc.std.initial, "AtDoor+Out");
    assert_eq!(
        rc.std.transitions,
        [
            StdTransition::new("AtDoor+Out", "enter", "Busy+Waiting"),
            StdTransition::new("Busy+Waiting", "thank", "AtDoor+Out"),
        ]
    );
}

#[test]
fn quotient_with_nothing_hidden_is_isomorphic() {
    let model = basic();
    let std = model.std("Client").unwrap();
    let rc = quotient_detailed(std, &BTreeSet::new());
    assert_eq!(rc.std.states.len(), 4);
    assert_eq!(rc.std.transitions.len(), 4);
    assert!(rc.blocks.iter().all(|b| b.len() == 1));
}

#[test]
fn quotient_under_the_unsound_choice_splits_differently() {
    let model = basic();
    let rc = quotient_detailed(
        model.std("Client").unwrap(),
        &action_set(&["enter", "thank"]),
    );
    assert_eq!(
        rc.blocks,
        vec![
            vec!["Out".to_string(), "Waiting".to_string()],
            vec!["AtDoor".to_string(), "Busy".to_string()]
        ]
    );
}

#[test]
fn quotient_size_shrinks_as_more_actions_are_hidden() {
    let model = basic();
    let std = model.std("Client").unwrap();
    let sets: [&[&str]; 4] = [
        &[],
        &["explain"],
        &["explain", "leave"],
        &["explain", "leave", "enter", "thank"],
    ];
    let mut last = usize::MAX;
    for set in sets {
        let size = quotient_detailed(std, &action_set(set)).std.states.len();
        assert!(size <= last);
        last = size;
    }
}

#[test]
fn reduced_detailed_process_matches_the_published_shape() {
    let model = basic();
    let rc = quotient_detailed(
        model.std("Client").unwrap(),
        &action_set(&["explain", "leave"]),
    );
    let queried = action_set(&["Out", "Waiting", "AtDoor"]);
    let (lts, rules) = reduced_detailed_lts(&rc, "Client1", &queried);
    assert_eq!(lts.num_states(), 2);
    let labels: BTreeSet<String> = lts.transitions().map(|(_, l, _)| l.to_string()).collect();
    assert_eq!(
        labels,
        [
            "at!(AtDoor+Out)@Client1",
            "at!(Busy+Waiting)@Client1",
            "ok?(enter)@Client1",
            "ok?(thank)@Client1",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect::<BTreeSet<_>>()
    );
    // One silent pairing per queried member of each block.
    assert_eq!(rules.len(), 3);

    // A block without queried members gets no state-query loop.
    let (unqueried, no_rules) = reduced_detailed_lts(&rc, "Client1", &BTreeSet::new());
    assert!(no_rules.is_empty());
    assert!(unqueried
        .transitions()
        .all(|(_, l, _)| l.kind() != Some(LabelKind::AtSend)));
}

#[test]
fn coarse_variant_reduces_to_a_single_state() {
    let model = client_server(Variant::Simple, 1);
    let all = action_set(&["enter", "explain", "thank", "leave"]);
    let rc = quotient_detailed(model.std("Client").unwrap(), &all);
    assert_eq!(rc.std.states.len(), 1);
    assert_eq!(rc.std.transitions.len(), 0);
    let (lts, _) = reduced_detailed_lts(&rc, "Client1", &action_set(&["Out"]));
    assert_eq!(lts.num_states(), 1);
    let composition = reduced_component_composition(&model, "Client1", &all).unwrap();
    assert_eq!(composition.num_states(), 3);
}

#[test]
fn reduced_composition_has_nine_states_and_preserves_behaviour() {
    let model = basic();
    let g = action_set(&["explain", "leave"]);
    let left = reduced_component_composition(&model, "Client1", &g).unwrap();
    assert_eq!(left.num_states(), 9);
    assert!(verify_reduction(&model, "Client1", &g).unwrap());
}

#[test]
fn the_unsound_action_choice_is_detected() {
    let model = basic();
    let g = action_set(&["enter", "thank"]);
    assert!(!verify_reduction(&model, "Client1", &g).unwrap());
}

#[test]
fn reduction_check_refuses_unknown_actions() {
    let model = basic();
    let err = verify_reduction(&model, "Client1", &action_set(&["fly"])).unwrap_err();
    assert_eq!(
        err,
        ReduceError::UnknownAction {
            instance: "Client1".into(),
            action: "fly".into()
        }
    );
}

#[test]
fn withdrawal_variant_still_reduces_with_the_inert_actions() {
    let model = client_server(Variant::Return, 1);
    let g = action_set(&["explain", "leave"]);
    // The quotient keeps a hidden residual step here, still phase-gated.
    let rc = quotient_detailed(model.std("Client").unwrap(), &g);
    assert_eq!(rc.std.states.len(), 3);
    assert!(rc.std.transitions.iter().any(|t| t.action == "explain"));
    assert!(verify_reduction(&model, "Client1", &g).unwrap());
}

#[test]
fn detailed_behaviour_of_the_basic_client_is_preserved() {
    let model = basic();
    assert!(verify_detailed_preservation(&model, "Client1").unwrap());
}

#[test]
fn a_phase_that_drops_a_step_eliminates_detailed_behaviour() {
    // Single phase missing the thank step: the client can never pass Busy,
    // so coordination cuts its detailed behaviour.
    let client = basic().std("Client").unwrap().clone();
    let phase = Phase {
        name: "NoThank".into(),
        states: client.states.clone(),
        transitions: client
            .transitions
            .iter()
            .filter(|t| t.action != "thank")
            .cloned()
            .collect(),
    };
    let model = ParadigmModel {
        stds: vec![client.clone()],
        partitions: vec![Partition {
            name: "P".into(),
            owner: "Client".into(),
            entries: vec![PartitionEntry {
                phase,
                traps: vec![Trap {
                    name: "triv".into(),
                    states: client.states.clone(),
                }],
            }],
        }],
        instances: vec![ComponentInstance {
            name: "C".into(),
            std: "Client".into(),
            roles: vec![Role {
                partition: "P".into(),
                initial_phase: "NoThank".into(),
                transfers: vec![PhaseTransfer::new("NoThank", "triv", "NoThank")],
            }],
        }],
        conductors: vec![],
        rules: vec![],
    };
    assert!(validate_model(&model).is_valid());
    assert!(!verify_detailed_preservation(&model, "C").unwrap());
}

#[test]
fn coarse_variant_preservation_agrees_with_the_oracle() {
    use paradigm::lts::{rename, Label};
    use paradigm::translate::std_to_lts;
    use std::collections::HashMap;

    let model = client_server(Variant::Simple, 1);
    let verdict = verify_detailed_preservation(&model, "Client1").unwrap();

    let dg = translate_component_dg(&model, "Client1").unwrap();
    let hidden = hide(&dg, &LabelSet::kinds_of([LabelKind::Trap], "Client1"));
    let std = model.std("Client").unwrap();
    let map: HashMap<Label, Label> = std
        .actions
        .iter()
        .map(|a| {
            (
                Label::plain(a.clone()),
                Label::act(LabelKind::Ok, a.clone(), Some("Client1")),
            )
        })
        .collect();
    let lifted = rename(&std_to_lts(std, None), &map);
    assert_eq!(oracle_equivalent(&lifted, &hidden).unwrap(), verdict);
}

#[test]
fn reduced_system_matches_published_counts_and_rejects_unsound_sets() {
    let model = client_server(Variant::Basic, 2);
    let reduced = reduced_system(&model, &BTreeMap::new(), false).unwrap();
    assert_eq!((reduced.num_states(), reduced.num_transitions()), (32, 54));

    let bad: BTreeMap<String, BTreeSet<String>> = ["Client1", "Client2"]
        .iter()
        .map(|i| (i.to_string(), action_set(&["enter", "thank"])))
        .collect();
    assert_eq!(
        reduced_system(&model, &bad, false).unwrap_err(),
        ReduceError::Unsound {
            instance: "Client1".into()
        }
    );
    // With the check overridden the composition is still produced.
    let forced = reduced_system(&model, &bad, true).unwrap();
    assert!(forced.num_states() > 0);
}

#[test]
fn protocol_behaviour_survives_the_reduction() {
    // Hiding everything but the protocol steps, the full and reduced systems
    // are branching bisimilar.
    let ok_kind = LabelSet::kinds([LabelKind::Ok]);
    for (variant, max) in [
        (Variant::Basic, 4),
        (Variant::Return, 2),
        (Variant::Simple, 2),
    ] {
        for n in 2..=max {
            let model = client_server(variant, n);
            let full = hide(&translate_system(&model).unwrap(), &ok_kind);
            let reduced = hide(
                &reduced_system(&model, &BTreeMap::new(), false).unwrap(),
                &ok_kind,
            );
            assert!(
                equivalent(&full, &reduced).holds(),
                "{} n={n}",
                variant.name()
            );
        }
    }
}

#[test]
fn every_subset_of_inert_actions_reduces_soundly() {
    for variant in [Variant::Basic, Variant::Return, Variant::Simple] {
        let model = client_server(variant, 1);
        let inert: Vec<String> = inert_report_of(&model, "Client1")
            .unwrap()
            .inert_actions()
            .into_iter()
            .collect();
        for mask in 0..(1u32 << inert.len()) {
            let subset: BTreeSet<String> = inert
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, a)| a.clone())
                .collect();
            assert!(
                verify_reduction(&model, "Client1", &subset).unwrap(),
                "{} with {subset:?}",
                variant.name()
            );
        }
    }
}
