//! Builders for the bundled client/server model family: `n` clients
//! competing for exclusive service from one non-deterministic server.

use crate::model::*;

/// Which member of the family to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// The four-state client with phases Without/Interrupt/With.
    Basic,
    /// As `Basic`, plus a `return` step that withdraws a pending request.
    Return,
    /// The coarse two-phase client served unconditionally.
    Simple,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Basic => "basic",
            Variant::Return => "return",
            Variant::Simple => "simple",
        }
    }
}

/// Builds the client/server model with `n >= 1` clients.
pub fn client_server(variant: Variant, n: usize) -> ParadigmModel {
    assert!(n >= 1, "the family needs at least one client");
    match variant {
        Variant::Basic => basic_family(n, false),
        Variant::Return => basic_family(n, true),
        Variant::Simple => simple_family(n),
    }
}

fn client_std(with_return: bool) -> Std {
    let mut transitions = vec![
        StdTransition::new("Out", "enter", "Waiting"),
        StdTransition::new("Waiting", "explain", "Busy"),
        StdTransition::new("Busy", "thank", "AtDoor"),
        StdTransition::new("AtDoor", "leave", "Out"),
    ];
    if with_return {
        transitions.push(StdTransition::new("Waiting", "return", "Out"));
    }
    Std::new(
        "Client",
        vec![
            "Out".into(),
            "Waiting".into(),
            "Busy".into(),
            "AtDoor".into(),
        ],
        transitions,
        "Out",
    )
}

fn states(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| (*s).to_owned()).collect()
}

fn cs_partition(with_return: bool) -> Partition {
    let mut without_trans = vec![
        StdTransition::new("Out", "enter", "Waiting"),
        StdTransition::new("AtDoor", "leave", "Out"),
    ];
    if with_return {
        without_trans.push(StdTransition::new("Waiting", "return", "Out"));
    }
    Partition {
        name: "CS".into(),
        owner: "Client".into(),
        entries: vec![
            PartitionEntry {
                phase: Phase {
                    name: "Without".into(),
                    states: states(&["Out", "Waiting", "AtDoor"]),
                    transitions: without_trans,
                },
                traps: vec![Trap {
                    name: "triv".into(),
                    states: states(&["Out", "Waiting", "AtDoor"]),
                }],
            },
            PartitionEntry {
                phase: Phase {
                    name: "Interrupt".into(),
                    states: states(&["Out", "Waiting", "AtDoor"]),
                    transitions: vec![StdTransition::new("AtDoor", "leave", "Out")],
                },
                traps: vec![
                    Trap {
                        name: "notYet".into(),
                        states: states(&["Out", "AtDoor"]),
                    },
                    Trap {
                        name: "request".into(),
                        states: states(&["Waiting"]),
                    },
                ],
            },
            PartitionEntry {
                phase: Phase {
                    name: "With".into(),
                    states: states(&["Waiting", "Busy", "AtDoor"]),
                    transitions: vec![
                        StdTransition::new("Waiting", "explain", "Busy"),
                        StdTransition::new("Busy", "thank", "AtDoor"),
                    ],
                },
                traps: vec![Trap {
                    name: "done".into(),
                    states: states(&["AtDoor"]),
                }],
            },
        ],
    }
}

fn cs_role() -> Role {
    Role {
        partition: "CS".into(),
        initial_phase: "Without".into(),
        transfers: vec![
            PhaseTransfer::new("Without", "triv", "Interrupt"),
            PhaseTransfer::new("Interrupt", "notYet", "Without"),
            PhaseTransfer::new("Interrupt", "request", "With"),
            PhaseTransfer::new("With", "done", "Without"),
        ],
    }
}

fn nd_server_std(n: usize) -> Std {
    let mut server_states = vec!["Idle".to_owned()];
    let mut transitions = Vec::new();
    for i in 1..=n {
        server_states.push(format!("NDChecking{i}"));
        server_states.push(format!("NDHelping{i}"));
        transitions.push(StdTransition::new(
            "Idle",
            format!("check{i}"),
            format!("NDChecking{i}"),
        ));
        transitions.push(StdTransition::new(
            format!("NDChecking{i}"),
            format!("refuse{i}"),
            "Idle",
        ));
        transitions.push(StdTransition::new(
            format!("NDChecking{i}"),
            format!("permit{i}"),
            format!("NDHelping{i}"),
        ));
        transitions.push(StdTransition::new(
            format!("NDHelping{i}"),
            format!("continue{i}"),
            "Idle",
        ));
    }
    Std::new("Server", server_states, transitions, "Idle")
}

fn basic_family(n: usize, with_return: bool) -> ParadigmModel {
    let mut instances: Vec<ComponentInstance> = (1..=n)
        .map(|i| ComponentInstance {
            name: format!("Client{i}"),
            std: "Client".into(),
            roles: vec![cs_role()],
        })
        .collect();
    instances.push(ComponentInstance {
        name: "Server".into(),
        std: "Server".into(),
        roles: Vec::new(),
    });

    let mut rules = Vec::new();
    for i in 1..=n {
        let client = format!("Client{i}");
        let couples = [
            (
                StdTransition::new("Idle", format!("check{i}"), format!("NDChecking{i}")),
                PhaseTransfer::new("Without", "triv", "Interrupt"),
            ),
            (
                StdTransition::new(format!("NDChecking{i}"), format!("refuse{i}"), "Idle"),
                PhaseTransfer::new("Interrupt", "notYet", "Without"),
            ),
            (
                StdTransition::new(
                    format!("NDChecking{i}"),
                    format!("permit{i}"),
                    format!("NDHelping{i}"),
                ),
                PhaseTransfer::new("Interrupt", "request", "With"),
            ),
            (
                StdTransition::new(format!("NDHelping{i}"), format!("continue{i}"), "Idle"),
                PhaseTransfer::new("With", "done", "Without"),
            ),
        ];
        for (transition, transfer) in couples {
            rules.push(ConsistencyRule {
                conductor: "Server".into(),
                transition,
                participants: vec![Participant {
                    instance: client.clone(),
                    partition: "CS".into(),
                    transfer,
                }],
            });
        }
    }

    ParadigmModel {
        stds: vec![client_std(with_return), nd_server_std(n)],
        partitions: vec![cs_partition(with_return)],
        instances,
        conductors: vec!["Server".into()],
        rules,
    }
}

/// The coarse variant: service is granted unconditionally, so the role needs
/// only two phases. Before the first admission the client's whereabouts are
/// unknown to the role (the `Out` phase spans the diagonal pair of states not
/// adjacent in the detailed cycle), and afterwards the trivially-entered
/// `done` trap lets the server recycle the grant forever.
fn simple_family(n: usize) -> ParadigmModel {
    let partition = Partition {
        name: "CS".into(),
        owner: "Client".into(),
        entries: vec![
            PartitionEntry {
                phase: Phase {
                    name: "Out".into(),
                    states: states(&["Out", "Busy"]),
                    transitions: Vec::new(),
                },
                traps: vec![Trap {
                    name: "triv".into(),
                    states: states(&["Out"]),
                }],
            },
            PartitionEntry {
                phase: Phase {
                    name: "With".into(),
                    states: states(&["Out", "Waiting", "Busy", "AtDoor"]),
                    transitions: vec![
                        StdTransition::new("Out", "enter", "Waiting"),
                        StdTransition::new("Waiting", "explain", "Busy"),
                        StdTransition::new("Busy", "thank", "AtDoor"),
                        StdTransition::new("AtDoor", "leave", "Out"),
                    ],
                },
                traps: vec![Trap {
                    name: "done".into(),
                    states: states(&["Out", "Waiting", "Busy", "AtDoor"]),
                }],
            },
        ],
    };
    let role = Role {
        partition: "CS".into(),
        initial_phase: "Out".into(),
        transfers: vec![
            PhaseTransfer::new("Out", "triv", "With"),
            PhaseTransfer::new("With", "done", "With"),
        ],
    };

    let mut server_states = vec!["Idle".to_owned()];
    let mut server_transitions = Vec::new();
    for i in 1..=n {
        server_states.push(format!("Serving{i}"));
        server_transitions.push(StdTransition::new(
            "Idle",
            format!("check{i}"),
            format!("Serving{i}"),
        ));
        server_transitions.push(StdTransition::new(
            format!("Serving{i}"),
            format!("continue{i}"),
            "Idle",
        ));
    }
    let server = Std::new("Server", server_states, server_transitions, "Idle");

    let mut instances: Vec<ComponentInstance> = (1..=n)
        .map(|i| ComponentInstance {
            name: format!("Client{i}"),
            std: "Client".into(),
            roles: vec![role.clone()],
        })
        .collect();
    instances.push(ComponentInstance {
        name: "Server".into(),
        std: "Server".into(),
        roles: Vec::new(),
    });

    let mut rules = Vec::new();
    for i in 1..=n {
        let client = format!("Client{i}");
        let check = StdTransition::new("Idle", format!("check{i}"), format!("Serving{i}"));
        let cont = StdTransition::new(format!("Serving{i}"), format!("continue{i}"), "Idle");
        let admit = PhaseTransfer::new("Out", "triv", "With");
        let renew = PhaseTransfer::new("With", "done", "With");
        for (transition, transfer) in [
            (check.clone(), admit),
            (check, renew.clone()),
            (cont, renew),
        ] {
            rules.push(ConsistencyRule {
                conductor: "Server".into(),
                transition,
                participants: vec![Participant {
                    instance: client.clone(),
                    partition: "CS".into(),
                    transfer,
                }],
            });
        }
    }

    ParadigmModel {
        stds: vec![client_std(false), server],
        partitions: vec![partition],
        instances,
        conductors: vec!["Server".into()],
        rules,
    }
}
