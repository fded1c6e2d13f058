//! Validators. Violations are data, not failures: each validator returns a
//! report listing everything it found, with warnings kept apart from errors.

use std::collections::BTreeSet;
use std::fmt;

use super::types::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub severity: Severity,
    pub location: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{tag}: {}: {}", self.location, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new() -> Self {
        ValidationReport::default()
    }

    fn error(&mut self, location: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation {
            severity: Severity::Error,
            location: location.into(),
            message: message.into(),
        });
    }

    fn warning(&mut self, location: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation {
            severity: Severity::Warning,
            location: location.into(),
            message: message.into(),
        });
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }

    pub fn errors(&self) -> impl Iterator<Item = &Violation> {
        self.violations
            .iter()
            .filter(|v| v.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Violation> {
        self.violations
            .iter()
            .filter(|v| v.severity == Severity::Warning)
    }

    /// No errors; warnings do not invalidate a model.
    pub fn is_valid(&self) -> bool {
        self.errors().next().is_none()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "ok");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

fn check_unique<'a>(
    report: &mut ValidationReport,
    location: &str,
    what: &str,
    names: impl Iterator<Item = &'a String>,
) {
    let mut seen = BTreeSet::new();
    for name in names {
        if !seen.insert(name) {
            report.error(location, format!("duplicate {what} `{name}`"));
        }
    }
}

pub fn validate_std(std: &Std) -> ValidationReport {
    let mut report = ValidationReport::new();
    let loc = format!("std {}", std.name);
    check_unique(&mut report, &loc, "state", std.states.iter());
    check_unique(&mut report, &loc, "action", std.actions.iter());
    if !std.has_state(&std.initial) {
        report.error(
            &loc,
            format!("initial state `{}` not declared", std.initial),
        );
    }
    let mut seen = BTreeSet::new();
    for t in &std.transitions {
        let tloc = format!(
            "{loc}, transition {} -{}-> {}",
            t.source, t.action, t.target
        );
        if !std.has_state(&t.source) {
            report.error(&tloc, format!("source `{}` not a state", t.source));
        }
        if !std.has_state(&t.target) {
            report.error(&tloc, format!("target `{}` not a state", t.target));
        }
        if !std.actions.iter().any(|a| a == &t.action) {
            report.error(&tloc, format!("action `{}` not declared", t.action));
        }
        if !seen.insert(t.clone()) {
            report.error(&tloc, "duplicate transition");
        }
    }
    report
}

pub fn validate_partition(partition: &Partition, owner: &Std) -> ValidationReport {
    let mut report = ValidationReport::new();
    let loc = format!("partition {}", partition.name);
    check_unique(
        &mut report,
        &loc,
        "phase",
        partition.entries.iter().map(|e| &e.phase.name),
    );
    // Trap names become synchronization labels qualified only by instance, so
    // they must be unique across the whole partition.
    check_unique(
        &mut report,
        &loc,
        "trap",
        partition
            .entries
            .iter()
            .flat_map(|e| e.traps.iter().map(|t| &t.name)),
    );
    for entry in &partition.entries {
        let phase = &entry.phase;
        let ploc = format!("{loc}, phase {}", phase.name);
        for state in &phase.states {
            if !owner.has_state(state) {
                report.error(
                    &ploc,
                    format!("state `{state}` not in owner std `{}`", owner.name),
                );
            }
        }
        for t in &phase.transitions {
            let tloc = format!(
                "{ploc}, transition {} -{}-> {}",
                t.source, t.action, t.target
            );
            if !owner.has_transition(t) {
                report.error(&tloc, "not a transition of the owner std");
            }
            if !phase.has_state(&t.source) || !phase.has_state(&t.target) {
                report.error(&tloc, "endpoint outside the phase");
            }
        }
        for trap in &entry.traps {
            let trloc = format!("{ploc}, trap {}", trap.name);
            if trap.states.is_empty() {
                report.error(&trloc, "trap is empty");
            }
            for state in &trap.states {
                if !phase.has_state(state) {
                    report.error(&trloc, format!("state `{state}` not in the phase"));
                }
            }
            for t in &phase.transitions {
                if trap.contains(&t.source) && !trap.contains(&t.target) {
                    report.error(
                        &trloc,
                        format!(
                            "not closed: {} -{}-> {} leaves the trap",
                            t.source, t.action, t.target
                        ),
                    );
                }
            }
        }
    }
    // A detailed state covered by no phase cannot occur under coordination;
    // legal, but worth flagging.
    for state in &owner.states {
        if !partition.entries.iter().any(|e| e.phase.has_state(state)) {
            report.warning(&loc, format!("state `{state}` lies outside every phase"));
        }
    }
    report
}

pub fn validate_role(role: &Role, partition: &Partition) -> ValidationReport {
    let mut report = ValidationReport::new();
    let loc = format!("role over {}", partition.name);
    if partition.phase(&role.initial_phase).is_none() {
        report.error(
            &loc,
            format!("initial phase `{}` not in partition", role.initial_phase),
        );
    }
    for transfer in &role.transfers {
        let tloc = format!(
            "{loc}, transfer {} -{}-> {}",
            transfer.from, transfer.trap, transfer.to
        );
        let from = partition.phase(&transfer.from);
        let to = partition.phase(&transfer.to);
        if from.is_none() {
            report.error(&tloc, format!("phase `{}` not in partition", transfer.from));
        }
        if to.is_none() {
            report.error(&tloc, format!("phase `{}` not in partition", transfer.to));
        }
        let (Some(from), Some(to)) = (from, to) else {
            continue;
        };
        match from.traps.iter().find(|t| t.name == transfer.trap) {
            None => {
                report.error(
                    &tloc,
                    format!(
                        "trap `{}` not declared for phase `{}`",
                        transfer.trap, transfer.from
                    ),
                );
            }
            Some(trap) => {
                for state in &trap.states {
                    if !to.phase.has_state(state) {
                        report.error(
                            &tloc,
                            format!("trap state `{state}` not in target phase `{}`", transfer.to),
                        );
                    }
                }
            }
        }
    }
    report
}

pub fn validate_model(model: &ParadigmModel) -> ValidationReport {
    let mut report = ValidationReport::new();
    let loc = "model";
    check_unique(&mut report, loc, "std", model.stds.iter().map(|s| &s.name));
    check_unique(
        &mut report,
        loc,
        "partition",
        model.partitions.iter().map(|p| &p.name),
    );
    check_unique(
        &mut report,
        loc,
        "instance",
        model.instances.iter().map(|i| &i.name),
    );

    for std in &model.stds {
        report.merge(validate_std(std));
    }
    for partition in &model.partitions {
        match model.std(&partition.owner) {
            Some(owner) => report.merge(validate_partition(partition, owner)),
            None => report.error(
                format!("partition {}", partition.name),
                format!("owner std `{}` not declared", partition.owner),
            ),
        }
    }
    for instance in &model.instances {
        let iloc = format!("instance {}", instance.name);
        if model.std(&instance.std).is_none() {
            report.error(&iloc, format!("std `{}` not declared", instance.std));
        }
        let mut partitions_played = BTreeSet::new();
        for role in &instance.roles {
            match model.partition(&role.partition) {
                None => {
                    report.error(
                        &iloc,
                        format!("role partition `{}` not declared", role.partition),
                    );
                }
                Some(partition) => {
                    if partition.owner != instance.std {
                        report.error(
                            &iloc,
                            format!(
                                "role partition `{}` belongs to std `{}`, not `{}`",
                                role.partition, partition.owner, instance.std
                            ),
                        );
                    }
                    let mut sub = validate_role(role, partition);
                    for v in &mut sub.violations {
                        v.location = format!("{iloc}, {}", v.location);
                    }
                    report.merge(sub);
                }
            }
            if !partitions_played.insert(role.partition.clone()) {
                report.error(
                    &iloc,
                    format!("two roles over partition `{}`", role.partition),
                );
            }
        }
    }
    for conductor in &model.conductors {
        match model.instance(conductor) {
            None => report.error(loc, format!("conductor `{conductor}` not an instance")),
            Some(instance) if !instance.roles.is_empty() => {
                report.error(loc, format!("conductor `{conductor}` plays roles"));
            }
            Some(_) => {}
        }
    }
    for (idx, rule) in model.rules.iter().enumerate() {
        let rloc = format!("rule {}", idx + 1);
        match model.instance(&rule.conductor) {
            None => {
                report.error(
                    &rloc,
                    format!("conductor `{}` not an instance", rule.conductor),
                );
            }
            Some(instance) => {
                if !model.is_conductor(&rule.conductor) {
                    report.error(
                        &rloc,
                        format!("`{}` is not a designated conductor", rule.conductor),
                    );
                }
                if let Some(std) = model.std(&instance.std) {
                    if !std.has_transition(&rule.transition) {
                        report.error(
                            &rloc,
                            format!(
                                "transition {} -{}-> {} not in std `{}`",
                                rule.transition.source,
                                rule.transition.action,
                                rule.transition.target,
                                std.name
                            ),
                        );
                    }
                }
            }
        }
        if rule.participants.is_empty() {
            report.error(&rloc, "no participants");
        }
        let mut seen = BTreeSet::new();
        for p in &rule.participants {
            let ploc = format!("{rloc}, participant {}", p.instance);
            if p.instance == rule.conductor {
                report.error(&ploc, "conductor cannot participate in its own rule");
            }
            if !seen.insert(p.instance.clone()) {
                report.error(&ploc, "instance appears twice in one rule");
            }
            match model.instance(&p.instance) {
                None => report.error(&ploc, "not an instance"),
                Some(instance) => match instance.role_over(&p.partition) {
                    None => {
                        report.error(&ploc, format!("no role over partition `{}`", p.partition));
                    }
                    Some(role) => {
                        if !role.transfers.contains(&p.transfer) {
                            report.error(
                                &ploc,
                                format!(
                                    "transfer {} -{}-> {} not in the role",
                                    p.transfer.from, p.transfer.trap, p.transfer.to
                                ),
                            );
                        }
                    }
                },
            }
        }
    }
    report
}
