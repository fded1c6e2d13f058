//! Aldebaran (`.aut`) interchange format.
//!
//! The header is `des (initial, transitions, states)`, followed by one
//! `(src,"label",dst)` line per transition in canonical order. The silent
//! step renders as `"tau"`; structured labels render as `kind(name)@instance`
//! and bare protocol results as `name`. Import parses bare tokens back as
//! plain actions.

use thiserror::Error;

use super::label::Label;
use super::system::{Lts, LtsBuilder};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AutError {
    #[error("line {line}: malformed header, expected `des (initial, transitions, states)`")]
    BadHeader { line: usize },
    #[error("line {line}: malformed transition")]
    BadTransition { line: usize },
    #[error("line {line}: unbalanced quotes")]
    UnbalancedQuotes { line: usize },
    #[error("line {line}: state index {index} out of range (state count {count})")]
    IndexOutOfRange { line: usize, index: u64, count: u64 },
    #[error("line {line}: {message}")]
    BadLabel { line: usize, message: String },
    #[error("expected {expected} transitions, found {found}")]
    TransitionCountMismatch { expected: usize, found: usize },
}

pub fn export_aut(lts: &Lts) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "des ({}, {}, {})\n",
        lts.initial(),
        lts.num_transitions(),
        lts.num_states()
    ));
    for (src, label, dst) in lts.transitions() {
        out.push_str(&format!("({src},\"{label}\",{dst})\n"));
    }
    out
}

pub fn import_aut(text: &str) -> Result<Lts, AutError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (header_line, header) = lines.next().ok_or(AutError::BadHeader { line: 1 })?;
    let header_err = AutError::BadHeader {
        line: header_line + 1,
    };
    let rest = header.trim().strip_prefix("des").ok_or(header_err)?.trim();
    let inner = rest
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or(AutError::BadHeader {
            line: header_line + 1,
        })?;
    let fields: Vec<&str> = inner.split(',').map(str::trim).collect();
    if fields.len() != 3 {
        return Err(AutError::BadHeader {
            line: header_line + 1,
        });
    }
    let parse_num = |s: &str| -> Result<u64, AutError> {
        s.parse().map_err(|_| AutError::BadHeader {
            line: header_line + 1,
        })
    };
    let initial = parse_num(fields[0])?;
    let expected_transitions = parse_num(fields[1])? as usize;
    let num_states = parse_num(fields[2])?;
    if initial >= num_states {
        return Err(AutError::IndexOutOfRange {
            line: header_line + 1,
            index: initial,
            count: num_states,
        });
    }

    let mut builder = LtsBuilder::new();
    builder.add_states(num_states as u32);
    let mut found = 0usize;
    for (idx, line) in lines {
        let lineno = idx + 1;
        let body = line
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or(AutError::BadTransition { line: lineno })?;
        let open = body
            .find('"')
            .ok_or(AutError::UnbalancedQuotes { line: lineno })?;
        let close = body.rfind('"').filter(|&c| c > open);
        let close = close.ok_or(AutError::UnbalancedQuotes { line: lineno })?;
        let src: u64 = body[..open]
            .trim()
            .strip_suffix(',')
            .map(str::trim)
            .and_then(|s| s.parse().ok())
            .ok_or(AutError::BadTransition { line: lineno })?;
        let dst: u64 = body[close + 1..]
            .trim()
            .strip_prefix(',')
            .map(str::trim)
            .and_then(|s| s.parse().ok())
            .ok_or(AutError::BadTransition { line: lineno })?;
        for index in [src, dst] {
            if index >= num_states {
                return Err(AutError::IndexOutOfRange {
                    line: lineno,
                    index,
                    count: num_states,
                });
            }
        }
        let label = Label::parse(&body[open + 1..close]).map_err(|message| AutError::BadLabel {
            line: lineno,
            message,
        })?;
        builder.add_transition(src as u32, label, dst as u32);
        found += 1;
    }
    if found != expected_transitions {
        return Err(AutError::TransitionCountMismatch {
            expected: expected_transitions,
            found,
        });
    }
    Ok(builder
        .build(initial as u32)
        .expect("indices validated during parse"))
}
