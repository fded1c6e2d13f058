//! Multi-way synchronization rules.

use std::collections::HashMap;

use thiserror::Error;

use super::label::Label;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SyncRuleError {
    #[error("synchronization rule needs at least two operands, got {0}")]
    TooFewOperands(usize),
    #[error("tau cannot be a synchronization operand")]
    TauOperand,
    #[error("conflicting results {first} and {second} for the same operand multiset")]
    ConflictingResults { first: Label, second: Label },
}

/// One rule: a multiset of at least two operand labels that fire
/// simultaneously in distinct components, producing `result` (possibly tau).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyncRule {
    operands: Vec<Label>,
    result: Label,
}

impl SyncRule {
    pub fn new(mut operands: Vec<Label>, result: Label) -> Result<Self, SyncRuleError> {
        if operands.len() < 2 {
            return Err(SyncRuleError::TooFewOperands(operands.len()));
        }
        if operands.iter().any(Label::is_tau) {
            return Err(SyncRuleError::TauOperand);
        }
        operands.sort();
        Ok(SyncRule { operands, result })
    }

    pub fn pair(a: Label, b: Label, result: Label) -> Result<Self, SyncRuleError> {
        SyncRule::new(vec![a, b], result)
    }

    /// Operands as a sorted multiset.
    pub fn operands(&self) -> &[Label] {
        &self.operands
    }

    pub fn result(&self) -> &Label {
        &self.result
    }
}

/// A conflict-free collection of synchronization rules.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SyncRuleSet {
    rules: Vec<SyncRule>,
}

impl SyncRuleSet {
    pub fn empty() -> Self {
        SyncRuleSet::default()
    }

    pub fn new(rules: Vec<SyncRule>) -> Result<Self, SyncRuleError> {
        let mut seen: HashMap<&[Label], &Label> = HashMap::new();
        for rule in &rules {
            if let Some(&prev) = seen.get(rule.operands()) {
                if prev != rule.result() {
                    return Err(SyncRuleError::ConflictingResults {
                        first: prev.clone(),
                        second: rule.result().clone(),
                    });
                }
            } else {
                seen.insert(rule.operands(), rule.result());
            }
        }
        Ok(SyncRuleSet { rules })
    }

    pub fn rules(&self) -> &[SyncRule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lts::label::LabelKind;

    #[test]
    fn detects_conflicting_rules() {
        let op1 = Label::act(LabelKind::Man, "check1", Some("S"));
        let op2 = Label::act(LabelKind::Trap, "triv", Some("C"));
        let r1 = SyncRule::pair(op1.clone(), op2.clone(), Label::plain("a")).unwrap();
        let r2 = SyncRule::pair(op2.clone(), op1.clone(), Label::plain("b")).unwrap();
        assert!(matches!(
            SyncRuleSet::new(vec![r1.clone(), r2]),
            Err(SyncRuleError::ConflictingResults { .. })
        ));
        let dup = SyncRule::pair(op1, op2, Label::plain("a")).unwrap();
        assert!(SyncRuleSet::new(vec![r1, dup]).is_ok());
    }

    #[test]
    fn rejects_degenerate_rules() {
        assert_eq!(
            SyncRule::new(vec![Label::plain("x")], Label::Tau),
            Err(SyncRuleError::TooFewOperands(1))
        );
        assert_eq!(
            SyncRule::pair(Label::Tau, Label::plain("x"), Label::Tau),
            Err(SyncRuleError::TauOperand)
        );
    }
}
