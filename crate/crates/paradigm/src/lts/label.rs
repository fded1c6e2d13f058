//! Structured transition labels and label patterns.
//!
//! Labels carry a kind, a payload name, and an optional instance qualifier so
//! that same-named actions of different component instances never
//! synchronize. The silent step is [`Label::Tau`].

use std::fmt;

/// The kind of a structured action label.
///
/// `AtSend`/`AtRecv` exchange detailed *state* information, `OkSend`/`OkRecv`
/// negotiate permission for a detailed *step*, `Ok` is the visible result of
/// an ok-synchronization, `Man` and `Trap` are the conductor and participant
/// sides of a consistency rule, `Result` is the visible protocol step a rule
/// produces, and `Plain` is an unadorned action name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LabelKind {
    AtSend,
    AtRecv,
    OkSend,
    OkRecv,
    Ok,
    Man,
    Trap,
    Result,
    Plain,
}

impl LabelKind {
    fn prefix(self) -> Option<&'static str> {
        match self {
            LabelKind::AtSend => Some("at!"),
            LabelKind::AtRecv => Some("at?"),
            LabelKind::OkSend => Some("ok!"),
            LabelKind::OkRecv => Some("ok?"),
            LabelKind::Ok => Some("ok"),
            LabelKind::Man => Some("man"),
            LabelKind::Trap => Some("trap"),
            LabelKind::Result | LabelKind::Plain => None,
        }
    }
}

/// A transition label: the silent step or a structured action.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Tau,
    Act {
        kind: LabelKind,
        name: String,
        instance: Option<String>,
    },
}

impl Label {
    pub fn act(kind: LabelKind, name: impl Into<String>, instance: Option<&str>) -> Self {
        Label::Act {
            kind,
            name: name.into(),
            instance: instance.map(str::to_owned),
        }
    }

    pub fn plain(name: impl Into<String>) -> Self {
        Label::act(LabelKind::Plain, name, None)
    }

    pub fn is_tau(&self) -> bool {
        matches!(self, Label::Tau)
    }

    pub fn kind(&self) -> Option<LabelKind> {
        match self {
            Label::Tau => None,
            Label::Act { kind, .. } => Some(*kind),
        }
    }

    pub fn instance(&self) -> Option<&str> {
        match self {
            Label::Tau => None,
            Label::Act { instance, .. } => instance.as_deref(),
        }
    }

    pub fn name(&self) -> Option<&str> {
        match self {
            Label::Tau => None,
            Label::Act { name, .. } => Some(name),
        }
    }

    /// Parses the rendering produced by [`fmt::Display`]. Bare tokens come
    /// back as `Plain` actions; `Result` labels therefore re-import as
    /// `Plain`, which preserves all counts and equivalences.
    pub fn parse(text: &str) -> Result<Label, String> {
        if text == "tau" {
            return Ok(Label::Tau);
        }
        let (body, instance) = match text.rsplit_once('@') {
            Some((b, i)) if !i.is_empty() && !b.is_empty() => (b, Some(i)),
            _ => (text, None),
        };
        let kinds = [
            ("at!(", LabelKind::AtSend),
            ("at?(", LabelKind::AtRecv),
            ("ok!(", LabelKind::OkSend),
            ("ok?(", LabelKind::OkRecv),
            ("ok(", LabelKind::Ok),
            ("man(", LabelKind::Man),
            ("trap(", LabelKind::Trap),
        ];
        for (prefix, kind) in kinds {
            if let Some(rest) = body.strip_prefix(prefix) {
                let name = rest
                    .strip_suffix(')')
                    .ok_or_else(|| format!("unterminated label payload in `{text}`"))?;
                if name.is_empty() {
                    return Err(format!("empty label payload in `{text}`"));
                }
                return Ok(Label::act(kind, name, instance));
            }
        }
        if body.contains('(') || body.contains(')') {
            return Err(format!("malformed label `{text}`"));
        }
        Ok(Label::act(LabelKind::Plain, body, instance))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Tau => write!(f, "tau"),
            Label::Act {
                kind,
                name,
                instance,
            } => {
                match kind.prefix() {
                    Some(p) => write!(f, "{p}({name})")?,
                    None => write!(f, "{name}")?,
                }
                if let Some(i) = instance {
                    write!(f, "@{i}")?;
                }
                Ok(())
            }
        }
    }
}

/// A pattern over labels; `Tau` is never matched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelPattern {
    /// Matches one exact label.
    Exact(Label),
    /// Matches every label of the given kind, any payload, any instance.
    Kind(LabelKind),
    /// Matches every label of the given kind owned by the given instance.
    KindOf(LabelKind, String),
}

impl LabelPattern {
    pub fn matches(&self, label: &Label) -> bool {
        match label {
            Label::Tau => false,
            Label::Act { kind, instance, .. } => match self {
                LabelPattern::Exact(l) => l == label,
                LabelPattern::Kind(k) => k == kind,
                LabelPattern::KindOf(k, i) => k == kind && instance.as_deref() == Some(i.as_str()),
            },
        }
    }
}

/// A set of label patterns, used both for encapsulation (blocking) and for
/// hiding.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelSet {
    patterns: Vec<LabelPattern>,
}

impl LabelSet {
    pub fn empty() -> Self {
        LabelSet::default()
    }

    pub fn new(patterns: Vec<LabelPattern>) -> Self {
        LabelSet { patterns }
    }

    /// Exact plain-action labels, a convenience for hiding detailed actions.
    pub fn plain_actions<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        LabelSet {
            patterns: names
                .into_iter()
                .map(|n| LabelPattern::Exact(Label::plain(n)))
                .collect(),
        }
    }

    pub fn exact_labels<I: IntoIterator<Item = Label>>(labels: I) -> Self {
        LabelSet {
            patterns: labels.into_iter().map(LabelPattern::Exact).collect(),
        }
    }

    pub fn kinds<I: IntoIterator<Item = LabelKind>>(kinds: I) -> Self {
        LabelSet {
            patterns: kinds.into_iter().map(LabelPattern::Kind).collect(),
        }
    }

    pub fn kinds_of<I: IntoIterator<Item = LabelKind>>(kinds: I, instance: &str) -> Self {
        LabelSet {
            patterns: kinds
                .into_iter()
                .map(|k| LabelPattern::KindOf(k, instance.to_owned()))
                .collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn push(&mut self, pattern: LabelPattern) {
        self.patterns.push(pattern);
    }

    pub fn matches(&self, label: &Label) -> bool {
        self.patterns.iter().any(|p| p.matches(label))
    }

    pub fn union(&self, other: &LabelSet) -> LabelSet {
        let mut patterns = self.patterns.clone();
        patterns.extend(other.patterns.iter().cloned());
        LabelSet { patterns }
    }
}
