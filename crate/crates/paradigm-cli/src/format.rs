//! The textual model format.
//!
//! ```text
//! std Client {
//!   initial Out;
//!   states Out, Waiting, Busy, AtDoor;
//!   trans Out -enter-> Waiting, Waiting -explain-> Busy;
//! }
//! partition CS of Client {
//!   phase Without {
//!     states Out, Waiting, AtDoor;
//!     trans Out -enter-> Waiting;
//!     traps { triv = { Out, Waiting, AtDoor }; }
//!   }
//! }
//! instance Client1 = Client;
//! conductor Server = Server;
//! role Client1(CS) { initial Without; trans Without -triv-> Interrupt; }
//! rule Server: Idle -check1-> NDChecking1 * Client1(CS): Without -triv-> Interrupt;
//! ```
//!
//! `#` starts a comment running to the end of the line. Replication is the
//! generator's job; the format itself is flat and unparameterized.

use std::fmt;

use paradigm::model::*;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Semi,
    Equals,
    Colon,
    Star,
    Minus,
    Arrow,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(s) => write!(f, "`{s}`"),
            Token::LBrace => write!(f, "`{{`"),
            Token::RBrace => write!(f, "`}}`"),
            Token::LParen => write!(f, "`(`"),
            Token::RParen => write!(f, "`)`"),
            Token::Comma => write!(f, "`,`"),
            Token::Semi => write!(f, "`;`"),
            Token::Equals => write!(f, "`=`"),
            Token::Colon => write!(f, "`:`"),
            Token::Star => write!(f, "`*`"),
            Token::Minus => write!(f, "`-`"),
            Token::Arrow => write!(f, "`->`"),
        }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '+'
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn tokens(mut self) -> Result<Vec<(Token, usize, usize)>, ParseError> {
        let mut out = Vec::new();
        loop {
            while let Some(&c) = self.chars.peek() {
                if c == '#' {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                } else if c.is_whitespace() {
                    self.bump();
                } else {
                    break;
                }
            }
            let (line, col) = (self.line, self.col);
            let Some(c) = self.bump() else {
                return Ok(out);
            };
            let token = match c {
                '{' => Token::LBrace,
                '}' => Token::RBrace,
                '(' => Token::LParen,
                ')' => Token::RParen,
                ',' => Token::Comma,
                ';' => Token::Semi,
                '=' => Token::Equals,
                ':' => Token::Colon,
                '*' => Token::Star,
                '-' => {
                    if self.chars.peek() == Some(&'>') {
                        self.bump();
                        Token::Arrow
                    } else {
                        Token::Minus
                    }
                }
                c if is_ident_char(c) => {
                    let mut ident = String::from(c);
                    while let Some(&c) = self.chars.peek() {
                        if is_ident_char(c) {
                            ident.push(c);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    Token::Ident(ident)
                }
                other => {
                    return Err(ParseError {
                        line,
                        col,
                        message: format!("unexpected character `{other}`"),
                    });
                }
            };
            out.push((token, line, col));
        }
    }
}

struct Parser {
    tokens: Vec<(Token, usize, usize)>,
    pos: usize,
}

impl Parser {
    fn error_here(&self, message: String) -> ParseError {
        let (line, col) = self
            .tokens
            .get(self.pos)
            .map(|&(_, l, c)| (l, c))
            .or_else(|| self.tokens.last().map(|&(_, l, c)| (l, c + 1)))
            .unwrap_or((1, 1));
        ParseError { line, col, message }
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _, _)| t)
    }

    fn next(&mut self, want: &str) -> Result<Token, ParseError> {
        match self.tokens.get(self.pos) {
            Some((t, _, _)) => {
                self.pos += 1;
                Ok(t.clone())
            }
            None => Err(self.error_here(format!("expected {want}, found end of input"))),
        }
    }

    fn expect(&mut self, token: Token) -> Result<(), ParseError> {
        let found = self.next(&token.to_string())?;
        if found == token {
            Ok(())
        } else {
            self.pos -= 1;
            Err(self.error_here(format!("expected {token}, found {found}")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.next(what)? {
            Token::Ident(s) => Ok(s),
            other => {
                self.pos -= 1;
                Err(self.error_here(format!("expected {what}, found {other}")))
            }
        }
    }

    fn keyword(&mut self, word: &str) -> Result<(), ParseError> {
        let found = self.ident(&format!("`{word}`"))?;
        if found == word {
            Ok(())
        } else {
            self.pos -= 1;
            Err(self.error_here(format!("expected `{word}`, found `{found}`")))
        }
    }

    fn at_keyword(&self, word: &str) -> bool {
        matches!(self.peek(), Some(Token::Ident(s)) if s == word)
    }

    fn ident_list(&mut self, what: &str) -> Result<Vec<String>, ParseError> {
        let mut names = vec![self.ident(what)?];
        while self.peek() == Some(&Token::Comma) {
            self.pos += 1;
            names.push(self.ident(what)?);
        }
        Ok(names)
    }

    /// `A -label-> B`
    fn transition(&mut self) -> Result<(String, String, String), ParseError> {
        let source = self.ident("a source state")?;
        self.expect(Token::Minus)?;
        let action = self.ident("a label")?;
        self.expect(Token::Arrow)?;
        let target = self.ident("a target state")?;
        Ok((source, action, target))
    }

    fn transition_list(&mut self) -> Result<Vec<(String, String, String)>, ParseError> {
        let mut list = vec![self.transition()?];
        while self.peek() == Some(&Token::Comma) {
            self.pos += 1;
            list.push(self.transition()?);
        }
        Ok(list)
    }

    fn std(&mut self) -> Result<Std, ParseError> {
        let name = self.ident("an std name")?;
        self.expect(Token::LBrace)?;
        self.keyword("initial")?;
        let initial = self.ident("the initial state")?;
        self.expect(Token::Semi)?;
        self.keyword("states")?;
        let states = self.ident_list("a state")?;
        self.expect(Token::Semi)?;
        let mut transitions = Vec::new();
        if self.at_keyword("trans") {
            self.pos += 1;
            transitions = self.transition_list()?;
            self.expect(Token::Semi)?;
        }
        self.expect(Token::RBrace)?;
        Ok(Std::new(
            name,
            states,
            transitions
                .into_iter()
                .map(|(s, a, t)| StdTransition::new(s, a, t))
                .collect(),
            initial,
        ))
    }

    fn phase_entry(&mut self) -> Result<PartitionEntry, ParseError> {
        self.keyword("phase")?;
        let name = self.ident("a phase name")?;
        self.expect(Token::LBrace)?;
        self.keyword("states")?;
        let states = self.ident_list("a state")?;
        self.expect(Token::Semi)?;
        let mut transitions = Vec::new();
        if self.at_keyword("trans") {
            self.pos += 1;
            transitions = self.transition_list()?;
            self.expect(Token::Semi)?;
        }
        let mut traps = Vec::new();
        if self.at_keyword("traps") {
            self.pos += 1;
            self.expect(Token::LBrace)?;
            while self.peek() != Some(&Token::RBrace) {
                let trap_name = self.ident("a trap name")?;
                self.expect(Token::Equals)?;
                self.expect(Token::LBrace)?;
                let members = self.ident_list("a trap state")?;
                self.expect(Token::RBrace)?;
                self.expect(Token::Semi)?;
                traps.push(Trap {
                    name: trap_name,
                    states: members,
                });
            }
            self.expect(Token::RBrace)?;
        }
        self.expect(Token::RBrace)?;
        Ok(PartitionEntry {
            phase: Phase {
                name,
                states,
                transitions: transitions
                    .into_iter()
                    .map(|(s, a, t)| StdTransition::new(s, a, t))
                    .collect(),
            },
            traps,
        })
    }

    fn partition(&mut self) -> Result<Partition, ParseError> {
        let name = self.ident("a partition name")?;
        self.keyword("of")?;
        let owner = self.ident("the owner std")?;
        self.expect(Token::LBrace)?;
        let mut entries = Vec::new();
        while self.peek() != Some(&Token::RBrace) {
            entries.push(self.phase_entry()?);
        }
        self.expect(Token::RBrace)?;
        Ok(Partition {
            name,
            owner,
            entries,
        })
    }

    fn role(&mut self) -> Result<(String, Role), ParseError> {
        let instance = self.ident("an instance name")?;
        self.expect(Token::LParen)?;
        let partition = self.ident("a partition name")?;
        self.expect(Token::RParen)?;
        self.expect(Token::LBrace)?;
        self.keyword("initial")?;
        let initial_phase = self.ident("the initial phase")?;
        self.expect(Token::Semi)?;
        let mut transfers = Vec::new();
        if self.at_keyword("trans") {
            self.pos += 1;
            transfers = self
                .transition_list()?
                .into_iter()
                .map(|(s, a, t)| PhaseTransfer::new(s, a, t))
                .collect();
            self.expect(Token::Semi)?;
        }
        self.expect(Token::RBrace)?;
        Ok((
            instance,
            Role {
                partition,
                initial_phase,
                transfers,
            },
        ))
    }

    fn rule(&mut self) -> Result<ConsistencyRule, ParseError> {
        let conductor = self.ident("a conductor name")?;
        self.expect(Token::Colon)?;
        let (s, a, t) = self.transition()?;
        self.expect(Token::Star)?;
        let mut participants = Vec::new();
        loop {
            let instance = self.ident("a participant instance")?;
            self.expect(Token::LParen)?;
            let partition = self.ident("a partition name")?;
            self.expect(Token::RParen)?;
            self.expect(Token::Colon)?;
            let (from, trap, to) = self.transition()?;
            participants.push(Participant {
                instance,
                partition,
                transfer: PhaseTransfer::new(from, trap, to),
            });
            if self.peek() == Some(&Token::Comma) {
                self.pos += 1;
            } else {
                break;
            }
        }
        self.expect(Token::Semi)?;
        Ok(ConsistencyRule {
            conductor,
            transition: StdTransition::new(s, a, t),
            participants,
        })
    }

    fn model(&mut self) -> Result<ParadigmModel, ParseError> {
        let mut model = ParadigmModel::default();
        let mut roles: Vec<(String, Role)> = Vec::new();
        while self.peek().is_some() {
            let section = self.ident("a section keyword")?;
            match section.as_str() {
                "std" => model.stds.push(self.std()?),
                "partition" => model.partitions.push(self.partition()?),
                "instance" | "conductor" => {
                    let name = self.ident("an instance name")?;
                    self.expect(Token::Equals)?;
                    let std = self.ident("an std name")?;
                    self.expect(Token::Semi)?;
                    if section == "conductor" {
                        model.conductors.push(name.clone());
                    }
                    model.instances.push(ComponentInstance {
                        name,
                        std,
                        roles: Vec::new(),
                    });
                }
                "role" => roles.push(self.role()?),
                "rule" => model.rules.push(self.rule()?),
                other => {
                    self.pos -= 1;
                    return Err(self.error_here(format!(
                        "expected `std`, `partition`, `instance`, `conductor`, `role` or `rule`, found `{other}`"
                    )));
                }
            }
        }
        for (instance_name, role) in roles {
            match model.instances.iter_mut().find(|i| i.name == instance_name) {
                Some(instance) => instance.roles.push(role),
                None => {
                    return Err(ParseError {
                        line: 0,
                        col: 0,
                        message: format!("role declared for undeclared instance `{instance_name}`"),
                    });
                }
            }
        }
        Ok(model)
    }
}

pub fn parse_model(text: &str) -> Result<ParadigmModel, ParseError> {
    let tokens = Lexer::new(text).tokens()?;
    let mut parser = Parser { tokens, pos: 0 };
    parser.model()
}

fn write_transitions(out: &mut String, indent: &str, transitions: &[StdTransition]) {
    if transitions.is_empty() {
        return;
    }
    out.push_str(indent);
    out.push_str("trans\n");
    for (i, t) in transitions.iter().enumerate() {
        let sep = if i + 1 == transitions.len() { ";" } else { "," };
        out.push_str(&format!(
            "{indent}  {} -{}-> {}{sep}\n",
            t.source, t.action, t.target
        ));
    }
}

pub fn print_model(model: &ParadigmModel) -> String {
    let mut out = String::new();
    for std in &model.stds {
        out.push_str(&format!("std {} {{\n", std.name));
        out.push_str(&format!("  initial {};\n", std.initial));
        out.push_str(&format!("  states {};\n", std.states.join(", ")));
        write_transitions(&mut out, "  ", &std.transitions);
        out.push_str("}\n\n");
    }
    for partition in &model.partitions {
        out.push_str(&format!(
            "partition {} of {} {{\n",
            partition.name, partition.owner
        ));
        for entry in &partition.entries {
            out.push_str(&format!("  phase {} {{\n", entry.phase.name));
            out.push_str(&format!("    states {};\n", entry.phase.states.join(", ")));
            write_transitions(&mut out, "    ", &entry.phase.transitions);
            if !entry.traps.is_empty() {
                out.push_str("    traps {\n");
                for trap in &entry.traps {
                    out.push_str(&format!(
                        "      {} = {{ {} }};\n",
                        trap.name,
                        trap.states.join(", ")
                    ));
                }
                out.push_str("    }\n");
            }
            out.push_str("  }\n");
        }
        out.push_str("}\n\n");
    }
    for instance in &model.instances {
        let keyword = if model.is_conductor(&instance.name) {
            "conductor"
        } else {
            "instance"
        };
        out.push_str(&format!(
            "{keyword} {} = {};\n",
            instance.name, instance.std
        ));
    }
    out.push('\n');
    for instance in &model.instances {
        for role in &instance.roles {
            out.push_str(&format!("role {}({}) {{\n", instance.name, role.partition));
            out.push_str(&format!("  initial {};\n", role.initial_phase));
            let transfers: Vec<StdTransition> = role
                .transfers
                .iter()
                .map(|t| StdTransition::new(t.from.clone(), t.trap.clone(), t.to.clone()))
                .collect();
            write_transitions(&mut out, "  ", &transfers);
            out.push_str("}\n\n");
        }
    }
    for rule in &model.rules {
        let t = &rule.transition;
        out.push_str(&format!(
            "rule {}: {} -{}-> {} *",
            rule.conductor, t.source, t.action, t.target
        ));
        for (i, p) in rule.participants.iter().enumerate() {
            let sep = if i + 1 == rule.participants.len() {
                ";"
            } else {
                ","
            };
            out.push_str(&format!(
                " {}({}): {} -{}-> {}{sep}",
                p.instance, p.partition, p.transfer.from, p.transfer.trap, p.transfer.to
            ));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use paradigm::generate::{client_server, Variant};
    use paradigm::model::validate_model;

    #[test]
    fn generated_models_round_trip() {
        for variant in [Variant::Basic, Variant::Return, Variant::Simple] {
            for n in 1..=3 {
                let model = client_server(variant, n);
                let text = print_model(&model);
                let parsed = parse_model(&text)
                    .unwrap_or_else(|e| panic!("{} n={n}: {e}\n{text}", variant.name()));
                assert_eq!(parsed, model, "{} n={n}", variant.name());
                // And a second print is stable.
                assert_eq!(print_model(&parsed), text);
            }
        }
    }

    #[test]
    fn parse_reports_line_and_column() {
        let err = parse_model("std X {\n  initial A\n  states A;\n}").unwrap_err();
        assert_eq!(err.line, 3);
        assert!(err.message.contains("`;`"), "{err}");
    }

    #[test]
    fn unknown_section_is_rejected() {
        let err = parse_model("module X {}").unwrap_err();
        assert_eq!((err.line, err.col), (1, 1));
    }

    #[test]
    fn role_for_unknown_instance_is_rejected() {
        let text = "std C { initial A; states A; }\nrole Ghost(P) { initial A; }";
        let err = parse_model(text).unwrap_err();
        assert!(err.message.contains("Ghost"));
    }

    #[test]
    fn parsed_generated_model_validates() {
        let text = print_model(&client_server(Variant::Basic, 2));
        let model = parse_model(&text).unwrap();
        assert!(validate_model(&model).is_valid());
    }
}
