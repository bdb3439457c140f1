//! Litmus programs and their text format.
//!
//! ```text
//! test SB;
//! init { x=0; y=0; }
//! P0: { x <- 1; r0 <- y; }
//! P1: { y <- 1; r1 <- x; }
//! exists (P0:r0=0 /\ P1:r1=0);
//! ```
//!
//! `<addr> <- <int>` is a write, `<reg> <- <addr>` a read. Registers are
//! identifiers of the form `r<digit>...`; every other identifier is an
//! address. The `init` block and the `exists` clause are optional; omitted
//! addresses start at 0. `//` starts a comment.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Instruction {
    Write { addr: String, value: i64 },
    Read { reg: String, addr: String },
}

impl Instruction {
    pub fn addr(&self) -> &str {
        match self {
            Instruction::Write { addr, .. } | Instruction::Read { addr, .. } => addr,
        }
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::Write { addr, value } => write!(f, "{addr} <- {value}"),
            Instruction::Read { reg, addr } => write!(f, "{reg} <- {addr}"),
        }
    }
}

/// A register of one process, printed `P<n>:<reg>`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RegisterRef {
    pub proc: usize,
    pub reg: String,
}

impl fmt::Display for RegisterRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}:{}", self.proc, self.reg)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Register { reg: RegisterRef, value: i64 },
    Memory { addr: String, value: i64 },
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Register { reg, value } => write!(f, "{reg}={value}"),
            Atom::Memory { addr, value } => write!(f, "{addr}={value}"),
        }
    }
}

/// Final-state predicate over registers and memory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Condition {
    Atom(Atom),
    And(Vec<Condition>),
    Or(Vec<Condition>),
}

impl Condition {
    pub fn eval(&self, registers: &BTreeMap<RegisterRef, i64>, memory: &BTreeMap<String, i64>) -> bool {
        match self {
            Condition::Atom(Atom::Register { reg, value }) => registers.get(reg) == Some(value),
            Condition::Atom(Atom::Memory { addr, value }) => memory.get(addr) == Some(value),
            Condition::And(cs) => cs.iter().all(|c| c.eval(registers, memory)),
            Condition::Or(cs) => cs.iter().any(|c| c.eval(registers, memory)),
        }
    }

    pub fn atoms(&self) -> Vec<&Atom> {
        match self {
            Condition::Atom(a) => vec![a],
            Condition::And(cs) | Condition::Or(cs) => cs.iter().flat_map(Condition::atoms).collect(),
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, cs: &[Condition], sep: &str| -> fmt::Result {
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    write!(f, " {sep} ")?;
                }
                match c {
                    Condition::Atom(a) => write!(f, "{a}")?,
                    _ => write!(f, "({c})")?,
                }
            }
            Ok(())
        };
        match self {
            Condition::Atom(a) => write!(f, "{a}"),
            Condition::And(cs) => join(f, cs, "/\\"),
            Condition::Or(cs) => join(f, cs, "\\/"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LitmusTest {
    pub name: String,
    /// Explicit initial values; any other address starts at 0.
    pub initial: BTreeMap<String, i64>,
    pub processes: Vec<Vec<Instruction>>,
    pub condition: Option<Condition>,
}

impl LitmusTest {
    pub fn initial_value(&self, addr: &str) -> i64 {
        self.initial.get(addr).copied().unwrap_or(0)
    }

    /// Every address mentioned anywhere in the test, sorted.
    pub fn addresses(&self) -> Vec<String> {
        let mut set: BTreeSet<String> = self.initial.keys().cloned().collect();
        for p in &self.processes {
            for i in p {
                set.insert(i.addr().to_string());
            }
        }
        if let Some(c) = &self.condition {
            for a in c.atoms() {
                if let Atom::Memory { addr, .. } = a {
                    set.insert(addr.clone());
                }
            }
        }
        set.into_iter().collect()
    }

    pub fn event_count(&self) -> usize {
        self.processes.iter().map(Vec::len).sum()
    }
}

impl fmt::Display for LitmusTest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "test {};", self.name)?;
        if !self.initial.is_empty() {
            write!(f, "init {{")?;
            for (a, v) in &self.initial {
                write!(f, " {a}={v};")?;
            }
            writeln!(f, " }}")?;
        }
        for (i, p) in self.processes.iter().enumerate() {
            write!(f, "P{i}: {{")?;
            for ins in p {
                write!(f, " {ins};")?;
            }
            writeln!(f, " }}")?;
        }
        if let Some(c) = &self.condition {
            writeln!(f, "exists ({c});")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

const SYMBOLS: [&str; 10] = ["<-", "/\\", "\\/", "{", "}", ";", ":", "=", "(", ")"];

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let (line, column) = (lineno + 1, i + 1);
            let err = |message: String| ParseError { line, column, message };
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c == '/' && chars.get(i + 1) == Some(&'/') {
                break;
            }
            if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || matches!(chars[i], '_' | '.' | '-')) {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                out.push(Spanned {
                    tok: Tok::Ident(word),
                    line,
                    column,
                });
                continue;
            }
            if c.is_ascii_digit() || (c == '-' && chars.get(i + 1).is_some_and(char::is_ascii_digit)) {
                let start = i;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                let n = digits
                    .parse()
                    .map_err(|_| err(format!("integer `{digits}` out of range")))?;
                out.push(Spanned {
                    tok: Tok::Int(n),
                    line,
                    column,
                });
                continue;
            }
            let rest: String = chars[i..].iter().take(2).collect();
            match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
                Some(s) => {
                    out.push(Spanned {
                        tok: Tok::Sym(s),
                        line,
                        column,
                    });
                    i += s.chars().count();
                }
                None => return Err(err(format!("unexpected character `{c}`"))),
            }
        }
    }
    let line = text.lines().count().max(1);
    let column = text.lines().last().map_or(1, |l| l.chars().count() + 1);
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

pub fn is_register(name: &str) -> bool {
    let mut chars = name.chars();
    chars.next() == Some('r') && chars.next().is_some_and(|c| c.is_ascii_digit())
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(t: &Spanned, message: impl Into<String>) -> ParseError {
        ParseError {
            line: t.line,
            column: t.column,
            message: message.into(),
        }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        let t = self.peek();
        Self::error_at(t, format!("expected {expected}, found {}", t.tok))
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek().tok, Tok::Sym(s) if s == sym) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> Result<(), ParseError> {
        if self.eat(sym) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{sym}`")))
        }
    }

    fn keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn ident(&mut self, what: &str) -> Result<(String, Spanned), ParseError> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                Ok((s, self.bump()))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        match self.peek().tok {
            Tok::Int(n) => {
                self.bump();
                Ok(n)
            }
            _ => Err(self.unexpected("an integer")),
        }
    }

    fn test(&mut self) -> Result<LitmusTest, ParseError> {
        if !self.keyword("test") {
            return Err(self.unexpected("`test <name>;`"));
        }
        self.bump();
        let (name, _) = self.ident("a test name")?;
        self.expect(";")?;

        let mut initial = BTreeMap::new();
        if self.keyword("init") {
            self.bump();
            self.expect("{")?;
            while !self.eat("}") {
                let (addr, at) = self.ident("an address")?;
                if is_register(&addr) {
                    return Err(Self::error_at(&at, format!("`{addr}` is a register, not an address")));
                }
                self.expect("=")?;
                let v = self.int()?;
                self.expect(";")?;
                if initial.insert(addr.clone(), v).is_some() {
                    return Err(Self::error_at(&at, format!("duplicate initial value for `{addr}`")));
                }
            }
        }

        let mut processes = Vec::new();
        while let Tok::Ident(label) = &self.peek().tok {
            if label == "exists" {
                break;
            }
            let at = self.peek().clone();
            let expected = format!("P{}", processes.len());
            if *label != expected {
                return Err(Self::error_at(
                    &at,
                    format!("expected process `{expected}`, found `{label}`"),
                ));
            }
            self.bump();
            self.expect(":")?;
            processes.push(self.process()?);
        }
        if processes.is_empty() {
            return Err(self.unexpected("a process block `P0: { ... }`"));
        }

        let mut condition = None;
        if self.keyword("exists") {
            self.bump();
            let c = self.condition(&processes)?;
            self.expect(";")?;
            condition = Some(c);
        }
        if self.peek().tok != Tok::Eof {
            return Err(self.unexpected("end of input"));
        }
        Ok(LitmusTest {
            name,
            initial,
            processes,
            condition,
        })
    }

    fn process(&mut self) -> Result<Vec<Instruction>, ParseError> {
        self.expect("{")?;
        let mut body = Vec::new();
        let mut registers = BTreeSet::new();
        while !self.eat("}") {
            let (lhs, at) = self.ident("an instruction")?;
            self.expect("<-")?;
            if is_register(&lhs) {
                let (addr, addr_at) = self.ident("an address")?;
                if is_register(&addr) {
                    return Err(Self::error_at(
                        &addr_at,
                        format!("`{addr}` is a register, not an address"),
                    ));
                }
                if !registers.insert(lhs.clone()) {
                    return Err(Self::error_at(&at, format!("duplicate register `{lhs}`")));
                }
                body.push(Instruction::Read { reg: lhs, addr });
            } else {
                let value = self.int()?;
                body.push(Instruction::Write { addr: lhs, value });
            }
            self.expect(";")?;
        }
        Ok(body)
    }

    fn condition(&mut self, procs: &[Vec<Instruction>]) -> Result<Condition, ParseError> {
        let mut parts = vec![self.conjunction(procs)?];
        while self.eat("\\/") {
            parts.push(self.conjunction(procs)?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Condition::Or(parts)
        })
    }

    fn conjunction(&mut self, procs: &[Vec<Instruction>]) -> Result<Condition, ParseError> {
        let mut parts = vec![self.primary(procs)?];
        while self.eat("/\\") {
            parts.push(self.primary(procs)?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Condition::And(parts)
        })
    }

    fn primary(&mut self, procs: &[Vec<Instruction>]) -> Result<Condition, ParseError> {
        if self.eat("(") {
            let c = self.condition(procs)?;
            self.expect(")")?;
            return Ok(c);
        }
        let (name, at) = self.ident("a condition atom")?;
        if self.eat(":") {
            let proc = name
                .strip_prefix('P')
                .and_then(|n| n.parse::<usize>().ok())
                .ok_or_else(|| Self::error_at(&at, format!("expected a process name, found `{name}`")))?;
            let Some(body) = procs.get(proc) else {
                return Err(Self::error_at(&at, format!("unknown process `{name}`")));
            };
            let (reg, reg_at) = self.ident("a register")?;
            let defined = body
                .iter()
                .any(|i| matches!(i, Instruction::Read { reg: r, .. } if *r == reg));
            if !defined {
                return Err(Self::error_at(
                    &reg_at,
                    format!("`{reg}` is not a register of `{name}`"),
                ));
            }
            self.expect("=")?;
            let value = self.int()?;
            return Ok(Condition::Atom(Atom::Register {
                reg: RegisterRef { proc, reg },
                value,
            }));
        }
        if is_register(&name) {
            return Err(Self::error_at(
                &at,
                format!("register `{name}` needs a process prefix like `P0:{name}`"),
            ));
        }
        self.expect("=")?;
        let value = self.int()?;
        Ok(Condition::Atom(Atom::Memory { addr: name, value }))
    }
}

pub fn parse_litmus(text: &str) -> Result<LitmusTest, ParseError> {
    let toks = lex(text)?;
    Parser { toks, pos: 0 }.test()
}

/// Parses a bare condition such as `P0:r0=0 /\ x=1` against `test`'s
/// processes.
pub fn parse_condition(text: &str, test: &LitmusTest) -> Result<Condition, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let c = p.condition(&test.processes)?;
    if p.peek().tok != Tok::Eof {
        return Err(p.unexpected("end of condition"));
    }
    Ok(c)
}
