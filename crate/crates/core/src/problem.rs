//! The self-contained problem file format and the formula grammar.
//!
//! A problem file declares one signature and any number of named sections:
//!
//! ```text
//! Ops f:1 g:1 h:1 a:0 b:0 c:0
//! Vars x y
//!
//! TRS R
//! a -> b
//! f(c) -> g(a)
//!
//! Automaton A
//! States q0 q1
//! Final q1
//! Transitions
//! a -> q0
//! f(q0) -> q1
//! q0 -> q1
//!
//! Set E
//! f(a)
//! ```
//!
//! In `Transitions`, a left-hand side naming a declared operator is a ground
//! transition and one naming a state is an ε-transition; ε lines may carry a
//! rule-tag suffix `[0,2]`. Formulas use atoms `{t1,t2}`, `@name` and `*`,
//! unary `!` `X` `F` `G`, and binary `&`, `|`, `->`, `U`, `R` with
//! precedence unary > `&` > `|` > `->` > `U`/`R` (binaries right-assoc).

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::automata::{StateId, TreeAutomaton};
use crate::rltl::formula::{Atom, Formula};
use crate::term::{Signature, Symbol, Term, Trs};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

fn err<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        col,
        msg: msg.into(),
    })
}

#[derive(Debug, Clone)]
pub struct ProblemFile {
    pub signature: Signature,
    pub vars: BTreeSet<String>,
    pub trss: BTreeMap<String, Trs>,
    pub automata: BTreeMap<String, TreeAutomaton>,
    pub sets: BTreeMap<String, BTreeSet<Term>>,
}

// ---------------------------------------------------------------------------
// Term parsing (shared by sections and formulas)
// ---------------------------------------------------------------------------

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col0: usize,
    sig: &'a Signature,
    vars: &'a BTreeSet<String>,
}

impl<'a> Cursor<'a> {
    fn new(s: &str, line: usize, col0: usize, sig: &'a Signature, vars: &'a BTreeSet<String>) -> Self {
        Cursor {
            chars: s.chars().collect(),
            pos: 0,
            line,
            col0,
            sig,
            vars,
        }
    }

    fn col(&self) -> usize {
        self.col0 + self.pos
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            err(self.line, self.col() + 1, format!("expected '{c}'"))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self
            .peek()
            .map(|c| c.is_alphanumeric() || c == '_')
            .unwrap_or(false)
        {
            self.pos += 1;
        }
        if start == self.pos {
            return err(self.line, self.col() + 1, "expected an identifier");
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        self.skip_ws();
        let col = self.col() + 1;
        let name = self.ident()?;
        self.skip_ws();
        if self.peek() == Some('(') {
            let sym = match self.sig.get(&name) {
                Some(s) => s.clone(),
                None => return err(self.line, col, format!("undeclared symbol '{name}'")),
            };
            self.eat('(')?;
            let mut args = Vec::new();
            self.skip_ws();
            if self.peek() != Some(')') {
                loop {
                    args.push(self.term()?);
                    self.skip_ws();
                    if self.peek() == Some(',') {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
            }
            self.eat(')')?;
            if args.len() != sym.arity {
                return err(
                    self.line,
                    col,
                    format!(
                        "symbol '{}' has arity {}, got {} arguments",
                        sym.name,
                        sym.arity,
                        args.len()
                    ),
                );
            }
            Ok(Term::app(sym, args))
        } else if let Some(sym) = self.sig.get(&name) {
            if sym.arity != 0 {
                return err(
                    self.line,
                    col,
                    format!("symbol '{name}' has arity {}, got 0 arguments", sym.arity),
                );
            }
            Ok(Term::constant(name))
        } else if self.vars.contains(&name) {
            Ok(Term::var(name))
        } else {
            err(self.line, col, format!("undeclared symbol '{name}'"))
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.chars.len()
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            err(self.line, self.col() + 1, "trailing input")
        }
    }
}

/// Parses one term over `sig`; variables must be listed in `vars`.
pub fn parse_term(
    text: &str,
    sig: &Signature,
    vars: &BTreeSet<String>,
) -> Result<Term, ParseError> {
    let mut c = Cursor::new(text, 1, 0, sig, vars);
    let t = c.term()?;
    c.expect_end()?;
    Ok(t)
}

// ---------------------------------------------------------------------------
// Problem files
// ---------------------------------------------------------------------------

enum Section {
    None,
    Trs(String, Vec<(Term, Term)>, usize),
    Automaton(String, TreeAutomaton, AutomatonStage),
    Set(String, BTreeSet<Term>),
}

#[derive(PartialEq)]
enum AutomatonStage {
    WantStates,
    WantFinal,
    WantTransitions,
    InTransitions,
}

pub fn parse_problem(text: &str) -> Result<ProblemFile, ParseError> {
    let mut lines = text.lines().enumerate().peekable();
    let no_vars = BTreeSet::new();

    // Ops line
    let (ops_line, ops_text) = loop {
        match lines.next() {
            Some((i, l)) if l.trim().is_empty() => {
                let _ = i;
                continue;
            }
            Some((i, l)) => break (i + 1, l),
            None => return err(1, 1, "missing Ops section"),
        }
    };
    let mut ops_words = ops_text.split_whitespace();
    if ops_words.next() != Some("Ops") {
        return err(ops_line, 1, "missing Ops section");
    }
    let mut symbols = Vec::new();
    for w in ops_words {
        let (name, arity) = match w.split_once(':') {
            Some((n, a)) => (n, a),
            None => return err(ops_line, 1, format!("expected name:arity, got '{w}'")),
        };
        let arity: usize = match arity.parse() {
            Ok(a) => a,
            Err(_) => return err(ops_line, 1, format!("bad arity in '{w}'")),
        };
        symbols.push(Symbol::new(name, arity));
    }
    let signature = match Signature::new(symbols) {
        Ok(s) => s,
        Err(e) => return err(ops_line, 1, e.to_string()),
    };

    let mut out = ProblemFile {
        signature: signature.clone(),
        vars: BTreeSet::new(),
        trss: BTreeMap::new(),
        automata: BTreeMap::new(),
        sets: BTreeMap::new(),
    };
    let mut section = Section::None;
    let mut used_names: BTreeSet<String> = BTreeSet::new();

    let close = |section: &mut Section, out: &mut ProblemFile| -> Result<(), ParseError> {
        match std::mem::replace(section, Section::None) {
            Section::None => Ok(()),
            Section::Trs(name, rules, header_line) => {
                match Trs::new(out.signature.clone(), rules) {
                    Ok(trs) => {
                        out.trss.insert(name, trs);
                        Ok(())
                    }
                    Err(e) => err(header_line, 1, e.to_string()),
                }
            }
            Section::Automaton(name, a, _) => {
                out.automata.insert(name, a);
                Ok(())
            }
            Section::Set(name, ts) => {
                out.sets.insert(name, ts);
                Ok(())
            }
        }
    };

    while let Some((i, raw)) = lines.next() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let head = words.next().unwrap();
        match head {
            "Vars" => {
                close(&mut section, &mut out)?;
                for v in words {
                    if signature.get(v).is_some() {
                        return err(lineno, 1, format!("variable '{v}' clashes with a symbol"));
                    }
                    out.vars.insert(v.to_string());
                }
            }
            "TRS" | "Automaton" | "Set" => {
                close(&mut section, &mut out)?;
                let name = match words.next() {
                    Some(n) if words.next().is_none() => n.to_string(),
                    _ => return err(lineno, 1, format!("expected '{head} <name>'")),
                };
                if !used_names.insert(name.clone()) {
                    return err(lineno, 1, format!("duplicate section name '{name}'"));
                }
                section = match head {
                    "TRS" => Section::Trs(name, Vec::new(), lineno),
                    "Automaton" => Section::Automaton(
                        name,
                        TreeAutomaton::new(signature.clone()),
                        AutomatonStage::WantStates,
                    ),
                    _ => Section::Set(name, BTreeSet::new()),
                };
            }
            _ => match &mut section {
                Section::None => {
                    return err(lineno, 1, format!("unexpected '{head}' outside any section"))
                }
                Section::Trs(_, rules, _) => {
                    let (lhs_text, rhs_text) = match line.split_once("->") {
                        Some(pair) => pair,
                        None => return err(lineno, 1, "expected 'lhs -> rhs'"),
                    };
                    let lcol = raw.len() - raw.trim_start().len();
                    let lhs = {
                        let mut c = Cursor::new(lhs_text, lineno, lcol, &signature, &out.vars);
                        let t = c.term()?;
                        c.expect_end()?;
                        t
                    };
                    let rcol = lcol + lhs_text.len() + 2;
                    let rhs = {
                        let mut c = Cursor::new(rhs_text, lineno, rcol, &signature, &out.vars);
                        let t = c.term()?;
                        c.expect_end()?;
                        t
                    };
                    rules.push((lhs, rhs));
                }
                Section::Automaton(_, a, stage) => {
                    parse_automaton_line(lineno, line, head, words, a, stage, &signature)?
                }
                Section::Set(_, ts) => {
                    let mut c = Cursor::new(line, lineno, 0, &signature, &no_vars);
                    let t = c.term()?;
                    c.expect_end()?;
                    ts.insert(t);
                }
            },
        }
    }
    close(&mut section, &mut out)?;
    Ok(out)
}

fn parse_automaton_line<'a>(
    lineno: usize,
    line: &str,
    head: &str,
    words: impl Iterator<Item = &'a str>,
    a: &mut TreeAutomaton,
    stage: &mut AutomatonStage,
    sig: &Signature,
) -> Result<(), ParseError> {
    match (head, &stage) {
        ("States", AutomatonStage::WantStates) => {
            for s in words {
                if sig.get(s).is_some() {
                    return err(lineno, 1, format!("state '{s}' clashes with a symbol"));
                }
                if a.state_by_name(s).is_some() {
                    return err(lineno, 1, format!("duplicate state '{s}'"));
                }
                a.add_state(s);
            }
            *stage = AutomatonStage::WantFinal;
            Ok(())
        }
        ("Final", AutomatonStage::WantFinal) => {
            for s in words {
                match a.state_by_name(s) {
                    Some(q) => a.set_final(q),
                    None => return err(lineno, 1, format!("undeclared state '{s}'")),
                }
            }
            *stage = AutomatonStage::WantTransitions;
            Ok(())
        }
        ("Transitions", AutomatonStage::WantTransitions) => {
            *stage = AutomatonStage::InTransitions;
            Ok(())
        }
        (_, AutomatonStage::InTransitions) => {
            let (lhs, rest) = match line.split_once("->") {
                Some(pair) => (pair.0.trim(), pair.1.trim()),
                None => return err(lineno, 1, "expected a transition 'lhs -> state'"),
            };
            // optional `[tags]` suffix on ε lines
            let (target_text, tags) = match rest.split_once('[') {
                Some((t, tail)) => {
                    let tail = tail.trim();
                    let inner = match tail.strip_suffix(']') {
                        Some(i) => i,
                        None => return err(lineno, 1, "unterminated tag list"),
                    };
                    let mut tags = BTreeSet::new();
                    for part in inner.split(',') {
                        let part = part.trim();
                        if part.is_empty() {
                            continue;
                        }
                        match part.parse::<usize>() {
                            Ok(n) => tags.insert(n),
                            Err(_) => return err(lineno, 1, format!("bad rule tag '{part}'")),
                        };
                    }
                    (t.trim(), Some(tags))
                }
                None => (rest, None),
            };
            let target = match a.state_by_name(target_text) {
                Some(q) => q,
                None => return err(lineno, 1, format!("undeclared state '{target_text}'")),
            };
            let (name, args_text) = match lhs.split_once('(') {
                Some((n, rest)) => match rest.strip_suffix(')') {
                    Some(inner) => (n.trim(), Some(inner)),
                    None => return err(lineno, 1, "expected ')'"),
                },
                None => (lhs, None),
            };
            if let Some(sym) = sig.get(name) {
                let mut args = Vec::new();
                if let Some(inner) = args_text {
                    for part in inner.split(',') {
                        let part = part.trim();
                        if part.is_empty() {
                            continue;
                        }
                        match a.state_by_name(part) {
                            Some(q) => args.push(q),
                            None => {
                                return err(lineno, 1, format!("undeclared state '{part}'"))
                            }
                        }
                    }
                }
                if args.len() != sym.arity {
                    return err(
                        lineno,
                        1,
                        format!(
                            "symbol '{}' has arity {}, got {} arguments",
                            sym.name,
                            sym.arity,
                            args.len()
                        ),
                    );
                }
                if tags.is_some() {
                    return err(lineno, 1, "tags are only allowed on epsilon transitions");
                }
                a.add_ground(sym.clone(), args, target);
            } else if let Some(source) = a.state_by_name(name) {
                if args_text.is_some() {
                    return err(lineno, 1, format!("'{name}' is a state, not a symbol"));
                }
                a.add_epsilon(source, target, tags.unwrap_or_default());
            } else {
                return err(lineno, 1, format!("undeclared symbol or state '{name}'"));
            }
            Ok(())
        }
        _ => err(
            lineno,
            1,
            "expected the automaton sections States, Final, Transitions in order",
        ),
    }
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

fn print_automaton(name: &str, a: &TreeAutomaton, out: &mut String) {
    out.push_str(&format!("Automaton {name}\n"));
    let states: Vec<StateId> = a.states().collect();
    let names: Vec<&str> = states.iter().map(|q| a.state_name(*q)).collect();
    out.push_str(&format!("States {}\n", names.join(" ")));
    let finals: Vec<&str> = a.finals().iter().map(|q| a.state_name(*q)).collect();
    out.push_str(&format!("Final {}\n", finals.join(" ")));
    out.push_str("Transitions\n");
    for t in a.delta() {
        let args: Vec<&str> = t.args.iter().map(|q| a.state_name(*q)).collect();
        if args.is_empty() {
            out.push_str(&format!("{} -> {}\n", t.head.name, a.state_name(t.target)));
        } else {
            out.push_str(&format!(
                "{}({}) -> {}\n",
                t.head.name,
                args.join(","),
                a.state_name(t.target)
            ));
        }
    }
    for e in a.epsilon() {
        if e.rule_tags.is_empty() {
            out.push_str(&format!(
                "{} -> {}\n",
                a.state_name(e.source),
                a.state_name(e.target)
            ));
        } else {
            let tags: Vec<String> = e.rule_tags.iter().map(usize::to_string).collect();
            out.push_str(&format!(
                "{} -> {} [{}]\n",
                a.state_name(e.source),
                a.state_name(e.target),
                tags.join(",")
            ));
        }
    }
}

/// Canonical rendering; `parse_problem` of the output reproduces the value
/// and printing is idempotent across the round trip.
pub fn print_problem(p: &ProblemFile) -> String {
    let mut out = String::new();
    let ops: Vec<String> = p
        .signature
        .symbols()
        .iter()
        .map(|s| format!("{}:{}", s.name, s.arity))
        .collect();
    out.push_str(&format!("Ops {}\n", ops.join(" ")));
    if !p.vars.is_empty() {
        let vars: Vec<&str> = p.vars.iter().map(String::as_str).collect();
        out.push_str(&format!("Vars {}\n", vars.join(" ")));
    }
    for (name, trs) in &p.trss {
        out.push_str(&format!("\nTRS {name}\n"));
        for rule in trs.rules() {
            out.push_str(&format!("{} -> {}\n", rule.lhs, rule.rhs));
        }
    }
    for (name, a) in &p.automata {
        out.push('\n');
        print_automaton(name, a, &mut out);
    }
    for (name, ts) in &p.sets {
        out.push_str(&format!("\nSet {name}\n"));
        for t in ts {
            out.push_str(&format!("{t}\n"));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Formulas
// ---------------------------------------------------------------------------

struct FormulaParser<'a> {
    cur: Cursor<'a>,
}

impl<'a> FormulaParser<'a> {
    fn peek_op(&mut self, op: &str) -> bool {
        self.cur.skip_ws();
        let chars: Vec<char> = op.chars().collect();
        if self.cur.chars[self.cur.pos..].starts_with(&chars[..]) {
            // word operators must not swallow identifier prefixes
            if op.chars().all(|c| c.is_alphanumeric()) {
                if let Some(c) = self.cur.chars.get(self.cur.pos + chars.len()) {
                    if c.is_alphanumeric() || *c == '_' {
                        return false;
                    }
                }
            }
            true
        } else {
            false
        }
    }

    fn eat_op(&mut self, op: &str) -> bool {
        if self.peek_op(op) {
            self.cur.pos += op.chars().count();
            true
        } else {
            false
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        // U / R, right-associative, lowest precedence
        let lhs = self.implies()?;
        if self.eat_op("U") {
            Ok(Formula::until(lhs, self.formula()?))
        } else if self.eat_op("R") {
            Ok(Formula::release(lhs, self.formula()?))
        } else {
            Ok(lhs)
        }
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.eat_op("->") {
            Ok(Formula::implies(lhs, self.implies()?))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.eat_op("|") {
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat_op("&") {
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.eat_op("!") {
            Ok(Formula::not(self.unary()?))
        } else if self.eat_op("X") {
            Ok(Formula::next(self.unary()?))
        } else if self.eat_op("F") {
            Ok(Formula::finally(self.unary()?))
        } else if self.eat_op("G") {
            Ok(Formula::globally(self.unary()?))
        } else {
            self.atom()
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        self.cur.skip_ws();
        match self.cur.peek() {
            Some('(') => {
                self.cur.eat('(')?;
                let f = self.formula()?;
                self.cur.eat(')')?;
                Ok(f)
            }
            Some('*') => {
                self.cur.pos += 1;
                Ok(Formula::Atom(Atom::Universal))
            }
            Some('@') => {
                self.cur.pos += 1;
                let name = self.cur.ident()?;
                Ok(Formula::Atom(Atom::AutomatonRef(name)))
            }
            Some('{') => {
                self.cur.eat('{')?;
                let mut ts = BTreeSet::new();
                self.cur.skip_ws();
                if self.cur.peek() != Some('}') {
                    loop {
                        ts.insert(self.cur.term()?);
                        self.cur.skip_ws();
                        if self.cur.peek() == Some(',') {
                            self.cur.pos += 1;
                        } else {
                            break;
                        }
                    }
                }
                self.cur.eat('}')?;
                Ok(Formula::Atom(Atom::TermSet(ts)))
            }
            _ => err(
                self.cur.line,
                self.cur.col() + 1,
                "expected a formula atom ('{...}', '@name', '*' or '(')",
            ),
        }
    }
}

/// Parses one formula over `sig`; atom terms must be ground.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let no_vars = BTreeSet::new();
    let mut p = FormulaParser {
        cur: Cursor::new(text, 1, 0, sig, &no_vars),
    };
    let f = p.formula()?;
    p.cur.expect_end()?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Term;

    const EX2: &str = "Ops f:1 g:1 h:1 a:0 b:0 c:0\nVars x\n\nTRS R\na -> b\nb -> c\nf(c) -> g(a)\ng(c) -> h(a)\nh(c) -> f(a)\n\nSet E\nf(a)\n";

    #[test]
    fn ex2_file_round_trips_byte_identically() {
        let p = parse_problem(EX2).unwrap();
        assert_eq!(print_problem(&p), EX2);
        assert_eq!(p.trss["R"].rules().len(), 5);
        assert_eq!(p.sets["E"].len(), 1);
    }

    #[test]
    fn automaton_section_round_trips() {
        let text = "Ops f:1 a:0\n\nAutomaton A\nStates q0 q1\nFinal q1\nTransitions\na -> q0\nf(q0) -> q1\nq0 -> q1 [0,2]\n";
        let p = parse_problem(text).unwrap();
        assert_eq!(print_problem(&p), text);
        let a = &p.automata["A"];
        assert_eq!(a.delta_len(), 2);
        assert_eq!(a.epsilon_len(), 1);
        let q0 = a.state_by_name("q0").unwrap();
        let q1 = a.state_by_name("q1").unwrap();
        assert_eq!(
            a.epsilon_tags(q0, q1),
            Some(&[0usize, 2].into_iter().collect())
        );
        assert!(a.accepts(&Term::constant("a"), None).unwrap());
    }

    #[test]
    fn arity_mismatch_is_reported_with_position() {
        let text = "Ops f:1 a:0 b:0\n\nSet E\nf(a,b)\n";
        let e = parse_problem(text).unwrap_err();
        assert_eq!(e.line, 4);
        assert!(e.msg.contains("arity"));
    }

    #[test]
    fn empty_file_is_missing_ops() {
        let e = parse_problem("").unwrap_err();
        assert_eq!(e.msg, "missing Ops section");
        let e = parse_problem("\n\nTRS R\n").unwrap_err();
        assert_eq!(e.msg, "missing Ops section");
    }

    #[test]
    fn undeclared_symbol_and_state_errors() {
        let text = "Ops a:0\n\nSet E\nz\n";
        assert!(parse_problem(text).unwrap_err().msg.contains("undeclared"));
        let text = "Ops a:0\n\nAutomaton A\nStates q0\nFinal q0\nTransitions\na -> q9\n";
        assert!(parse_problem(text)
            .unwrap_err()
            .msg
            .contains("undeclared state"));
    }

    #[test]
    fn formula_precedence() {
        let sig = Signature::new(vec![Symbol::new("a", 0), Symbol::new("b", 0)]).unwrap();
        let a = || Formula::Atom(Atom::TermSet([Term::constant("a")].into_iter().collect()));
        let b = || Formula::Atom(Atom::TermSet([Term::constant("b")].into_iter().collect()));

        // unary binds tighter than &, & tighter than |, | tighter than ->
        let f = parse_formula("!{a} & {b} | {a} -> {b}", &sig).unwrap();
        let expected = Formula::implies(
            Formula::or(Formula::and(Formula::not(a()), b()), a()),
            b(),
        );
        assert_eq!(f, expected);

        // -> binds tighter than U; both right-associative
        let f = parse_formula("{a} -> {b} U {a} U {b}", &sig).unwrap();
        let expected = Formula::until(
            Formula::implies(a(), b()),
            Formula::until(a(), b()),
        );
        assert_eq!(f, expected);

        let f = parse_formula("G ({a} -> X {b})", &sig).unwrap();
        let expected = Formula::globally(Formula::implies(a(), Formula::next(b())));
        assert_eq!(f, expected);
    }

    #[test]
    fn formula_atoms() {
        let sig = Signature::new(vec![Symbol::new("a", 0), Symbol::new("b", 0)]).unwrap();
        assert_eq!(
            parse_formula("*", &sig).unwrap(),
            Formula::Atom(Atom::Universal)
        );
        assert_eq!(
            parse_formula("@bad", &sig).unwrap(),
            Formula::Atom(Atom::AutomatonRef("bad".into()))
        );
        assert_eq!(
            parse_formula("{a, b}", &sig).unwrap(),
            Formula::Atom(Atom::TermSet(
                [Term::constant("a"), Term::constant("b")].into_iter().collect()
            ))
        );
        // R as an operator does not swallow identifiers starting with R
        let e = parse_formula("{a} R", &sig).unwrap_err();
        assert!(e.msg.contains("expected a formula atom"));
    }

    #[test]
    fn formula_errors_carry_positions() {
        let sig = Signature::new(vec![Symbol::new("a", 0)]).unwrap();
        let e = parse_formula("{a} &", &sig).unwrap_err();
        assert_eq!((e.line, e.col), (1, 6));
        let e = parse_formula("{z}", &sig).unwrap_err();
        assert!(e.msg.contains("undeclared symbol 'z'"));
    }

    #[test]
    fn duplicate_section_names_rejected() {
        let text = "Ops a:0\n\nSet E\na\n\nSet E\na\n";
        assert!(parse_problem(text).unwrap_err().msg.contains("duplicate"));
    }

    #[test]
    fn parse_print_parse_is_stable() {
        let p = parse_problem(EX2).unwrap();
        let printed = print_problem(&p);
        let p2 = parse_problem(&printed).unwrap();
        assert_eq!(print_problem(&p2), printed);
    }
}
