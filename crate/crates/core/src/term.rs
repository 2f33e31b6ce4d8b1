//! Ranked signatures, terms, positions, substitutions and rewriting.
//!
//! Besides the basic syntactic operations this module provides the two
//! brute-force explorations used to cross-check the automata constructions:
//! [`reachable_set`] computes the set of descendants of a finite term set by
//! breadth-first closure, and [`abstract_successors`] computes the successors
//! of a term under top-position rewriting preceded by arbitrary rewriting
//! strictly below the root.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::automata::StateId;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TermError {
    #[error("invalid position {position} for term {term}")]
    InvalidPosition { term: String, position: String },
    #[error("symbol {name} used with {found} arguments, declared with arity {declared}")]
    ArityMismatch {
        name: String,
        declared: usize,
        found: usize,
    },
    #[error("symbol {0} is not declared in the signature")]
    UnknownSymbol(String),
    #[error("signature must contain at least one symbol of arity 0")]
    NoConstant,
    #[error("duplicate symbol {0} in signature")]
    DuplicateSymbol(String),
    #[error("left-hand side of rule {0} is a variable")]
    VariableLhs(usize),
    #[error("rule {index}: right-hand side variable {var} does not occur on the left")]
    UnboundRhsVariable { index: usize, var: String },
    #[error("exploration exceeded the bound of {bound} distinct terms")]
    BoundExceeded { bound: usize },
}

/// A ranked symbol: a name together with a fixed arity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

impl Symbol {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        Symbol {
            name: name.into(),
            arity,
        }
    }
}

/// A finite set of ranked symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    symbols: Vec<Symbol>,
}

impl Signature {
    /// Builds a signature, rejecting duplicate names and signatures without
    /// any constant (such signatures have no ground terms).
    pub fn new(symbols: Vec<Symbol>) -> Result<Self, TermError> {
        let mut seen = BTreeSet::new();
        for s in &symbols {
            if !seen.insert(s.name.clone()) {
                return Err(TermError::DuplicateSymbol(s.name.clone()));
            }
        }
        if !symbols.iter().any(|s| s.arity == 0) {
            return Err(TermError::NoConstant);
        }
        Ok(Signature { symbols })
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn get(&self, name: &str) -> Option<&Symbol> {
        self.symbols.iter().find(|s| s.name == name)
    }

    pub fn contains(&self, sym: &Symbol) -> bool {
        self.get(&sym.name).map_or(false, |s| s.arity == sym.arity)
    }
}

/// A term over a ranked signature, possibly containing variables.
///
/// The `State` variant embeds automaton states as extra constants, so that
/// configurations (terms over symbols and states) share the matching and
/// replacement code with plain terms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    App(Symbol, Vec<Term>),
    State(StateId),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn app(sym: Symbol, args: Vec<Term>) -> Self {
        assert_eq!(sym.arity, args.len(), "arity mismatch for {}", sym.name);
        Term::App(sym, args)
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::App(Symbol::new(name, 0), vec![])
    }

    /// True when the term contains no variable (states are allowed).
    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::State(_) => true,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// True when the term is built from signature symbols only.
    pub fn is_plain(&self) -> bool {
        match self {
            Term::Var(_) | Term::State(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_plain),
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::State(_) => {}
            Term::App(_, args) => {
                for a in args {
                    a.collect_vars(out);
                }
            }
        }
    }

    /// All positions of the term, in pre-order.
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        let mut stack = vec![(Position::root(), self)];
        while let Some((p, t)) = stack.pop() {
            out.push(p.clone());
            if let Term::App(_, args) = t {
                for (i, a) in args.iter().enumerate().rev() {
                    stack.push((p.child(i + 1), a));
                }
            }
        }
        out.sort();
        out
    }

    pub fn subterm_at(&self, p: &Position) -> Result<&Term, TermError> {
        let mut cur = self;
        for &i in &p.0 {
            match cur {
                Term::App(_, args) if i >= 1 && i <= args.len() => cur = &args[i - 1],
                _ => {
                    return Err(TermError::InvalidPosition {
                        term: self.to_string(),
                        position: p.to_string(),
                    })
                }
            }
        }
        Ok(cur)
    }

    pub fn replace_at(&self, p: &Position, s: &Term) -> Result<Term, TermError> {
        if p.0.is_empty() {
            return Ok(s.clone());
        }
        let i = p.0[0];
        match self {
            Term::App(f, args) if i >= 1 && i <= args.len() => {
                let rest = Position(p.0[1..].to_vec());
                let mut args = args.clone();
                args[i - 1] = args[i - 1].replace_at(&rest, s).map_err(|_| {
                    TermError::InvalidPosition {
                        term: self.to_string(),
                        position: p.to_string(),
                    }
                })?;
                Ok(Term::App(f.clone(), args))
            }
            _ => Err(TermError::InvalidPosition {
                term: self.to_string(),
                position: p.to_string(),
            }),
        }
    }

    /// Checks that every symbol occurrence is declared with the right arity.
    pub fn check_signature(&self, sig: &Signature) -> Result<(), TermError> {
        match self {
            Term::Var(_) | Term::State(_) => Ok(()),
            Term::App(f, args) => {
                match sig.get(&f.name) {
                    None => return Err(TermError::UnknownSymbol(f.name.clone())),
                    Some(decl) if decl.arity != args.len() => {
                        return Err(TermError::ArityMismatch {
                            name: f.name.clone(),
                            declared: decl.arity,
                            found: args.len(),
                        })
                    }
                    Some(_) => {}
                }
                for a in args {
                    a.check_signature(sig)?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::State(q) => write!(f, "{q}"),
            Term::App(sym, args) => {
                write!(f, "{}", sym.name)?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{a}")?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

/// A path into a term: 1-based child indices, the empty path being the root.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position(pub Vec<usize>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: usize) -> Self {
        let mut p = self.0.clone();
        p.push(i);
        Position(p)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "λ");
        }
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

/// A finite-domain mapping from variables to terms; variables outside the
/// domain map to themselves.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Substitution {
    map: BTreeMap<String, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Substitution::default()
    }

    pub fn bind(&mut self, var: impl Into<String>, t: Term) {
        self.map.insert(var.into(), t);
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.map.get(var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Term)> {
        self.map.iter()
    }

    pub fn apply(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => self.map.get(v).cloned().unwrap_or_else(|| t.clone()),
            Term::State(_) => t.clone(),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| self.apply(a)).collect())
            }
        }
    }

    /// Inserts a binding unless it conflicts with an existing one.
    fn merge_binding(&mut self, var: &str, t: &Term) -> bool {
        match self.map.get(var) {
            Some(prev) => prev == t,
            None => {
                self.map.insert(var.to_string(), t.clone());
                true
            }
        }
    }
}

/// Syntactic matching: returns the unique σ with `pattern·σ = subject`, if any.
pub fn match_term(pattern: &Term, subject: &Term) -> Option<Substitution> {
    let mut sigma = Substitution::new();
    if match_into(pattern, subject, &mut sigma) {
        Some(sigma)
    } else {
        None
    }
}

fn match_into(pattern: &Term, subject: &Term, sigma: &mut Substitution) -> bool {
    match (pattern, subject) {
        (Term::Var(v), _) => sigma.merge_binding(v, subject),
        (Term::State(p), Term::State(q)) => p == q,
        (Term::App(f, fa), Term::App(g, ga)) => {
            f == g && fa.iter().zip(ga).all(|(p, s)| match_into(p, s, sigma))
        }
        _ => false,
    }
}

/// A rewrite rule `lhs → rhs` with its index in the enclosing TRS.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Term,
    pub rhs: Term,
    pub index: usize,
}

/// An ordered list of rewrite rules over a signature. Subsets of interest are
/// designated by sets of rule indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trs {
    rules: Vec<Rule>,
    signature: Signature,
}

impl Trs {
    pub fn new(signature: Signature, rules: Vec<(Term, Term)>) -> Result<Self, TermError> {
        let mut out = Vec::with_capacity(rules.len());
        for (index, (lhs, rhs)) in rules.into_iter().enumerate() {
            if matches!(lhs, Term::Var(_)) {
                return Err(TermError::VariableLhs(index));
            }
            lhs.check_signature(&signature)?;
            rhs.check_signature(&signature)?;
            let lv = lhs.vars();
            for v in rhs.vars() {
                if !lv.contains(&v) {
                    return Err(TermError::UnboundRhsVariable { index, var: v });
                }
            }
            out.push(Rule { lhs, rhs, index });
        }
        Ok(Trs {
            rules: out,
            signature,
        })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    /// The set of all rule indices.
    pub fn all_indices(&self) -> BTreeSet<usize> {
        (0..self.rules.len()).collect()
    }
}

/// All one-step rewrites of `t`: triples of redex position, rule index and
/// the resulting term. Empty when `t` is a normal form.
pub fn rewrite_step(t: &Term, trs: &Trs) -> Vec<(Position, usize, Term)> {
    let mut out = Vec::new();
    for p in t.positions() {
        let sub = t.subterm_at(&p).expect("position comes from the term");
        for rule in trs.rules() {
            if let Some(sigma) = match_term(&rule.lhs, sub) {
                let replaced = t
                    .replace_at(&p, &sigma.apply(&rule.rhs))
                    .expect("position comes from the term");
                out.push((p.clone(), rule.index, replaced));
            }
        }
    }
    out
}

/// Breadth-first closure of `initial` under rewriting. Fails if more than
/// `bound` distinct terms are generated, which signals a possibly infinite
/// system.
pub fn reachable_set(
    initial: &BTreeSet<Term>,
    trs: &Trs,
    bound: usize,
) -> Result<BTreeSet<Term>, TermError> {
    let mut seen: BTreeSet<Term> = initial.clone();
    let mut queue: VecDeque<Term> = initial.iter().cloned().collect();
    while let Some(t) = queue.pop_front() {
        for (_, _, next) in rewrite_step(&t, trs) {
            if seen.insert(next.clone()) {
                if seen.len() > bound {
                    return Err(TermError::BoundExceeded { bound });
                }
                queue.push_back(next);
            }
        }
    }
    Ok(seen)
}

/// Successors of `u` under the abstract relation for a rule subset: all `v`
/// such that `u` rewrites to some `w` without ever rewriting at the root, and
/// `w` rewrites to `v` at the root by a rule of `subset`.
pub fn abstract_successors(
    u: &Term,
    trs: &Trs,
    subset: &BTreeSet<usize>,
    bound: usize,
) -> Result<BTreeSet<Term>, TermError> {
    // Closure of u under non-root rewriting.
    let mut inner: BTreeSet<Term> = BTreeSet::new();
    inner.insert(u.clone());
    let mut queue: VecDeque<Term> = VecDeque::new();
    queue.push_back(u.clone());
    while let Some(t) = queue.pop_front() {
        for (p, _, next) in rewrite_step(&t, trs) {
            if p.is_root() {
                continue;
            }
            if inner.insert(next.clone()) {
                if inner.len() > bound {
                    return Err(TermError::BoundExceeded { bound });
                }
                queue.push_back(next);
            }
        }
    }
    let mut out = BTreeSet::new();
    for w in &inner {
        for (p, i, v) in rewrite_step(w, trs) {
            if p.is_root() && subset.contains(&i) {
                out.insert(v);
            }
        }
    }
    Ok(out)
}
