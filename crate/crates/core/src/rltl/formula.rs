//! R-LTL formulas: LTL whose atomic predicates are regular tree languages.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::automata::TreeAutomaton;
use crate::term::{Signature, Term};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RltlError {
    #[error("unknown automaton reference @{0}")]
    UnknownAutomaton(String),
}

/// An atomic predicate: a finite set of terms, a reference to a named
/// automaton, or the universal predicate accepting every term.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Atom {
    TermSet(BTreeSet<Term>),
    AutomatonRef(String),
    Universal,
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::TermSet(ts) => {
                let parts: Vec<String> = ts.iter().map(Term::to_string).collect();
                write!(f, "{{{}}}", parts.join(", "))
            }
            Atom::AutomatonRef(name) => write!(f, "@{name}"),
            Atom::Universal => write!(f, "*"),
        }
    }
}

/// R-LTL abstract syntax. `Implies(a, b)` is sugar for `Or(Not a, b)`;
/// `Finally` and `Globally` desugar to `Until`/`Release` during NNF
/// conversion.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Finally(Box<Formula>),
    Globally(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }
    pub fn next(f: Formula) -> Formula {
        Formula::Next(Box::new(f))
    }
    pub fn finally(f: Formula) -> Formula {
        Formula::Finally(Box::new(f))
    }
    pub fn globally(f: Formula) -> Formula {
        Formula::Globally(Box::new(f))
    }
    pub fn until(a: Formula, b: Formula) -> Formula {
        Formula::Until(Box::new(a), Box::new(b))
    }
    pub fn release(a: Formula, b: Formula) -> Formula {
        Formula::Release(Box::new(a), Box::new(b))
    }

    /// Negation normal form over the core connectives (True, False,
    /// literals, ∧, ∨, X, U, R).
    pub fn to_nnf(&self) -> Nnf {
        nnf(self, true)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(x) => write!(f, "!({x})"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
            Formula::Next(x) => write!(f, "X ({x})"),
            Formula::Finally(x) => write!(f, "F ({x})"),
            Formula::Globally(x) => write!(f, "G ({x})"),
            Formula::Until(a, b) => write!(f, "({a} U {b})"),
            Formula::Release(a, b) => write!(f, "({a} R {b})"),
        }
    }
}

/// Negation normal form: negation only on atoms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Nnf {
    True,
    False,
    Lit { atom: Atom, positive: bool },
    And(Box<Nnf>, Box<Nnf>),
    Or(Box<Nnf>, Box<Nnf>),
    Next(Box<Nnf>),
    Until(Box<Nnf>, Box<Nnf>),
    Release(Box<Nnf>, Box<Nnf>),
}

fn nnf(f: &Formula, positive: bool) -> Nnf {
    match (f, positive) {
        (Formula::True, true) | (Formula::False, false) => Nnf::True,
        (Formula::True, false) | (Formula::False, true) => Nnf::False,
        (Formula::Atom(a), pos) => Nnf::Lit {
            atom: a.clone(),
            positive: pos,
        },
        (Formula::Not(x), pos) => nnf(x, !pos),
        (Formula::And(a, b), true) | (Formula::Or(a, b), false) => {
            Nnf::And(Box::new(nnf(a, positive)), Box::new(nnf(b, positive)))
        }
        (Formula::Or(a, b), true) | (Formula::And(a, b), false) => {
            Nnf::Or(Box::new(nnf(a, positive)), Box::new(nnf(b, positive)))
        }
        (Formula::Implies(a, b), pos) => {
            let desugared = Formula::or(Formula::not((**a).clone()), (**b).clone());
            nnf(&desugared, pos)
        }
        (Formula::Next(x), pos) => Nnf::Next(Box::new(nnf(x, pos))),
        (Formula::Finally(x), true) | (Formula::Globally(x), false) => {
            Nnf::Until(Box::new(Nnf::True), Box::new(nnf(x, positive)))
        }
        (Formula::Globally(x), true) | (Formula::Finally(x), false) => {
            Nnf::Release(Box::new(Nnf::False), Box::new(nnf(x, positive)))
        }
        (Formula::Until(a, b), true) => {
            Nnf::Until(Box::new(nnf(a, true)), Box::new(nnf(b, true)))
        }
        (Formula::Until(a, b), false) => {
            Nnf::Release(Box::new(nnf(a, false)), Box::new(nnf(b, false)))
        }
        (Formula::Release(a, b), true) => {
            Nnf::Release(Box::new(nnf(a, true)), Box::new(nnf(b, true)))
        }
        (Formula::Release(a, b), false) => {
            Nnf::Until(Box::new(nnf(a, false)), Box::new(nnf(b, false)))
        }
    }
}

/// A conjunction of atom literals labelling one Büchi edge. Construction
/// fails (returns `None`) when an atom occurs with both polarities.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct LabelExpr {
    literals: BTreeMap<Atom, bool>,
}

impl LabelExpr {
    pub fn empty() -> Self {
        LabelExpr::default()
    }

    pub fn from_literals(lits: impl IntoIterator<Item = (Atom, bool)>) -> Option<Self> {
        let mut out = LabelExpr::default();
        for (atom, pos) in lits {
            match out.literals.get(&atom) {
                Some(&p) if p != pos => return None,
                _ => {
                    out.literals.insert(atom, pos);
                }
            }
        }
        Some(out)
    }

    pub fn literals(&self) -> impl Iterator<Item = (&Atom, bool)> {
        self.literals.iter().map(|(a, p)| (a, *p))
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }
}

impl fmt::Display for LabelExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.literals.is_empty() {
            return write!(f, "*");
        }
        let parts: Vec<String> = self
            .literals
            .iter()
            .map(|(a, p)| if *p { a.to_string() } else { format!("¬{a}") })
            .collect();
        write!(f, "{}", parts.join(" ∧ "))
    }
}

/// Resolution context for atoms: the working signature plus the automata
/// referenced by name.
pub struct AtomEnv<'a> {
    pub signature: &'a Signature,
    pub named: &'a BTreeMap<String, TreeAutomaton>,
}

impl<'a> AtomEnv<'a> {
    pub fn new(signature: &'a Signature, named: &'a BTreeMap<String, TreeAutomaton>) -> Self {
        AtomEnv { signature, named }
    }
}

/// The tree automaton of one atom literal; negative polarity complements.
pub fn atom_automaton(
    atom: &Atom,
    positive: bool,
    env: &AtomEnv,
) -> Result<TreeAutomaton, RltlError> {
    let base = match atom {
        Atom::TermSet(ts) => TreeAutomaton::from_terms(ts, env.signature)
            .expect("atom term sets are ground and well-formed"),
        Atom::AutomatonRef(name) => env
            .named
            .get(name)
            .cloned()
            .ok_or_else(|| RltlError::UnknownAutomaton(name.clone()))?,
        Atom::Universal => TreeAutomaton::universal(env.signature),
    };
    Ok(if positive { base } else { base.complement() })
}

/// Conjunction automaton of a label expression; the empty conjunction is
/// the universal automaton.
pub fn label_expr_automaton(e: &LabelExpr, env: &AtomEnv) -> Result<TreeAutomaton, RltlError> {
    let mut out = TreeAutomaton::universal(env.signature);
    for (atom, pos) in e.literals() {
        out = out.intersection(&atom_automaton(atom, pos, env)?);
    }
    Ok(out)
}
