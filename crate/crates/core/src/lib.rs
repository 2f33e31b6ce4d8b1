//! Verification toolkit for term rewriting systems based on tree automata
//! completion with ε-transitions.
//!
//! Starting from a finite set of initial terms and a term rewriting system,
//! the [`completion`] module computes a completed tree automaton whose
//! ε-transitions abstract top-position rewriting. The [`kripke`] module turns
//! that automaton into a Kripke structure, and the [`rltl`] module checks
//! LTL formulas with regular tree-language atoms against it through a Büchi
//! product and an accepting-cycle search.
//!
//! The [`problem`] module provides the text formats (signatures, TRSs,
//! automata, term sets, formulas) consumed by the `tact` command-line tool.

pub mod automata;
pub mod completion;
pub mod kripke;
pub mod problem;
pub mod rltl;
pub mod term;

pub use automata::{EpsilonTransition, GroundTransition, StateId, TreeAutomaton, ValidationReport};
pub use completion::{complete, CompletionConfig, CompletionError, CompletionResult};
pub use kripke::{build_kripke, label, InitSpec, KripkeError, KripkeStructure};
pub use problem::{parse_formula, parse_problem, parse_term, print_problem, ParseError, ProblemFile};
pub use rltl::{check, Atom, AtomEnv, BuchiAutomaton, Formula, RltlError, Verdict};
pub use term::{Position, Rule, Signature, Substitution, Symbol, Term, Trs};
