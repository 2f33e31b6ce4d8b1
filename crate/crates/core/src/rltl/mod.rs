//! LTL with regular tree-language atoms: formula syntax, negation normal
//! form, Büchi translation, product with a Kripke structure, and emptiness.

pub mod buchi;
pub mod formula;

pub use buchi::{
    check, is_empty_buchi, kripke_to_buchi, ltl_to_buchi, product, BuchiAutomaton, BuchiLabel,
    BuchiTransition, Lasso, Verdict,
};
pub use formula::{Atom, AtomEnv, Formula, LabelExpr, Nnf, RltlError};
