//! Kripke structure extraction from a completed automaton.
//!
//! States are the automaton states; the transition relation reverses the
//! ε-transitions tagged by the selected rule subset; each state is labelled
//! by the automaton restricted to ground transitions with that state final.
//! States reachable from the initial set that have no successor receive a
//! self-loop so the relation is left-total.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::automata::{AutomataError, StateId, TreeAutomaton};
use crate::term::Term;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KripkeError {
    #[error("no initial state: none of the given terms is recognized with a final ground step")]
    EmptyInitials,
    #[error(transparent)]
    Automata(#[from] AutomataError),
}

/// How the initial states are selected: the automaton's final states, or the
/// states recognizing a given set of subterms with a final ground step.
#[derive(Debug, Clone)]
pub enum InitSpec {
    FinalStates,
    SubTerms(BTreeSet<Term>),
}

#[derive(Debug, Clone)]
pub struct KripkeStructure {
    automaton: TreeAutomaton,
    states: BTreeSet<StateId>,
    initials: BTreeSet<StateId>,
    relation: BTreeSet<(StateId, StateId)>,
    self_loops_added: BTreeSet<StateId>,
}

/// The label automaton of `q`: ground transitions only, `q` the single
/// final state.
pub fn label(astar: &TreeAutomaton, q: StateId) -> TreeAutomaton {
    astar.ground_only_with_final(q)
}

/// Builds the Kripke structure of `astar` for the ε-transitions whose tags
/// meet `subset`.
pub fn build_kripke(
    astar: &TreeAutomaton,
    subset: &BTreeSet<usize>,
    init: &InitSpec,
) -> Result<KripkeStructure, KripkeError> {
    let initials: BTreeSet<StateId> = match init {
        InitSpec::FinalStates => astar.finals().clone(),
        InitSpec::SubTerms(terms) => {
            let mut out = BTreeSet::new();
            for t in terms {
                if let Some(q) = astar.grounded_target(t)? {
                    out.insert(q);
                }
            }
            out
        }
    };
    if initials.is_empty() {
        return Err(KripkeError::EmptyInitials);
    }
    let mut relation: BTreeSet<(StateId, StateId)> = BTreeSet::new();
    for eps in astar.epsilon() {
        if eps.rule_tags.intersection(subset).next().is_some() {
            relation.insert((eps.target, eps.source));
        }
    }
    // totalize over the states reachable from the initial set
    let mut reachable = initials.clone();
    let mut queue: VecDeque<StateId> = initials.iter().copied().collect();
    let mut self_loops_added = BTreeSet::new();
    while let Some(s) = queue.pop_front() {
        let succs: Vec<StateId> = relation
            .iter()
            .filter(|(p, _)| *p == s)
            .map(|(_, q)| *q)
            .collect();
        if succs.is_empty() {
            relation.insert((s, s));
            self_loops_added.insert(s);
        } else {
            for q in succs {
                if reachable.insert(q) {
                    queue.push_back(q);
                }
            }
        }
    }
    Ok(KripkeStructure {
        automaton: astar.clone(),
        states: astar.states().collect(),
        initials,
        relation,
        self_loops_added,
    })
}

impl KripkeStructure {
    pub fn automaton(&self) -> &TreeAutomaton {
        &self.automaton
    }

    pub fn states(&self) -> &BTreeSet<StateId> {
        &self.states
    }

    pub fn initials(&self) -> &BTreeSet<StateId> {
        &self.initials
    }

    pub fn relation(&self) -> &BTreeSet<(StateId, StateId)> {
        &self.relation
    }

    pub fn self_loops_added(&self) -> &BTreeSet<StateId> {
        &self.self_loops_added
    }

    pub fn successors(&self, s: StateId) -> impl Iterator<Item = StateId> + '_ {
        self.relation
            .range((s, StateId(0))..=(s, StateId(u32::MAX)))
            .map(|(_, q)| *q)
    }

    pub fn label(&self, q: StateId) -> TreeAutomaton {
        label(&self.automaton, q)
    }

    pub fn state_name(&self, q: StateId) -> &str {
        self.automaton.state_name(q)
    }

    /// States reachable from the initial set.
    pub fn reachable(&self) -> BTreeSet<StateId> {
        let mut seen = self.initials.clone();
        let mut queue: VecDeque<StateId> = seen.iter().copied().collect();
        while let Some(s) = queue.pop_front() {
            for q in self.successors(s) {
                if seen.insert(q) {
                    queue.push_back(q);
                }
            }
        }
        seen
    }

    /// Deterministic DOT rendering. Nodes show the label language when it is
    /// small; initial states are marked; added self-loops are dashed.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph kripke {\n");
        for q in &self.states {
            let lab = self.label(*q);
            let lang = lab.language_up_to_depth(6);
            let node_label = if !lang.is_empty() && lang.len() <= 3 {
                let terms: Vec<String> = lang.iter().map(Term::to_string).collect();
                format!("{}\\n{{{}}}", self.state_name(*q), terms.join(", "))
            } else {
                self.state_name(*q).to_string()
            };
            let shape = if self.initials.contains(q) {
                ", shape=doublecircle"
            } else {
                ""
            };
            out.push_str(&format!(
                "  \"{}\" [label=\"{}\"{}];\n",
                self.state_name(*q),
                node_label,
                shape
            ));
        }
        for (s, t) in &self.relation {
            let style = if s == t && self.self_loops_added.contains(s) {
                " [style=dashed]"
            } else {
                ""
            };
            out.push_str(&format!(
                "  \"{}\" -> \"{}\"{};\n",
                self.state_name(*s),
                self.state_name(*t),
                style
            ));
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::completion::{complete, CompletionConfig};
    use crate::term::{Signature, Symbol, Trs};

    fn sig_fgh() -> Signature {
        Signature::new(vec![
            Symbol::new("f", 1),
            Symbol::new("g", 1),
            Symbol::new("h", 1),
            Symbol::new("a", 0),
            Symbol::new("b", 0),
            Symbol::new("c", 0),
        ])
        .unwrap()
    }

    fn c(name: &str) -> Term {
        Term::constant(name)
    }

    fn un(name: &str, arg: Term) -> Term {
        Term::app(Symbol::new(name, 1), vec![arg])
    }

    fn ex2_fixpoint() -> (TreeAutomaton, Trs) {
        let trs = Trs::new(
            sig_fgh(),
            vec![
                (c("a"), c("b")),
                (c("b"), c("c")),
                (un("f", c("c")), un("g", c("a"))),
                (un("g", c("c")), un("h", c("a"))),
                (un("h", c("c")), un("f", c("a"))),
            ],
        )
        .unwrap();
        let a0 = TreeAutomaton::from_terms(
            &[un("f", c("a"))].into_iter().collect(),
            &sig_fgh(),
        )
        .unwrap();
        let res = complete(&a0, &trs, &CompletionConfig::default()).unwrap();
        (res.automaton, trs)
    }

    fn state_of(a: &TreeAutomaton, t: &Term) -> StateId {
        a.grounded_target(t).unwrap().unwrap()
    }

    #[test]
    fn label_languages_are_singletons() {
        let (a, _) = ex2_fixpoint();
        let qf = state_of(&a, &un("f", c("a")));
        let qa = state_of(&a, &c("a"));
        assert_eq!(
            label(&a, qf).language_up_to_depth(4),
            [un("f", c("a"))].into_iter().collect()
        );
        assert_eq!(
            label(&a, qa).language_up_to_depth(4),
            [c("a")].into_iter().collect()
        );
    }

    #[test]
    fn label_of_transitionless_state_is_empty() {
        let sig = sig_fgh();
        let mut a = TreeAutomaton::new(sig);
        let q = a.add_state("q");
        assert!(label(&a, q).language_is_empty());
    }

    #[test]
    fn kripke_r2_is_the_three_cycle() {
        let (a, _) = ex2_fixpoint();
        let r2: BTreeSet<usize> = [2, 3, 4].into_iter().collect();
        let k = build_kripke(&a, &r2, &InitSpec::FinalStates).unwrap();
        let qf = state_of(&a, &un("f", c("a")));
        let qg = state_of(&a, &un("g", c("a")));
        let qh = state_of(&a, &un("h", c("a")));
        assert_eq!(k.initials(), &[qf].into_iter().collect());
        assert_eq!(
            k.relation(),
            &[(qf, qg), (qg, qh), (qh, qf)].into_iter().collect()
        );
        assert!(k.self_loops_added().is_empty());
    }

    #[test]
    fn kripke_r1_is_the_chain_with_loop() {
        let (a, _) = ex2_fixpoint();
        let r1: BTreeSet<usize> = [0, 1].into_iter().collect();
        let init = InitSpec::SubTerms([c("a")].into_iter().collect());
        let k = build_kripke(&a, &r1, &init).unwrap();
        let qa = state_of(&a, &c("a"));
        let qb = state_of(&a, &c("b"));
        let qc = state_of(&a, &c("c"));
        assert_eq!(k.initials(), &[qa].into_iter().collect());
        assert_eq!(
            k.relation(),
            &[(qa, qb), (qb, qc), (qc, qc)].into_iter().collect()
        );
        assert_eq!(k.self_loops_added(), &[qc].into_iter().collect());
    }

    #[test]
    fn empty_subset_gives_self_loops_only() {
        let (a, _) = ex2_fixpoint();
        let k = build_kripke(&a, &BTreeSet::new(), &InitSpec::FinalStates).unwrap();
        for (s, t) in k.relation() {
            assert_eq!(s, t);
        }
        for s in k.reachable() {
            assert!(k.successors(s).count() >= 1);
        }
    }

    #[test]
    fn empty_initials_is_an_error() {
        let (a, _) = ex2_fixpoint();
        let init = InitSpec::SubTerms(BTreeSet::new());
        assert!(matches!(
            build_kripke(&a, &BTreeSet::new(), &init),
            Err(KripkeError::EmptyInitials)
        ));
    }

    #[test]
    fn left_totality_on_reachable_states() {
        let (a, _) = ex2_fixpoint();
        for subset in [
            [0usize, 1].into_iter().collect::<BTreeSet<_>>(),
            [2, 3, 4].into_iter().collect(),
            [0, 1, 2, 3, 4].into_iter().collect(),
        ] {
            let k = build_kripke(&a, &subset, &InitSpec::FinalStates).unwrap();
            for s in k.reachable() {
                assert!(k.successors(s).count() >= 1, "state {s} has no successor");
            }
        }
    }

    #[test]
    fn dot_output_shapes() {
        let (a, _) = ex2_fixpoint();
        let r2: BTreeSet<usize> = [2, 3, 4].into_iter().collect();
        let k = build_kripke(&a, &r2, &InitSpec::FinalStates).unwrap();
        let dot = k.to_dot();
        assert!(dot.starts_with("digraph kripke {"));
        assert!(dot.contains("f(a)"));
        assert_eq!(dot.matches(" -> ").count(), 3);

        let r1: BTreeSet<usize> = [0, 1].into_iter().collect();
        let init = InitSpec::SubTerms([c("a")].into_iter().collect());
        let k1 = build_kripke(&a, &r1, &init).unwrap();
        assert!(k1.to_dot().contains("style=dashed"));
    }
}
