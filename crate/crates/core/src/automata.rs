//! Bottom-up tree automata with normalized ground transitions and
//! rule-tagged ε-transitions.
//!
//! Ground transitions have the shape `f(q1,…,qn) → q`; ε-transitions are
//! state-to-state and carry the indices of the rewrite rules that produced
//! them during completion (empty tag sets are legal for hand-written
//! automata). The boolean algebra operations (determinization, complement,
//! intersection, emptiness) are the standard constructions and operate on
//! ε-free automata internally.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::term::{Signature, Symbol, Term};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AutomataError {
    #[error("symbol {0} is not declared in the automaton signature")]
    UnknownSymbol(String),
    #[error("state {0} does not belong to the automaton")]
    UnknownState(StateId),
    #[error("state {0} is the target of more than one ground transition")]
    PropertyTwoViolated(StateId),
    #[error("term {0} contains a variable; only ground terms can be recognized")]
    NonGroundTerm(String),
}

/// Identifier of an automaton state. Printing uses the name table of the
/// owning automaton; standalone display falls back to `q{index}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub u32);

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.0)
    }
}

/// A normalized transition `head(args…) → target`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GroundTransition {
    pub head: Symbol,
    pub args: Vec<StateId>,
    pub target: StateId,
}

/// An ε-transition `source → target` with the rewrite rules it stands for.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct EpsilonTransition {
    pub source: StateId,
    pub target: StateId,
    pub rule_tags: BTreeSet<usize>,
}

/// Result of checking the two determinism properties completion relies on:
/// no two ground transitions share a left-hand side (property 1) and no
/// state is the target of two ground transitions (property 2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub prop1: bool,
    pub prop2: bool,
    pub prop1_offenders: Vec<(GroundTransition, GroundTransition)>,
    pub prop2_offenders: Vec<(GroundTransition, GroundTransition)>,
}

impl ValidationReport {
    pub fn both_hold(&self) -> bool {
        self.prop1 && self.prop2
    }
}

/// A bottom-up nondeterministic finite tree automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeAutomaton {
    signature: Signature,
    names: BTreeMap<StateId, String>,
    finals: BTreeSet<StateId>,
    delta: BTreeSet<GroundTransition>,
    epsilon: BTreeMap<(StateId, StateId), BTreeSet<usize>>,
    next_state: u32,
}

impl TreeAutomaton {
    pub fn new(signature: Signature) -> Self {
        TreeAutomaton {
            signature,
            names: BTreeMap::new(),
            finals: BTreeSet::new(),
            delta: BTreeSet::new(),
            epsilon: BTreeMap::new(),
            next_state: 0,
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn add_state(&mut self, name: impl Into<String>) -> StateId {
        let id = StateId(self.next_state);
        self.next_state += 1;
        self.names.insert(id, name.into());
        id
    }

    /// Adds a state named `q{index}`.
    pub fn add_fresh_state(&mut self) -> StateId {
        let id = StateId(self.next_state);
        self.next_state += 1;
        self.names.insert(id, format!("q{}", id.0));
        id
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.names.keys().copied()
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn state_name(&self, q: StateId) -> &str {
        self.names.get(&q).map(String::as_str).unwrap_or("?")
    }

    pub fn contains_state(&self, q: StateId) -> bool {
        self.names.contains_key(&q)
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.names
            .iter()
            .find(|(_, n)| n.as_str() == name)
            .map(|(q, _)| *q)
    }

    pub fn finals(&self) -> &BTreeSet<StateId> {
        &self.finals
    }

    pub fn set_final(&mut self, q: StateId) {
        assert!(self.contains_state(q));
        self.finals.insert(q);
    }

    pub fn clear_finals(&mut self) {
        self.finals.clear();
    }

    pub fn delta(&self) -> impl Iterator<Item = &GroundTransition> {
        self.delta.iter()
    }

    pub fn delta_len(&self) -> usize {
        self.delta.len()
    }

    pub fn epsilon(&self) -> impl Iterator<Item = EpsilonTransition> + '_ {
        self.epsilon.iter().map(|((s, t), tags)| EpsilonTransition {
            source: *s,
            target: *t,
            rule_tags: tags.clone(),
        })
    }

    pub fn epsilon_len(&self) -> usize {
        self.epsilon.len()
    }

    pub fn epsilon_tags(&self, source: StateId, target: StateId) -> Option<&BTreeSet<usize>> {
        self.epsilon.get(&(source, target))
    }

    pub fn add_ground(&mut self, head: Symbol, args: Vec<StateId>, target: StateId) {
        assert_eq!(head.arity, args.len());
        assert!(args.iter().all(|q| self.contains_state(*q)));
        assert!(self.contains_state(target));
        self.delta.insert(GroundTransition { head, args, target });
    }

    /// Adds or extends an ε-transition; tags accumulate as a union.
    /// Returns true when the transition or a tag was new.
    pub fn add_epsilon(&mut self, source: StateId, target: StateId, tags: BTreeSet<usize>) -> bool {
        assert!(self.contains_state(source) && self.contains_state(target));
        let existed = self.epsilon.contains_key(&(source, target));
        let entry = self.epsilon.entry((source, target)).or_default();
        let before = entry.len();
        entry.extend(tags);
        !existed || entry.len() > before
    }

    /// Registers an ε-transition with no tags (hand-written automata).
    pub fn add_epsilon_untagged(&mut self, source: StateId, target: StateId) {
        assert!(self.contains_state(source) && self.contains_state(target));
        self.epsilon.entry((source, target)).or_default();
    }

    /// `{q' | q →*ε q'}`, reflexive.
    pub fn eps_closure(&self, q: StateId) -> BTreeSet<StateId> {
        let mut out = BTreeSet::new();
        let mut queue = VecDeque::new();
        out.insert(q);
        queue.push_back(q);
        while let Some(s) = queue.pop_front() {
            for ((src, tgt), _) in self.epsilon.range((s, StateId(0))..=(s, StateId(u32::MAX))) {
                debug_assert_eq!(*src, s);
                if out.insert(*tgt) {
                    queue.push_back(*tgt);
                }
            }
        }
        out
    }

    fn eps_close_set(&self, set: &mut BTreeSet<StateId>) {
        let seeds: Vec<StateId> = set.iter().copied().collect();
        for q in seeds {
            set.extend(self.eps_closure(q));
        }
    }

    /// States `q` such that `t →* q` using ground and ε-transitions.
    /// `t` may contain state constants (configurations); variables are
    /// rejected.
    pub fn reach_states(&self, t: &Term) -> Result<BTreeSet<StateId>, AutomataError> {
        let mut set = self.grounded_targets(t)?;
        self.eps_close_set(&mut set);
        if let Term::State(q) = t {
            // zero-step reduction plus closure
            set.extend(self.eps_closure(*q));
        }
        Ok(set)
    }

    /// States reachable from `t` by a reduction whose final step is a ground
    /// transition (ε-steps are allowed strictly below the root). A bare state
    /// constant reaches itself by the empty reduction.
    pub fn grounded_targets(&self, t: &Term) -> Result<BTreeSet<StateId>, AutomataError> {
        match t {
            Term::Var(v) => Err(AutomataError::NonGroundTerm(v.clone())),
            Term::State(q) => {
                if !self.contains_state(*q) {
                    return Err(AutomataError::UnknownState(*q));
                }
                Ok([*q].into_iter().collect())
            }
            Term::App(f, args) => {
                if self.signature.get(&f.name).is_none() {
                    return Err(AutomataError::UnknownSymbol(f.name.clone()));
                }
                let mut child_sets = Vec::with_capacity(args.len());
                for a in args {
                    let mut set = self.reach_states(a)?;
                    self.eps_close_set(&mut set);
                    child_sets.push(set);
                }
                let mut out = BTreeSet::new();
                for tr in &self.delta {
                    if tr.head == *f
                        && tr
                            .args
                            .iter()
                            .zip(&child_sets)
                            .all(|(q, set)| set.contains(q))
                    {
                        out.insert(tr.target);
                    }
                }
                Ok(out)
            }
        }
    }

    /// The unique state reached by `t` with a final ground step, when there
    /// is exactly one. With properties 1–2 in force this is deterministic;
    /// if the automaton is nondeterministic the smallest state is returned.
    pub fn grounded_target(&self, t: &Term) -> Result<Option<StateId>, AutomataError> {
        Ok(self.grounded_targets(t)?.into_iter().next())
    }

    /// Membership of `t` in the language of `target`, or of some final state
    /// when `target` is omitted.
    pub fn accepts(&self, t: &Term, target: Option<StateId>) -> Result<bool, AutomataError> {
        let reach = self.reach_states(t)?;
        Ok(match target {
            Some(q) => reach.contains(&q),
            None => reach.iter().any(|q| self.finals.contains(q)),
        })
    }

    /// The unique term recognized in `q` using ground transitions only, or
    /// `None` when no ground-only derivation exists (for instance when only
    /// cyclic transitions feed `q`). Fails if property 2 does not hold at `q`.
    pub fn canonical_term(&self, q: StateId) -> Result<Option<Term>, AutomataError> {
        let mut visiting = BTreeSet::new();
        self.canonical_term_rec(q, &mut visiting)
    }

    fn canonical_term_rec(
        &self,
        q: StateId,
        visiting: &mut BTreeSet<StateId>,
    ) -> Result<Option<Term>, AutomataError> {
        if !visiting.insert(q) {
            return Ok(None); // cyclic ground derivation, no finite term
        }
        let producers: Vec<&GroundTransition> =
            self.delta.iter().filter(|tr| tr.target == q).collect();
        let result = match producers.len() {
            0 => Ok(None),
            1 => {
                let tr = producers[0];
                let mut args = Vec::with_capacity(tr.args.len());
                let mut ok = true;
                for a in &tr.args {
                    match self.canonical_term_rec(*a, visiting)? {
                        Some(t) => args.push(t),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    Ok(Some(Term::App(tr.head.clone(), args)))
                } else {
                    Ok(None)
                }
            }
            _ => Err(AutomataError::PropertyTwoViolated(q)),
        };
        visiting.remove(&q);
        result
    }

    /// Initial automaton for a finite set of ground terms: one state per
    /// distinct subterm, exactly one ground transition per state, no
    /// ε-transitions, finals = states of the top terms. Satisfies both
    /// determinism properties by construction.
    pub fn from_terms(ts: &BTreeSet<Term>, sig: &Signature) -> Result<Self, AutomataError> {
        let mut a = TreeAutomaton::new(sig.clone());
        let mut state_of: BTreeMap<Term, StateId> = BTreeMap::new();
        for t in ts {
            if !t.is_plain() {
                return Err(AutomataError::NonGroundTerm(t.to_string()));
            }
            let q = a.intern_subterm(t, &mut state_of)?;
            a.finals.insert(q);
        }
        Ok(a)
    }

    fn intern_subterm(
        &mut self,
        t: &Term,
        state_of: &mut BTreeMap<Term, StateId>,
    ) -> Result<StateId, AutomataError> {
        if let Some(q) = state_of.get(t) {
            return Ok(*q);
        }
        match t {
            Term::App(f, args) => {
                if !self.signature.contains(f) {
                    return Err(AutomataError::UnknownSymbol(f.name.clone()));
                }
                let mut arg_states = Vec::with_capacity(args.len());
                for a in args {
                    arg_states.push(self.intern_subterm(a, state_of)?);
                }
                let q = self.add_fresh_state();
                self.add_ground(f.clone(), arg_states, q);
                state_of.insert(t.clone(), q);
                Ok(q)
            }
            _ => Err(AutomataError::NonGroundTerm(t.to_string())),
        }
    }

    /// Checks properties 1 and 2 and reports the offending transition pairs.
    pub fn validate(&self) -> ValidationReport {
        let mut prop1_offenders = Vec::new();
        let mut prop2_offenders = Vec::new();
        let trs: Vec<&GroundTransition> = self.delta.iter().collect();
        for (i, a) in trs.iter().enumerate() {
            for b in &trs[i + 1..] {
                if a.head == b.head && a.args == b.args && a.target != b.target {
                    prop1_offenders.push(((*a).clone(), (*b).clone()));
                }
                if a.target == b.target {
                    prop2_offenders.push(((*a).clone(), (*b).clone()));
                }
            }
        }
        ValidationReport {
            prop1: prop1_offenders.is_empty(),
            prop2: prop2_offenders.is_empty(),
            prop1_offenders,
            prop2_offenders,
        }
    }

    /// Language-preserving ε-elimination: for every ground transition
    /// targeting `q` and every `q'` in the ε-closure of `q`, a copy targeting
    /// `q'` is added; the ε-transitions are then dropped.
    pub fn remove_epsilon(&self) -> TreeAutomaton {
        let mut out = self.clone();
        out.epsilon.clear();
        for tr in &self.delta {
            for q in self.eps_closure(tr.target) {
                out.delta.insert(GroundTransition {
                    head: tr.head.clone(),
                    args: tr.args.clone(),
                    target: q,
                });
            }
        }
        out
    }

    /// Strips ε-transitions without compensation and makes `q` the only
    /// final state. This is the labelling automaton of the Kripke
    /// construction: it recognizes exactly the terms reaching `q` with
    /// ground transitions throughout.
    pub fn ground_only_with_final(&self, q: StateId) -> TreeAutomaton {
        let mut out = self.clone();
        out.epsilon.clear();
        out.finals = [q].into_iter().collect();
        out
    }

    /// Subset construction. The result is deterministic and ε-free; the
    /// input is ε-eliminated first.
    pub fn determinize(&self) -> TreeAutomaton {
        let base = self.remove_epsilon();
        let mut out = TreeAutomaton::new(self.signature.clone());
        let mut macro_ids: BTreeMap<BTreeSet<StateId>, StateId> = BTreeMap::new();
        let mut discovered: Vec<BTreeSet<StateId>> = Vec::new();
        let mut changed = true;
        while changed {
            changed = false;
            for sym in self.signature.symbols() {
                let n = sym.arity;
                let snapshot = discovered.len();
                if n > 0 && snapshot == 0 {
                    continue;
                }
                let mut tuple = vec![0usize; n];
                loop {
                    let mut target: BTreeSet<StateId> = BTreeSet::new();
                    for tr in &base.delta {
                        if tr.head == *sym
                            && tr
                                .args
                                .iter()
                                .zip(&tuple)
                                .all(|(q, &i)| discovered[i].contains(q))
                        {
                            target.insert(tr.target);
                        }
                    }
                    if !target.is_empty() {
                        if !macro_ids.contains_key(&target) {
                            let id = out.add_fresh_state();
                            macro_ids.insert(target.clone(), id);
                            discovered.push(target.clone());
                            changed = true;
                        }
                        let tid = macro_ids[&target];
                        let arg_ids: Vec<StateId> =
                            tuple.iter().map(|&i| macro_ids[&discovered[i]]).collect();
                        out.delta.insert(GroundTransition {
                            head: sym.clone(),
                            args: arg_ids,
                            target: tid,
                        });
                    }
                    if !next_tuple(&mut tuple, snapshot) {
                        break;
                    }
                }
            }
        }
        for (set, id) in &macro_ids {
            if set.iter().any(|q| self.finals.contains(q)) {
                out.finals.insert(*id);
            }
        }
        out
    }

    /// Adds a sink state and the missing transitions so that every term
    /// reaches exactly one state. Assumes a deterministic ε-free input.
    pub fn complete_total(&self) -> TreeAutomaton {
        let mut out = self.clone();
        let sink = out.add_fresh_state();
        let states: Vec<StateId> = out.states().collect();
        for sym in self.signature.symbols().to_vec() {
            let n = sym.arity;
            let mut tuple = vec![0usize; n];
            loop {
                let args: Vec<StateId> = tuple.iter().map(|&i| states[i]).collect();
                let covered = out
                    .delta
                    .iter()
                    .any(|tr| tr.head == sym && tr.args == args);
                if !covered {
                    out.delta.insert(GroundTransition {
                        head: sym.clone(),
                        args,
                        target: sink,
                    });
                }
                if !next_tuple(&mut tuple, states.len()) {
                    break;
                }
            }
        }
        out
    }

    /// `L(result) = T(F) \ L(self)`.
    pub fn complement(&self) -> TreeAutomaton {
        let mut det = self.determinize().complete_total();
        let all: BTreeSet<StateId> = det.states().collect();
        det.finals = all.difference(&det.finals).copied().collect();
        det
    }

    /// Product construction; both inputs are ε-eliminated first.
    pub fn intersection(&self, other: &TreeAutomaton) -> TreeAutomaton {
        let a = self.remove_epsilon();
        let b = other.remove_epsilon();
        let mut out = TreeAutomaton::new(self.signature.clone());
        let mut pair_ids: BTreeMap<(StateId, StateId), StateId> = BTreeMap::new();
        let mut changed = true;
        while changed {
            changed = false;
            for ta in &a.delta {
                for tb in &b.delta {
                    if ta.head != tb.head {
                        continue;
                    }
                    let pairs: Vec<(StateId, StateId)> =
                        ta.args.iter().zip(&tb.args).map(|(x, y)| (*x, *y)).collect();
                    if !pairs.iter().all(|p| pair_ids.contains_key(p)) {
                        continue;
                    }
                    let key = (ta.target, tb.target);
                    if !pair_ids.contains_key(&key) {
                        let id = out.add_fresh_state();
                        pair_ids.insert(key, id);
                        changed = true;
                    }
                    out.delta.insert(GroundTransition {
                        head: ta.head.clone(),
                        args: pairs.iter().map(|p| pair_ids[p]).collect(),
                        target: pair_ids[&key],
                    });
                }
            }
        }
        for ((p, q), id) in &pair_ids {
            if a.finals.contains(p) && b.finals.contains(q) {
                out.finals.insert(*id);
            }
        }
        out
    }

    /// Disjoint-sum union: `L(result) = L(self) ∪ L(other)`.
    pub fn union(&self, other: &TreeAutomaton) -> TreeAutomaton {
        let mut out = self.clone();
        let mut remap: BTreeMap<StateId, StateId> = BTreeMap::new();
        for q in other.states() {
            let id = out.add_state(format!("u_{}", other.state_name(q)));
            remap.insert(q, id);
        }
        for tr in other.delta() {
            out.delta.insert(GroundTransition {
                head: tr.head.clone(),
                args: tr.args.iter().map(|q| remap[q]).collect(),
                target: remap[&tr.target],
            });
        }
        for eps in other.epsilon() {
            out.epsilon
                .entry((remap[&eps.source], remap[&eps.target]))
                .or_default()
                .extend(eps.rule_tags);
        }
        for q in other.finals() {
            out.finals.insert(remap[q]);
        }
        out
    }

    /// A minimal-depth member of the language, or `None` when it is empty.
    pub fn find_witness(&self) -> Option<Term> {
        let mut witness: BTreeMap<StateId, Term> = BTreeMap::new();
        loop {
            let mut added: Vec<(StateId, Term)> = Vec::new();
            for tr in &self.delta {
                if witness.contains_key(&tr.target) {
                    continue;
                }
                if tr.args.iter().all(|q| witness.contains_key(q)) {
                    let t = Term::App(
                        tr.head.clone(),
                        tr.args.iter().map(|q| witness[q].clone()).collect(),
                    );
                    added.push((tr.target, t));
                }
            }
            for ((src, tgt), _) in &self.epsilon {
                if witness.contains_key(src) && !witness.contains_key(tgt) {
                    added.push((*tgt, witness[src].clone()));
                }
            }
            if added.is_empty() {
                break;
            }
            for (q, t) in added {
                witness.entry(q).or_insert(t);
            }
        }
        self.finals
            .iter()
            .filter_map(|q| witness.get(q))
            .min_by_key(|t| t.to_string().len())
            .cloned()
    }

    pub fn language_is_empty(&self) -> bool {
        self.find_witness().is_none()
    }

    /// Automaton recognizing all of `T(F)`.
    pub fn universal(sig: &Signature) -> TreeAutomaton {
        let mut a = TreeAutomaton::new(sig.clone());
        let q = a.add_state("qu");
        a.finals.insert(q);
        for sym in sig.symbols().to_vec() {
            a.add_ground(sym.clone(), vec![q; sym.arity], q);
        }
        a
    }

    /// Every term of the language with depth at most `depth`, generated
    /// top-down from the transitions. Independent of the membership path,
    /// which makes it usable as a test oracle for `accepts`.
    pub fn language_up_to_depth(&self, depth: usize) -> BTreeSet<Term> {
        let per_state = self.state_languages_up_to_depth(depth);
        let mut out = BTreeSet::new();
        for q in &self.finals {
            if let Some(set) = per_state.get(q) {
                out.extend(set.iter().cloned());
            }
        }
        out
    }

    /// Per-state depth-bounded languages (ε-transitions included).
    pub fn state_languages_up_to_depth(&self, depth: usize) -> BTreeMap<StateId, BTreeSet<Term>> {
        let mut langs: BTreeMap<StateId, BTreeSet<Term>> = BTreeMap::new();
        for q in self.states() {
            langs.insert(q, BTreeSet::new());
        }
        let term_depth = |t: &Term| -> usize {
            fn d(t: &Term) -> usize {
                match t {
                    Term::App(_, args) => 1 + args.iter().map(d).max().unwrap_or(0),
                    _ => 1,
                }
            }
            d(t)
        };
        let mut changed = true;
        while changed {
            changed = false;
            for tr in &self.delta {
                let mut candidates: Vec<Vec<Term>> = vec![vec![]];
                for a in &tr.args {
                    let mut next = Vec::new();
                    for prefix in &candidates {
                        for t in &langs[a] {
                            let mut p = prefix.clone();
                            p.push(t.clone());
                            next.push(p);
                        }
                    }
                    candidates = next;
                }
                for args in candidates {
                    let t = Term::App(tr.head.clone(), args);
                    if term_depth(&t) <= depth && !langs[&tr.target].contains(&t) {
                        langs.get_mut(&tr.target).unwrap().insert(t);
                        changed = true;
                    }
                }
            }
            for ((src, tgt), _) in &self.epsilon {
                let from: Vec<Term> = langs[src].iter().cloned().collect();
                for t in from {
                    if !langs[tgt].contains(&t) {
                        langs.get_mut(tgt).unwrap().insert(t);
                        changed = true;
                    }
                }
            }
        }
        langs
    }

    /// Renders a configuration using this automaton's state names.
    pub fn render_config(&self, t: &Term) -> String {
        match t {
            Term::Var(v) => v.clone(),
            Term::State(q) => self.state_name(*q).to_string(),
            Term::App(f, args) => {
                if args.is_empty() {
                    f.name.clone()
                } else {
                    let inner: Vec<String> =
                        args.iter().map(|a| self.render_config(a)).collect();
                    format!("{}({})", f.name, inner.join(","))
                }
            }
        }
    }

    /// Relabels states `q0, q1, …` in a breadth-first discovery order
    /// starting from the final states, and keeps transitions sorted. Output
    /// is stable for printing and golden comparisons.
    pub fn canonical_form(&self) -> TreeAutomaton {
        let mut order: Vec<StateId> = Vec::new();
        let mut seen: BTreeSet<StateId> = BTreeSet::new();
        let mut queue: VecDeque<StateId> = VecDeque::new();
        for q in &self.finals {
            if seen.insert(*q) {
                queue.push_back(*q);
            }
        }
        while let Some(q) = queue.pop_front() {
            order.push(q);
            for tr in &self.delta {
                if tr.target == q {
                    for a in &tr.args {
                        if seen.insert(*a) {
                            queue.push_back(*a);
                        }
                    }
                }
            }
            for ((src, tgt), _) in &self.epsilon {
                if *tgt == q && seen.insert(*src) {
                    queue.push_back(*src);
                }
            }
        }
        for q in self.states() {
            if seen.insert(q) {
                order.push(q);
            }
        }
        let mut out = TreeAutomaton::new(self.signature.clone());
        let mut remap: BTreeMap<StateId, StateId> = BTreeMap::new();
        for q in &order {
            remap.insert(*q, out.add_fresh_state());
        }
        for tr in &self.delta {
            out.delta.insert(GroundTransition {
                head: tr.head.clone(),
                args: tr.args.iter().map(|q| remap[q]).collect(),
                target: remap[&tr.target],
            });
        }
        for ((src, tgt), tags) in &self.epsilon {
            out.epsilon
                .insert((remap[src], remap[tgt]), tags.clone());
        }
        out.finals = self.finals.iter().map(|q| remap[q]).collect();
        out
    }
}

/// Odometer over `tuple.len()` digits in base `base`; false when wrapped.
fn next_tuple(tuple: &mut [usize], base: usize) -> bool {
    for k in (0..tuple.len()).rev() {
        tuple[k] += 1;
        if tuple[k] < base {
            return true;
        }
        tuple[k] = 0;
    }
    false
}
