//! Büchi automata over label expressions, the tableau translation of R-LTL,
//! the Kripke-to-Büchi conversion, the simplified product gated by tree
//! automata intersection, and nested depth-first emptiness checking.

use std::collections::{BTreeMap, BTreeSet};

use crate::automata::StateId;
use crate::kripke::KripkeStructure;
use crate::rltl::formula::{AtomEnv, Formula, LabelExpr, Nnf, RltlError};
use crate::term::Term;

/// Edge label of a Büchi automaton: the source Kripke state (for automata
/// extracted from Kripke structures), a label expression (for automata
/// translated from formulas), or both (products).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuchiLabel {
    KripkeState(StateId),
    Expr(LabelExpr),
    Pair(StateId, LabelExpr),
}

#[derive(Debug, Clone)]
pub struct BuchiTransition {
    pub from: usize,
    pub label: BuchiLabel,
    pub to: usize,
    /// A term in the non-empty label intersection, recorded by the product.
    pub witness: Option<Term>,
}

/// A Büchi automaton over infinite words; states are indices into `names`.
#[derive(Debug, Clone, Default)]
pub struct BuchiAutomaton {
    pub names: Vec<String>,
    pub initials: BTreeSet<usize>,
    pub finals: BTreeSet<usize>,
    pub transitions: Vec<BuchiTransition>,
}

impl BuchiAutomaton {
    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    fn successors(&self, s: usize) -> impl Iterator<Item = (usize, &BuchiTransition)> + '_ {
        self.transitions
            .iter()
            .filter(move |t| t.from == s)
            .map(|t| (t.to, t))
    }
}

// ---------------------------------------------------------------------------
// Tableau translation (formula → generalized Büchi → Büchi)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
struct TableauNode {
    incoming: BTreeSet<usize>, // INIT marker included
    old: BTreeSet<Nnf>,
    next: BTreeSet<Nnf>,
}

const INIT: usize = usize::MAX;

/// Expansion state of the classic tableau construction: nodes are closed
/// sets of obligations; `new` holds the unprocessed ones.
struct Expansion {
    nodes: Vec<TableauNode>,
}

impl Expansion {
    fn expand(
        &mut self,
        incoming: BTreeSet<usize>,
        mut new: BTreeSet<Nnf>,
        mut old: BTreeSet<Nnf>,
        mut next: BTreeSet<Nnf>,
    ) {
        loop {
            let eta = match new.iter().next().cloned() {
                Some(eta) => {
                    new.remove(&eta);
                    eta
                }
                None => {
                    // node fully processed: merge or create
                    for (i, node) in self.nodes.iter_mut().enumerate() {
                        if node.old == old && node.next == next {
                            node.incoming.extend(incoming.iter());
                            let _ = i;
                            return;
                        }
                    }
                    let id = self.nodes.len();
                    self.nodes.push(TableauNode {
                        incoming,
                        old: old.clone(),
                        next: next.clone(),
                    });
                    self.expand([id].into_iter().collect(), next, BTreeSet::new(), BTreeSet::new());
                    return;
                }
            };
            if old.contains(&eta) {
                continue;
            }
            match &eta {
                Nnf::False => return, // inconsistent node, discarded
                Nnf::True => {
                    old.insert(eta);
                }
                Nnf::Lit { atom, positive } => {
                    let negated = Nnf::Lit {
                        atom: atom.clone(),
                        positive: !positive,
                    };
                    if old.contains(&negated) {
                        return;
                    }
                    old.insert(eta);
                }
                Nnf::And(a, b) => {
                    new.insert((**a).clone());
                    new.insert((**b).clone());
                    old.insert(eta);
                }
                Nnf::Or(a, b) => {
                    old.insert(eta.clone());
                    let mut new1 = new.clone();
                    new1.insert((**a).clone());
                    self.expand(incoming.clone(), new1, old.clone(), next.clone());
                    new.insert((**b).clone());
                }
                Nnf::Next(a) => {
                    next.insert((**a).clone());
                    old.insert(eta);
                }
                Nnf::Until(a, b) => {
                    old.insert(eta.clone());
                    let mut new1 = new.clone();
                    new1.insert((**a).clone());
                    let mut next1 = next.clone();
                    next1.insert(eta.clone());
                    self.expand(incoming.clone(), new1, old.clone(), next1);
                    new.insert((**b).clone());
                }
                Nnf::Release(a, b) => {
                    old.insert(eta.clone());
                    let mut new1 = new.clone();
                    new1.insert((**b).clone());
                    let mut next1 = next.clone();
                    next1.insert(eta.clone());
                    self.expand(incoming.clone(), new1, old.clone(), next1);
                    new.insert((**a).clone());
                    new.insert((**b).clone());
                }
            }
        }
    }
}

fn until_subformulas(f: &Nnf, out: &mut Vec<Nnf>) {
    match f {
        Nnf::True | Nnf::False | Nnf::Lit { .. } => {}
        Nnf::Next(a) => until_subformulas(a, out),
        Nnf::And(a, b) | Nnf::Or(a, b) | Nnf::Release(a, b) => {
            until_subformulas(a, out);
            until_subformulas(b, out);
        }
        Nnf::Until(a, b) => {
            if !out.contains(f) {
                out.push(f.clone());
            }
            until_subformulas(a, out);
            until_subformulas(b, out);
        }
    }
}

fn node_label(node: &TableauNode) -> Option<LabelExpr> {
    LabelExpr::from_literals(node.old.iter().filter_map(|f| match f {
        Nnf::Lit { atom, positive } => Some((atom.clone(), *positive)),
        _ => None,
    }))
}

/// Translates an NNF formula to a Büchi automaton over label expressions
/// using the classic tableau construction, with counter-based
/// degeneralization of the per-Until acceptance sets.
pub fn ltl_to_buchi(f: &Nnf) -> BuchiAutomaton {
    let mut exp = Expansion { nodes: Vec::new() };
    exp.expand(
        [INIT].into_iter().collect(),
        [f.clone()].into_iter().collect(),
        BTreeSet::new(),
        BTreeSet::new(),
    );
    let nodes = exp.nodes;

    let mut untils = Vec::new();
    until_subformulas(f, &mut untils);
    let k = untils.len();

    // acceptance sets of the generalized automaton
    let in_accept = |node: &TableauNode, u: &Nnf| -> bool {
        let b = match u {
            Nnf::Until(_, b) => (**b).clone(),
            _ => unreachable!(),
        };
        node.old.contains(&b) || !node.old.contains(u)
    };

    // base states: a fresh initial state plus one per tableau node
    let base_init = 0usize;
    let base_of = |node: usize| node + 1;
    let base_count = nodes.len() + 1;
    let mut base_edges: Vec<(usize, LabelExpr, usize)> = Vec::new();
    for (i, node) in nodes.iter().enumerate() {
        let label = match node_label(node) {
            Some(l) => l,
            None => continue, // contradictory literal set, edge unsatisfiable
        };
        for &src in &node.incoming {
            let from = if src == INIT { base_init } else { base_of(src) };
            base_edges.push((from, label.clone(), base_of(i)));
        }
    }
    let base_accepting: Vec<BTreeSet<usize>> = untils
        .iter()
        .map(|u| {
            let mut set: BTreeSet<usize> = nodes
                .iter()
                .enumerate()
                .filter(|(_, n)| in_accept(n, u))
                .map(|(i, _)| base_of(i))
                .collect();
            set.insert(base_init);
            set
        })
        .collect();

    if k == 0 {
        // no Until subformulas: every state is accepting
        let names = (0..base_count).map(|i| format!("b{i}")).collect();
        return BuchiAutomaton {
            names,
            initials: [base_init].into_iter().collect(),
            finals: (0..base_count).collect(),
            transitions: base_edges
                .into_iter()
                .map(|(from, l, to)| BuchiTransition {
                    from,
                    label: BuchiLabel::Expr(l),
                    to,
                    witness: None,
                })
                .collect(),
        };
    }

    // degeneralization: counter i in 1..=k advances when the source state
    // belongs to the i-th acceptance set
    let idx = |q: usize, i: usize| -> usize { q * k + (i - 1) };
    let names = (0..base_count * k)
        .map(|x| format!("b{}#{}", x / k, x % k + 1))
        .collect();
    let mut transitions = Vec::new();
    for (from, l, to) in &base_edges {
        for i in 1..=k {
            let j = if base_accepting[i - 1].contains(from) {
                i % k + 1
            } else {
                i
            };
            transitions.push(BuchiTransition {
                from: idx(*from, i),
                label: BuchiLabel::Expr(l.clone()),
                to: idx(*to, j),
                witness: None,
            });
        }
    }
    let finals: BTreeSet<usize> = base_accepting[0]
        .iter()
        .map(|&q| idx(q, 1))
        .collect();
    BuchiAutomaton {
        names,
        initials: [idx(base_init, 1)].into_iter().collect(),
        finals,
        transitions,
    }
}

// ---------------------------------------------------------------------------
// Kripke structure → Büchi automaton
// ---------------------------------------------------------------------------

/// The behavior automaton of a Kripke structure: same states, transition
/// `(s, L(s), s')` per related pair, every state accepting.
pub fn kripke_to_buchi(k: &KripkeStructure) -> (BuchiAutomaton, Vec<StateId>) {
    let states: Vec<StateId> = k.states().iter().copied().collect();
    let index: BTreeMap<StateId, usize> =
        states.iter().enumerate().map(|(i, q)| (*q, i)).collect();
    let transitions = k
        .relation()
        .iter()
        .map(|(s, t)| BuchiTransition {
            from: index[s],
            label: BuchiLabel::KripkeState(*s),
            to: index[t],
            witness: None,
        })
        .collect();
    let b = BuchiAutomaton {
        names: states.iter().map(|q| k.state_name(*q).to_string()).collect(),
        initials: k.initials().iter().map(|q| index[q]).collect(),
        finals: (0..states.len()).collect(),
        transitions,
    };
    (b, states)
}

// ---------------------------------------------------------------------------
// Product and emptiness
// ---------------------------------------------------------------------------

/// The simplified product for the case where every state of `bk` is
/// accepting. A joint transition survives only if the language of the
/// Kripke state's label automaton intersects the language of the label
/// expression; the intersection witness is kept on the transition.
pub fn product(
    bk: &BuchiAutomaton,
    bl: &BuchiAutomaton,
    k: &KripkeStructure,
    env: &AtomEnv,
) -> Result<(BuchiAutomaton, Vec<(usize, usize)>), RltlError> {
    debug_assert_eq!(bk.finals.len(), bk.state_count());
    // memoized validity of (kripke label, label expression) pairs
    let mut cache: BTreeMap<(StateId, LabelExpr), Option<Term>> = BTreeMap::new();
    let mut valid = |q: StateId, e: &LabelExpr| -> Result<Option<Term>, RltlError> {
        if let Some(w) = cache.get(&(q, e.clone())) {
            return Ok(w.clone());
        }
        let inter = k.label(q).intersection(&crate::rltl::formula::label_expr_automaton(e, env)?);
        let w = inter.find_witness();
        cache.insert((q, e.clone()), w.clone());
        Ok(w)
    };

    let mut out = BuchiAutomaton::default();
    let mut ids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for &i in &bk.initials {
        for &j in &bl.initials {
            let id = out.names.len();
            out.names.push(format!("{}×{}", bk.names[i], bl.names[j]));
            ids.insert((i, j), id);
            pairs.push((i, j));
            out.initials.insert(id);
            stack.push((i, j));
        }
    }
    while let Some((i, j)) = stack.pop() {
        let from = ids[&(i, j)];
        let k_succ: Vec<(usize, StateId)> = bk
            .successors(i)
            .map(|(to, tr)| match &tr.label {
                BuchiLabel::KripkeState(q) => (to, *q),
                _ => unreachable!("bk labels are Kripke states"),
            })
            .collect();
        let l_succ: Vec<(usize, LabelExpr)> = bl
            .successors(j)
            .map(|(to, tr)| match &tr.label {
                BuchiLabel::Expr(e) => (to, e.clone()),
                _ => unreachable!("bl labels are expressions"),
            })
            .collect();
        for (ik, q) in &k_succ {
            for (jl, e) in &l_succ {
                let witness = match valid(*q, e)? {
                    Some(w) => w,
                    None => continue,
                };
                let key = (*ik, *jl);
                let to = *ids.entry(key).or_insert_with(|| {
                    let id = out.names.len();
                    out.names.push(format!("{}×{}", bk.names[*ik], bl.names[*jl]));
                    pairs.push(key);
                    stack.push(key);
                    id
                });
                out.transitions.push(BuchiTransition {
                    from,
                    label: BuchiLabel::Pair(*q, e.clone()),
                    to,
                    witness: Some(witness),
                });
            }
        }
    }
    for ((i, j), id) in &ids {
        if bk.finals.contains(i) && bl.finals.contains(j) {
            out.finals.insert(*id);
        }
    }
    Ok((out, pairs))
}

/// An accepting lasso: the prefix leads from an initial state to the cycle,
/// the cycle contains an accepting state and repeats forever.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lasso {
    pub prefix: Vec<usize>,
    pub cycle: Vec<usize>,
}

/// Nested depth-first search for an accepting cycle. Returns `None` when
/// the language is empty.
pub fn is_empty_buchi(b: &BuchiAutomaton) -> Option<Lasso> {
    let n = b.state_count();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for t in &b.transitions {
        if !succ[t.from].contains(&t.to) {
            succ[t.from].push(t.to);
        }
    }
    let mut search = Ndfs {
        succ: &succ,
        accepting: &b.finals,
        blue: vec![false; n],
        red: vec![false; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        found: None,
    };
    for &init in &b.initials {
        if !search.blue[init] {
            search.blue_dfs(init);
            if search.found.is_some() {
                break;
            }
        }
    }
    search.found
}

struct Ndfs<'a> {
    succ: &'a [Vec<usize>],
    accepting: &'a BTreeSet<usize>,
    blue: Vec<bool>,
    red: Vec<bool>,
    on_stack: Vec<bool>,
    stack: Vec<usize>,
    found: Option<Lasso>,
}

impl Ndfs<'_> {
    fn blue_dfs(&mut self, v: usize) {
        self.blue[v] = true;
        self.on_stack[v] = true;
        self.stack.push(v);
        for i in 0..self.succ[v].len() {
            let w = self.succ[v][i];
            if !self.blue[w] {
                self.blue_dfs(w);
                if self.found.is_some() {
                    return;
                }
            }
        }
        // postorder: launch the inner search from accepting states
        if self.accepting.contains(&v) && self.found.is_none() {
            let mut path = Vec::new();
            if self.red_dfs(v, v, &mut path) {
                // path: seed → … → w where w closes the cycle
                let seed_pos = self.stack.len() - 1;
                debug_assert_eq!(self.stack[seed_pos], v);
                let hit = *path.last().expect("non-empty cycle path");
                let mut cycle = vec![v];
                cycle.extend(path[..path.len() - 1].iter().copied());
                if hit != v {
                    // the inner search hit a state on the outer stack below
                    // the seed; the stack segment closes the cycle
                    let pos = self.stack.iter().position(|&s| s == hit).unwrap();
                    cycle.extend(self.stack[pos..seed_pos].iter().copied());
                }
                let prefix = self.stack[..self.stack.len() - 1].to_vec();
                self.found = Some(Lasso { prefix, cycle });
                return;
            }
        }
        self.stack.pop();
        self.on_stack[v] = false;
    }

    fn red_dfs(&mut self, v: usize, seed: usize, path: &mut Vec<usize>) -> bool {
        for i in 0..self.succ[v].len() {
            let w = self.succ[v][i];
            if w == seed || self.on_stack[w] {
                path.push(w);
                return true;
            }
            if !self.red[w] {
                self.red[w] = true;
                path.push(w);
                if self.red_dfs(w, seed, path) {
                    return true;
                }
                path.pop();
            }
        }
        false
    }
}

// ---------------------------------------------------------------------------
// Top-level check
// ---------------------------------------------------------------------------

/// Outcome of a model-checking run. A failing run carries a lasso through
/// the Kripke structure together with each visited state's canonical term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails {
        prefix: Vec<StateId>,
        cycle: Vec<StateId>,
        witnesses: BTreeMap<StateId, Option<Term>>,
    },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }
}

/// Checks a formula on a Kripke structure: the negated formula is
/// translated to a Büchi automaton, multiplied with the structure's
/// behavior automaton, and the property holds exactly when the product has
/// no accepting lasso.
pub fn check(k: &KripkeStructure, f: &Formula, env: &AtomEnv) -> Result<Verdict, RltlError> {
    let negated = Formula::not(f.clone()).to_nnf();
    let bl = ltl_to_buchi(&negated);
    let (bk, kripke_states) = kripke_to_buchi(k);
    let (prod, pairs) = product(&bk, &bl, k, env)?;
    match is_empty_buchi(&prod) {
        None => Ok(Verdict::Holds),
        Some(lasso) => {
            // project product states back onto Kripke states
            let project = |idx: usize| -> StateId { kripke_states[pairs[idx].0] };
            let prefix: Vec<StateId> = lasso.prefix.iter().map(|&i| project(i)).collect();
            let cycle: Vec<StateId> = lasso.cycle.iter().map(|&i| project(i)).collect();
            let mut witnesses = BTreeMap::new();
            for q in prefix.iter().chain(cycle.iter()) {
                witnesses
                    .entry(*q)
                    .or_insert_with(|| k.automaton().canonical_term(*q).ok().flatten());
            }
            Ok(Verdict::Fails {
                prefix,
                cycle,
                witnesses,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::TreeAutomaton;
    use crate::completion::{complete, CompletionConfig};
    use crate::kripke::{build_kripke, InitSpec};
    use crate::rltl::formula::Atom;
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

    fn atom(t: Term) -> Formula {
        Formula::Atom(Atom::TermSet([t].into_iter().collect()))
    }

    fn ex2_k2() -> KripkeStructure {
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
        let a0 = TreeAutomaton::from_terms(&[un("f", c("a"))].into_iter().collect(), &sig_fgh())
            .unwrap();
        let astar = complete(&a0, &trs, &CompletionConfig::default())
            .unwrap()
            .automaton;
        let r2: std::collections::BTreeSet<usize> = [2, 3, 4].into_iter().collect();
        build_kripke(&astar, &r2, &InitSpec::FinalStates).unwrap()
    }

    fn check_on(k: &KripkeStructure, f: &Formula) -> Verdict {
        let named = BTreeMap::new();
        let sig = k.automaton().signature().clone();
        let env = AtomEnv::new(&sig, &named);
        check(k, f, &env).unwrap()
    }

    #[test]
    fn self_loop_on_accepting_state_has_a_lasso() {
        let b = BuchiAutomaton {
            names: vec!["s".into()],
            initials: [0].into_iter().collect(),
            finals: [0].into_iter().collect(),
            transitions: vec![BuchiTransition {
                from: 0,
                label: BuchiLabel::Expr(LabelExpr::empty()),
                to: 0,
                witness: None,
            }],
        };
        assert_eq!(
            is_empty_buchi(&b),
            Some(Lasso {
                prefix: vec![],
                cycle: vec![0],
            })
        );
    }

    #[test]
    fn accepting_state_without_cycle_is_empty() {
        let b = BuchiAutomaton {
            names: vec!["s".into(), "t".into()],
            initials: [0].into_iter().collect(),
            finals: [1].into_iter().collect(),
            transitions: vec![BuchiTransition {
                from: 0,
                label: BuchiLabel::Expr(LabelExpr::empty()),
                to: 1,
                witness: None,
            }],
        };
        assert_eq!(is_empty_buchi(&b), None);
    }

    #[test]
    fn kripke_to_buchi_shape_of_k2() {
        let k = ex2_k2();
        let (b, states) = kripke_to_buchi(&k);
        assert_eq!(b.state_count(), k.states().len());
        assert_eq!(b.finals.len(), b.state_count());
        assert_eq!(b.initials.len(), 1);
        assert_eq!(states.len(), b.state_count());
        // K₂'s three-cycle shows up as three transitions among its states
        assert_eq!(b.transitions.len(), 3);
    }

    #[test]
    fn g_universal_holds() {
        let k = ex2_k2();
        let f = Formula::globally(Formula::Atom(Atom::Universal));
        assert!(check_on(&k, &f).holds());
    }

    #[test]
    fn example_g_implies_next_holds() {
        let k = ex2_k2();
        let f = Formula::globally(Formula::implies(
            atom(un("f", c("a"))),
            Formula::next(atom(un("g", c("a")))),
        ));
        assert!(check_on(&k, &f).holds());
    }

    #[test]
    fn negative_control_fails_on_first_edge() {
        let k = ex2_k2();
        let f = Formula::globally(Formula::implies(
            atom(un("f", c("a"))),
            Formula::next(atom(un("h", c("a")))),
        ));
        match check_on(&k, &f) {
            Verdict::Holds => panic!("expected a counterexample"),
            Verdict::Fails {
                prefix,
                cycle,
                witnesses,
            } => {
                assert!(!cycle.is_empty());
                let path: Vec<StateId> = prefix.iter().chain(cycle.iter()).copied().collect();
                assert!(path.len() >= 2);
                assert_eq!(witnesses[&path[0]], Some(un("f", c("a"))));
                assert_eq!(witnesses[&path[1]], Some(un("g", c("a"))));
                // the lasso is a real path of the structure
                for w in path.windows(2) {
                    assert!(k.relation().contains(&(w[0], w[1])));
                }
                let last = *cycle.last().unwrap();
                assert!(k.relation().contains(&(last, cycle[0])));
            }
        }
    }

    #[test]
    fn next_b_holds_on_the_two_chain() {
        let sig = sig_fgh();
        let trs = Trs::new(sig.clone(), vec![(c("a"), c("b"))]).unwrap();
        let a0 = TreeAutomaton::from_terms(&[c("a")].into_iter().collect(), &sig).unwrap();
        let astar = complete(&a0, &trs, &CompletionConfig::default())
            .unwrap()
            .automaton;
        let subset = [0usize].into_iter().collect();
        let init = InitSpec::SubTerms([c("a")].into_iter().collect());
        let k = build_kripke(&astar, &subset, &init).unwrap();
        assert!(check_on(&k, &Formula::next(atom(c("b")))).holds());
        assert!(!check_on(&k, &Formula::next(atom(c("a")))).holds());
    }

    #[test]
    fn product_for_negated_formula_of_example_is_empty() {
        let k = ex2_k2();
        // ¬(G({f(a)} ⇒ X{g(a)})) = F({f(a)} ∧ X ¬{g(a)})
        let f = Formula::finally(Formula::and(
            atom(un("f", c("a"))),
            Formula::next(Formula::not(atom(un("g", c("a"))))),
        ));
        let bl = ltl_to_buchi(&f.to_nnf());
        let (bk, _) = kripke_to_buchi(&k);
        let named = BTreeMap::new();
        let sig = sig_fgh();
        let env = AtomEnv::new(&sig, &named);
        let (prod, _) = product(&bk, &bl, &k, &env).unwrap();
        assert_eq!(is_empty_buchi(&prod), None);
    }

    #[test]
    fn product_with_universal_self_loop_matches_bk_emptiness() {
        let k = ex2_k2();
        let (bk, _) = kripke_to_buchi(&k);
        let bl = BuchiAutomaton {
            names: vec!["t".into()],
            initials: [0].into_iter().collect(),
            finals: [0].into_iter().collect(),
            transitions: vec![BuchiTransition {
                from: 0,
                label: BuchiLabel::Expr(LabelExpr::empty()),
                to: 0,
                witness: None,
            }],
        };
        let named = BTreeMap::new();
        let sig = sig_fgh();
        let env = AtomEnv::new(&sig, &named);
        let (prod, _) = product(&bk, &bl, &k, &env).unwrap();
        // K₂ has an infinite run, so the product with "anything goes" does too
        assert!(is_empty_buchi(&prod).is_some());
        // and every kept transition carries an intersection witness
        assert!(prod.transitions.iter().all(|t| t.witness.is_some()));
    }

    #[test]
    fn until_and_release_verdicts() {
        let k = ex2_k2();
        // on the f→g→h cycle from f(a): F {h(a)} holds, G {f(a)} fails
        let f1 = Formula::finally(atom(un("h", c("a"))));
        assert!(check_on(&k, &f1).holds());
        let f2 = Formula::globally(atom(un("f", c("a"))));
        assert!(!check_on(&k, &f2).holds());
        // {f(a)} U {g(a)}: f(a) holds at step 0, g(a) at step 1
        let f3 = Formula::until(atom(un("f", c("a"))), atom(un("g", c("a"))));
        assert!(check_on(&k, &f3).holds());
        // {f(a)} U {h(a)}: fails because g(a) interrupts before h(a)
        let f4 = Formula::until(atom(un("f", c("a"))), atom(un("h", c("a"))));
        assert!(!check_on(&k, &f4).holds());
    }
}
