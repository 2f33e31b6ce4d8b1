//! Tree automata completion with ε-transitions.
//!
//! A critical pair is an instance `lσ` of a rule left-hand side (σ mapping
//! variables to states) recognized at some state `q` with a final ground
//! step. Solving it makes the automaton recognize `rσ` in a state `q'` and
//! records the abstract rewriting step as the ε-transition `q' → q`, tagged
//! with the rule index. Iterating completion steps until no pair is unsolved
//! yields the fixpoint automaton.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::automata::{AutomataError, StateId, TreeAutomaton};
use crate::term::{Rule, Substitution, Term, Trs};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CompletionError {
    #[error("input automaton does not satisfy properties 1 and 2")]
    InputNotNormalized,
    #[error("no fixpoint after the maximum of {max_steps} completion steps")]
    MaxStepsExceeded { max_steps: usize },
    #[error("completion exceeded the budget of {max_states} states")]
    StateBudgetExceeded { max_states: usize },
    #[error("configuration {config} collapsed to existing state {state} during normalization")]
    CollapsedConfiguration { config: String, state: StateId },
    #[error(transparent)]
    Automata(#[from] AutomataError),
}

/// Bounds for a completion run. Completion assumes a fixpoint exists;
/// these bounds turn divergence into an error.
#[derive(Debug, Clone, Copy)]
pub struct CompletionConfig {
    pub max_steps: usize,
    pub max_states: usize,
}

impl Default for CompletionConfig {
    fn default() -> Self {
        CompletionConfig {
            max_steps: 1000,
            max_states: 10_000,
        }
    }
}

/// A rule instance `lσ` recognized at `target` with a final ground step.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CriticalPair {
    pub rule_index: usize,
    pub sigma: Substitution,
    pub target: StateId,
}

/// One transition added during completion, for the step log.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AddedTransition {
    Ground { text: String, rule: usize },
    Epsilon { text: String, rule: usize },
    Tag { text: String, rule: usize },
}

#[derive(Debug, Clone)]
pub struct CompletionResult {
    pub automaton: TreeAutomaton,
    pub steps_taken: usize,
    /// Per completion step, the transitions added in that step.
    pub log: Vec<Vec<AddedTransition>>,
}

impl CompletionResult {
    /// One line per added transition, prefixed by the step number.
    pub fn log_text(&self) -> String {
        let mut out = String::new();
        for (step, added) in self.log.iter().enumerate() {
            for a in added {
                let (kind, text, rule) = match a {
                    AddedTransition::Ground { text, rule } => ("ground", text, rule),
                    AddedTransition::Epsilon { text, rule } => ("epsilon", text, rule),
                    AddedTransition::Tag { text, rule } => ("tag", text, rule),
                };
                out.push_str(&format!("step {} rule {} {} {}\n", step + 1, rule, kind, text));
            }
        }
        out
    }
}

/// All critical pairs of `a` against `trs`: triples (rule, σ, q) with
/// `lσ →* q` whose last step is a ground transition. Variables of `l` may
/// bind any state whose ε-closure covers the required argument state.
pub fn find_critical_pairs(a: &TreeAutomaton, trs: &Trs) -> Vec<CriticalPair> {
    // reverse ε-closure: for each state, the states that reach it by ε-steps
    let mut reached_from: BTreeMap<StateId, BTreeSet<StateId>> = BTreeMap::new();
    for q in a.states() {
        for r in a.eps_closure(q) {
            reached_from.entry(r).or_default().insert(q);
        }
    }
    let mut out = BTreeSet::new();
    for rule in trs.rules() {
        for (sigma, target) in match_lhs_grounded(a, &rule.lhs, &reached_from) {
            out.insert(CriticalPair {
                rule_index: rule.index,
                sigma,
                target,
            });
        }
    }
    out.into_iter().collect()
}

/// Matches `l` against the automaton with a mandatory ground step at the
/// root; returns every (σ, q) with `lσ →* q` ending in a ground transition.
fn match_lhs_grounded(
    a: &TreeAutomaton,
    l: &Term,
    reached_from: &BTreeMap<StateId, BTreeSet<StateId>>,
) -> Vec<(Substitution, StateId)> {
    let (head, args) = match l {
        Term::App(f, args) => (f, args),
        // rule left-hand sides are never variables; state leaves do not occur
        _ => return Vec::new(),
    };
    let mut out = Vec::new();
    for tr in a.delta() {
        if tr.head != *head {
            continue;
        }
        let mut sigmas = vec![Substitution::new()];
        for (sub, q) in args.iter().zip(&tr.args) {
            sigmas = extend_matches(a, sub, *q, sigmas, reached_from);
            if sigmas.is_empty() {
                break;
            }
        }
        for sigma in sigmas {
            out.push((sigma, tr.target));
        }
    }
    out
}

/// All ways to extend the given substitutions so that `pattern·σ →* q`
/// (ε-steps allowed anywhere, including as the last step).
fn extend_matches(
    a: &TreeAutomaton,
    pattern: &Term,
    q: StateId,
    sigmas: Vec<Substitution>,
    reached_from: &BTreeMap<StateId, BTreeSet<StateId>>,
) -> Vec<Substitution> {
    match pattern {
        Term::Var(v) => {
            let empty = BTreeSet::new();
            let candidates = reached_from.get(&q).unwrap_or(&empty);
            let mut out = Vec::new();
            for sigma in sigmas {
                match sigma.get(v) {
                    Some(Term::State(bound)) => {
                        if candidates.contains(bound) {
                            out.push(sigma);
                        }
                    }
                    Some(_) => {}
                    None => {
                        for cand in candidates {
                            let mut s = sigma.clone();
                            s.bind(v.clone(), Term::State(*cand));
                            out.push(s);
                        }
                    }
                }
            }
            out
        }
        Term::State(_) => Vec::new(),
        Term::App(f, args) => {
            let mut out = Vec::new();
            for tr in a.delta() {
                if tr.head != *f {
                    continue;
                }
                // the target of this inner ground step may still ε-step up to q
                if !a.eps_closure(tr.target).contains(&q) {
                    continue;
                }
                let mut cur = sigmas.clone();
                for (sub, aq) in args.iter().zip(&tr.args) {
                    cur = extend_matches(a, sub, *aq, cur, reached_from);
                    if cur.is_empty() {
                        break;
                    }
                }
                out.extend(cur);
            }
            out
        }
    }
}

/// True when the pair is already covered: `rσ` reaches some `q'` with a
/// final ground step and the ε-transition `q' → q` exists (tags aside).
pub fn is_solved(a: &TreeAutomaton, cp: &CriticalPair, trs: &Trs) -> bool {
    let rule = &trs.rules()[cp.rule_index];
    let rhs = cp.sigma.apply(&rule.rhs);
    match a.grounded_target(&rhs) {
        Ok(Some(qp)) => a.epsilon_tags(qp, cp.target).is_some(),
        _ => false,
    }
}

/// Allocates fresh states against the configured budget.
pub struct StateAllocator {
    max_states: usize,
}

impl StateAllocator {
    pub fn new(max_states: usize) -> Self {
        StateAllocator { max_states }
    }

    fn fresh(&self, a: &mut TreeAutomaton) -> Result<StateId, CompletionError> {
        if a.state_count() >= self.max_states {
            return Err(CompletionError::StateBudgetExceeded {
                max_states: self.max_states,
            });
        }
        Ok(a.add_fresh_state())
    }
}

/// Normalization of `s → target` (the ↓ / ↓' decomposition): first `s` is
/// rewritten by the ground transitions to its unique normal form, then the
/// leftmost-innermost non-state subterm is repeatedly split off through a
/// fresh state until the remainder is a single normalized transition.
/// Returns the states and transitions added to `a`.
pub fn normalize(
    a: &mut TreeAutomaton,
    s: &Term,
    target: StateId,
    alloc: &StateAllocator,
    added: &mut Vec<String>,
) -> Result<(), CompletionError> {
    let t = delta_normal_form(a, s);
    match t {
        Term::State(p) => {
            if p == target {
                Ok(())
            } else {
                Err(CompletionError::CollapsedConfiguration {
                    config: s.to_string(),
                    state: p,
                })
            }
        }
        Term::App(ref f, ref args) if args.iter().all(|x| matches!(x, Term::State(_))) => {
            let arg_states: Vec<StateId> = args
                .iter()
                .map(|x| match x {
                    Term::State(q) => *q,
                    _ => unreachable!(),
                })
                .collect();
            added.push(format!("{} -> {}", a.render_config(&t), a.state_name(target)));
            a.add_ground(f.clone(), arg_states, target);
            Ok(())
        }
        Term::App(..) => {
            let pos = leftmost_innermost_nonstate(&t).expect("non-normalized configuration");
            let sub = t.subterm_at(&pos).unwrap().clone();
            let fresh = alloc.fresh(a)?;
            normalize(a, &sub, fresh, alloc, added)?;
            let rest = t.replace_at(&pos, &Term::State(fresh)).unwrap();
            normalize(a, &rest, target, alloc, added)
        }
        Term::Var(v) => Err(AutomataError::NonGroundTerm(v).into()),
    }
}

/// Rewrites a configuration bottom-up by the ground transitions until no
/// redex remains; unique under property 1.
fn delta_normal_form(a: &TreeAutomaton, s: &Term) -> Term {
    match s {
        Term::Var(_) | Term::State(_) => s.clone(),
        Term::App(f, args) => {
            let norm_args: Vec<Term> = args.iter().map(|x| delta_normal_form(a, x)).collect();
            if norm_args.iter().all(|x| matches!(x, Term::State(_))) {
                let arg_states: Vec<StateId> = norm_args
                    .iter()
                    .map(|x| match x {
                        Term::State(q) => *q,
                        _ => unreachable!(),
                    })
                    .collect();
                for tr in a.delta() {
                    if tr.head == *f && tr.args == arg_states {
                        return Term::State(tr.target);
                    }
                }
            }
            Term::App(f.clone(), norm_args)
        }
    }
}

/// Position of the leftmost-innermost subterm that is not a state constant
/// but whose arguments all are; `None` when the term is fully normalized.
fn leftmost_innermost_nonstate(t: &Term) -> Option<crate::term::Position> {
    match t {
        Term::App(_, args) => {
            for (i, sub) in args.iter().enumerate() {
                if matches!(sub, Term::State(_)) {
                    continue;
                }
                let inner = leftmost_innermost_nonstate(sub);
                let mut path = vec![i + 1];
                match inner {
                    Some(p) => {
                        path.extend(p.0);
                        return Some(crate::term::Position(path));
                    }
                    None => return Some(crate::term::Position(path)),
                }
            }
            None
        }
        _ => None,
    }
}

/// One completion step: solves every critical pair of the input automaton.
/// Returns the new automaton, the number of additions (transitions and
/// tags), and the step log.
pub fn completion_step(
    a: &TreeAutomaton,
    trs: &Trs,
    cfg: &CompletionConfig,
) -> Result<(TreeAutomaton, usize, Vec<AddedTransition>), CompletionError> {
    let alloc = StateAllocator::new(cfg.max_states);
    let mut work = a.clone();
    let mut added_count = 0usize;
    let mut log = Vec::new();
    for cp in find_critical_pairs(a, trs) {
        let rule: &Rule = &trs.rules()[cp.rule_index];
        let rhs = cp.sigma.apply(&rule.rhs);
        let tags: BTreeSet<usize> = [cp.rule_index].into_iter().collect();
        // re-evaluate against the working automaton: an earlier pair of this
        // step may already have produced the needed transitions
        let qp = match work.grounded_target(&rhs)? {
            Some(qp) => qp,
            None => {
                let fresh = alloc.fresh(&mut work)?;
                let mut ground_added = Vec::new();
                normalize(&mut work, &rhs, fresh, &alloc, &mut ground_added)?;
                added_count += ground_added.len();
                for text in ground_added {
                    log.push(AddedTransition::Ground {
                        text,
                        rule: cp.rule_index,
                    });
                }
                fresh
            }
        };
        let had_eps = work.epsilon_tags(qp, cp.target).is_some();
        if work.add_epsilon(qp, cp.target, tags) {
            added_count += 1;
            let text = format!("{} -> {}", work.state_name(qp), work.state_name(cp.target));
            log.push(if had_eps {
                AddedTransition::Tag {
                    text,
                    rule: cp.rule_index,
                }
            } else {
                AddedTransition::Epsilon {
                    text,
                    rule: cp.rule_index,
                }
            });
        }
    }
    Ok((work, added_count, log))
}

/// Iterates completion steps until a fixpoint (a step that adds nothing) or
/// until the step bound is hit.
pub fn complete(
    a0: &TreeAutomaton,
    trs: &Trs,
    cfg: &CompletionConfig,
) -> Result<CompletionResult, CompletionError> {
    if !a0.validate().both_hold() {
        return Err(CompletionError::InputNotNormalized);
    }
    let mut current = a0.clone();
    let mut log = Vec::new();
    for step in 0..=cfg.max_steps {
        let (next, added, step_log) = completion_step(&current, trs, cfg)?;
        if added == 0 {
            return Ok(CompletionResult {
                automaton: next,
                steps_taken: step,
                log,
            });
        }
        if step == cfg.max_steps {
            break;
        }
        log.push(step_log);
        current = next;
    }
    Err(CompletionError::MaxStepsExceeded {
        max_steps: cfg.max_steps,
    })
}
