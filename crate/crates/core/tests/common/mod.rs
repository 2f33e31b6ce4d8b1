//! Shared fixtures for the integration tests: a corpus of finite-state
//! rewriting systems, an LTL oracle on ultimately periodic words, and
//! exhaustive lasso enumeration for small Kripke structures.

#![allow(dead_code)]

use std::collections::BTreeSet;

use tact_core::kripke::KripkeStructure;
use tact_core::rltl::formula::{atom_automaton, AtomEnv, Formula, Nnf};
use tact_core::{Signature, StateId, Symbol, Term, Trs};

pub fn c(name: &str) -> Term {
    Term::constant(name)
}

pub fn un(name: &str, arg: Term) -> Term {
    Term::app(Symbol::new(name, 1), vec![arg])
}

pub fn app(name: &str, args: Vec<Term>) -> Term {
    Term::app(Symbol::new(name, args.len()), args)
}

pub fn v(name: &str) -> Term {
    Term::var(name)
}

pub fn sig_fgh() -> Signature {
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

pub fn ex2_trs() -> Trs {
    Trs::new(
        sig_fgh(),
        vec![
            (c("a"), c("b")),
            (c("b"), c("c")),
            (un("f", c("c")), un("g", c("a"))),
            (un("g", c("c")), un("h", c("a"))),
            (un("h", c("c")), un("f", c("a"))),
        ],
    )
    .unwrap()
}

/// A corpus entry: a rewriting system whose reachable set from `initial`
/// is finite.
pub struct CorpusEntry {
    pub name: &'static str,
    pub trs: Trs,
    pub initial: BTreeSet<Term>,
}

fn entry(name: &'static str, trs: Trs, initial: impl IntoIterator<Item = Term>) -> CorpusEntry {
    CorpusEntry {
        name,
        trs,
        initial: initial.into_iter().collect(),
    }
}

/// Ten finite-state systems exercising chains, cycles, token rings,
/// nesting, variables, and collapsing rules.
pub fn corpus() -> Vec<CorpusEntry> {
    let abc = Signature::new(vec![
        Symbol::new("a", 0),
        Symbol::new("b", 0),
        Symbol::new("c", 0),
    ])
    .unwrap();
    let fab = Signature::new(vec![
        Symbol::new("f", 1),
        Symbol::new("g", 1),
        Symbol::new("a", 0),
        Symbol::new("b", 0),
    ])
    .unwrap();
    let ring2 = Signature::new(vec![
        Symbol::new("n2", 2),
        Symbol::new("t", 0),
        Symbol::new("o", 0),
    ])
    .unwrap();
    let ring3 = Signature::new(vec![
        Symbol::new("n3", 3),
        Symbol::new("t", 0),
        Symbol::new("o", 0),
    ])
    .unwrap();
    let sz = Signature::new(vec![Symbol::new("s", 1), Symbol::new("z", 0)]).unwrap();

    vec![
        entry("ex2", ex2_trs(), [un("f", c("a"))]),
        entry(
            "chain",
            Trs::new(abc.clone(), vec![(c("a"), c("b")), (c("b"), c("c"))]).unwrap(),
            [c("a")],
        ),
        entry(
            "two-cycle",
            Trs::new(abc.clone(), vec![(c("a"), c("b")), (c("b"), c("a"))]).unwrap(),
            [c("a")],
        ),
        entry(
            "three-cycle",
            Trs::new(
                abc,
                vec![(c("a"), c("b")), (c("b"), c("c")), (c("c"), c("a"))],
            )
            .unwrap(),
            [c("a")],
        ),
        entry(
            "token-ring-2",
            Trs::new(
                ring2,
                vec![
                    (app("n2", vec![c("t"), c("o")]), app("n2", vec![c("o"), c("t")])),
                    (app("n2", vec![c("o"), c("t")]), app("n2", vec![c("t"), c("o")])),
                ],
            )
            .unwrap(),
            [app("n2", vec![c("t"), c("o")])],
        ),
        entry(
            "token-ring-3",
            Trs::new(
                ring3,
                vec![
                    (
                        app("n3", vec![c("t"), c("o"), c("o")]),
                        app("n3", vec![c("o"), c("t"), c("o")]),
                    ),
                    (
                        app("n3", vec![c("o"), c("t"), c("o")]),
                        app("n3", vec![c("o"), c("o"), c("t")]),
                    ),
                    (
                        app("n3", vec![c("o"), c("o"), c("t")]),
                        app("n3", vec![c("t"), c("o"), c("o")]),
                    ),
                ],
            )
            .unwrap(),
            [app("n3", vec![c("t"), c("o"), c("o")])],
        ),
        entry(
            "nested",
            Trs::new(sig_fgh(), vec![(c("a"), c("b"))]).unwrap(),
            [un("f", un("f", c("a")))],
        ),
        entry(
            "variable-rule",
            Trs::new(fab.clone(), vec![(un("f", v("x")), un("g", v("x"))), (c("a"), c("b"))])
                .unwrap(),
            [un("f", c("a"))],
        ),
        entry(
            "collapsing",
            Trs::new(fab, vec![(un("f", v("x")), v("x"))]).unwrap(),
            [un("f", un("f", c("a")))],
        ),
        entry(
            "counter-mod-3",
            Trs::new(sz, vec![(un("s", un("s", un("s", c("z")))), c("z"))]).unwrap(),
            [un("s", un("s", un("s", c("z"))))],
        ),
    ]
}

// ---------------------------------------------------------------------------
// LTL oracle on ultimately periodic words
// ---------------------------------------------------------------------------

/// A lasso through a Kripke structure: `prefix` then `cycle` forever.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeLasso {
    pub prefix: Vec<StateId>,
    pub cycle: Vec<StateId>,
}

impl KripkeLasso {
    fn positions(&self) -> Vec<StateId> {
        self.prefix.iter().chain(self.cycle.iter()).copied().collect()
    }

    fn succ(&self, i: usize) -> usize {
        if i + 1 < self.prefix.len() + self.cycle.len() {
            i + 1
        } else {
            self.prefix.len()
        }
    }
}

/// Does the atom hold at Kripke state `q`? Existential over the label
/// language: non-empty intersection with the atom automaton.
fn atom_holds(k: &KripkeStructure, q: StateId, atom: &tact_core::Atom, env: &AtomEnv) -> bool {
    let a = atom_automaton(atom, true, env).expect("corpus atoms resolve");
    !k.label(q).intersection(&a).language_is_empty()
}

/// Direct LTL evaluation of `f` on the ultimately periodic word of the
/// lasso, by fixpoint iteration over the finitely many positions: least
/// fixpoint for Until, greatest for Release.
pub fn eval_on_lasso(
    k: &KripkeStructure,
    lasso: &KripkeLasso,
    f: &Formula,
    env: &AtomEnv,
) -> bool {
    let word = lasso.positions();
    let n = word.len();
    fn eval(
        f: &Nnf,
        k: &KripkeStructure,
        lasso: &KripkeLasso,
        word: &[StateId],
        env: &AtomEnv,
    ) -> Vec<bool> {
        let n = word.len();
        match f {
            Nnf::True => vec![true; n],
            Nnf::False => vec![false; n],
            Nnf::Lit { atom, positive } => word
                .iter()
                .map(|q| atom_holds(k, *q, atom, env) == *positive)
                .collect(),
            Nnf::And(a, b) => {
                let (va, vb) = (eval(a, k, lasso, word, env), eval(b, k, lasso, word, env));
                (0..n).map(|i| va[i] && vb[i]).collect()
            }
            Nnf::Or(a, b) => {
                let (va, vb) = (eval(a, k, lasso, word, env), eval(b, k, lasso, word, env));
                (0..n).map(|i| va[i] || vb[i]).collect()
            }
            Nnf::Next(a) => {
                let va = eval(a, k, lasso, word, env);
                (0..n).map(|i| va[lasso.succ(i)]).collect()
            }
            Nnf::Until(a, b) => {
                let (va, vb) = (eval(a, k, lasso, word, env), eval(b, k, lasso, word, env));
                let mut out = vec![false; n];
                loop {
                    let mut changed = false;
                    for i in 0..n {
                        let next = vb[i] || (va[i] && out[lasso.succ(i)]);
                        if next != out[i] {
                            out[i] = next;
                            changed = true;
                        }
                    }
                    if !changed {
                        return out;
                    }
                }
            }
            Nnf::Release(a, b) => {
                let (va, vb) = (eval(a, k, lasso, word, env), eval(b, k, lasso, word, env));
                let mut out = vec![true; n];
                loop {
                    let mut changed = false;
                    for i in 0..n {
                        let next = vb[i] && (va[i] || out[lasso.succ(i)]);
                        if next != out[i] {
                            out[i] = next;
                            changed = true;
                        }
                    }
                    if !changed {
                        return out;
                    }
                }
            }
        }
    }
    assert!(n > 0 && !lasso.cycle.is_empty());
    eval(&f.to_nnf(), k, lasso, &word, env)[0]
}

/// Enumerates every lasso from the initial states with
/// `prefix + cycle ≤ max_len`, repeats allowed.
pub fn enumerate_lassos(k: &KripkeStructure, max_len: usize) -> Vec<KripkeLasso> {
    let mut out = Vec::new();
    let mut path: Vec<StateId> = Vec::new();
    fn go(
        k: &KripkeStructure,
        path: &mut Vec<StateId>,
        max_len: usize,
        out: &mut Vec<KripkeLasso>,
    ) {
        let last = *path.last().unwrap();
        for q in k.successors(last) {
            // closing edge: every occurrence of q on the path starts a cycle
            for (j, p) in path.iter().enumerate() {
                if *p == q {
                    out.push(KripkeLasso {
                        prefix: path[..j].to_vec(),
                        cycle: path[j..].to_vec(),
                    });
                }
            }
            if path.len() < max_len {
                path.push(q);
                go(k, path, max_len, out);
                path.pop();
            }
        }
    }
    for init in k.initials() {
        path.push(*init);
        go(k, &mut path, max_len, &mut out);
        path.pop();
    }
    out
}
