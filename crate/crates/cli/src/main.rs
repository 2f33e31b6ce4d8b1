//! `tact`: completion, model checking, and safety analysis of term
//! rewriting systems from self-contained problem files.
//!
//! Exit codes: 0 success (fixpoint reached / HOLDS / SAFE), 1 property
//! failure (FAILS / UNSAFE), 2 usage or parse error, 3 completion bound
//! exceeded.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tact_core::completion::{complete, CompletionConfig, CompletionError, CompletionResult};
use tact_core::kripke::{build_kripke, InitSpec, KripkeStructure};
use tact_core::problem::{parse_formula, parse_problem, parse_term, ProblemFile};
use tact_core::rltl::{check, AtomEnv, Verdict};
use tact_core::{StateId, TreeAutomaton, Trs};

#[derive(Parser)]
#[command(name = "tact", version, about = "Tree automata completion toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Complete an initial language under a TRS and print the fixpoint
    Complete {
        #[command(flatten)]
        pipeline: PipelineArgs,
        /// Write the fixpoint automaton to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Model-check a formula on the extracted Kripke structure
    Check {
        #[command(flatten)]
        pipeline: PipelineArgs,
        #[command(flatten)]
        kripke: KripkeArgs,
        /// File holding one formula
        #[arg(long)]
        formula_file: PathBuf,
        /// Write the Kripke structure as DOT to this file
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Safety check: does the completed language meet a bad-term language?
    Reach {
        #[command(flatten)]
        pipeline: PipelineArgs,
        /// Set or Automaton section naming the bad terms
        #[arg(long)]
        bad: String,
    },
    /// Print the extracted Kripke structure as DOT
    Kripke {
        #[command(flatten)]
        pipeline: PipelineArgs,
        #[command(flatten)]
        kripke: KripkeArgs,
        /// Write the DOT output to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Test membership of a term in the completed language
    Member {
        #[command(flatten)]
        pipeline: PipelineArgs,
        /// The term to test
        term: String,
    },
}

#[derive(Args)]
struct PipelineArgs {
    /// Problem file
    file: PathBuf,
    /// TRS section to complete under
    #[arg(long)]
    trs: String,
    /// Set or Automaton section giving the initial language
    #[arg(long)]
    input: String,
    /// Completion step budget
    #[arg(long, default_value_t = 1000)]
    max_steps: usize,
    /// Completion state budget
    #[arg(long, default_value_t = 10_000)]
    max_states: usize,
}

#[derive(Args)]
struct KripkeArgs {
    /// Rule indices whose ε-transitions form the transition relation
    /// (comma-separated; default: all rules)
    #[arg(long, value_delimiter = ',')]
    rules: Vec<usize>,
    /// Use the automaton's final states as initial states
    #[arg(long, conflicts_with = "init_sub")]
    init: Option<String>,
    /// Use the states recognizing the terms of this Set section
    #[arg(long)]
    init_sub: Option<String>,
}

/// Errors carrying their process exit code.
struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            msg: msg.into(),
        }
    }
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure::usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Complete { pipeline, out } => cmd_complete(pipeline, out),
        Command::Check {
            pipeline,
            kripke,
            formula_file,
            dot,
        } => cmd_check(pipeline, kripke, formula_file, dot),
        Command::Reach { pipeline, bad } => cmd_reach(pipeline, bad),
        Command::Kripke {
            pipeline,
            kripke,
            out,
        } => cmd_kripke(pipeline, kripke, out),
        Command::Member { pipeline, term } => cmd_member(pipeline, term),
    }
}

struct Pipeline {
    problem: ProblemFile,
    trs: Trs,
    result: CompletionResult,
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn write_out(path: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn initial_automaton(problem: &ProblemFile, name: &str) -> Result<TreeAutomaton, Failure> {
    if let Some(ts) = problem.sets.get(name) {
        Ok(TreeAutomaton::from_terms(ts, &problem.signature)?)
    } else if let Some(a) = problem.automata.get(name) {
        Ok(a.clone())
    } else {
        Err(Failure::usage(format!("no Set or Automaton section named '{name}'")))
    }
}

fn run_pipeline(args: &PipelineArgs) -> Result<Pipeline, Failure> {
    let problem = parse_problem(&read(&args.file)?)?;
    let trs = problem
        .trss
        .get(&args.trs)
        .cloned()
        .ok_or_else(|| Failure::usage(format!("no TRS section named '{}'", args.trs)))?;
    let a0 = initial_automaton(&problem, &args.input)?;
    let config = CompletionConfig {
        max_steps: args.max_steps,
        max_states: args.max_states,
    };
    let result = complete(&a0, &trs, &config).map_err(|e| match e {
        CompletionError::MaxStepsExceeded { .. } | CompletionError::StateBudgetExceeded { .. } => {
            Failure {
                code: 3,
                msg: e.to_string(),
            }
        }
        other => Failure::usage(other.to_string()),
    })?;
    Ok(Pipeline {
        problem,
        trs,
        result,
    })
}

fn build_structure(p: &Pipeline, args: &KripkeArgs) -> Result<KripkeStructure, Failure> {
    let subset: BTreeSet<usize> = if args.rules.is_empty() {
        p.trs.all_indices()
    } else {
        let all = p.trs.all_indices();
        for i in &args.rules {
            if !all.contains(i) {
                return Err(Failure::usage(format!(
                    "rule index {i} out of range (TRS has {} rules)",
                    all.len()
                )));
            }
        }
        args.rules.iter().copied().collect()
    };
    let init = match (&args.init, &args.init_sub) {
        (_, Some(name)) => {
            let ts = p
                .problem
                .sets
                .get(name)
                .ok_or_else(|| Failure::usage(format!("no Set section named '{name}'")))?;
            InitSpec::SubTerms(ts.clone())
        }
        (Some(mode), None) if mode == "final" => InitSpec::FinalStates,
        (Some(mode), None) => {
            return Err(Failure::usage(format!(
                "unknown --init mode '{mode}' (expected 'final')"
            )))
        }
        (None, None) => InitSpec::FinalStates,
    };
    Ok(build_kripke(&p.result.automaton, &subset, &init)?)
}

fn cmd_complete(args: PipelineArgs, out: Option<PathBuf>) -> Result<u8, Failure> {
    let p = run_pipeline(&args)?;
    let fixpoint = p.result.automaton.canonical_form();
    let mut rendered = ProblemFile {
        signature: p.problem.signature.clone(),
        vars: BTreeSet::new(),
        trss: BTreeMap::new(),
        automata: BTreeMap::new(),
        sets: BTreeMap::new(),
    };
    rendered.automata.insert("fixpoint".to_string(), fixpoint);
    write_out(&out, &tact_core::problem::print_problem(&rendered))?;
    println!("steps: {}", p.result.steps_taken);
    println!("states: {}", p.result.automaton.state_count());
    println!("delta: {}", p.result.automaton.delta_len());
    println!("epsilon: {}", p.result.automaton.epsilon_len());
    Ok(0)
}

fn render_lasso(k: &KripkeStructure, prefix: &[StateId], cycle: &[StateId]) -> String {
    let show = |q: &StateId| -> String {
        match k.automaton().canonical_term(*q) {
            Ok(Some(t)) => t.to_string(),
            _ => k.state_name(*q).to_string(),
        }
    };
    let mut parts: Vec<String> = prefix.iter().map(&show).collect();
    let mut cycle_parts: Vec<String> = cycle.iter().map(&show).collect();
    if !cycle_parts.is_empty() {
        cycle_parts[0] = format!("(cycle) {}", cycle_parts[0]);
    }
    parts.extend(cycle_parts);
    parts.join(" -> ")
}

fn cmd_check(
    args: PipelineArgs,
    kripke: KripkeArgs,
    formula_file: PathBuf,
    dot: Option<PathBuf>,
) -> Result<u8, Failure> {
    let p = run_pipeline(&args)?;
    let formula = parse_formula(&read(&formula_file)?, &p.problem.signature)?;
    let k = build_structure(&p, &kripke)?;
    if let Some(path) = &dot {
        write_out(&Some(path.clone()), &k.to_dot())?;
    }
    let env = AtomEnv::new(&p.problem.signature, &p.problem.automata);
    match check(&k, &formula, &env)? {
        Verdict::Holds => {
            println!("HOLDS");
            Ok(0)
        }
        Verdict::Fails { prefix, cycle, .. } => {
            println!("FAILS");
            println!("{}", render_lasso(&k, &prefix, &cycle));
            Ok(1)
        }
    }
}

fn cmd_reach(args: PipelineArgs, bad: String) -> Result<u8, Failure> {
    let p = run_pipeline(&args)?;
    let bad_automaton = initial_automaton(&p.problem, &bad)?;
    let inter = p.result.automaton.intersection(&bad_automaton);
    match inter.find_witness() {
        None => {
            println!("SAFE");
            Ok(0)
        }
        Some(t) => {
            println!("UNSAFE");
            println!("witness: {t}");
            Ok(1)
        }
    }
}

fn cmd_kripke(args: PipelineArgs, kripke: KripkeArgs, out: Option<PathBuf>) -> Result<u8, Failure> {
    let p = run_pipeline(&args)?;
    let k = build_structure(&p, &kripke)?;
    write_out(&out, &k.to_dot())?;
    Ok(0)
}

fn cmd_member(args: PipelineArgs, term: String) -> Result<u8, Failure> {
    let p = run_pipeline(&args)?;
    let t = parse_term(&term, &p.problem.signature, &BTreeSet::new())?;
    let a = &p.result.automaton;
    let targets = a.reach_states(&t)?;
    if targets.iter().any(|q| a.finals().contains(q)) {
        let names: Vec<&str> = targets.iter().map(|q| a.state_name(*q)).collect();
        println!("member: {}", names.join(" "));
        Ok(0)
    } else {
        println!("not a member");
        Ok(1)
    }
}
