//! `bpl`: command-line front end. Exit status 0 on success, 1 on a
//! negative verdict (infeasible, UNSAT, languages differ, inconsistent),
//! 2 on usage or input errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use bplearn::bp::{examples, random_protocol, BpError, BroadcastProtocol, LangComparison, RunOutcome};
use bplearn::charset::{generate_cs, CharsetError};
use bplearn::inference::{
    build_constraints, consistency_decision, export_constraints, infer_a, infer_i, infer_iprime, InferError,
    InferOptions, Inferred, Mode, ProgramOptions, SolveOptions,
};
use bplearn::io::{
    bp_to_dot, parse_bp, parse_cnf, parse_dfa, parse_sample, parse_word_list, serialize_bp, serialize_dfa,
    serialize_sample, FormatError,
};
use bplearn::reductions::{
    alleq3sat_to_sample, assignment_to_bp, dfa_sample_to_bp_sample, dfa_to_bp, exponential_fixture_p5,
    family_exponential, family_quadratic, intersection_bp, random_dfa, Naming, ReductionError,
};
use bplearn::sample::{Sample, SampleError};

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: FormatError },
    #[error(transparent)]
    Bp(#[from] BpError),
    #[error(transparent)]
    Charset(#[from] CharsetError),
    #[error(transparent)]
    Infer(#[from] InferError),
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error("{0}")]
    Usage(String),
}

#[derive(Parser)]
#[command(name = "bpl", version, about = "Simulate, compare and learn broadcast protocols")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum InferMode {
    #[value(name = "I", alias = "i")]
    I,
    #[value(name = "Iprime", alias = "iprime")]
    Iprime,
    #[value(name = "A", alias = "a")]
    A,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the configuration after every action of the word.
    Simulate { bp: PathBuf, n: u32, word: String },
    /// Print the final configuration, or the index of the first blocked action.
    Feasible { bp: PathBuf, n: u32, word: String },
    /// List all feasible words up to a length.
    Enumerate {
        bp: PathBuf,
        n: u32,
        max_len: usize,
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
    },
    /// Compare the languages of two protocols with n processes.
    Equiv {
        bp1: PathBuf,
        bp2: PathBuf,
        n: u32,
        #[arg(long, default_value_t = 5_000_000)]
        budget: usize,
    },
    /// Smallest n with L(B^n) = L(B^(n+1)), searched up to kmax.
    Cutoff {
        bp: PathBuf,
        kmax: u32,
        #[arg(long, default_value_t = 5_000_000)]
        budget: usize,
    },
    /// Characteristic sample of a protocol, as sample lines.
    Charset {
        bp: PathBuf,
        #[arg(long, default_value_t = 12)]
        level_cap: u32,
        #[arg(long, default_value_t = 2_000_000)]
        node_cap: usize,
    },
    /// Learn a protocol consistent with a sample.
    Infer {
        sample: PathBuf,
        #[arg(long, default_value_t = 10)]
        kmax: usize,
        #[arg(long, value_enum, default_value = "A")]
        mode: InferMode,
        /// Seconds per solver call.
        #[arg(long)]
        time_budget: Option<f64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Is there a consistent protocol with at most k states?
    Decide {
        sample: PathBuf,
        k: usize,
        #[arg(long)]
        time_budget: Option<f64>,
    },
    /// Constraint program for k states as SMT-LIB text.
    ExportConstraints {
        sample: PathBuf,
        k: usize,
        /// Actions of one similarity class share a sending state; no padding.
        #[arg(long)]
        similarity: bool,
    },
    /// Generate protocols, automata and samples.
    Gen {
        /// Use short construction names (`i`, `$`, `⊥`, ...) instead of `__`-prefixed ones.
        #[arg(long, global = true)]
        literal_names: bool,
        #[command(subcommand)]
        what: Gen,
    },
    /// Check a protocol against a sample; lists violated entries.
    Check { sample: PathBuf, bp: PathBuf },
    /// Graphviz source for a protocol.
    Dot { bp: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Example {
    B1,
    B2,
    ResetPull,
    SingleLoop,
}

#[derive(Subcommand)]
enum Gen {
    /// One of the built-in example protocols.
    Example {
        #[arg(value_enum)]
        name: Example,
    },
    /// Coprime loops of lengths n and m with l helper states.
    Quadratic { m: usize, n: usize, l: usize },
    /// Loops for all primes up to n.
    Exponential {
        n: usize,
        /// The hand-written five-prime-bound member instead of the generator.
        #[arg(long)]
        fixture: bool,
    },
    /// Protocol simulating an automaton.
    Dfa2bp { dfa: PathBuf },
    /// Protocol sample from labeled automaton words (`word <TAB> T|F`).
    Dfasample2bp {
        words: PathBuf,
        /// Comma-separated letters.
        #[arg(long)]
        alphabet: String,
        /// State bound of the automaton.
        #[arg(long)]
        k: usize,
    },
    /// Sample from an all-equal 3-CNF in DIMACS form.
    Sat2sample { cnf: PathBuf },
    /// Witness protocol for a satisfying assignment, e.g. `1,0,1`.
    Sat2bp { cnf: PathBuf, assignment: String },
    /// Protocol whose membership queries answer automata intersection.
    Intersection {
        #[arg(required = true)]
        dfas: Vec<PathBuf>,
    },
    /// Random protocol without hidden states.
    Random {
        #[arg(long, default_value_t = 3)]
        states: usize,
        #[arg(long, default_value_t = 4)]
        actions: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Random complete automaton.
    RandomDfa {
        #[arg(long, default_value_t = 3)]
        states: usize,
        #[arg(long, default_value = "0,1")]
        alphabet: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })
}

fn load<T>(path: &Path, parse: impl Fn(&str) -> Result<T, FormatError>) -> Result<T, CliError> {
    parse(&read(path)?).map_err(|source| CliError::Format { path: path.to_path_buf(), source })
}

fn load_bp(path: &Path) -> Result<BroadcastProtocol, CliError> {
    let bp = load(path, parse_bp)?;
    for d in bp.validate() {
        eprintln!("warning: {}: {d}", path.display());
    }
    Ok(bp)
}

fn load_sample(path: &Path) -> Result<Sample, CliError> {
    let (s, report) = load(path, parse_sample)?;
    if report.duplicates + report.implied > 0 {
        eprintln!(
            "note: {}: dropped {} duplicate and {} implied entries",
            path.display(),
            report.duplicates,
            report.implied
        );
    }
    Ok(s)
}

fn solve_opts(secs: Option<f64>) -> Result<SolveOptions, CliError> {
    match secs {
        Some(s) if !(s > 0.0 && s.is_finite()) => Err(CliError::Usage(format!("time budget must be positive, got {s}"))),
        s => Ok(SolveOptions { time_budget: s.map(Duration::from_secs_f64) }),
    }
}

fn letters(list: &str) -> Vec<String> {
    list.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

fn show_word(w: &str) -> &str {
    if w.is_empty() {
        "ε"
    } else {
        w
    }
}

fn describe(r: &Inferred) -> String {
    format!("# {} states, {:?} route\n", r.states(), r.branch).to_lowercase()
}

fn run(cli: Cli, out: &mut impl Write) -> Result<ExitCode, CliError> {
    let ok = ExitCode::SUCCESS;
    let no = ExitCode::from(1);
    let mut emit = |s: &str| out.write_all(s.as_bytes()).map_err(|source| CliError::Write { path: "<stdout>".into(), source });
    match cli.cmd {
        Cmd::Simulate { bp, n, word } => {
            let bp = load_bp(&bp)?;
            let w = bp.parse_word(&word)?;
            let mut c = bp.initial_configuration(n);
            emit(&format!("{c}\n"))?;
            for (i, &a) in w.iter().enumerate() {
                match bp.step(&c, a) {
                    Ok(next) => {
                        c = next;
                        emit(&format!("{} {c}\n", bp.action_name(a)))?;
                    }
                    Err(BpError::ActionNotEnabled(_)) => {
                        emit(&format!("blocked at index {i} ({})\n", bp.action_name(a)))?;
                        return Ok(no);
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            Ok(ok)
        }
        Cmd::Feasible { bp, n, word } => {
            let bp = load_bp(&bp)?;
            let w = bp.parse_word(&word)?;
            match bp.run(n, &w)? {
                RunOutcome::Completed(c) => {
                    emit(&format!("{c}\n"))?;
                    Ok(ok)
                }
                RunOutcome::Blocked { index, before } => {
                    emit(&format!("infeasible at index {index} from {before}\n"))?;
                    Ok(no)
                }
            }
        }
        Cmd::Enumerate { bp, n, max_len, budget } => {
            let bp = load_bp(&bp)?;
            for w in bp.enumerate_language(n, max_len, budget)? {
                emit(&format!("{}\n", show_word(&bp.format_word(&w))))?;
            }
            Ok(ok)
        }
        Cmd::Equiv { bp1, bp2, n, budget } => {
            let (x, y) = (load_bp(&bp1)?, load_bp(&bp2)?);
            match x.lang_equal_at(&y, n, budget)? {
                LangComparison::Equal => {
                    emit("equal\n")?;
                    Ok(ok)
                }
                LangComparison::Distinguished(w) => {
                    emit(&format!("differ on {}\n", show_word(&x.format_word(&w))))?;
                    Ok(no)
                }
            }
        }
        Cmd::Cutoff { bp, kmax, budget } => {
            let bp = load_bp(&bp)?;
            match bp.detect_cutoff(kmax, budget)? {
                Some(k) => {
                    emit(&format!("{k}\n"))?;
                    Ok(ok)
                }
                None => {
                    emit(&format!("no cutoff up to {kmax}\n"))?;
                    Ok(no)
                }
            }
        }
        Cmd::Charset { bp, level_cap, node_cap } => {
            let bp = load_bp(&bp)?;
            let cs = generate_cs(&bp, level_cap, node_cap)?;
            emit(&format!("# {} entries, fixpoint at level {}\n", cs.sample.len(), cs.final_level))?;
            emit(&serialize_sample(&cs.sample))?;
            Ok(ok)
        }
        Cmd::Infer { sample, kmax, mode, time_budget, output } => {
            let s = load_sample(&sample)?;
            let opts = InferOptions { k_max: kmax, solve: solve_opts(time_budget)?, ..Default::default() };
            let r = match mode {
                InferMode::I => infer_i(&s, &opts),
                InferMode::Iprime => infer_iprime(&s, &opts),
                InferMode::A => infer_a(&s, &opts),
            };
            let r = match r {
                Ok(r) => r,
                Err(e @ InferError::NoHypothesis { .. }) => {
                    eprintln!("{e}");
                    return Ok(no);
                }
                Err(e) => return Err(e.into()),
            };
            eprint!("{}", describe(&r));
            let text = serialize_bp(&r.protocol);
            match output {
                Some(p) => fs::write(&p, text).map_err(|source| CliError::Write { path: p, source })?,
                None => emit(&text)?,
            }
            Ok(ok)
        }
        Cmd::Decide { sample, k, time_budget } => {
            let s = load_sample(&sample)?;
            match consistency_decision(&s, k, &solve_opts(time_budget)?)? {
                Some(r) => {
                    emit("SAT\n")?;
                    emit(&describe(&r))?;
                    emit(&serialize_bp(&r.protocol))?;
                    Ok(ok)
                }
                None => {
                    emit("UNSAT\n")?;
                    Ok(no)
                }
            }
        }
        Cmd::ExportConstraints { sample, k, similarity } => {
            let s = load_sample(&sample)?;
            let options = if similarity {
                ProgramOptions { mode: Mode::Similarity, fresh: 0 }
            } else {
                ProgramOptions { mode: Mode::Plain, fresh: k }
            };
            emit(&export_constraints(&build_constraints(&s, k, options)?))?;
            Ok(ok)
        }
        Cmd::Gen { literal_names, what } => {
            let naming = if literal_names { Naming::Literal } else { Naming::Namespaced };
            let text = match what {
                Gen::Example { name } => serialize_bp(&match name {
                    Example::B1 => examples::b1(),
                    Example::B2 => examples::b2(),
                    Example::ResetPull => examples::reset_pull(),
                    Example::SingleLoop => examples::single_loop(),
                }),
                Gen::Quadratic { m, n, l } => serialize_bp(&family_quadratic(m, n, l)?),
                Gen::Exponential { n, fixture } => {
                    if fixture {
                        serialize_bp(&exponential_fixture_p5())
                    } else {
                        serialize_bp(&family_exponential(n)?)
                    }
                }
                Gen::Dfa2bp { dfa } => serialize_bp(&dfa_to_bp(&load(&dfa, parse_dfa)?, naming)?),
                Gen::Dfasample2bp { words, alphabet, k } => {
                    let ws = load(&words, parse_word_list)?;
                    let (s, bound) = dfa_sample_to_bp_sample(&ws, &letters(&alphabet), k, naming)?;
                    format!("# at most {bound} states\n{}", serialize_sample(&s))
                }
                Gen::Sat2sample { cnf } => {
                    let (s, bound) = alleq3sat_to_sample(&load(&cnf, parse_cnf)?)?;
                    format!("# at most {bound} states\n{}", serialize_sample(&s))
                }
                Gen::Sat2bp { cnf, assignment } => {
                    let phi = load(&cnf, parse_cnf)?;
                    let values = assignment
                        .split(',')
                        .map(|v| match v.trim() {
                            "1" | "T" | "true" => Ok(true),
                            "0" | "F" | "false" => Ok(false),
                            other => Err(CliError::Usage(format!("`{other}` is not a truth value"))),
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    serialize_bp(&assignment_to_bp(&phi, &values)?)
                }
                Gen::Intersection { dfas } => {
                    let ds = dfas.iter().map(|p| load(p, parse_dfa)).collect::<Result<Vec<_>, _>>()?;
                    serialize_bp(&intersection_bp(&ds, naming)?)
                }
                Gen::Random { states, actions, seed } => {
                    if states == 0 || actions < states {
                        return Err(CliError::Usage("need at least one state and one action per state".into()));
                    }
                    serialize_bp(&random_protocol(&mut ChaCha8Rng::seed_from_u64(seed), states, actions))
                }
                Gen::RandomDfa { states, alphabet, seed } => {
                    if states == 0 {
                        return Err(CliError::Usage("need at least one state".into()));
                    }
                    let ls = letters(&alphabet);
                    let refs: Vec<&str> = ls.iter().map(String::as_str).collect();
                    serialize_dfa(&random_dfa(&mut ChaCha8Rng::seed_from_u64(seed), states, &refs))
                }
            };
            emit(&text)?;
            Ok(ok)
        }
        Cmd::Check { sample, bp } => {
            let s = load_sample(&sample)?;
            let bp = load_bp(&bp)?;
            let bad = s.violations(&bp);
            if bad.is_empty() {
                emit("consistent\n")?;
                return Ok(ok);
            }
            for i in bad {
                emit(&format!("violated {}\n", s.entries()[i]))?;
            }
            Ok(no)
        }
        Cmd::Dot { bp } => {
            emit(&bp_to_dot(&load_bp(&bp)?))?;
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    match run(cli, &mut stdout.lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
