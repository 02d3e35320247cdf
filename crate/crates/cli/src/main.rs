//! `kripkemv` — command-line front end for the logic workbench.
//!
//! Every run is deterministic given its arguments and input files.
//! The exit code carries the verdict: 0 for a positive answer (valid,
//! equivalent, forced, designated, definable, no violations), 1 for a
//! negative answer with evidence printed, 2 for usage or resource
//! errors. Counterexample models are printed in the model text format
//! accepted by `eval --model`, so every verdict can be replayed.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use kripkemv_core::bridge::{check_lemma3, Lemma3Options};
use kripkemv_core::catalog::FrameCatalog;
use kripkemv_core::clone::{check_definable, CloneCertificate, CloneProblem};
use kripkemv_core::kripke::{model_from_text, render_model, FrameOp, Model};
use kripkemv_core::parse::parse;
use kripkemv_core::validity::{
    check_equivalence, check_validity, godel_fan, pigeonhole_formula, EquivalenceVerdict,
    LogicClass, SearchLimits, ValidityVerdict,
};
use kripkemv_core::values::{extend_valuation, parse_valuation, render_value};

/// Workbench for Kripke and sequence semantics of propositional logics
/// over finite posets: evaluation, bounded validity and equivalence,
/// frame enumeration, and connective-definability certificates.
#[derive(Parser)]
#[command(name = "kripkemv", version, max_term_width = 80)]
struct Cli {
    /// Worker threads for bounded searches (1 = serial).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    /// Refuse searches whose candidate-model count exceeds this.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    ceiling: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula at a world of a model file.
    ///
    /// Prints "true" or "false"; exit 0 when the world forces the
    /// formula, 1 when it does not.
    Eval {
        /// Path to a model in the model text format.
        #[arg(long)]
        model: PathBuf,
        /// Name of the world to evaluate at.
        #[arg(long)]
        world: String,
        /// Formula, e.g. "(p -> q) | (q -> p)".
        formula: String,
    },
    /// Search all frames of a logic class up to a world bound.
    ///
    /// Prints "VALID" with the bound, or "NOT VALID" with the frame
    /// index, failing world, and the counterexample model text.
    Valid {
        #[arg(long, value_enum)]
        logic: LogicArg,
        /// Largest frame size searched (1..=7).
        #[arg(long)]
        max_worlds: usize,
        formula: String,
    },
    /// Like `valid`, for equivalence of two formulas.
    Equiv {
        #[arg(long, value_enum)]
        logic: LogicArg,
        /// Largest frame size searched (1..=7).
        #[arg(long)]
        max_worlds: usize,
        left: String,
        right: String,
    },
    /// Print the n-leaf fan model and its pairwise-implication
    /// disjunction, which the fan's root fails to force.
    GodelFan {
        /// Number of leaves (at least 2).
        n: usize,
    },
    /// Print the disjunction of pairwise implications over n+1 atoms.
    Pigeonhole {
        /// Pair bound (at least 1).
        n: usize,
    },
    /// List catalog frames in the model text format (no atom lines).
    Frames {
        /// How many catalog entries to print, starting at index 0.
        #[arg(long)]
        count: usize,
        /// Keep only the first representative of each isomorphism
        /// class (indices are preserved).
        #[arg(long)]
        up_to_iso: bool,
    },
    /// Sequence-semantics commands.
    #[command(subcommand)]
    Mv(MvCommand),
    /// Decide whether a target formula's truth set is definable on a
    /// model from generators using chosen connectives.
    ///
    /// Prints "DEFINABLE" with a minimal witness, or "NOT-DEFINABLE"
    /// with the full closure as certificate.
    Clone {
        /// Path to a model in the model text format.
        #[arg(long)]
        model: PathBuf,
        /// Comma-separated subset of: neg, and, or, imp.
        #[arg(long)]
        connectives: String,
        /// Formula whose truth set must be reached.
        #[arg(long)]
        target: String,
        /// Comma-separated generator formulas (default: T plus every
        /// atom of the model).
        #[arg(long)]
        generators: Option<String>,
    },
}

#[derive(Subcommand)]
enum MvCommand {
    /// Evaluate a formula under a valuation file and report the value
    /// and whether it is the designated one.
    Eval {
        /// Path to a valuation in the valuation text format.
        #[arg(long)]
        valuation: PathBuf,
        formula: String,
    },
    /// Randomized check that forcing and component evaluation agree
    /// across induced models and valuations, in both directions.
    CheckLemma3 {
        /// Maximum connective depth of sampled formulas.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Sample catalog frames 0..FRAMES.
        #[arg(long, default_value_t = 5)]
        frames: usize,
        /// Number of trials (each checks both directions).
        #[arg(long, default_value_t = 200)]
        trials: u64,
        /// Random seed; identical seeds give identical runs.
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LogicArg {
    /// Classical: the one-world frame.
    Cpl,
    /// Intuitionistic: every finite poset.
    Ipl,
    /// Gödel–Dummett: connected finite posets.
    Gdl,
}

impl From<LogicArg> for LogicClass {
    fn from(value: LogicArg) -> LogicClass {
        match value {
            LogicArg::Cpl => LogicClass::Cpl,
            LogicArg::Ipl => LogicClass::Ipl,
            LogicArg::Gdl => LogicClass::Gdl,
        }
    }
}

/// Restore the default SIGPIPE disposition so that piping into a
/// consumer that exits early (`kripkemv ... | head -1`) terminates the
/// process quietly instead of panicking on the failed write.
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn main() -> ExitCode {
    reset_sigpipe();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

const POSITIVE: ExitCode = ExitCode::SUCCESS;

fn negative() -> ExitCode {
    ExitCode::from(1)
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let catalog = FrameCatalog::new();
    let limits = SearchLimits {
        ceiling: cli.ceiling,
        threads: cli.threads,
    };
    match cli.command {
        Command::Eval {
            model,
            world,
            formula,
        } => {
            let model = load_model(&model)?;
            let formula = parse(&formula).map_err(|e| e.to_string())?;
            let forced = model
                .forces_named(&world, &formula)
                .map_err(|e| e.to_string())?;
            println!("{forced}");
            Ok(if forced { POSITIVE } else { negative() })
        }
        Command::Valid {
            logic,
            max_worlds,
            formula,
        } => {
            let formula = parse(&formula).map_err(|e| e.to_string())?;
            let verdict = check_validity(&catalog, &formula, logic.into(), max_worlds, &limits)
                .map_err(|e| e.to_string())?;
            match verdict {
                ValidityVerdict::Valid { bound } => {
                    println!("VALID");
                    println!("bound: {bound}");
                    Ok(POSITIVE)
                }
                ValidityVerdict::Counterexample {
                    frame_index,
                    model,
                    world,
                } => {
                    println!("NOT VALID");
                    println!("frame: {frame_index}");
                    println!("world: {}", model.frame().world_name(world));
                    print!("{}", render_model(&model));
                    Ok(negative())
                }
            }
        }
        Command::Equiv {
            logic,
            max_worlds,
            left,
            right,
        } => {
            let left = parse(&left).map_err(|e| e.to_string())?;
            let right = parse(&right).map_err(|e| e.to_string())?;
            let verdict =
                check_equivalence(&catalog, &left, &right, logic.into(), max_worlds, &limits)
                    .map_err(|e| e.to_string())?;
            match verdict {
                EquivalenceVerdict::Equivalent { bound } => {
                    println!("EQUIVALENT");
                    println!("bound: {bound}");
                    Ok(POSITIVE)
                }
                EquivalenceVerdict::Counterexample {
                    direction,
                    frame_index,
                    model,
                    world,
                } => {
                    println!("NOT EQUIVALENT");
                    println!("direction: {}", direction.name());
                    println!("frame: {frame_index}");
                    println!("world: {}", model.frame().world_name(world));
                    print!("{}", render_model(&model));
                    Ok(negative())
                }
            }
        }
        Command::GodelFan { n } => {
            if n < 2 {
                return Err("godel-fan needs at least 2 leaves".to_string());
            }
            let (model, formula) = godel_fan(n);
            print!("{}", render_model(&model));
            println!("formula: {formula}");
            println!("root: k");
            println!("root forces: {}", model.forces(0, &formula));
            Ok(POSITIVE)
        }
        Command::Pigeonhole { n } => {
            if n < 1 {
                return Err("pigeonhole needs n >= 1".to_string());
            }
            println!("{}", pigeonhole_formula(n));
            Ok(POSITIVE)
        }
        Command::Frames { count, up_to_iso } => {
            let mut first = true;
            for (index, frame) in catalog.enumerate_frames(count, up_to_iso) {
                if !first {
                    println!();
                }
                first = false;
                println!("# frame {index}");
                let placeholder =
                    Model::new(frame, Default::default()).expect("catalog frames carry no atoms");
                print!("{}", render_model(&placeholder));
            }
            Ok(POSITIVE)
        }
        Command::Mv(MvCommand::Eval { valuation, formula }) => {
            let text = std::fs::read_to_string(&valuation)
                .map_err(|e| format!("{}: {e}", valuation.display()))?;
            let valuation = parse_valuation(&catalog, &text).map_err(|e| e.to_string())?;
            let formula = parse(&formula).map_err(|e| e.to_string())?;
            let value =
                extend_valuation(&catalog, &valuation, &formula).map_err(|e| e.to_string())?;
            print!("{}", render_value(&value));
            let designated = value.is_designated();
            println!("designated: {designated}");
            Ok(if designated { POSITIVE } else { negative() })
        }
        Command::Mv(MvCommand::CheckLemma3 {
            depth,
            frames,
            trials,
            seed,
        }) => {
            if frames < 1 {
                return Err("check-lemma3 needs at least 1 frame".to_string());
            }
            let options = Lemma3Options {
                depth,
                frames,
                trials,
                seed,
            };
            let report = check_lemma3(&catalog, &options);
            println!("trials: {}", report.trials);
            println!("comparisons: {}", report.comparisons);
            println!("violations: {}", report.violations.len());
            for v in &report.violations {
                println!(
                    "violation: direction={} frame={} world={} formula={}",
                    v.direction.name(),
                    v.frame_index,
                    v.world,
                    v.formula
                );
            }
            Ok(if report.violations.is_empty() {
                POSITIVE
            } else {
                negative()
            })
        }
        Command::Clone {
            model,
            connectives,
            target,
            generators,
        } => {
            let model = load_model(&model)?;
            let connectives = parse_connectives(&connectives)?;
            let target_formula = parse(&target).map_err(|e| e.to_string())?;
            let target = model.truth_set(&target_formula);
            let problem = match generators {
                None => CloneProblem::with_default_generators(model, connectives, target),
                Some(list) => {
                    let mut gens = Vec::new();
                    for text in list.split(',') {
                        let f = parse(text.trim()).map_err(|e| e.to_string())?;
                        let ts = model.truth_set(&f);
                        gens.push((f, ts));
                    }
                    CloneProblem::new(model, gens, connectives, target)
                }
            }
            .map_err(|e| e.to_string())?;
            match check_definable(&problem) {
                CloneCertificate::Definable { witness, depth } => {
                    println!("DEFINABLE");
                    println!("witness: {witness}");
                    println!("depth: {depth}");
                    Ok(POSITIVE)
                }
                CloneCertificate::NotDefinable { closure } => {
                    println!("NOT-DEFINABLE");
                    println!(
                        "target: {{{}}}",
                        problem.model().frame().set_names(problem.target().set())
                    );
                    println!("closure size: {}", closure.len());
                    for member in &closure {
                        println!(
                            "member {{{}}}: {}",
                            problem.model().frame().set_names(member.set.set()),
                            member.witness
                        );
                    }
                    Ok(negative())
                }
            }
        }
    }
}

fn load_model(path: &PathBuf) -> Result<Model, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    model_from_text(&text).map_err(|e| e.to_string())
}

fn parse_connectives(list: &str) -> Result<BTreeSet<FrameOp>, String> {
    let mut out = BTreeSet::new();
    for word in list.split(',') {
        let op = match word.trim() {
            "neg" => FrameOp::Neg,
            "and" => FrameOp::And,
            "or" => FrameOp::Or,
            "imp" => FrameOp::Imp,
            other => {
                return Err(format!(
                    "unknown connective '{other}' (expected neg, and, or, imp)"
                ))
            }
        };
        out.insert(op);
    }
    Ok(out)
}
