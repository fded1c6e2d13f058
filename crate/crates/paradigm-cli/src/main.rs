//! Command-line front end: model validation, translation to state spaces,
//! inertness reports, quotients, equivalence checking, the lemma checks, and
//! the benchmark table.

mod format;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use paradigm::bisim::{equivalent, oracle_equivalent, Equivalence};
use paradigm::generate::{client_server, Variant};
use paradigm::lts::{export_aut, export_dot, import_aut, Lts};
use paradigm::model::{validate_model, ParadigmModel};
use paradigm::reduce::{
    inert_report_of, quotient_detailed, reduced_system, verify_detailed_preservation,
    verify_reduction,
};
use paradigm::translate::{
    translate_component_dg, translate_conductor, translate_global, translate_system,
};

use format::{parse_model, print_model};

/// Exit codes: 0 success or property true, 1 property false, 2 validation or
/// parse error, 3 I/O error.
const EXIT_FALSE: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(
    name = "paradigm",
    about = "Verification toolkit for Paradigm coordination models",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Basic,
    Return,
    Simple,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Basic => Variant::Basic,
            VariantArg::Return => Variant::Return,
            VariantArg::Simple => Variant::Simple,
        }
    }
}

#[derive(Args)]
struct ModelArgs {
    /// Model file to load; omit to use a generated model.
    #[arg(long, value_name = "FILE")]
    model: Option<PathBuf>,
    /// Built-in model family variant (when no file is given).
    #[arg(long, value_enum, default_value = "basic")]
    variant: VariantArg,
    /// Number of clients for the generated model.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    clients: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum What {
    Detailed,
    Global,
    Dg,
    System,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Aut,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Check a model against all structural invariants.
    Validate {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Write a built-in model as a model file.
    Generate {
        #[arg(long, value_enum, default_value = "basic")]
        variant: VariantArg,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
        clients: u32,
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Translate a component or the whole system into a state space.
    Translate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum)]
        what: What,
        /// Instance to translate (defaults to the first participant; for
        /// `--what detailed` a conductor yields its man-relabelled process).
        #[arg(long)]
        instance: Option<String>,
        /// Partition naming the role for `--what global` (defaults to the
        /// instance's first role).
        #[arg(long)]
        role: Option<String>,
        #[arg(long, value_enum, default_value = "aut")]
        format: Format,
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Report globally inert transitions and actions of an instance.
    Inert {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        instance: Option<String>,
    },
    /// Quotient an instance's detailed diagram after hiding an action set.
    Quotient {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        instance: Option<String>,
        /// Comma-separated actions to hide (defaults to the inert actions).
        #[arg(long, value_name = "ACTIONS")]
        inert_set: Option<String>,
        #[arg(long, value_enum, default_value = "aut")]
        format: Format,
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Check two .aut files for branching bisimilarity.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        /// Use the naive fixpoint oracle instead of the refinement checker.
        #[arg(long)]
        oracle: bool,
    },
    /// Check that first-reduce then-compose preserves a component's
    /// behaviour for the given action set.
    Lemma1 {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        instance: Option<String>,
        #[arg(long, value_name = "ACTIONS")]
        inert_set: String,
    },
    /// Check that coordination eliminates no detailed behaviour.
    Lemma2 {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        instance: Option<String>,
    },
    /// Compose the system from reduced components.
    ReduceSystem {
        #[command(flatten)]
        model: ModelArgs,
        /// Comma-separated actions to hide in every participant (defaults to
        /// each instance's inert actions).
        #[arg(long, value_name = "ACTIONS")]
        inert_set: Option<String>,
        /// Skip the behaviour-preservation check.
        #[arg(long)]
        force: bool,
        #[arg(long, value_enum, default_value = "aut")]
        format: Format,
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Generate state spaces for n = 2..=N and print their sizes.
    Bench {
        #[arg(long, value_name = "N", value_parser = clap::value_parser!(u32).range(2..))]
        clients_max: u32,
        /// Benchmark the reduced composition instead of the full one.
        #[arg(long)]
        reduced: bool,
        #[arg(long, value_enum, default_value = "basic")]
        variant: VariantArg,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::new(EXIT_INVALID, e.to_string())
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents)
        .map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))
}

fn load_model(args: &ModelArgs) -> Result<ParadigmModel, Failure> {
    let model = match &args.model {
        Some(path) => {
            let text = read_file(path)?;
            parse_model(&text)
                .map_err(|e| Failure::new(EXIT_INVALID, format!("{}:{e}", path.display())))?
        }
        None => client_server(args.variant.into(), args.clients as usize),
    };
    let report = validate_model(&model);
    for warning in report.warnings() {
        eprintln!("{warning}");
    }
    if !report.is_valid() {
        let mut message = String::new();
        for error in report.errors() {
            let _ = writeln!(message, "{error}");
        }
        return Err(Failure::new(EXIT_INVALID, message.trim_end().to_string()));
    }
    Ok(model)
}

fn default_participant(model: &ParadigmModel) -> Result<String, Failure> {
    model
        .participants()
        .next()
        .map(|i| i.name.clone())
        .ok_or_else(|| Failure::new(EXIT_INVALID, "the model has no participant instances"))
}

fn pick_instance(model: &ParadigmModel, instance: Option<String>) -> Result<String, Failure> {
    match instance {
        Some(name) => {
            if model.instance(&name).is_none() {
                return Err(Failure::new(
                    EXIT_INVALID,
                    format!("unknown instance `{name}`"),
                ));
            }
            Ok(name)
        }
        None => default_participant(model),
    }
}

fn action_set(spec: &str) -> BTreeSet<String> {
    spec.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_owned)
        .collect()
}

/// Writes the state space in the requested format. With a file target, an
/// `.aut` export gains a `<file>.names` sidecar mapping indices to the
/// human-readable state names, which the Aldebaran format cannot carry.
fn emit_lts(lts: &Lts, format: Format, output: Option<&Path>) -> Result<(), Failure> {
    let rendered = match format {
        Format::Aut => export_aut(lts),
        Format::Dot => export_dot(lts),
    };
    match output {
        None => {
            print!("{rendered}");
            Ok(())
        }
        Some(path) => {
            write_file(path, &rendered)?;
            if format == Format::Aut {
                let mut names = String::new();
                for s in 0..lts.num_states() {
                    let _ = writeln!(names, "{s}\t{}", lts.state_name(s));
                }
                let sidecar = PathBuf::from(format!("{}.names", path.display()));
                write_file(&sidecar, &names)?;
            }
            eprintln!(
                "wrote {} ({} states, {} transitions)",
                path.display(),
                lts.num_states(),
                lts.num_transitions()
            );
            Ok(())
        }
    }
}

fn verdict(holds: bool, yes: &str, no: &str) -> Result<ExitCode, Failure> {
    if holds {
        println!("{yes}");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("{no}");
        Ok(ExitCode::from(EXIT_FALSE))
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Validate { model } => {
            let loaded = load_model(&model)?;
            println!(
                "ok: {} stds, {} partitions, {} instances, {} rules",
                loaded.stds.len(),
                loaded.partitions.len(),
                loaded.instances.len(),
                loaded.rules.len()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Generate {
            variant,
            clients,
            output,
        } => {
            let model = client_server(variant.into(), clients as usize);
            let text = print_model(&model);
            match output {
                None => print!("{text}"),
                Some(path) => write_file(&path, &text)?,
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Translate {
            model,
            what,
            instance,
            role,
            format,
            output,
        } => {
            let loaded = load_model(&model)?;
            let lts = match what {
                What::System => translate_system(&loaded)?,
                What::Detailed => {
                    let name = pick_instance(&loaded, instance)?;
                    let picked = loaded.instance(&name).expect("checked");
                    if picked.roles.is_empty() {
                        translate_conductor(&loaded, &name)?
                    } else {
                        paradigm::translate::translate_component(&loaded, &name)?.detailed
                    }
                }
                What::Global => {
                    let name = pick_instance(&loaded, instance)?;
                    let picked = loaded.instance(&name).expect("checked");
                    let index = match &role {
                        None => 0,
                        Some(partition) => picked
                            .roles
                            .iter()
                            .position(|r| &r.partition == partition)
                            .ok_or_else(|| {
                                Failure::new(
                                    EXIT_INVALID,
                                    format!("`{name}` has no role over partition `{partition}`"),
                                )
                            })?,
                    };
                    translate_global(&loaded, &name, index)?.lts
                }
                What::Dg => {
                    let name = pick_instance(&loaded, instance)?;
                    translate_component_dg(&loaded, &name)?
                }
            };
            emit_lts(&lts, format, output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Inert { model, instance } => {
            let loaded = load_model(&model)?;
            let name = pick_instance(&loaded, instance)?;
            let report = inert_report_of(&loaded, &name)?;
            let inert: Vec<String> = report.inert_actions().into_iter().collect();
            println!(
                "inert actions: {}",
                if inert.is_empty() {
                    "(none)".into()
                } else {
                    inert.join(", ")
                }
            );
            for entry in &report.transitions {
                let t = &entry.transition;
                if entry.inert {
                    println!("  inert      {} -{}-> {}", t.source, t.action, t.target);
                } else {
                    let w = entry.witness.as_ref().expect("non-inert has a witness");
                    println!(
                        "  non-inert  {} -{}-> {}  (trap {} of phase {} holds {} but not {})",
                        t.source, t.action, t.target, w.trap, w.phase, w.inside, w.outside
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Quotient {
            model,
            instance,
            inert_set,
            format,
            output,
        } => {
            let loaded = load_model(&model)?;
            let name = pick_instance(&loaded, instance)?;
            let hidden = match inert_set {
                Some(spec) => action_set(&spec),
                None => inert_report_of(&loaded, &name)?.inert_actions(),
            };
            let picked = loaded.instance(&name).expect("checked");
            let std = loaded.std(&picked.std).ok_or_else(|| {
                Failure::new(EXIT_INVALID, format!("unknown std `{}`", picked.std))
            })?;
            let rc = quotient_detailed(std, &hidden);
            let shown: Vec<String> = hidden.iter().cloned().collect();
            println!(
                "hidden: {}",
                if shown.is_empty() {
                    "(none)".into()
                } else {
                    shown.join(", ")
                }
            );
            for (i, members) in rc.blocks.iter().enumerate() {
                println!("block {i}: {{{}}}", members.join(", "));
            }
            emit_lts(&rc.lts, format, output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Equiv { a, b, oracle } => {
            let parse = |path: &Path| -> Result<Lts, Failure> {
                import_aut(&read_file(path)?)
                    .map_err(|e| Failure::new(EXIT_INVALID, format!("{}: {e}", path.display())))
            };
            let (left, right) = (parse(&a)?, parse(&b)?);
            let holds = if oracle {
                oracle_equivalent(&left, &right)?
            } else {
                match equivalent(&left, &right) {
                    Equivalence::Equivalent => true,
                    Equivalence::Distinguished(d) => {
                        eprintln!("{d}");
                        false
                    }
                }
            };
            verdict(holds, "branching bisimilar", "not branching bisimilar")
        }
        Command::Lemma1 {
            model,
            instance,
            inert_set,
        } => {
            let loaded = load_model(&model)?;
            let name = pick_instance(&loaded, instance)?;
            let holds = verify_reduction(&loaded, &name, &action_set(&inert_set))?;
            verdict(
                holds,
                &format!("{name}: reduced composition preserves the component behaviour"),
                &format!("{name}: reduction is NOT behaviour-preserving for this action set"),
            )
        }
        Command::Lemma2 { model, instance } => {
            let loaded = load_model(&model)?;
            let name = pick_instance(&loaded, instance)?;
            let holds = verify_detailed_preservation(&loaded, &name)?;
            verdict(
                holds,
                &format!("{name}: coordination preserves the complete detailed behaviour"),
                &format!("{name}: coordination eliminates detailed behaviour"),
            )
        }
        Command::ReduceSystem {
            model,
            inert_set,
            force,
            format,
            output,
        } => {
            let loaded = load_model(&model)?;
            let hidden: BTreeMap<String, BTreeSet<String>> = match inert_set {
                None => BTreeMap::new(),
                Some(spec) => {
                    let set = action_set(&spec);
                    loaded
                        .participants()
                        .map(|i| (i.name.clone(), set.clone()))
                        .collect()
                }
            };
            let lts = reduced_system(&loaded, &hidden, force)?;
            emit_lts(&lts, format, output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench {
            clients_max,
            reduced,
            variant,
        } => {
            let which = if reduced { "reduced" } else { "full" };
            println!(
                "{which} state spaces, variant {}",
                Variant::from(variant).name()
            );
            println!(
                "{:>4} {:>10} {:>12} {:>10}",
                "n", "states", "transitions", "time"
            );
            for n in 2..=clients_max {
                let model = client_server(variant.into(), n as usize);
                let start = Instant::now();
                let lts = if reduced {
                    reduced_system(&model, &BTreeMap::new(), false)?
                } else {
                    translate_system(&model)?
                };
                let elapsed = start.elapsed();
                println!(
                    "{n:>4} {:>10} {:>12} {:>9.3}s",
                    lts.num_states(),
                    lts.num_transitions(),
                    elapsed.as_secs_f64()
                );
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
