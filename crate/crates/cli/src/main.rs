//! `hisc`: command-line front end. Automata are read and written in `.des`
//! format; event flags (`c`, `o`, `h`) define the projection context.

use clap::{Args, Parser, Subcommand, ValueEnum};
use hisc::automaton::{format_word, to_dot, Alphabet, Automaton, Stats, Word};
use hisc::hierarchical::{
    abstract_plant, hier_synthesize_normal, verify_equality, workflow_modular,
};
use hisc::projection::{
    check_lcc, check_observer, inverse_project, nonconflicting, parallel, project,
    ProjectionContext,
};
use hisc::relational::{check_loc, check_moc_report, check_oc_report, sync_pair_product};
use hisc::synthesis::{
    check_controllability, check_normality, check_observability, sup_con_normal, sup_controllable,
    sup_normal_marked,
};
use hisc::testgen::{pspace_gadget, railroad_models, random_instance, Profile};
use hisc::{EventId, Outcome, Verdict};
use serde_json::{json, Value};
use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_VIOLATED: u8 = 1;
const EXIT_BOUNDED: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_IO: u8 = 66;

#[derive(Parser)]
#[command(
    name = "hisc",
    version,
    about = "Hierarchical supervisory control toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Output {
    /// Write the resulting automaton here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Emit a Graphviz graph instead of `.des`.
    #[arg(long)]
    dot: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate automata, printing their sizes.
    Validate { files: Vec<PathBuf> },
    /// Natural projection onto the observable or high-level events, or an explicit list.
    Project {
        file: PathBuf,
        #[arg(long, value_enum, conflicts_with = "events")]
        onto: Option<Target>,
        /// Comma-separated event names.
        #[arg(long, value_delimiter = ',')]
        events: Vec<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Inverse projection onto a larger alphabet (self-loops on new events).
    Invproject {
        file: PathBuf,
        /// Events to add, in `.des` declaration syntax, e.g. "a[co] b".
        #[arg(long)]
        events: String,
        #[command(flatten)]
        out: Output,
    },
    /// Synchronous composition.
    Parallel {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Synchronised pair product of two automata.
    Pairprod {
        left: PathBuf,
        right: PathBuf,
        /// Comma-separated synchronisation events.
        #[arg(long, value_delimiter = ',')]
        sync: Vec<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Checks a property. Plants are composed; for specification properties
    /// the last file is the requirement.
    Check {
        #[arg(value_enum)]
        property: Property,
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Bound on the combined candidate length for OC, MOC and LOC.
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Supremal sublanguage of the last file with respect to the composed plants.
    Sup {
        #[arg(value_enum)]
        kind: SupKind,
        #[arg(num_args = 2.., required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Hierarchical pipelines.
    Hier {
        #[command(subcommand)]
        command: HierCommand,
    },
    /// Instance generators.
    Gen {
        #[command(subcommand)]
        command: GenCommand,
    },
    /// States, transitions and events of each automaton.
    Stats {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum HierCommand {
    /// High-level plant: projection of the composed plants onto the high-level events.
    Abstract {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// High-level supervisor and closed loop; the last file is the requirement.
    Synth {
        #[arg(num_args = 2.., required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        bound: Option<usize>,
        /// Also compute the low-level supremum and compare.
        #[arg(long)]
        certify: bool,
        #[arg(long)]
        json: bool,
        /// Write the high-level supervisor here.
        #[arg(long)]
        supervisor: Option<PathBuf>,
        /// Write the closed loop here.
        #[arg(long)]
        closed_loop: Option<PathBuf>,
    },
    /// Compares the low-level supremum with the composed high-level one.
    Verify {
        #[arg(num_args = 2.., required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Modular workflow: plants, then one or more specifications (`--spec`);
    /// without `--spec` the last file is the only specification.
    Workflow {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long = "spec")]
        specs: Vec<PathBuf>,
        #[arg(long)]
        json: bool,
        /// Directory receiving one supervisor and closed loop per specification.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// Universality gadget for an NFA (all states are treated as marked).
    Gadget {
        nfa: PathBuf,
        #[arg(short, long)]
        out_dir: PathBuf,
    },
    /// Seeded random plant and high-level specification.
    Random {
        #[arg(long, value_enum, default_value = "unconstrained")]
        profile: ProfileArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out_dir: PathBuf,
    },
    /// The two-train bridge models.
    Railroad {
        #[arg(short, long)]
        out_dir: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Observable,
    Highlevel,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Property {
    Oc,
    Moc,
    Loc,
    Controllable,
    Observable,
    Normal,
    Observer,
    Lcc,
    Nonconflicting,
}

#[derive(Clone, Copy, ValueEnum)]
enum SupKind {
    Normal,
    Controllable,
    Connorm,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    MocByConstruction,
    Unconstrained,
    AcyclicSmall,
}

impl ProfileArg {
    fn profile(self) -> Profile {
        match self {
            ProfileArg::MocByConstruction => Profile::MocByConstruction,
            ProfileArg::Unconstrained => Profile::Unconstrained,
            ProfileArg::AcyclicSmall => Profile::AcyclicSmall,
        }
    }

    fn name(self) -> &'static str {
        match self {
            ProfileArg::MocByConstruction => "moc-by-construction",
            ProfileArg::Unconstrained => "unconstrained",
            ProfileArg::AcyclicSmall => "acyclic-small",
        }
    }
}

/// Why a command did not succeed, with its exit code.
enum Failure {
    Usage(String),
    Data(String),
    Io(String),
}

impl From<hisc::Error> for Failure {
    fn from(e: hisc::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

impl From<hisc::AutomatonError> for Failure {
    fn from(e: hisc::AutomatonError) -> Self {
        Failure::Data(e.to_string())
    }
}

type Run = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Data(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_DATA)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_IO)
        }
    }
}

fn run(command: Command) -> Run {
    match command {
        Command::Validate { files } => {
            for f in &files {
                let a = load(f)?;
                println!("{}: ok ({})", f.display(), stats_line(&a.stats()));
            }
            Ok(0)
        }
        Command::Project {
            file,
            onto,
            events,
            out,
        } => {
            let a = load(&file)?;
            let target: BTreeSet<EventId> = match onto {
                Some(Target::Observable) => a.alphabet().observable(),
                Some(Target::Highlevel) => a.alphabet().highlevel(),
                None if !events.is_empty() => event_set(&events)?,
                None => return Err(Failure::Usage("give --onto or --events".into())),
            };
            emit(&project(&a, &target), &out)
        }
        Command::Invproject { file, events, out } => {
            let a = load(&file)?;
            let extra = Alphabet::parse(&events)?;
            emit(&inverse_project(&a, &a.alphabet().union(&extra))?, &out)
        }
        Command::Parallel { files, out } => emit(&compose(&load_all(&files)?)?, &out),
        Command::Pairprod {
            left,
            right,
            sync,
            out,
        } => {
            let pa = sync_pair_product(&load(&left)?, &load(&right)?, &event_set(&sync)?)?;
            emit(pa.automaton(), &out)
        }
        Command::Check {
            property,
            files,
            bound,
            json,
        } => check(property, &files, bound, json),
        Command::Sup { kind, files, out } => {
            let (g, k, ctx) = plant_and_spec(&files)?;
            let sup = match kind {
                SupKind::Normal => sup_normal_marked(&k, &g, &ctx)?,
                SupKind::Controllable => sup_controllable(&k, &g, &ctx.uncontrollable())?,
                SupKind::Connorm => sup_con_normal(&k, &g, &ctx)?,
            };
            emit(&sup, &out)
        }
        Command::Hier { command } => hier(command),
        Command::Gen { command } => gen(command),
        Command::Stats { files, json } => {
            let mut rows = Vec::new();
            for f in &files {
                let s = load(f)?.stats();
                if json {
                    rows.push(json!({"file": f.display().to_string(), "stats": s}));
                } else {
                    println!("{}: {}", f.display(), stats_line(&s));
                }
            }
            if json {
                print_json(&Value::Array(rows));
            }
            Ok(0)
        }
    }
}

/// Result of a property check, ready for printing.
struct Checked {
    verdict: &'static str,
    counterexample: Vec<Word>,
    stats: Value,
    bound: Option<usize>,
}

impl Checked {
    fn new((verdict, counterexample): (&'static str, Vec<Word>), stats: Value) -> Self {
        Checked {
            verdict,
            counterexample,
            stats,
            bound: None,
        }
    }
}

fn check(property: Property, files: &[PathBuf], bound: Option<usize>, json: bool) -> Run {
    let spec_based = matches!(
        property,
        Property::Controllable | Property::Observable | Property::Normal
    );
    let result = if spec_based {
        let (g, k, ctx) = plant_and_spec(files)?;
        let stats = json!({"plant": g.stats(), "specification": k.stats()});
        let parts = match property {
            Property::Controllable => {
                outcome(check_controllability(&k, &g, &ctx.uncontrollable())?, |c| {
                    let mut s = c.s.clone();
                    s.push(c.event.clone());
                    vec![c.s.clone(), s]
                })
            }
            Property::Observable => outcome(check_observability(&k, &g, &ctx)?, |c| {
                vec![c.s.clone(), c.s_prime.clone(), vec![c.event.clone()]]
            }),
            _ => outcome(check_normality(&k, &g, &ctx)?, |w| vec![w.clone()]),
        };
        Checked::new(parts, stats)
    } else if property == Property::Nonconflicting {
        let plants = load_all(files)?;
        let refs: Vec<&Automaton> = plants.iter().collect();
        let verdict = if nonconflicting(&refs)? {
            "holds"
        } else {
            "violated"
        };
        Checked::new((verdict, Vec::new()), json!({}))
    } else {
        let g = compose(&load_all(files)?)?;
        let ctx = ProjectionContext::new(g.alphabet().clone());
        let stats = json!({"plant": g.stats()});
        let l = g.mark_all();
        match property {
            Property::Oc | Property::Moc => {
                let r = if property == Property::Oc {
                    check_oc_report(&l, &ctx, bound)?
                } else {
                    check_moc_report(&l, &ctx, bound)?
                };
                let stats = json!({
                    "plant": g.stats(),
                    "pair_states": r.pair_states,
                    "configurations": r.configurations,
                });
                Checked {
                    bound: r.bound,
                    ..Checked::new(verdict_parts(&r.verdict), stats)
                }
            }
            Property::Loc => {
                let parts = verdict_parts(&check_loc(&l, &ctx, bound)?);
                Checked {
                    bound,
                    ..Checked::new(parts, stats)
                }
            }
            Property::Observer => {
                let parts = outcome(check_observer(&g, &ctx)?, |c| {
                    vec![c.s.clone(), c.t.clone()]
                });
                Checked::new(parts, stats)
            }
            _ => {
                let parts = outcome(check_lcc(&g, &ctx)?, |c| {
                    vec![c.s.clone(), vec![c.event.clone()]]
                });
                Checked::new(parts, stats)
            }
        }
    };
    let name = property
        .to_possible_value()
        .expect("named")
        .get_name()
        .to_string();
    let shown: Vec<String> = result
        .counterexample
        .iter()
        .map(|w| format_word(w))
        .collect();
    if json {
        print_json(&json!({
            "property": name,
            "verdict": result.verdict,
            "bound": result.bound,
            "counterexample": shown,
            "stats": result.stats,
        }));
    } else {
        match result.verdict {
            "violated" => println!("{name}: violated ({})", shown.join(" | ")),
            "bounded" => println!(
                "{name}: no violation up to bound {}",
                result.bound.unwrap_or(0)
            ),
            other => println!("{name}: {other}"),
        }
    }
    Ok(match result.verdict {
        "violated" => EXIT_VIOLATED,
        "bounded" => EXIT_BOUNDED,
        _ => 0,
    })
}

fn outcome<C>(o: Outcome<C>, parts: impl Fn(&C) -> Vec<Word>) -> (&'static str, Vec<Word>) {
    match &o {
        Outcome::Holds => ("holds", Vec::new()),
        Outcome::Fails(c) => ("violated", parts(c)),
    }
}

fn verdict_parts(v: &Verdict) -> (&'static str, Vec<Word>) {
    match v {
        Verdict::Holds { .. } => ("holds", Vec::new()),
        Verdict::BoundedPass { .. } => ("bounded", Vec::new()),
        Verdict::Violated { counterexample: c } => {
            let mut words = vec![c.left.clone(), c.right.clone()];
            if let Some(e) = &c.event {
                words.push(vec![e.clone()]);
            }
            ("violated", words)
        }
    }
}

fn hier(command: HierCommand) -> Run {
    match command {
        HierCommand::Abstract { files, out } => {
            let g = compose(&load_all(&files)?)?;
            let ctx = ProjectionContext::new(g.alphabet().clone());
            emit(&abstract_plant(&g, &ctx)?, &out)
        }
        HierCommand::Synth {
            files,
            bound,
            certify,
            json,
            supervisor,
            closed_loop,
        } => {
            let (g, k, ctx) = plant_and_spec(&files)?;
            let mut report = hier_synthesize_normal(&g, &k, &ctx, bound)?;
            if certify {
                report.certify(&g, &k, &ctx)?;
            }
            if let Some(p) = supervisor {
                write(&p, &report.high_supervisor.to_des())?;
            }
            if let Some(p) = closed_loop {
                write(&p, &report.low_closed_loop.to_des())?;
            }
            if json {
                print_json(
                    &serde_json::to_value(&report).map_err(|e| Failure::Data(e.to_string()))?,
                );
            } else {
                print!("{}", report.table());
            }
            Ok(if report.equality_certified == Some(false) {
                EXIT_VIOLATED
            } else {
                0
            })
        }
        HierCommand::Verify { files, json } => {
            let (g, k, ctx) = plant_and_spec(&files)?;
            let eq = verify_equality(&g, &k, &ctx)?;
            let witness = eq.witness.as_ref().map(|w| format_word(w));
            if json {
                print_json(&json!({
                    "property": "equality",
                    "verdict": if eq.equal { "holds" } else { "violated" },
                    "bound": Value::Null,
                    "counterexample": witness.iter().collect::<Vec<_>>(),
                    "stats": {"low": eq.low.stats(), "composed": eq.composed.stats()},
                }));
            } else if eq.equal {
                println!("equal: the composed high-level supremum matches the low-level one");
            } else {
                println!(
                    "different: {} is marked by only one side",
                    witness.unwrap_or_default()
                );
            }
            Ok(if eq.equal { 0 } else { EXIT_VIOLATED })
        }
        HierCommand::Workflow {
            files,
            specs,
            json,
            out_dir,
        } => {
            let (plant_files, spec_files) = if specs.is_empty() {
                let (last, rest) = files.split_last().expect("required");
                if rest.is_empty() {
                    return Err(Failure::Usage(
                        "need at least one plant and one specification".into(),
                    ));
                }
                (rest.to_vec(), vec![last.clone()])
            } else {
                (files, specs)
            };
            let plants = load_all(&plant_files)?;
            let spec_automata = load_all(&spec_files)?;
            let mut sigma = Alphabet::new();
            for a in plants.iter().chain(&spec_automata) {
                sigma = sigma.union(a.alphabet());
            }
            let ctx = ProjectionContext::new(sigma);
            let reports = workflow_modular(&plants, &spec_automata, &ctx)?;
            if let Some(dir) = &out_dir {
                std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
                for (i, r) in reports.iter().enumerate() {
                    write(
                        &dir.join(format!("supervisor{i}.des")),
                        &r.supervisor.to_des(),
                    )?;
                    write(
                        &dir.join(format!("closed_loop{i}.des")),
                        &r.closed_loop.to_des(),
                    )?;
                }
            }
            if json {
                print_json(
                    &serde_json::to_value(&reports).map_err(|e| Failure::Data(e.to_string()))?,
                );
            } else {
                for (r, f) in reports.iter().zip(&spec_files) {
                    let names = |s: &BTreeSet<EventId>| {
                        s.iter()
                            .map(|e| e.to_string())
                            .collect::<Vec<_>>()
                            .join(" ")
                    };
                    println!("{}:", f.display());
                    println!("  plants:      {:?}", r.plants);
                    println!("  extension:   {}", format_word(&r.extension));
                    println!("  observable:  {}", names(&r.observable));
                    println!("  high-level:  {}", names(&r.highlevel));
                    println!("  accepted:    {:?}", r.acceptance);
                    println!("  closed loop: {}", stats_line(&r.closed_loop.stats()));
                }
            }
            Ok(0)
        }
    }
}

fn gen(command: GenCommand) -> Run {
    let (dir, files, manifest): (PathBuf, Vec<(&str, Automaton)>, Value) = match command {
        GenCommand::Gadget { nfa, out_dir } => {
            let a = load(&nfa)?;
            let (gadget, _) = pspace_gadget(&a)?;
            let manifest = json!({"generator": "gadget", "source": nfa.display().to_string()});
            (out_dir, vec![("gadget.des", gadget)], manifest)
        }
        GenCommand::Random {
            profile,
            seed,
            out_dir,
        } => {
            let inst = random_instance(seed, profile.profile());
            let plant = inst.plant.with_flags(
                &inst
                    .ctx
                    .sigma()
                    .restrict(&inst.plant.alphabet().event_set()),
            )?;
            let manifest = json!({"generator": "random", "profile": profile.name(), "seed": seed});
            (
                out_dir,
                vec![("plant.des", plant), ("spec.des", inst.spec)],
                manifest,
            )
        }
        GenCommand::Railroad { out_dir } => {
            let (g1, g2, k, _) = railroad_models();
            let manifest = json!({"generator": "railroad"});
            (
                out_dir,
                vec![("g1.des", g1), ("g2.des", g2), ("spec.des", k)],
                manifest,
            )
        }
    };
    std::fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;
    let mut manifest = manifest;
    manifest["files"] = json!(files.iter().map(|(n, _)| *n).collect::<Vec<_>>());
    for (name, a) in &files {
        write(&dir.join(name), &a.to_des())?;
    }
    let text = serde_json::to_string_pretty(&manifest).expect("serializable");
    write(&dir.join("manifest.json"), &(text + "\n"))?;
    for (name, _) in &files {
        println!("{}", dir.join(name).display());
    }
    Ok(0)
}

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn load(path: &Path) -> Result<Automaton, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    Automaton::from_des(&text).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn load_all(paths: &[PathBuf]) -> Result<Vec<Automaton>, Failure> {
    paths.iter().map(|p| load(p)).collect()
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}

fn compose(plants: &[Automaton]) -> Result<Automaton, Failure> {
    match plants {
        [one] => Ok(one.clone()),
        _ => {
            let refs: Vec<&Automaton> = plants.iter().collect();
            Ok(parallel(&refs)?)
        }
    }
}

/// Composed plants, the requirement (last file) and the context read off
/// the union of their event flags.
fn plant_and_spec(files: &[PathBuf]) -> Result<(Automaton, Automaton, ProjectionContext), Failure> {
    let Some((spec, plants)) = files.split_last().filter(|(_, p)| !p.is_empty()) else {
        return Err(Failure::Usage(
            "need at least one plant and a specification".into(),
        ));
    };
    let g = compose(&load_all(plants)?)?;
    let k = load(spec)?;
    let ctx = ProjectionContext::new(g.alphabet().union(k.alphabet()));
    Ok((g, k, ctx))
}

fn event_set(names: &[String]) -> Result<BTreeSet<EventId>, Failure> {
    names
        .iter()
        .map(|n| EventId::new(n.trim()).map_err(Failure::from))
        .collect()
}

fn emit(a: &Automaton, out: &Output) -> Run {
    let text = if out.dot { to_dot(a) } else { a.to_des() };
    match &out.output {
        Some(p) => write(p, &text)?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn stats_line(s: &Stats) -> String {
    format!(
        "{} states, {} transitions, {} events",
        s.states, s.transitions, s.events
    )
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}
