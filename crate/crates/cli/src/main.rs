use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use maxplus::ambiguity::{degree_up_to, is_infinitely_ambiguous};
use maxplus::covering::decompose_unambiguous;
use maxplus::document::{parse_document, to_json, AutomatonDocument};
use maxplus::dominance::{analyze_sccs, coord_list, product, satisfies_dominance};
use maxplus::dot::{condensation_dot, export_dot};
use maxplus::pipeline::decide;
use maxplus::sequentiality::{determinize_weighted, twin_property, DEFAULT_DETERMINIZATION_CAP};
use maxplus::unambiguizer::build_unambiguous;
use maxplus::{fixtures, Automaton, Error, ProductAutomaton, SccReport};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "maxplus", version, about = "Ambiguity and sequentiality of max-plus automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weight of a word.
    Evaluate {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        word: String,
    },
    /// Number of successful paths of a word, or the largest count up to --bound.
    Paths {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        word: Option<String>,
        #[arg(long, default_value_t = 6)]
        bound: usize,
    },
    /// Finite or infinite ambiguity, with a witness in the infinite case.
    Ambiguity {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 6)]
        bound: usize,
    },
    /// Split into unambiguous automata whose maximum is the input series.
    Decompose {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// SCC report and dominance verdict for a family of unambiguous automata.
    Dominance {
        #[command(flatten)]
        family: Family,
        /// Print the condensation graph instead of the report.
        #[arg(long)]
        dot: bool,
    },
    /// One unambiguous automaton for the maximum of a family.
    Unambiguize {
        #[command(flatten)]
        family: Family,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Twin property check.
    Twins {
        #[command(flatten)]
        input: Input,
    },
    /// Weighted determinization.
    Sequentialize {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_DETERMINIZATION_CAP)]
        cap: usize,
    },
    /// Full classification of the series.
    Decide {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 6)]
        bound: usize,
        /// Directory receiving every constructed automaton.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Graphviz rendering of an automaton.
    ExportDot {
        #[command(flatten)]
        input: Input,
    },
    /// Built-in example automata.
    Fixture {
        #[command(subcommand)]
        action: FixtureAction,
    },
}

#[derive(Subcommand)]
enum FixtureAction {
    List,
    Get { name: String },
}

#[derive(Args)]
struct Input {
    /// Automaton document.
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct Family {
    /// Automaton to decompose into the family.
    #[arg(long, conflicts_with = "member", required_unless_present = "member")]
    input: Option<PathBuf>,
    /// Unambiguous family member; repeat for each member.
    #[arg(long)]
    member: Vec<PathBuf>,
}

enum Failure {
    Precondition(String),
    Cap(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_cap() {
            Failure::Cap(e.to_string())
        } else {
            Failure::Precondition(e.to_string())
        }
    }
}

type Outcome = Result<(), Failure>;

fn load(path: &Path) -> Result<Automaton, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Precondition(format!("{}: {e}", path.display())))?;
    parse_document(&text).map_err(|e| Failure::Precondition(format!("{}: {e}", path.display())))
}

fn write(dir: &Path, name: &str, text: &str) -> Result<PathBuf, Failure> {
    let io = |e: std::io::Error| Failure::Precondition(format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    let path = dir.join(name);
    fs::write(&path, text).map_err(io)?;
    Ok(path)
}

/// Writes to stdout, treating a closed pipe as success.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn print_json(v: &Value) {
    emit(&(serde_json::to_string_pretty(v).expect("values serialize") + "\n"));
}

/// Path counts as JSON numbers, falling back to a string past u64.
fn count(n: u128) -> Value {
    u64::try_from(n).map_or_else(|_| json!(n.to_string()), |n| json!(n))
}

fn document(a: &Automaton) -> Value {
    serde_json::to_value(AutomatonDocument::from_automaton(a)).expect("documents serialize")
}

fn family(f: &Family) -> Result<Vec<Automaton>, Failure> {
    match &f.input {
        Some(path) => {
            let a = load(path)?;
            Ok(decompose_unambiguous(&a.trim())?.leaves)
        }
        None => f.member.iter().map(|p| load(p)).collect(),
    }
}

fn scc_report(p: &ProductAutomaton, r: &SccReport) -> Value {
    let sccs: Vec<Value> = r
        .sccs
        .iter()
        .enumerate()
        .map(|(i, scc)| {
            json!({
                "id": i,
                "states": scc.states.iter().map(|&s| p.state_name(s)).collect::<Vec<_>>(),
                "circuits": scc.circuits.iter().map(|c| json!({
                    "weight": c.weight.to_string(),
                    "victorious": coord_list(c.victorious),
                })).collect::<Vec<_>>(),
                "victorious": coord_list(scc.victorious),
                "successors": r.dag[i].iter().collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "members": p.dimension(), "product_states": p.num_states(), "sccs": sccs })
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Evaluate { input, word } => {
            let a = load(&input.input)?;
            let w = a.parse_word(&word)?;
            emit(&format!("{}\n", a.evaluate(&w)?));
        }
        Command::Paths { input, word, bound } => {
            let a = load(&input.input)?;
            match word {
                Some(word) => {
                    let w = a.parse_word(&word)?;
                    let n = a.count_successful_paths(&w)?;
                    print_json(&json!({ "word": a.format_word(&w), "paths": count(n) }));
                }
                None => {
                    let (n, w) = a.max_paths_up_to(bound);
                    print_json(&json!({ "bound": bound, "max_paths": count(n), "word": a.format_word(&w) }));
                }
            }
        }
        Command::Ambiguity { input, bound } => {
            let a = load(&input.input)?;
            let witness = is_infinitely_ambiguous(&a);
            print_json(&json!({
                "finitely_ambiguous": witness.is_none(),
                "witness": witness,
                "bound": bound,
                "max_paths": count(degree_up_to(&a, bound)),
            }));
        }
        Command::Decompose { input, output } => {
            let a = load(&input.input)?;
            let d = decompose_unambiguous(&a.trim())?;
            let competing: Vec<Value> =
                d.competing.iter().map(|c| json!({ "kind": c.kind, "members": c.describe(&d.covering) })).collect();
            let mut manifest = json!({
                "source_states": a.num_states(),
                "covering_states": d.covering.automaton.num_states(),
                "competing_sets": competing,
                "leaves": d.leaves.len(),
            });
            match output {
                Some(dir) => {
                    let mut files = Vec::new();
                    for (i, leaf) in d.leaves.iter().enumerate() {
                        let path = write(&dir, &format!("leaf_{i}.json"), &to_json(leaf))?;
                        files.push(path.display().to_string());
                    }
                    manifest["files"] = json!(files);
                    let text = serde_json::to_string_pretty(&manifest).expect("values serialize") + "\n";
                    write(&dir, "manifest.json", &text)?;
                }
                None => manifest["automata"] = Value::Array(d.leaves.iter().map(document).collect()),
            }
            print_json(&manifest);
        }
        Command::Dominance { family: f, dot } => {
            let members = family(&f)?;
            let p = product(&members)?;
            let r = analyze_sccs(&p)?;
            if dot {
                emit(&condensation_dot(&p, &r));
                return Ok(());
            }
            let verdict = satisfies_dominance(&p, &r);
            let mut report = scc_report(&p, &r);
            report["dominance"] = json!(verdict.holds);
            if let Some(w) = verdict.witness {
                report["witness"] = json!(w);
            }
            print_json(&report);
        }
        Command::Unambiguize { family: f, output } => {
            let members = family(&f)?;
            let p = product(&members)?;
            let r = analyze_sccs(&p)?;
            let u = build_unambiguous(&members, &p, &r)?;
            let log = json!(u.log);
            match output {
                Some(dir) => {
                    let path = write(&dir, "unambiguous.json", &to_json(&u.automaton))?;
                    let text = serde_json::to_string_pretty(&log).expect("values serialize") + "\n";
                    write(&dir, "construction.json", &text)?;
                    print_json(&json!({ "log": log, "file": path.display().to_string() }));
                }
                None => print_json(&json!({ "log": log, "automaton": document(&u.automaton) })),
            }
        }
        Command::Twins { input } => {
            let a = load(&input.input)?;
            let t = twin_property(&a.trim());
            print_json(&json!({ "twins": t.twins, "witness": t.summary() }));
        }
        Command::Sequentialize { input, output, cap } => {
            let a = load(&input.input)?;
            let d = determinize_weighted(&a.trim(), cap)?;
            match output {
                Some(dir) => {
                    let path = write(&dir, "sequential.json", &to_json(&d))?;
                    print_json(&json!({ "states": d.num_states(), "file": path.display().to_string() }));
                }
                None => emit(&to_json(&d)),
            }
        }
        Command::Decide { input, bound, output } => {
            let a = load(&input.input)?;
            let report = decide(&a, bound)?;
            let mut value = json!(report);
            if let Some(dir) = output {
                let mut files = Vec::new();
                for (i, leaf) in report.artifacts.leaves.iter().enumerate() {
                    files.push(write(&dir, &format!("leaf_{i}.json"), &to_json(leaf))?);
                }
                if let Some(u) = &report.artifacts.unambiguous {
                    files.push(write(&dir, "unambiguous.json", &to_json(u))?);
                }
                if let Some(s) = &report.artifacts.sequential {
                    files.push(write(&dir, "sequential.json", &to_json(s))?);
                }
                value["files"] = json!(files.iter().map(|f| f.display().to_string()).collect::<Vec<_>>());
            }
            print_json(&value);
        }
        Command::ExportDot { input } => emit(&export_dot(&load(&input.input)?)),
        Command::Fixture { action: FixtureAction::List } => {
            emit(&(fixtures::NAMES.join("\n") + "\n"));
        }
        Command::Fixture { action: FixtureAction::Get { name } } => {
            let a = fixtures::get(&name).ok_or_else(|| {
                Failure::Precondition(format!("unknown fixture `{name}`; see `maxplus fixture list`"))
            })?;
            emit(&to_json(&a));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Precondition(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Cap(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
