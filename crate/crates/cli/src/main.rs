use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use quandleforge::algebra::{dihedral_quandle, enumerate_quandles, trivial_quandle, FiniteQuandle};
use quandleforge::experiments::{run_suite, Suite};
use quandleforge::laurent::{describe_with_transcript, matrix_reduce};
use quandleforge::term::{
    alexander_matrix, eval, hnn_extend, hom_count, parse_tau, parse_term, HnnData, Presentation, Term,
};
use quandleforge::thompson_quandle::ThompsonQuandle;
use quandleforge::Caps;

/// Exact computations with quandles and Thompson's group F.
#[derive(Debug, Parser)]
#[command(name = "quandleforge", version)]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a term in a finite model under an assignment.
    Eval {
        #[arg(long)]
        pres: PathBuf,
        #[arg(long)]
        term: String,
        /// trivial:N, dihedral:N or table:FILE
        #[arg(long)]
        model: String,
        /// Comma-separated `generator=element` pairs.
        #[arg(long)]
        assign: String,
    },
    /// Whether p(M) and p(N) are the same element of F.
    Eq {
        #[arg(long = "p")]
        m: usize,
        #[arg(long = "q")]
        n: usize,
    },
    /// The orbit (A or B) of p(N) or of a term over a, b.
    Orbit(OrbitArgs),
    /// Reduced tree-pair diagram of p(N).
    Nf {
        #[arg(long = "p")]
        n: usize,
    },
    /// Alexander matrix, its reduction and the module it presents.
    Alexander {
        #[arg(long)]
        pres: PathBuf,
    },
    /// Number of morphisms from a presented quandle into a finite model.
    Homcount {
        #[arg(long)]
        pres: PathBuf,
        #[arg(long)]
        model: String,
    },
    /// All quandles of a given order, up to isomorphism.
    Enumerate {
        #[arg(long)]
        order: usize,
    },
    /// HNN extension of a presentation by a stable letter.
    Hnn {
        #[arg(long)]
        pres: PathBuf,
        /// Pairs `u->v` separated by commas.
        #[arg(long)]
        tau: String,
        #[arg(long, default_value = "t")]
        letter: String,
    },
    /// Run the verification experiments.
    Verify {
        #[arg(long, default_value = "all", value_parser = clap::builder::PossibleValuesParser::new(Suite::NAMES))]
        suite: String,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct OrbitArgs {
    #[arg(long = "p")]
    n: Option<usize>,
    #[arg(long)]
    term: Option<String>,
}

/// Writes to stdout, ignoring a closed pipe (`quandleforge ... | head`).
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

macro_rules! out_raw {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = write!(std::io::stdout(), $($arg)*);
    }};
}

/// An input problem; reported on stderr with exit code 2.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

type Result<T> = std::result::Result<T, UsageError>;

enum Outcome {
    Success,
    VerificationFailed,
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_presentation(path: &Path) -> Result<Presentation> {
    let text = read_file(path)?;
    Presentation::parse_dsl(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn parse_cli_term(flag: &str, text: &str) -> Result<Term> {
    parse_term(text).map_err(|e| usage(format!("{flag}: {e}")))
}

fn load_model(spec: &str, caps: &Caps) -> Result<FiniteQuandle> {
    let (kind, arg) = spec
        .split_once(':')
        .ok_or_else(|| usage(format!("--model {spec:?}: expected trivial:N, dihedral:N or table:FILE")))?;
    let order = |arg: &str| -> Result<usize> {
        let n: usize = arg.parse().map_err(|_| usage(format!("--model {spec:?}: {arg:?} is not an order")))?;
        if n > caps.order {
            return Err(usage(format!(
                "--model {spec:?}: order {n} exceeds the cap of {} (set QUANDLEFORGE_CAP to raise it)",
                caps.order
            )));
        }
        Ok(n)
    };
    let model = match kind {
        "trivial" => trivial_quandle(order(arg)?),
        "dihedral" => dihedral_quandle(order(arg)?),
        "table" => {
            let q = FiniteQuandle::parse(&read_file(Path::new(arg))?)
                .map_err(|e| usage(format!("{arg}: {e}")))?;
            order(&q.order().to_string())?;
            Ok(q)
        }
        other => return Err(usage(format!("--model: unknown model kind {other:?}"))),
    };
    model.map_err(|e| usage(format!("--model {spec:?}: {e}")))
}

fn parse_assignment(text: &str, order: usize) -> Result<HashMap<String, usize>> {
    let mut out = HashMap::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, value) =
            part.split_once('=').ok_or_else(|| usage(format!("--assign: expected name=value, got {part:?}")))?;
        let value: usize = value
            .trim()
            .parse()
            .map_err(|_| usage(format!("--assign: {value:?} is not an element index")))?;
        if value >= order {
            return Err(usage(format!("--assign: {value} is not an element of a model of order {order}")));
        }
        if out.insert(name.trim().to_string(), value).is_some() {
            return Err(usage(format!("--assign: {} assigned twice", name.trim())));
        }
    }
    Ok(out)
}

fn check_index(n: usize, caps: &Caps) -> Result<()> {
    if n > caps.p_index {
        return Err(usage(format!(
            "p({n}) exceeds the index cap of {} (set QUANDLEFORGE_CAP=p=N to raise it)",
            caps.p_index
        )));
    }
    Ok(())
}

fn build_model(caps: &Caps) -> Result<ThompsonQuandle> {
    ThompsonQuandle::new(caps).map_err(|e| usage(e.to_string()))
}

fn print_json(v: &serde_json::Value) {
    out!("{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

fn run(cli: Cli, caps: &Caps) -> Result<Outcome> {
    let json = cli.json;
    match cli.command {
        Command::Eval { pres, term, model, assign } => {
            let pres = load_presentation(&pres)?;
            let term = parse_cli_term("--term", &term)?;
            for leaf in term.leaves() {
                if pres.generator_index(leaf).is_none() {
                    return Err(usage(format!("--term: `{leaf}` is not a generator of {}", pres.name())));
                }
            }
            let q = load_model(&model, caps)?;
            let assignment = parse_assignment(&assign, q.order())?;
            if let Some(name) = assignment.keys().find(|k| pres.generator_index(k).is_none()) {
                return Err(usage(format!("--assign: `{name}` is not a generator of {}", pres.name())));
            }
            let value = eval(&term, &assignment, &q).map_err(|e| usage(format!("--assign: {e}")))?;
            if json {
                print_json(&json!({ "term": term, "model": model, "value": value }));
            } else {
                out!("{value}");
            }
        }
        Command::Eq { m, n } => {
            check_index(m, caps)?;
            check_index(n, caps)?;
            let model = build_model(caps)?;
            let equal = model.p(m).map_err(|e| usage(e.to_string()))? == model.p(n).map_err(|e| usage(e.to_string()))?;
            if json {
                print_json(&json!({ "p": m, "q": n, "equal": equal }));
            } else {
                out!("{equal}");
            }
        }
        Command::Orbit(OrbitArgs { n, term }) => {
            let term = term.map(|t| parse_cli_term("--term", &t)).transpose()?;
            if let Some(t) = &term {
                if let Some(leaf) = t.leaves().into_iter().find(|l| *l != "a" && *l != "b") {
                    return Err(usage(format!("--term: `{leaf}` is not a or b")));
                }
            }
            if let Some(n) = n {
                check_index(n, caps)?;
            }
            let model = build_model(caps)?;
            let elem = match (n, &term) {
                (Some(n), _) => model.p(n),
                (None, Some(t)) => model.iso_g(t),
                (None, None) => unreachable!("clap requires one of --p and --term"),
            }
            .map_err(|e| usage(e.to_string()))?;
            let orbit = model.orbit(&elem).map_err(|e| usage(e.to_string()))?;
            if json {
                print_json(&json!({ "orbit": orbit, "element": elem }));
            } else {
                out!("{orbit}");
            }
        }
        Command::Nf { n } => {
            check_index(n, caps)?;
            let model = build_model(caps)?;
            let elem = model.p(n).map_err(|e| usage(e.to_string()))?;
            if json {
                print_json(&json!({ "p": n, "element": elem }));
            } else {
                out!("{}", elem.value());
            }
        }
        Command::Alexander { pres } => {
            let pres = load_presentation(&pres)?;
            let m = alexander_matrix(&pres);
            let reduced = matrix_reduce(&m);
            let (description, full) = describe_with_transcript(&m);
            if json {
                print_json(&json!({
                    "matrix": m,
                    "reduced": reduced.matrix,
                    "transcript": full.transcript,
                    "description": description,
                    "module": description.to_string(),
                }));
            } else {
                out_raw!("matrix:\n{m}reduced:\n{}", reduced.matrix);
                out!("module: {description}");
            }
        }
        Command::Homcount { pres, model } => {
            let pres = load_presentation(&pres)?;
            let q = load_model(&model, caps)?;
            if pres.generators().len() > caps.gens {
                return Err(usage(format!(
                    "{} has {} generators, above the cap of {} (set QUANDLEFORGE_CAP=gens=N to raise it)",
                    pres.name(),
                    pres.generators().len(),
                    caps.gens
                )));
            }
            let count = hom_count(&pres, &q, caps).map_err(|e| usage(e.to_string()))?;
            if json {
                print_json(&json!({ "presentation": pres.name(), "model": model, "count": count }));
            } else {
                out!("{count}");
            }
        }
        Command::Enumerate { order } => {
            let quandles = enumerate_quandles(order, caps.order).map_err(|e| usage(format!("--order: {e}")))?;
            if json {
                print_json(&json!({ "order": order, "count": quandles.len(), "quandles": quandles }));
            } else {
                out!("# {} quandles of order {order}", quandles.len());
                for q in &quandles {
                    out!();
                    out_raw!("{}", q.to_text());
                }
            }
        }
        Command::Hnn { pres, tau, letter } => {
            let base = load_presentation(&pres)?;
            let tau_pairs = parse_tau(&tau).map_err(|e| usage(format!("--tau: {e}")))?;
            let letter_ok = letter.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                && letter.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'');
            if !letter_ok {
                return Err(usage(format!("--letter: {letter:?} is not a generator name")));
            }
            let ext = hnn_extend(&HnnData { base, stable_letter: letter, tau_pairs })
                .map_err(|e| usage(e.to_string()))?;
            if json {
                print_json(&serde_json::to_value(&ext).expect("presentations serialize"));
            } else {
                out_raw!("{}", ext.to_dsl());
            }
        }
        Command::Verify { suite } => {
            let suite: Suite = suite.parse().map_err(|e| usage(format!("--suite: {e}")))?;
            let reports = run_suite(suite, caps).map_err(|e| usage(e.to_string()))?;
            for r in &reports {
                if json {
                    out!("{}", r.to_json_line());
                } else {
                    out!("{r}");
                }
            }
            let failed = reports.iter().filter(|r| !r.passed).count();
            if !json {
                out!("{} of {} experiments passed", reports.len() - failed, reports.len());
            }
            if failed > 0 {
                return Ok(Outcome::VerificationFailed);
            }
        }
    }
    Ok(Outcome::Success)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let caps = match Caps::from_env() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match run(cli, &caps) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
