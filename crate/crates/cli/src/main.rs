//! `handlecalc`: validate diagrams, compute invariants, run move scripts,
//! search for simplifications, compile between diagram kinds and serve
//! sessions over HTTP.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage error.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use handlecalc::ddc::Side;
use handlecalc::engine::{
    invariant, resolve_path, run_watched, simplify_search, Directive, MoveScript, State,
};
use handlecalc::heegaard::{
    double_kirby, gluck_cobordism, handlebody_heegaard, one_surgery, s2bundles_to_double, surgery_kirby, FiveKind,
};
use handlecalc::Diagram;
use serde_json::json;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Parser, Debug)]
#[command(name = "handlecalc", version, about = "Kirby, banded unlink and 5-dimensional Heegaard diagram calculus")]
struct Cli {
    /// Output format: readable text or JSON.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Check a .ddc or .hgd file against the code invariants.
    Validate { file: PathBuf },
    /// Print homology, π1 and recognition data.
    Invariants {
        file: PathBuf,
        /// Comma-separated invariant keys (default: all homology, pi1ab, chi, recognize).
        #[arg(long, value_delimiter = ',')]
        watch: Vec<String>,
        /// Treat a Kirby diagram as a closed 4-manifold.
        #[arg(long)]
        closed: bool,
    },
    /// Run a .kms move script.
    Run {
        script: PathBuf,
        /// Extra invariants watched from the first step.
        #[arg(long, value_delimiter = ',')]
        watch: Vec<String>,
    },
    /// Best-first search for a smaller diagram.
    Simplify {
        file: PathBuf,
        #[arg(long, default_value_t = 500)]
        budget: usize,
    },
    /// Build one diagram from another.
    Compile {
        #[command(subcommand)]
        target: Target,
        /// Write the result here instead of standard output.
        #[arg(long, short, global = true)]
        output: Option<PathBuf>,
    },
    /// Serve sessions over HTTP on localhost.
    Serve {
        #[arg(long, default_value_t = handlecalc_service::DEFAULT_PORT)]
        port: u16,
        /// Directory for session snapshots (loaded at start).
        #[arg(long)]
        snapshots: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum Target {
    /// Kirby diagram of the surgery along one side of a Heegaard diagram.
    Surgery {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = SideArg::Alpha)]
        side: SideArg,
    },
    /// Double of a Kirby diagram.
    Double { file: PathBuf },
    /// Heegaard diagram of the 5-dimensional thickening.
    Heegaard { file: PathBuf },
    /// Cobordism to the Gluck twist along a surface knot.
    Gluck {
        file: PathBuf,
        #[arg(long)]
        knot: PathBuf,
    },
    /// Surgery along a framed circle given as a diagram fragment.
    OneSurgery {
        file: PathBuf,
        #[arg(long)]
        circle: PathBuf,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        framing: i64,
    },
    /// Heegaard diagram of a double from S2-bundle data.
    S2double { file: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Alpha,
    Beta,
}

/// A domain failure: message for standard error, exit code 1.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Out = Result<(String, bool), Failure>;

fn base_dir(p: &Path) -> &Path {
    p.parent().unwrap_or(Path::new("."))
}

fn load(p: &Path) -> Result<State, Failure> {
    Ok(State::parse(&read(p)?)?)
}

fn load_kirby(p: &Path) -> Result<Diagram, Failure> {
    match load(p)? {
        State::Kirby(d) => Ok(d),
        State::Heegaard(_) => Err(Failure(format!("{} is a Heegaard diagram; a Kirby diagram is needed", p.display()))),
    }
}

/// Read `p`, falling back to the fixture root for bare names.
fn read(p: &Path) -> Result<String, Failure> {
    let p = resolve_path(Path::new("."), &p.to_string_lossy());
    std::fs::read_to_string(&p).map_err(|e| Failure(format!("cannot read {}: {e}", p.display())))
}

fn validate(file: &Path, fmt: Format) -> Out {
    let errors = match load(file) {
        Ok(s) => s.validate(),
        Err(Failure(e)) => vec![e],
    };
    let ok = errors.is_empty();
    let text = match fmt {
        Format::Machine => json!({"valid": ok, "errors": errors}).to_string(),
        Format::Text if ok => "valid".to_string(),
        Format::Text => errors.join("\n"),
    };
    Ok((text, ok))
}

fn default_keys(s: &State) -> Vec<String> {
    let homology = match s {
        State::Kirby(_) => 5,
        State::Heegaard(h) => match h.class {
            Some(FiveKind::Cobordism) => 0,
            _ => 6,
        },
    };
    let mut keys: Vec<String> = (0..homology).map(|i| format!("h{i}")).collect();
    keys.extend(["pi1ab", "chi", "recognize"].map(String::from));
    keys
}

fn label(key: &str) -> String {
    match key.strip_prefix('h') {
        Some(n) if n.parse::<usize>().is_ok() => format!("H{n}"),
        _ => key.to_string(),
    }
}

fn invariants(file: &Path, watch: &[String], closed: bool, fmt: Format) -> Out {
    let s = load(file)?;
    let keys = if watch.is_empty() { default_keys(&s) } else { watch.to_vec() };
    let mut ok = true;
    let mut rows = Vec::new();
    for k in &keys {
        let v = invariant(&s, k, closed).unwrap_or_else(|e| {
            ok = false;
            format!("error: {e}")
        });
        rows.push((k.clone(), v));
    }
    let text = match fmt {
        Format::Machine => serde_json::Value::Object(rows.into_iter().map(|(k, v)| (k, v.into())).collect()).to_string(),
        Format::Text => rows.iter().map(|(k, v)| format!("{} = {v}", label(k))).collect::<Vec<_>>().join("\n"),
    };
    Ok((text, ok))
}

fn run(script: &Path, watch: &[String], fmt: Format) -> Out {
    let script = &resolve_path(Path::new("."), &script.to_string_lossy());
    let ms = MoveScript::parse(&read(script)?)?;
    if !matches!(ms.steps.first().map(|s| &s.directive), Some(Directive::Load { .. })) {
        return Err(Failure("script must start with `load`".into()));
    }
    let trace = match run_watched(&ms, None, base_dir(script), watch) {
        Ok(t) => t,
        Err(f) => {
            return match fmt {
                Format::Machine => Ok((json!({"error": f.to_string(), "step": f.step, "trace": f.trace}).to_string(), false)),
                Format::Text => Err(Failure(f.to_string())),
            }
        }
    };
    let ok = trace.passed();
    if fmt == Format::Machine {
        return Ok((serde_json::to_string(&trace)?, ok));
    }
    let mut lines = Vec::new();
    for e in &trace.entries {
        let inv: Vec<String> = e.invariants.iter().map(|(k, v)| format!("{k}={v}")).collect();
        lines.push(format!("[{}] {} {}", e.step, e.directive, inv.join(" ")).trim_end().to_string());
    }
    for d in &trace.drift {
        lines.push(format!("DRIFT step {} `{}`: {} {} -> {}", d.step, d.directive, d.key, d.before, d.after));
    }
    if let Some(s) = trace.final_state() {
        lines.push(s.trim_end().to_string());
    }
    lines.extend(trace.expectations.iter().map(|e| e.to_string()));
    Ok((lines.join("\n"), ok))
}

fn simplify(file: &Path, budget: usize, fmt: Format) -> Out {
    let r = simplify_search(&load(file)?, budget);
    let text = match fmt {
        Format::Machine => serde_json::to_string(&r)?,
        Format::Text => {
            let mut lines: Vec<String> = r.witness.iter().map(|w| format!("# {w}")).collect();
            lines.push(r.best.to_text().trim_end().to_string());
            lines.join("\n")
        }
    };
    Ok((text, true))
}

fn compile(t: &Target) -> Result<State, Failure> {
    Ok(match t {
        Target::Surgery { file, side } => {
            let side = if *side == SideArg::Alpha { Side::Alpha } else { Side::Beta };
            match load(file)? {
                State::Heegaard(h) => State::Kirby(surgery_kirby(&h, side)?),
                State::Kirby(_) => return Err(Failure("surgery needs a Heegaard diagram".into())),
            }
        }
        Target::Double { file } => State::Kirby(double_kirby(&load_kirby(file)?)?),
        Target::Heegaard { file } => State::Heegaard(handlebody_heegaard(&load_kirby(file)?)?),
        Target::Gluck { file, knot } => State::Heegaard(gluck_cobordism(&load_kirby(file)?, &load_kirby(knot)?)?),
        Target::OneSurgery { file, circle, framing } => {
            State::Kirby(one_surgery(&load_kirby(file)?, &read(circle)?, *framing)?)
        }
        Target::S2double { file } => State::Heegaard(s2bundles_to_double(&load_kirby(file)?)?),
    })
}

fn dispatch(cli: Cli) -> Out {
    match &cli.cmd {
        Cmd::Validate { file } => validate(file, cli.format),
        Cmd::Invariants { file, watch, closed } => invariants(file, watch, *closed, cli.format),
        Cmd::Run { script, watch } => run(script, watch, cli.format),
        Cmd::Simplify { file, budget } => simplify(file, *budget, cli.format),
        Cmd::Compile { target, output } => {
            let s = compile(target)?.canonical();
            let text = match cli.format {
                Format::Machine => serde_json::to_string(&s)?,
                Format::Text => s.to_text().trim_end().to_string(),
            };
            match output {
                Some(p) => {
                    std::fs::write(p, format!("{text}\n"))?;
                    Ok((String::new(), true))
                }
                None => Ok((text, true)),
            }
        }
        Cmd::Serve { port, snapshots } => {
            let app = match snapshots {
                Some(d) => handlecalc_service::AppState::with_snapshots(d.clone())?,
                None => handlecalc_service::AppState::new(),
            };
            let rt = tokio::runtime::Runtime::new()?;
            eprintln!("serving on http://127.0.0.1:{port}");
            rt.block_on(handlecalc_service::serve(*port, app))?;
            Ok((String::new(), true))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok((text, ok)) => {
            if !text.is_empty() {
                // A closed pipe (e.g. `| head`) is not an error worth reporting.
                let _ = writeln!(std::io::stdout(), "{text}");
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
