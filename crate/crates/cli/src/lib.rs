//! Command-line front end. `run` parses arguments, dispatches a subcommand
//! and returns the process exit code.

use std::ffi::OsString;
use std::io::Write;

use bellnoise::inequalities::{
    bell_check, bell_check_random, chsh_value, extended_chsh_value, ExtendedChshCoefficients,
    MaximizerRegistry, Settings,
};
use bellnoise::observables::{parse_observable, QubitObservableParams};
use bellnoise::report::{self, round_significant};
use bellnoise::singlet_lab::{peres_pt_min_eig, singlet_report};
use bellnoise::source_ops::{certify, minimal_positive_beta, DilationRegistry, MinimalBeta};
use bellnoise::states::{resolve_state, BipartiteState, REGISTRY_HELP};
use bellnoise::thresholds::threshold_report;
use bellnoise::Result;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "bellnoise",
    version,
    about = "Noise thresholds, source-operator certificates and Bell functionals for bipartite states"
)]
struct Cli {
    /// Emit aligned `key  value` text instead of JSON.
    #[arg(long, global = true, conflicts_with = "json")]
    text: bool,

    /// Emit JSON (the default).
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct StateArg {
    #[arg(long, help = format!("Registry name ({REGISTRY_HELP}) or JSON state file"))]
    state: String,
}

#[derive(Args, Debug)]
struct SeedArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,

    #[arg(long, default_value_t = 8)]
    restarts: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduced-state parameter gamma and both noise thresholds.
    Bounds {
        #[command(flatten)]
        state: StateArg,

        #[arg(long, default_value_t = 1e-10)]
        marginal_tol: f64,
    },
    /// Build a source operator at a noise level and check positivity.
    Certify {
        #[command(flatten)]
        state: StateArg,

        #[arg(long)]
        beta: f64,

        #[arg(long, default_value = "right")]
        construction: String,

        /// Relative PSD tolerance.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,

        #[arg(long, default_value_t = 1e-10)]
        marginal_tol: f64,
    },
    /// Smallest noise level at which a construction is positive.
    MinBeta {
        #[command(flatten)]
        state: StateArg,

        /// One construction; all applicable ones when omitted.
        #[arg(long)]
        construction: Option<String>,

        /// Bisection tolerance on beta.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,

        #[arg(long, default_value_t = 1e-10)]
        marginal_tol: f64,
    },
    /// Maximal CHSH value over observables.
    ChshMax {
        #[command(flatten)]
        state: StateArg,

        /// two-qubit or seesaw; picked from the dimensions when omitted.
        #[arg(long)]
        method: Option<String>,

        #[command(flatten)]
        seeds: SeedArgs,
    },
    /// Both lines of the perfect-correlation Bell form.
    BellCheck {
        #[command(flatten)]
        state: StateArg,

        /// Observables: Pauli name (x, y, z, -x, ...), inline JSON or file.
        #[arg(long, allow_hyphen_values = true, requires_all = ["w2", "w3"])]
        w1: Option<String>,

        #[arg(long, allow_hyphen_values = true, requires_all = ["w1", "w3"])]
        w2: Option<String>,

        #[arg(long, allow_hyphen_values = true, requires_all = ["w1", "w2"])]
        w3: Option<String>,

        /// Random triples to test when no observables are given.
        #[arg(long, default_value_t = 1000, conflicts_with = "w1")]
        samples: usize,

        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Extended CHSH value with coefficients g11,g12,g21,g22.
    ExtendedChsh {
        #[command(flatten)]
        state: StateArg,

        #[arg(long, value_parser = parse_floats::<4>, allow_hyphen_values = true, default_value = "1,1,1,-1")]
        gamma: [f64; 4],

        /// Settings; taken from the CHSH maximiser when omitted.
        #[arg(long, allow_hyphen_values = true, requires_all = ["a2", "b1", "b2"])]
        a1: Option<String>,

        #[arg(long, allow_hyphen_values = true, requires_all = ["a1", "b1", "b2"])]
        a2: Option<String>,

        #[arg(long, allow_hyphen_values = true, requires_all = ["a1", "a2", "b2"])]
        b1: Option<String>,

        #[arg(long, allow_hyphen_values = true, requires_all = ["a1", "a2", "b1"])]
        b2: Option<String>,

        #[command(flatten)]
        seeds: SeedArgs,
    },
    /// Noisy-singlet correlation and joint probabilities for W = alpha I + n.sigma.
    Singlet {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        alpha: f64,

        #[arg(long, value_parser = parse_floats::<3>, allow_hyphen_values = true, default_value = "0,0,1")]
        n: [f64; 3],

        #[arg(long)]
        beta: f64,
    },
    /// Smallest partial-transpose eigenvalue of the noisy phased state.
    Peres {
        #[arg(long)]
        d: usize,

        #[arg(long)]
        beta: f64,

        /// Comma-separated phases; zeros when omitted.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        phases: Vec<f64>,
    },
    /// Reproduce the example table end to end.
    Demo {
        #[command(flatten)]
        seeds: SeedArgs,

        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

#[derive(Serialize)]
struct MinBetaReport {
    results: Vec<MinimalBeta>,
}

#[derive(Serialize)]
#[serde(untagged)]
enum BellReport {
    Single(bellnoise::inequalities::BellCheck),
    Sweep(bellnoise::inequalities::BellSweep),
}

fn parse_floats<const N: usize>(s: &str) -> std::result::Result<[f64; N], String> {
    let values = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("'{t}': {e}")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    values
        .try_into()
        .map_err(|v: Vec<f64>| format!("expected {N} comma-separated numbers, got {}", v.len()))
}

fn load_state(arg: &StateArg) -> Result<BipartiteState> {
    resolve_state(&arg.state)
}

fn emit<T: Serialize>(report: &T, text: bool) -> Result<String> {
    if text {
        let v = serde_json::to_value(report)?;
        Ok(render_text(&v))
    } else {
        report::to_json(report)
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                flatten(&key(k), child, out);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            out.push((prefix.to_string(), format!("[{}]", parts.join(", "))));
        }
        Value::Array(items) => {
            for (i, child) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), child, out);
            }
        }
        _ => out.push((prefix.to_string(), scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => format!("{}", round_significant(x)),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn render_text(v: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter()
        .map(|(k, val)| format!("{k:<width$}  {val}"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn execute(cli: Cli) -> Result<String> {
    let text = cli.text;
    match cli.command {
        Command::Bounds {
            state,
            marginal_tol,
        } => {
            let rho = load_state(&state)?;
            emit(&threshold_report(&rho, marginal_tol), text)
        }
        Command::Certify {
            state,
            beta,
            construction,
            tol,
            marginal_tol,
        } => {
            let rho = load_state(&state)?;
            let registry = DilationRegistry::standard(marginal_tol);
            let t = registry.get(&construction)?.build(&rho, beta)?;
            emit(&certify(&t, tol)?, text)
        }
        Command::MinBeta {
            state,
            construction,
            tol,
            marginal_tol,
        } => {
            let rho = load_state(&state)?;
            let registry = DilationRegistry::standard(marginal_tol);
            let mut results = Vec::new();
            match construction {
                Some(name) => results.push(minimal_positive_beta(&rho, registry.get(&name)?, tol)?),
                None => {
                    for d in registry.iter() {
                        if d.check(&rho).is_ok() {
                            results.push(minimal_positive_beta(&rho, d, tol)?);
                        }
                    }
                }
            }
            emit(&MinBetaReport { results }, text)
        }
        Command::ChshMax {
            state,
            method,
            seeds,
        } => {
            let rho = load_state(&state)?;
            let registry = MaximizerRegistry::standard(seeds.restarts, seeds.seed);
            let m = match method {
                Some(name) => registry.get(&name)?,
                None => registry.auto(&rho)?,
            };
            emit(&m.maximize(&rho)?.report(), text)
        }
        Command::BellCheck {
            state,
            w1,
            w2,
            w3,
            samples,
            seed,
        } => {
            let rho = load_state(&state)?;
            let report = match (w1, w2, w3) {
                (Some(a), Some(b), Some(c)) => BellReport::Single(bell_check(
                    &rho,
                    &parse_observable(&a)?,
                    &parse_observable(&b)?,
                    &parse_observable(&c)?,
                )?),
                _ => BellReport::Sweep(bell_check_random(&rho, samples, seed)?),
            };
            emit(&report, text)
        }
        Command::ExtendedChsh {
            state,
            gamma,
            a1,
            a2,
            b1,
            b2,
            seeds,
        } => {
            let rho = load_state(&state)?;
            let g = ExtendedChshCoefficients::try_from(gamma)?;
            let settings = match (a1, a2, b1, b2) {
                (Some(a1), Some(a2), Some(b1), Some(b2)) => Settings {
                    a1: parse_observable(&a1)?,
                    a2: parse_observable(&a2)?,
                    b1: parse_observable(&b1)?,
                    b2: parse_observable(&b2)?,
                },
                _ => {
                    let registry = MaximizerRegistry::standard(seeds.restarts, seeds.seed);
                    registry.auto(&rho)?.maximize(&rho)?.settings
                }
            };
            let report = if g == ExtendedChshCoefficients::chsh() {
                chsh_value(&rho, &settings)?
            } else {
                extended_chsh_value(&rho, &settings, &g)?
            };
            emit(&report, text)
        }
        Command::Singlet { alpha, n, beta } => {
            let p = QubitObservableParams::new(alpha, n);
            emit(&singlet_report(&p, beta)?, text)
        }
        Command::Peres { d, beta, phases } => emit(&peres_pt_min_eig(d, beta, &phases)?, text),
        Command::Demo { seeds, tol } => emit(&report::demo(seeds.restarts, seeds.seed, tol)?, text),
    }
}

/// Runs the CLI on `args` (program name first), writing the report to
/// stdout and errors to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = writeln!(stdout, "{out}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_DOMAIN
        }
    }
}
