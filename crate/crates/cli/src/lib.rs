//! Command-line front end: every subcommand reads JSON files, writes one
//! JSON document to standard output and diagnostics to standard error.
//!
//! Exit codes: 0 success, 1 domain error (stdout carries
//! `{"error": <name>, "message": ...}`), 2 malformed input or usage error.

use std::io::Read;

use clap::{Args, Parser, Subcommand};
use nahm_rat::bwpairs::{relate, BWPair};
use nahm_rat::flow::{donaldson_flow, extract_map, FlowOptions};
use nahm_rat::json::{self, MapFile};
use nahm_rat::monodromy::continue_loop;
use nahm_rat::nahm::{interior_grid, nahm_residual, residue_fit, Endpoint, ResidueFit};
use nahm_rat::{Error, Tolerances};
use serde_json::{json, Value};

mod selftest;

/// Outcome of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandResult {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Parser)]
#[command(name = "nahm-rat", version, about = "Nahm data, (B, W) pairs and based rational maps")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Numerical tolerance of the subcommand: rank cutoff (project),
    /// coprimality (lift), cyclicity (cyclic), ODE error (flow),
    /// sign matching (relate, monodromy).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Relative separation below which poles count as coincident.
    #[arg(long, global = true)]
    delta: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rational map W^t (zI - B)^{-1} W of a pair file.
    Project {
        #[arg(long)]
        pair: String,
    },
    /// Diagonal pair over a map with distinct poles.
    Lift {
        #[arg(long)]
        map: String,
    },
    /// Krylov determinant of a pair and whether W is cyclic for B.
    Cyclic {
        #[arg(long)]
        pair: String,
    },
    /// Scattering flow of Nahm data to (B, W).
    Flow {
        /// `k1:c1,c2,c3`, `k2:m` or a Nahm data file.
        #[arg(long)]
        nahm: String,
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Residual of Nahm's equations and residue diagnostics.
    VerifyNahm {
        #[arg(long)]
        nahm: String,
        /// Number of interior grid points.
        #[arg(long, default_value_t = 1001)]
        grid: usize,
    },
    /// Signed permutation obtained by continuing the diagonal lift along a loop.
    Monodromy {
        #[arg(long = "loop")]
        loop_file: String,
        /// Write the continuation trace as CSV.
        #[arg(long)]
        trace: Option<String>,
    },
    /// Signed permutation relating two diagonal pairs.
    Relate {
        #[arg(long)]
        pair: String,
        #[arg(long)]
        pair2: String,
    },
    /// Randomized consistency checks.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Runs with standard input available for `-` file arguments.
pub fn run(argv: &[String]) -> CommandResult {
    run_with_stdin(argv, &mut std::io::stdin())
}

/// Runs with `stdin` read (at most once) for a `-` file argument.
pub fn run_with_stdin(argv: &[String], stdin: &mut dyn Read) -> CommandResult {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                CommandResult { code, stdout: text, stderr: String::new() }
            } else {
                CommandResult { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let mut ctx = Context { stdin: Some(stdin), stderr: String::new() };
    match dispatch(&cli, &mut ctx) {
        Ok(value) => CommandResult { code: 0, stdout: json::to_string(&value) + "\n", stderr: ctx.stderr },
        Err(Failure::Usage(msg)) => CommandResult { code: 2, stdout: String::new(), stderr: ctx.stderr + &msg + "\n" },
        Err(Failure::Domain(e)) if e.is_format() => {
            CommandResult { code: 2, stdout: String::new(), stderr: ctx.stderr + &format!("input error: {e}\n") }
        }
        Err(Failure::Selftest(report)) => CommandResult {
            code: 1,
            stdout: json::to_string(&json!({ "error": "SelftestFailed", "report": report })) + "\n",
            stderr: ctx.stderr + "SelftestFailed\n",
        },
        Err(Failure::Domain(e)) => CommandResult {
            code: 1,
            stdout: json::to_string(&json!({ "error": e.name(), "message": e.to_string() })) + "\n",
            stderr: ctx.stderr + &format!("{}: {e}\n", e.name()),
        },
    }
}

enum Failure {
    Usage(String),
    Domain(Error),
    Selftest(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

struct Context<'a> {
    stdin: Option<&'a mut dyn Read>,
    stderr: String,
}

impl Context<'_> {
    fn read(&mut self, path: &str) -> Result<String, Failure> {
        if path == "-" {
            let stdin = self.stdin.take().ok_or_else(|| Failure::Usage("standard input can be read only once".into()))?;
            let mut text = String::new();
            stdin.read_to_string(&mut text).map_err(|e| Failure::Usage(format!("reading standard input: {e}")))?;
            return Ok(text);
        }
        std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))
    }

    fn note(&mut self, msg: impl AsRef<str>) {
        self.stderr.push_str(msg.as_ref());
        self.stderr.push('\n');
    }
}

fn check_positive(name: &str, v: Option<f64>) -> Result<Option<f64>, Failure> {
    match v {
        Some(x) if !(x.is_finite() && x > 0.0) => Err(Failure::Usage(format!("--{name} must be positive and finite"))),
        _ => Ok(v),
    }
}

fn dispatch(cli: &Cli, ctx: &mut Context) -> Result<Value, Failure> {
    let tol_flag = check_positive("tol", cli.global.tol)?;
    let mut tol = Tolerances::default();
    if let Some(d) = check_positive("delta", cli.global.delta)? {
        tol.delta = d;
    }
    match &cli.command {
        Command::Project { pair } => {
            if let Some(t) = tol_flag {
                tol.rank = t;
            }
            let p = json::parse_pair(&ctx.read(pair)?, &tol)?;
            let proj = p.project_with(&tol)?;
            if proj.degree_drop {
                ctx.note(format!(
                    "degree drop: W is not cyclic for B, the map has degree {} < k = {}",
                    proj.map.k(),
                    p.k()
                ));
            }
            Ok(json::map_to_json(&proj.map))
        }
        Command::Lift { map } => {
            if let Some(t) = tol_flag {
                tol.coprime = t;
            }
            let pair = match json::parse_map(&ctx.read(map)?, &tol)? {
                MapFile::Coefficients(f) => BWPair::lift_distinct(&f, &tol)?,
                MapFile::PartialFractions(pf) => BWPair::lift_partial_fractions(&pf),
            };
            Ok(json::pair_to_json(&pair))
        }
        Command::Cyclic { pair } => {
            if let Some(t) = tol_flag {
                tol.cyclic = t;
            }
            let p = json::parse_pair(&ctx.read(pair)?, &tol)?;
            let det = p.cyclicity();
            Ok(json!({ "k": p.k(), "determinant": [det.re, det.im], "cyclic": p.is_cyclic(&tol) }))
        }
        Command::Flow { nahm, eps } => {
            let mut opts = FlowOptions::default();
            if let Some(e) = eps {
                opts.epsilon = *e;
            }
            if let Some(t) = tol_flag {
                opts.tol = t;
            }
            let data = load_nahm(nahm, ctx)?;
            let res = donaldson_flow(&data, &opts)?;
            ctx.note(&res.diagnostics);
            let map = if res.endpoint_divergence_flag {
                ctx.note("endpoint divergence: no map extracted");
                Value::Null
            } else {
                match extract_map(&res) {
                    Ok(f) => json::map_to_json(&f),
                    Err(e) => {
                        ctx.note(format!("no map extracted: {}: {e}", e.name()));
                        Value::Null
                    }
                }
            };
            Ok(json!({
                "k": data.k(),
                "B": json::matrix_json(&res.b),
                "W": json::vec_json(res.w.iter()),
                "epsilon_used": res.epsilon_used,
                "extrapolation_error": res.extrapolation_error,
                "endpoint_divergence_flag": res.endpoint_divergence_flag,
                "diagnostics": res.diagnostics,
                "map": map,
            }))
        }
        Command::VerifyNahm { nahm, grid } => {
            if *grid == 0 {
                return Err(Failure::Usage("--grid must be at least 1".into()));
            }
            let data = load_nahm(nahm, ctx)?;
            let residual = nahm_residual(&data, &interior_grid(*grid))?;
            let mut fits = Vec::new();
            for end in [Endpoint::Minus, Endpoint::Plus] {
                fits.push(match residue_fit(&data, end) {
                    Ok(fit) => fit_json(&fit),
                    Err(e @ Error::NoPole { .. }) => {
                        ctx.note(format!("{}: {e}", e.name()));
                        Value::Null
                    }
                    Err(e) => return Err(e.into()),
                });
            }
            let [minus, plus]: [Value; 2] = fits.try_into().expect("two endpoints");
            Ok(json!({
                "k": data.k(),
                "grid": grid,
                "residual": residual,
                "residue_minus": minus,
                "residue_plus": plus,
            }))
        }
        Command::Monodromy { loop_file, trace } => {
            if let Some(t) = tol_flag {
                tol.sign_match = t;
            }
            let spec = json::parse_loop(&ctx.read(loop_file)?, &tol)?;
            let (g, tr) = continue_loop(&spec)?;
            ctx.note(format!("{} continuation steps", tr.steps));
            if let Some(path) = trace {
                std::fs::write(path, tr.to_csv()).map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
            }
            Ok(json::permutation_to_json(&g))
        }
        Command::Relate { pair, pair2 } => {
            if let Some(t) = tol_flag {
                tol.sign_match = t;
            }
            let p1 = json::parse_pair(&ctx.read(pair)?, &tol)?;
            let p2 = json::parse_pair(&ctx.read(pair2)?, &tol)?;
            Ok(json::permutation_to_json(&relate(&p1, &p2, &tol)?))
        }
        Command::Selftest { seed } => {
            let report = selftest::run(*seed, &tol);
            for line in &report.lines {
                ctx.note(line);
            }
            if report.all_passed() {
                Ok(report.to_json())
            } else {
                Err(Failure::Selftest(report.to_json()))
            }
        }
    }
}

fn load_nahm(spec: &str, ctx: &mut Context) -> Result<nahm_rat::nahm::NahmData, Failure> {
    match json::parse_nahm_spec(spec)? {
        json::NahmSpec::File(path) => Ok(json::parse_nahm(&ctx.read(&path)?)?),
        other => Ok(other.load(|_| unreachable!("built-in data reads no file"))?),
    }
}

fn fit_json(fit: &ResidueFit) -> Value {
    json!({
        "t1": json::matrix_json(&fit.t[0]),
        "t2": json::matrix_json(&fit.t[1]),
        "t3": json::matrix_json(&fit.t[2]),
        "spectrum": json::vec_json(&fit.spectrum),
        "residue_defect": fit.residue_defect,
        "irreducible": fit.irreducible,
    })
}
