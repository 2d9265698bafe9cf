//! `tamepmi` command-line entry point.
//!
//! Errors print `ERROR code=<code>` on the first line of stderr, followed
//! by a human-readable message. Exit status is 0 on success, 1 on input
//! errors and 2 when no feasible point was found.

mod problem;

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use problem::{Problem, ProblemFile};
use tamepmi::oracle::{grid_solve, GridSpec, DEFAULT_CAP};
use tamepmi::solver::{solve_factorized, solve_pmi, write_trajectory_csv, SolveError};
use tamepmi::tamecheck::{classify, parse_interval, parse_sexpr, Interval};
use tamepmi::{RepId, SearchBox, SolveConfig, SolveResult};

#[derive(Parser)]
#[command(name = "tamepmi", version, about = "Polynomial matrix inequality solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem file with one representation, or `all`.
    Solve {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        rep: String,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Weight schedule `start:factor:end`, e.g. `1e-3:sqrt(10):1e-1`.
        #[arg(long)]
        schedule: Option<String>,
        /// Factor rank for the matrix-variable problem.
        #[arg(long, default_value_t = 1)]
        rank: usize,
        /// Starting bracket `lo,hi` for the bound representation.
        #[arg(long, allow_hyphen_values = true)]
        bracket: Option<String>,
        /// Trajectory CSV path.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Print the characteristic polynomial coefficients q_j.
    Charpoly {
        #[arg(long)]
        problem: PathBuf,
        /// Evaluate at a comma-separated point.
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// Exhaustive grid search over the box.
    Oracle {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long, default_value_t = 1e-2)]
        h: f64,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        /// `lo:hi` for every variable, or one `lo:hi` per variable
        /// separated by commas.
        #[arg(long = "box", allow_hyphen_values = true)]
        search_box: Option<String>,
    },
    /// Print a problem file in canonical form.
    Format {
        #[arg(long)]
        problem: PathBuf,
    },
    /// Print the structure label of an s-expression.
    Classify {
        expr: String,
        /// Variable domain, e.g. `x=[0,4pi]`; repeatable.
        #[arg(long = "var", allow_hyphen_values = true)]
        vars: Vec<String>,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Problem(#[from] problem::ProblemError),
    #[error("{0}")]
    UnknownRep(String),
    #[error("representation '{rep}' does not apply to {kind} problems")]
    KindMismatch { rep: String, kind: &'static str },
    #[error("{0}")]
    Solve(SolveError),
    #[error("{0}")]
    Oracle(String),
    #[error("{0}")]
    Classify(String),
    #[error("no feasible point found")]
    NoFeasible(Option<Value>),
}

impl CliError {
    fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
            CliError::Problem(problem::ProblemError::Json(_)) => "parse",
            CliError::Problem(_) => "invalid_problem",
            CliError::UnknownRep(_) => "unknown_rep",
            CliError::KindMismatch { .. } => "kind_mismatch",
            CliError::Solve(SolveError::Config(_)) => "config",
            CliError::Solve(SolveError::Unsupported(_)) => "unsupported",
            CliError::Solve(_) => "solve",
            CliError::Oracle(_) => "oracle",
            CliError::Classify(_) => "classify",
            CliError::NoFeasible(_) => "no_feasible_point",
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::NoFeasible(_) => 2,
            _ => 1,
        }
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::NoFeasiblePoint => CliError::NoFeasible(None),
            e => CliError::Solve(e),
        }
    }
}

fn print_json(v: &Value) {
    // serde_json maps keep keys sorted
    println!("{}", serde_json::to_string_pretty(v).expect("plain data"));
}

fn load(path: &Path) -> Result<Problem, CliError> {
    let src = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(ProblemFile::parse(&src)?.build()?)
}

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("{what}: '{t}' is not a number"))))
        .collect()
}

fn result_json(r: &SolveResult) -> Value {
    let mut v = json!({
        "rep": r.rep,
        "best_point": r.best_point,
        "best_value": r.best_value,
        "feasible": r.feasible,
        "iterations": r.iterations,
    });
    if let Some(c) = r.certified {
        v["certified"] = json!(c);
    }
    if let Some((lo, hi)) = r.bhat_interval {
        v["bhat_interval"] = json!([lo, hi]);
    }
    v
}

fn write_csv(path: &Path, r: &SolveResult, names: &[String]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let f = File::create(path).map_err(io)?;
    write_trajectory_csv(BufWriter::new(f), &r.trajectory, names).map_err(io)
}

/// `out.csv` becomes `out.<rep>.csv` when several reps write trajectories.
fn per_rep_path(path: &Path, rep: RepId) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = path.extension().map(|e| e.to_string_lossy().into_owned()).unwrap_or_else(|| "csv".into());
    path.with_file_name(format!("{stem}.{rep}.{ext}"))
}

const PMI_REPS: [RepId; 4] = [RepId::Charpoly, RepId::Logdet, RepId::Detr, RepId::Bound];

#[allow(clippy::too_many_arguments)]
fn cmd_solve(
    problem: &Path,
    rep: &str,
    restarts: Option<usize>,
    seed: u64,
    schedule: Option<&str>,
    rank: usize,
    bracket: Option<&str>,
    out: Option<&Path>,
    json_out: bool,
) -> Result<(), CliError> {
    let prob = load(problem)?;
    let all = rep == "all";
    let reps: Vec<RepId> = if all {
        match prob {
            Problem::Pmi(_) => PMI_REPS.to_vec(),
            Problem::MatrixVar(_) => vec![RepId::Factorization],
        }
    } else {
        vec![rep.parse().map_err(CliError::UnknownRep)?]
    };
    let mut cfg = SolveConfig {
        restarts,
        seed,
        schedule: schedule.map(str::parse).transpose()?,
        ..Default::default()
    };
    if let Some(b) = bracket {
        match parse_list(b, "bracket")?.as_slice() {
            [lo, hi] => cfg.bracket = Some((*lo, *hi)),
            _ => return Err(CliError::Usage("bracket takes lo,hi".into())),
        }
    }
    let mut rows = Vec::new();
    for &r in &reps {
        let (res, names) = match (&prob, r) {
            (Problem::Pmi(_), RepId::Factorization) => {
                return Err(CliError::KindMismatch { rep: r.to_string(), kind: "pmi" });
            }
            (Problem::Pmi(p), _) => (solve_pmi(p, r, &cfg), p.names.clone()),
            (Problem::MatrixVar(m), RepId::Factorization) => {
                let names = (0..rank)
                    .flat_map(|a| (0..m.dim).map(move |i| format!("v{a}_{i}")))
                    .collect();
                (solve_factorized(m, rank, &cfg), names)
            }
            (Problem::MatrixVar(_), _) => {
                return Err(CliError::KindMismatch { rep: r.to_string(), kind: "matrixvar" });
            }
        };
        match res {
            Ok(res) => {
                if let Some(path) = out {
                    let path = if all { per_rep_path(path, r) } else { path.to_path_buf() };
                    write_csv(&path, &res, &names)?;
                }
                rows.push(Ok(res));
            }
            Err(SolveError::NoFeasiblePoint) if all => rows.push(Err(r)),
            Err(e) => return Err(e.into()),
        }
    }
    emit_solve(&rows, all, json_out)?;
    if rows.iter().all(|r| r.is_err()) {
        return Err(CliError::NoFeasible(None));
    }
    Ok(())
}

fn emit_solve(rows: &[Result<SolveResult, RepId>], all: bool, json_out: bool) -> Result<(), CliError> {
    if json_out {
        if all {
            let mut map = serde_json::Map::new();
            for row in rows {
                match row {
                    Ok(r) => map.insert(r.rep.to_string(), result_json(r)),
                    Err(rep) => map.insert(rep.to_string(), json!({"rep": rep, "error": "no_feasible_point"})),
                };
            }
            print_json(&Value::Object(map));
        } else if let Some(Ok(r)) = rows.first() {
            print_json(&result_json(r));
        }
        return Ok(());
    }
    println!("{:<14} {:>14} {:>9} {:>10}  best_point", "rep", "best_value", "feasible", "iterations");
    for row in rows {
        match row {
            Ok(r) => {
                let pt = r.best_point.iter().map(|v| format!("{v:.6}")).collect::<Vec<_>>().join(", ");
                let mut line = format!(
                    "{:<14} {:>14.8} {:>9} {:>10}  [{pt}]",
                    r.rep.to_string(),
                    r.best_value,
                    r.feasible,
                    r.iterations
                );
                if let Some(c) = r.certified {
                    line.push_str(&format!("  certified={c}"));
                }
                if let Some((lo, hi)) = r.bhat_interval {
                    line.push_str(&format!("  bhat=[{lo:.6}, {hi:.6}]"));
                }
                println!("{line}");
            }
            Err(rep) => println!("{:<14} {:>14}", rep.to_string(), "infeasible"),
        }
    }
    Ok(())
}

fn cmd_charpoly(problem: &Path, at: Option<&str>) -> Result<(), CliError> {
    let Problem::Pmi(p) = load(problem)? else {
        return Err(CliError::KindMismatch { rep: "charpoly".into(), kind: "matrixvar" });
    };
    let cp = p.matrix.charpoly().map_err(|e| CliError::Solve(SolveError::Repr(e.into())))?;
    let names: Vec<&str> = p.names.iter().map(String::as_str).collect();
    let mut out = json!({
        "q": cp.q.iter().map(|q| q.to_term_list()).collect::<Vec<_>>(),
        "text": cp.q.iter().map(|q| q.display_with(&names)).collect::<Vec<_>>(),
    });
    if let Some(at) = at {
        let z = parse_list(at, "at")?;
        if z.len() != p.num_vars() {
            return Err(CliError::Usage(format!("--at needs {} coordinates, got {}", p.num_vars(), z.len())));
        }
        out["at"] = json!(z);
        out["values"] = json!(cp.eval_at(&z));
    }
    print_json(&out);
    Ok(())
}

fn parse_box(s: &str, n: usize) -> Result<SearchBox, CliError> {
    let bad = || CliError::Usage(format!("box '{s}' is not lo:hi[,lo:hi...]"));
    let parts = s
        .split(',')
        .map(|p| {
            let (lo, hi) = p.split_once(':').ok_or_else(bad)?;
            Ok((lo.trim().parse::<f64>().map_err(|_| bad())?, hi.trim().parse::<f64>().map_err(|_| bad())?))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let parts = match parts.len() {
        1 => vec![parts[0]; n],
        k if k == n => parts,
        k => return Err(CliError::Usage(format!("box has {k} ranges for {n} variables"))),
    };
    SearchBox::new(parts.iter().map(|p| p.0).collect(), parts.iter().map(|p| p.1).collect())
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn cmd_oracle(problem: &Path, h: f64, cap: u64, search_box: Option<&str>) -> Result<(), CliError> {
    let Problem::Pmi(p) = load(problem)? else {
        return Err(CliError::KindMismatch { rep: "oracle".into(), kind: "matrixvar" });
    };
    let bx = match (search_box, &p.search_box) {
        (Some(s), _) => parse_box(s, p.num_vars())?,
        (None, Some(b)) => b.clone(),
        (None, None) => return Err(CliError::Usage("the oracle needs a box, in the file or via --box".into())),
    };
    let spec = GridSpec { cap, ..GridSpec::new(bx, h) };
    let r = grid_solve(&p, &spec).map_err(|e| CliError::Oracle(e.to_string()))?;
    let v = serde_json::to_value(&r).expect("plain data");
    if r.best_value.is_none() {
        return Err(CliError::NoFeasible(Some(v)));
    }
    print_json(&v);
    Ok(())
}

fn cmd_classify(expr: &str, vars: &[String]) -> Result<(), CliError> {
    let parsed = parse_sexpr(expr).map_err(|e| CliError::Classify(e.to_string()))?;
    let mut domains = vec![Interval::entire(); parsed.var_names.len()];
    for v in vars {
        let (name, dom) = v
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--var '{v}' is not name=interval")))?;
        let i = parsed
            .var_names
            .iter()
            .position(|n| n == name.trim())
            .ok_or_else(|| CliError::Usage(format!("variable '{name}' does not occur in the expression")))?;
        domains[i] = parse_interval(dom.trim())
            .map_err(|e| CliError::Usage(format!("--var '{v}': {e}")))?;
    }
    let label = classify(&parsed.expr, &domains).map_err(|e| CliError::Classify(e.to_string()))?;
    println!("{}", label.as_str());
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve { problem, rep, restarts, seed, schedule, rank, bracket, out, json } => cmd_solve(
            &problem,
            &rep,
            restarts,
            seed,
            schedule.as_deref(),
            rank,
            bracket.as_deref(),
            out.as_deref(),
            json,
        ),
        Command::Charpoly { problem, at } => cmd_charpoly(&problem, at.as_deref()),
        Command::Oracle { problem, h, cap, search_box } => cmd_oracle(&problem, h, cap, search_box.as_deref()),
        Command::Format { problem } => {
            println!("{}", ProblemFile::canonical(&load(&problem)?).to_json());
            Ok(())
        }
        Command::Classify { expr, vars } => cmd_classify(&expr, &vars),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("ERROR code=usage");
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if let CliError::NoFeasible(Some(v)) = &e {
                print_json(v);
            }
            eprintln!("ERROR code={}", e.code());
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
