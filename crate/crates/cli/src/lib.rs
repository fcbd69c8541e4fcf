//! Command-line front end: file formats and the `zerohalf` subcommands.
//!
//! [`run_command`] does all the work and returns the exit status together
//! with what should go to standard output and standard error, so the binary
//! is a thin wrapper and tests can drive commands in-process.

pub mod format;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Signed;
use thiserror::Error;
use zerohalf::closure::{approx_optimize, approx_optimize_presolved, ApproxParams, ClosureError};
use zerohalf::gen::{rng_from_seed, separation_case, Profile};
use zerohalf::matching::solve_matching;
use zerohalf::oracle::{BruteOracle, OracleError};
use zerohalf::rational::{self, render, render_all, Rational};
use zerohalf::sep_col::{primal_separate_col, SepColError};
use zerohalf::sep_row::{primal_separate_row, SepRowError};
use zerohalf::{
    compute_context, derive_cut, is_tight_nontrivial, parity_profile, IlpInstance, Multipliers,
    Point, Separated,
};

use crate::format::{parse_graph, parse_instance, parse_point, write_instance, write_point};

#[derive(Debug, Parser)]
#[command(name = "zerohalf", version, about = "Separation and closure tools for {0,1/2}-cuts")]
struct Cli {
    /// Worker threads for candidate-parallel separation.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Col,
    Row,
    Auto,
    Oracle,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Find the most violated cut that is tight at xhat.
    Separate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        xhat: PathBuf,
        #[arg(long)]
        xstar: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        #[arg(long, default_value_t = 2)]
        modulus: u32,
    },
    /// Optimize the objective over the bounded-support relaxation.
    Approx {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        epsilon: String,
        #[arg(long, default_value_t = 2)]
        modulus: u32,
        #[arg(long)]
        presolve_monotone: bool,
    },
    /// Maximum-weight matching by primal cutting planes.
    Match {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        stats: bool,
    },
    /// Exact optimum over the closure, by enumeration.
    OracleOpt {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 2)]
        modulus: u32,
    },
    /// Report validity, tightness and nontriviality of given multipliers.
    Check {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        xhat: PathBuf,
        #[arg(long, num_args = 1..)]
        lambda: Vec<String>,
        #[arg(long, num_args = 1..)]
        mu_down: Vec<String>,
        #[arg(long, num_args = 1..)]
        mu_up: Vec<String>,
        /// Grid of the multipliers; defaults to the common denominator.
        #[arg(long)]
        modulus: Option<u32>,
    },
    /// Print the odd-entry counts per column and row.
    Profile {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Random instance with integral xhat and fractional xstar.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long, default_value = "col2")]
        profile: Profile,
        /// Write PREFIX.ilp, PREFIX.xhat and PREFIX.xstar instead of printing.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Exit status and output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Error)]
enum CliError {
    /// Bad arguments or unreadable input; exit status 1.
    #[error("{0}")]
    Usage(String),
    /// Well-formed input that violates a precondition; exit status 2. The
    /// report, if any, still goes to standard output.
    #[error("{message}")]
    Precondition { message: String, report: String },
}

impl CliError {
    fn precondition(message: impl ToString) -> Self {
        CliError::Precondition {
            message: message.to_string(),
            report: String::new(),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<IlpInstance, CliError> {
    parse_instance(&read(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn load_point(path: &Path, n: usize) -> Result<Point, CliError> {
    parse_point(&read(path)?, n).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn parse_rational(text: &str, what: &str) -> Result<Rational, CliError> {
    rational::parse(text).ok_or_else(|| CliError::Usage(format!("{what}: `{text}` is not a number")))
}

fn objective_of(instance: &IlpInstance) -> Result<Vec<i64>, CliError> {
    instance
        .objective()
        .map(<[i64]>::to_vec)
        .ok_or_else(|| CliError::precondition("the instance has no OBJ section"))
}

fn check_modulus(modulus: u32) -> Result<(), CliError> {
    if modulus < 2 {
        return Err(CliError::Usage(format!("--modulus must be at least 2, got {modulus}")));
    }
    Ok(())
}

fn separated_report(found: &Option<Separated>, calls: u64, method: Method) -> String {
    let mut out = String::new();
    let name = match method {
        Method::Col => "col",
        Method::Row => "row",
        Method::Oracle => "oracle",
        Method::Auto => unreachable!("auto is resolved first"),
    };
    let _ = writeln!(out, "METHOD {name}");
    match found {
        Some(s) => {
            let m = &s.cut.provenance;
            let _ = writeln!(out, "CUT {}", s.cut);
            let _ = writeln!(out, "LAMBDA {}", render_all(&m.lambda()));
            let _ = writeln!(out, "MU_DOWN {}", render_all(&m.mu_down()));
            let _ = writeln!(out, "MU_UP {}", render_all(&m.mu_up()));
            let _ = writeln!(out, "VIOLATION {}", render(&s.violation));
        }
        None => out.push_str("NONE\n"),
    }
    let _ = writeln!(out, "CALLS {calls}");
    out
}

fn separate(
    instance: &Path,
    xhat: &Path,
    xstar: &Path,
    method: Method,
    modulus: u32,
) -> Result<String, CliError> {
    check_modulus(modulus)?;
    let inst = load_instance(instance)?;
    let xhat = load_point(xhat, inst.cols())?;
    let xstar = load_point(xstar, inst.cols())?;
    let ctx = compute_context(&inst, &xhat, &xstar).map_err(CliError::precondition)?;
    let profile = parity_profile(&inst);
    let inapplicable = |message: String| CliError::Precondition {
        message,
        report: format!("{profile}\n"),
    };
    if modulus != 2 && matches!(method, Method::Col | Method::Row) {
        return Err(CliError::Usage(
            "--method col and --method row separate {0,1/2}-cuts only; use --modulus 2".into(),
        ));
    }
    let oracle = BruteOracle::with_modulus(modulus);
    let method = match method {
        Method::Auto if modulus != 2 => Method::Oracle,
        Method::Auto if profile.column_method => Method::Col,
        Method::Auto if profile.row_method => Method::Row,
        Method::Auto => Method::Oracle,
        other => other,
    };
    let (found, calls) = match method {
        Method::Col => {
            let out = primal_separate_col(&ctx).map_err(|e| match e {
                SepColError::Inapplicable { .. } => inapplicable(e.to_string()),
                other => CliError::precondition(other),
            })?;
            (out.best, out.stats.min_cut_calls as u64)
        }
        Method::Row => {
            let out = primal_separate_row(&ctx).map_err(|e| match e {
                SepRowError::Inapplicable { .. } => inapplicable(e.to_string()),
                other => CliError::precondition(other),
            })?;
            (out.best, out.stats.path_calls as u64)
        }
        Method::Oracle => oracle.primal_separate_counted(&ctx).map_err(|e| match e {
            OracleError::BudgetExceeded { .. } => inapplicable(e.to_string()),
            other => CliError::precondition(other),
        })?,
        Method::Auto => unreachable!("resolved above"),
    };
    Ok(separated_report(&found, calls, method))
}

fn approx(instance: &Path, epsilon: &str, modulus: u32, presolve: bool) -> Result<String, CliError> {
    check_modulus(modulus)?;
    let inst = load_instance(instance)?;
    let eps = parse_rational(epsilon, "--epsilon")?;
    if !eps.is_positive() {
        return Err(CliError::Usage(format!("--epsilon must be positive, got {epsilon}")));
    }
    let c = objective_of(&inst)?;
    let params = ApproxParams::new(eps, modulus).map_err(|e| CliError::Usage(e.to_string()))?;
    let precondition = |e: ClosureError| CliError::precondition(e);
    let mut out = String::new();
    let opt = if presolve {
        let (opt, pre) = approx_optimize_presolved(&inst, &c, &params).map_err(precondition)?;
        let fixed: Vec<String> = pre.fixed.iter().map(|i| (i + 1).to_string()).collect();
        let removed: Vec<String> = pre.removed_rows.iter().map(|j| (j + 1).to_string()).collect();
        let _ = writeln!(out, "FIXED {}", fixed.join(" "));
        let _ = writeln!(out, "REMOVED_ROWS {}", removed.join(" "));
        opt
    } else {
        approx_optimize(&inst, &c, &params).map_err(precondition)?
    };
    let head = format!(
        "K {}\nCUTS {}\nALPHA {}\nARGMAX {}\n",
        opt.k,
        opt.cut_count,
        render(&opt.alpha),
        render_all(opt.argmax.coords())
    );
    Ok(head + &out)
}

fn matching(graph: &Path, stats: bool) -> Result<String, CliError> {
    let g = parse_graph(&read(graph)?)
        .map_err(|e| CliError::Usage(format!("{}: {e}", graph.display())))?;
    let res = solve_matching(&g).map_err(CliError::precondition)?;
    let edges: Vec<String> = res.edges.iter().map(|e| (e + 1).to_string()).collect();
    let mut out = format!("MATCHING {}\nWEIGHT {}\n", edges.join(" "), res.weight);
    if stats {
        let c = &res.counters;
        let _ = writeln!(out, "MINCUT_CALLS_PER_SEP {}", c.max_mincuts_per_sep);
        let _ = writeln!(out, "TOTAL_MINCUTS {}", c.total_mincuts);
        let _ = writeln!(out, "SEPARATIONS {}", c.sep_calls);
        let _ = writeln!(out, "CUTS_ADDED {}", c.cuts_added);
        let _ = writeln!(out, "LP_SOLVES {}", c.lp_solves);
        let _ = writeln!(out, "AUGMENTATIONS {}", c.augmentations);
    }
    Ok(out)
}

fn oracle_opt(instance: &Path, modulus: u32) -> Result<String, CliError> {
    check_modulus(modulus)?;
    let inst = load_instance(instance)?;
    let c = objective_of(&inst)?;
    let opt = BruteOracle::with_modulus(modulus)
        .closure_optimize(&inst, &c)
        .map_err(CliError::precondition)?;
    Ok(format!(
        "CUTS {}\nVALUE {}\nARGMAX {}\n",
        opt.cuts.len(),
        render(&opt.value),
        render_all(opt.argmax.coords())
    ))
}

fn parse_values(raw: &[String], len: usize, what: &str) -> Result<Vec<Rational>, CliError> {
    if raw.is_empty() {
        return Ok(vec![rational::zero(); len]);
    }
    if raw.len() != len {
        return Err(CliError::Usage(format!("{what} needs {len} values, got {}", raw.len())));
    }
    raw.iter().map(|v| parse_rational(v, what)).collect()
}

fn common_denominator(values: &[&Rational]) -> u32 {
    let mut q: u64 = 1;
    for v in values {
        let d = u64::try_from(v.denom().clone()).unwrap_or(u64::MAX);
        let g = gcd(q, d);
        q = (q / g).saturating_mul(d);
    }
    u32::try_from(q.max(2)).unwrap_or(u32::MAX)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn check(
    instance: &Path,
    xhat: &Path,
    lambda: &[String],
    mu_down: &[String],
    mu_up: &[String],
    modulus: Option<u32>,
) -> Result<String, CliError> {
    let inst = load_instance(instance)?;
    let xhat = load_point(xhat, inst.cols())?;
    let lambda = parse_values(lambda, inst.rows(), "--lambda")?;
    let down = parse_values(mu_down, inst.cols(), "--mu-down")?;
    let up = parse_values(mu_up, inst.cols(), "--mu-up")?;
    let all: Vec<&Rational> = lambda.iter().chain(&down).chain(&up).collect();
    let q = modulus.unwrap_or_else(|| common_denominator(&all));
    check_modulus(q)?;
    let mult = Multipliers::from_values(q, &lambda, &down, &up).map_err(CliError::precondition)?;
    let ctx = compute_context(&inst, &xhat, &xhat).map_err(CliError::precondition)?;
    let mut out = String::new();
    let _ = writeln!(out, "MODULUS {q}");
    match derive_cut(&inst, &mult) {
        Ok(cut) => {
            let tight = cut.lhs(xhat.coords()) == rational::int(cut.rhs);
            let nontrivial = !cut.unrounded_rhs.is_integer();
            let verdict = is_tight_nontrivial(&ctx, &mult).map_err(CliError::precondition)?;
            let yes_no = |b: bool| if b { "yes" } else { "no" };
            let _ = writeln!(out, "VALID yes");
            let _ = writeln!(out, "CUT {cut}");
            let _ = writeln!(out, "UNROUNDED_RHS {}", render(&cut.unrounded_rhs));
            let _ = writeln!(out, "WEIGHTED_SLACK {}", render(&ctx.weighted_slack_hat(&mult)));
            let _ = writeln!(out, "TIGHT {}", yes_no(tight));
            let _ = writeln!(out, "NONTRIVIAL {}", yes_no(nontrivial));
            let _ = writeln!(out, "TIGHT_NONTRIVIAL {}", yes_no(verdict));
        }
        Err(e) => {
            let _ = writeln!(out, "VALID no");
            let _ = writeln!(out, "REASON {e}");
        }
    }
    Ok(out)
}

fn generate(
    seed: u64,
    rows: usize,
    cols: usize,
    profile: Profile,
    out: Option<&Path>,
) -> Result<String, CliError> {
    if rows == 0 || cols == 0 {
        return Err(CliError::Usage("--rows and --cols must be at least 1".into()));
    }
    let case = separation_case(&mut rng_from_seed(seed), rows, cols, profile);
    let files = [
        ("ilp", write_instance(&case.instance)),
        ("xhat", write_point(&case.xhat)),
        ("xstar", write_point(&case.xstar)),
    ];
    match out {
        None => Ok(format!(
            "{}# xhat {}# xstar {}",
            files[0].1, files[1].1, files[2].1
        )),
        Some(prefix) => {
            let mut report = String::new();
            for (ext, text) in files {
                let mut path = prefix.as_os_str().to_owned();
                path.push(format!(".{ext}"));
                let path = PathBuf::from(path);
                fs::write(&path, text)
                    .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
                let _ = writeln!(report, "WROTE {}", path.display());
            }
            Ok(report)
        }
    }
}

fn dispatch(command: Command) -> Result<String, CliError> {
    match command {
        Command::Separate {
            instance,
            xhat,
            xstar,
            method,
            modulus,
        } => separate(&instance, &xhat, &xstar, method, modulus),
        Command::Approx {
            instance,
            epsilon,
            modulus,
            presolve_monotone,
        } => approx(&instance, &epsilon, modulus, presolve_monotone),
        Command::Match { graph, stats } => matching(&graph, stats),
        Command::OracleOpt { instance, modulus } => oracle_opt(&instance, modulus),
        Command::Check {
            instance,
            xhat,
            lambda,
            mu_down,
            mu_up,
            modulus,
        } => check(&instance, &xhat, &lambda, &mu_down, &mu_up, modulus),
        Command::Profile { instance } => Ok(format!("{}\n", parity_profile(&load_instance(&instance)?))),
        Command::Gen {
            seed,
            rows,
            cols,
            profile,
            out,
        } => generate(seed, rows, cols, profile, out.as_deref()),
    }
}

/// Runs one invocation; `args[0]` is the program name.
pub fn run_command<I, T>(args: I) -> CommandOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return CommandOutput { code, stdout, stderr };
        }
    };
    let result = match cli.jobs {
        Some(0) => Err(CliError::Usage("--jobs must be at least 1".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(cli.command)),
            Err(e) => Err(CliError::Usage(format!("cannot start {n} workers: {e}"))),
        },
        None => dispatch(cli.command),
    };
    match result {
        Ok(stdout) => CommandOutput {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(CliError::Usage(message)) => CommandOutput {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        },
        Err(CliError::Precondition { message, report }) => CommandOutput {
            code: 2,
            stdout: report,
            stderr: format!("error: {message}\n"),
        },
    }
}
