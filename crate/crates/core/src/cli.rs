//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 input or parse error (including
//! an exceeded enumeration budget for `exact`), 3 solver non-convergence
//! (the report is still written).
//!
//! In `records` format every result is one line of space-separated
//! `key=value` pairs. Bound reports (`bound`, `verify`) use the keys
//! `n k m W z_exact z1 lb sound theorem2_holds ratio iters converged`, with
//! `NA` where no exact value was computed. `exact` uses a prefix of the same
//! keys; `sdp` adds nothing beyond them; `expected` additionally uses `ez`
//! (expected matched weight) and `z_round` (value after conditional
//! rounding). Reals are printed with four decimals.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::error::Error;
use crate::exact::{solve_exact, Labeling};
use crate::geometry::{verify_bounds, BoundReport};
use crate::instance::{self, fuzz_corpus, UgInstance};
use crate::randomized::{expected_value, round_conditional, ProbAssignment};
use crate::relaxation::{build_sdp, round_gram, solve_sdp, GramSolution, SolveOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NONCONVERGED: i32 = 3;

/// Row-sum tolerance for probability files.
pub const PROB_FILE_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "ugbound", version, about = "Unique games: exact oracle, Gram relaxation and 2/π bound reports")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Write results here instead of stdout
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Records,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenType {
    Random,
    Planted,
    Maxcut,
    /// Mixed small corpus written as one file per instance into --out
    Corpus,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an instance (or a corpus directory)
    Gen {
        #[arg(long = "type", value_enum)]
        kind: GenType,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of instances for --type corpus
        #[arg(long, default_value_t = 60)]
        count: usize,
        /// Instance file, or directory for --type corpus; stdout if absent
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the planted labeling (1-based, one line)
        #[arg(long)]
        labels: Option<PathBuf>,
    },
    /// Exhaustive optimum z*
    Exact {
        file: PathBuf,
        #[arg(long, default_value_t = 1 << 20)]
        enum_limit: u128,
    },
    /// Expected matched weight of an independent label distribution
    Expected {
        file: PathBuf,
        /// `uniform` or a file of n rows with k probabilities each
        #[arg(long, default_value = "uniform")]
        probs: String,
    },
    /// Solve the Gram-matrix relaxation
    Sdp {
        file: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// Write the factor matrix (one row per vector)
        #[arg(long)]
        factors: Option<PathBuf>,
    },
    /// Relaxation value, 2/π bound and (when affordable) z*
    Bound {
        file: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, default_value_t = 1 << 20)]
        enum_limit: u128,
    },
    /// Bound reports for a file or every *.ug file in a directory
    Verify {
        path: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, default_value_t = 1 << 20)]
        enum_limit: u128,
        /// Directory receiving each instance where the 2/π bound fails
        #[arg(long)]
        archive: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 20_000)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 5)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Factor rank; defaults to the full Gram dimension
    #[arg(long)]
    pub rank: Option<usize>,
}

impl SolverArgs {
    fn options(&self) -> SolveOptions {
        SolveOptions {
            rank: self.rank,
            max_iters: self.max_iters,
            tol: self.tol,
            seed: self.seed,
            restarts: self.restarts,
            warm_start: None,
        }
    }

    fn validate(&self) -> Result<(), String> {
        if !(self.tol > 0.0) {
            return Err(format!("--tol must be positive, got {}", self.tol));
        }
        if self.restarts < 1 {
            return Err("--restarts must be at least 1".into());
        }
        if self.rank == Some(0) {
            return Err("--rank must be at least 1".into());
        }
        Ok(())
    }
}

/// Failure carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }

    fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::input(e.to_string())
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = stdout.write_all(rendered.as_bytes());
            } else {
                let _ = stderr.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    execute(&config, stdout, stderr)
}

pub fn execute(config: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let started = Instant::now();
    let mut out = String::new();
    let result = dispatch(config, &mut out);
    if config.format == Format::Text && !out.is_empty() {
        let _ = writeln!(out, "elapsed: {:.3}s", started.elapsed().as_secs_f64());
    }
    let code = match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            return f.code;
        }
    };
    if code == EXIT_NONCONVERGED {
        let _ = writeln!(stderr, "warning: solver did not converge; reporting best feasible iterate");
    }
    let written = match &config.output {
        Some(path) => fs::write(path, &out).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => stdout.write_all(out.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        let _ = writeln!(stderr, "error: {msg}");
        return EXIT_INPUT;
    }
    code
}

fn dispatch(config: &RunConfig, out: &mut String) -> Result<i32, Failure> {
    let fmt = config.format;
    match &config.command {
        Command::Gen { kind, n, k, m, seed, count, out: target, labels } => {
            gen(*kind, *n, *k, *m, *seed, *count, target.as_deref(), labels.as_deref(), out)
        }
        Command::Exact { file, enum_limit } => {
            check_limit(*enum_limit)?;
            let inst = load(file)?;
            let (l, z) = solve_exact(&inst, *enum_limit)?;
            match fmt {
                Format::Records => {
                    let _ = writeln!(out, "{} z_exact={}", header_fields(&inst), real(z));
                }
                Format::Text => {
                    let _ = writeln!(out, "z* = {}", real(z));
                    let _ = writeln!(out, "labeling: {}", one_based(&l));
                }
            }
            Ok(EXIT_OK)
        }
        Command::Expected { file, probs } => {
            let inst = load(file)?;
            let p = if probs == "uniform" {
                ProbAssignment::uniform(inst.n(), inst.k())
            } else {
                read_probabilities(Path::new(probs))?
            };
            let ez = expected_value(&inst, &p)?;
            let l = round_conditional(&inst, &p)?;
            let z_round = crate::exact::value(&inst, &l)?;
            match fmt {
                Format::Records => {
                    let _ = writeln!(out, "{} ez={} z_round={}", header_fields(&inst), real(ez), real(z_round));
                }
                Format::Text => {
                    let _ = writeln!(out, "E[z] = {}", real(ez));
                    let _ = writeln!(out, "conditional rounding: {} ({})", real(z_round), one_based(&l));
                }
            }
            Ok(EXIT_OK)
        }
        Command::Sdp { file, solver, factors } => {
            solver.validate().map_err(Failure::usage)?;
            let inst = load(file)?;
            let prob = build_sdp(&inst);
            let sol = solve_sdp(&prob, &solver.options())?;
            if let Some(path) = factors {
                fs::write(path, factor_text(&sol)).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))?;
            }
            let lb = crate::geometry::bound_from_sdp(sol.objective.max(0.0))?;
            match fmt {
                Format::Records => {
                    let _ = writeln!(
                        out,
                        "{} z1={} lb={} iters={} converged={}",
                        header_fields(&inst),
                        real(sol.objective),
                        real(lb),
                        sol.iterations,
                        sol.converged
                    );
                }
                Format::Text => {
                    let rounded = round_gram(&inst, &sol)?;
                    let r = &sol.residuals;
                    let _ = writeln!(out, "z1 = {}", real(sol.objective));
                    let _ = writeln!(out, "lb = (2/pi) z1 = {}", real(lb));
                    let _ = writeln!(out, "dim = {} rank = {} start = {}", sol.dim(), sol.rank(), sol.start);
                    let _ = writeln!(out, "iterations = {} converged = {}", sol.iterations, sol.converged);
                    let _ = writeln!(
                        out,
                        "residuals: norm {:.2e} violation {:.2e} slack {:.2e} min eigenvalue {:.2e} ({})",
                        r.max_norm_deviation,
                        r.max_violation,
                        r.max_slack,
                        r.min_eigenvalue,
                        if r.pass { "pass" } else { "FAIL" }
                    );
                    let _ = writeln!(
                        out,
                        "rounded labeling: {} ({})",
                        real(crate::exact::value(&inst, &rounded)?),
                        one_based(&rounded)
                    );
                }
            }
            Ok(if sol.converged { EXIT_OK } else { EXIT_NONCONVERGED })
        }
        Command::Bound { file, solver, enum_limit } => {
            solver.validate().map_err(Failure::usage)?;
            check_limit(*enum_limit)?;
            let inst = load(file)?;
            let report = verify_bounds(&inst, *enum_limit, &solver.options())?;
            write_report(out, fmt, &report, None);
            Ok(if report.converged { EXIT_OK } else { EXIT_NONCONVERGED })
        }
        Command::Verify { path, solver, enum_limit, archive } => {
            solver.validate().map_err(Failure::usage)?;
            check_limit(*enum_limit)?;
            verify(path, &solver.options(), *enum_limit, archive.as_deref(), fmt, out)
        }
    }
}

fn check_limit(limit: u128) -> Result<(), Failure> {
    if limit < 1 {
        return Err(Failure::usage("--enum-limit must be at least 1"));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn gen(
    kind: GenType,
    n: usize,
    k: usize,
    m: usize,
    seed: u64,
    count: usize,
    target: Option<&Path>,
    labels: Option<&Path>,
    out: &mut String,
) -> Result<i32, Failure> {
    if kind == GenType::Corpus {
        let dir = target.ok_or_else(|| Failure::usage("--type corpus needs --out DIR"))?;
        fs::create_dir_all(dir).map_err(|e| Failure::input(format!("cannot create {}: {e}", dir.display())))?;
        for entry in fuzz_corpus(count, seed) {
            let path = dir.join(format!("{}.ug", entry.name));
            fs::write(&path, instance::write(&entry.instance))
                .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))?;
        }
        return Ok(EXIT_OK);
    }
    if n < 2 {
        return Err(Failure::usage("--n must be at least 2"));
    }
    let (inst, planted) = match kind {
        GenType::Random => (instance::generate_random(n, k, m, seed), None),
        GenType::Planted => match instance::generate_planted(n, k, m, seed) {
            Ok((inst, l)) => (Ok(inst), Some(l)),
            Err(e) => (Err(e), None),
        },
        GenType::Maxcut => (instance::generate_maxcut(n, m, seed), None),
        GenType::Corpus => unreachable!(),
    };
    let inst = inst.map_err(|e| Failure::usage(e.to_string()))?;
    let text = instance::write(&inst);
    match target {
        Some(path) => fs::write(path, text).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))?,
        None => out.push_str(&text),
    }
    if let Some(path) = labels {
        let l = planted.ok_or_else(|| Failure::usage("--labels is only meaningful with --type planted"))?;
        fs::write(path, format!("{}\n", one_based(&l)))
            .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(EXIT_OK)
}

fn verify(
    path: &Path,
    opts: &SolveOptions,
    limit: u128,
    archive: Option<&Path>,
    fmt: Format,
    out: &mut String,
) -> Result<i32, Failure> {
    let files = if path.is_dir() {
        let mut files: Vec<PathBuf> = fs::read_dir(path)
            .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "ug"))
            .collect();
        files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
        files
    } else {
        vec![path.to_path_buf()]
    };

    let instances = files.iter().map(|f| load(f).map(|inst| (f, inst))).collect::<Result<Vec<_>, _>>()?;
    let reports = instances
        .par_iter()
        .map(|(_, inst)| verify_bounds(inst, limit, opts))
        .collect::<Result<Vec<_>, _>>()?;

    if let Some(dir) = archive {
        fs::create_dir_all(dir).map_err(|e| Failure::input(format!("cannot create {}: {e}", dir.display())))?;
    }
    let mut all_converged = true;
    for ((file, inst), report) in instances.iter().zip(&reports) {
        all_converged &= report.converged;
        let name = file.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        write_report(out, fmt, report, Some(&name));
        if let (Some(dir), true) = (archive, report.is_counterexample()) {
            let mut line = String::new();
            write_report(&mut line, Format::Records, report, None);
            let write = |ext: &str, body: &str| {
                let p = dir.join(format!("{name}.{ext}"));
                fs::write(&p, body).map_err(|e| Failure::input(format!("cannot write {}: {e}", p.display())))
            };
            write("ug", &instance::write(inst))?;
            write("report", &line)?;
        }
    }
    if fmt == Format::Text && reports.len() > 1 {
        let exact: Vec<&BoundReport> = reports.iter().filter(|r| r.z_exact.is_some()).collect();
        let violations = exact.iter().filter(|r| r.is_counterexample()).count();
        let unsound = exact.iter().filter(|r| r.sound == Some(false)).count();
        let _ = writeln!(
            out,
            "summary: {} instances, {} with exact value, {} unsound, {} where the 2/pi bound fails",
            reports.len(),
            exact.len(),
            unsound,
            violations
        );
    }
    Ok(if all_converged { EXIT_OK } else { EXIT_NONCONVERGED })
}

fn load(path: &Path) -> Result<UgInstance, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    instance::read(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// Rows within [`PROB_FILE_TOL`] of 1 are rescaled to sum to 1 before use.
fn read_probabilities(path: &Path) -> Result<ProbAssignment, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    parse_probabilities(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

pub fn parse_probabilities(text: &str) -> Result<ProbAssignment, Error> {
    let mut rows = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|s| s.parse::<f64>().map_err(|_| Error::Parse { line: no + 1, message: format!("bad probability {s:?}") }))
            .collect::<Result<Vec<f64>, _>>()?;
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > PROB_FILE_TOL {
            return Err(Error::Parse { line: no + 1, message: format!("row sums to {sum}") });
        }
        rows.push(row.iter().map(|x| x / sum).collect());
    }
    ProbAssignment::new(rows)
}

fn header_fields(inst: &UgInstance) -> String {
    format!("n={} k={} m={} W={}", inst.n(), inst.k(), inst.m(), real(inst.total_weight()))
}

fn real(x: f64) -> String {
    format!("{x:.4}")
}

fn opt_real(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".to_string(), real)
}

fn opt_flag(x: Option<bool>) -> String {
    x.map_or_else(|| "NA".to_string(), |b| b.to_string())
}

fn one_based(l: &Labeling) -> String {
    l.labels().iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(" ")
}

pub fn record_line(r: &BoundReport) -> String {
    format!(
        "n={} k={} m={} W={} z_exact={} z1={} lb={} sound={} theorem2_holds={} ratio={} iters={} converged={}",
        r.n,
        r.k,
        r.m,
        real(r.total_weight),
        opt_real(r.z_exact),
        real(r.z1),
        real(r.lb),
        opt_flag(r.sound),
        opt_flag(r.theorem2_holds),
        opt_real(r.ratio),
        r.iterations,
        r.converged
    )
}

fn write_report(out: &mut String, fmt: Format, r: &BoundReport, name: Option<&str>) {
    match fmt {
        Format::Records => {
            let _ = writeln!(out, "{}", record_line(r));
        }
        Format::Text => {
            if let Some(name) = name {
                let _ = writeln!(out, "== {name}");
            }
            let _ = writeln!(out, "n = {}, k = {}, m = {}, W = {}", r.n, r.k, r.m, real(r.total_weight));
            let _ = writeln!(out, "z1 = {}  lb = (2/pi) z1 = {}", real(r.z1), real(r.lb));
            match r.z_exact {
                Some(z) => {
                    let _ = writeln!(
                        out,
                        "z* = {}  ratio z*/z1 = {}  sound = {}  2/pi bound holds = {}",
                        real(z),
                        opt_real(r.ratio),
                        opt_flag(r.sound),
                        opt_flag(r.theorem2_holds)
                    );
                }
                None => {
                    let _ = writeln!(out, "z* = NA (enumeration budget exceeded)");
                }
            }
            let _ = writeln!(out, "iterations = {} converged = {}", r.iterations, r.converged);
        }
    }
}

fn factor_text(sol: &GramSolution) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} {}", sol.dim(), sol.rank());
    for u in 0..sol.dim() {
        let row: Vec<String> = sol.row(u).iter().map(|x| format!("{x:e}")).collect();
        let _ = writeln!(s, "{}", row.join(" "));
    }
    s
}
