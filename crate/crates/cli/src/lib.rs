//! Command-line front end: parse instances, run solvers, check sequences,
//! report instance parameters, generate instances and export the
//! time-expanded graph.
//!
//! Exit codes: `0` feasible / ok, `2` usage or input error, `3` infeasible
//! or invalid sequence, `4` guard exceeded, `1` internal error.

mod seqfile;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};
use tsr_core::expand::build_time_expanded;
use tsr_core::prelude::*;
use tsr_core::solvers::solve;

pub use seqfile::{format_sequence, parse_sequence};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_GUARD: i32 = 4;

/// Largest instance for which `solve` picks the enumeration method when
/// `--method` is not given.
pub const DEFAULT_ENUM_MAX_N: usize = 12;

#[derive(Parser, Debug)]
#[command(
    name = "tsr",
    version,
    about = "Temporally satisfying reconfiguration solver"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute an optimal (or approximate) reconfigurable sequence.
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "ds")]
        problem: String,
        /// brute, enum, tnd or approx; defaults to enum for small instances and tnd otherwise.
        #[arg(long)]
        method: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Worker threads for the tnd method (0 = all cores).
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Verify a sequence file against an instance.
    Check {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        sequence: PathBuf,
        #[arg(long, default_value = "ds")]
        problem: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Report instance parameters.
    Stats {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Generate a random instance.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        tau: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write to this file instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Emit the time-expanded static graph.
    Transform {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run several methods on one instance and compare their sizes.
    Compare {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "ds")]
        problem: String,
        /// Comma-separated method names; the first one is the reference.
        #[arg(long, default_value = "brute,enum,tnd")]
        methods: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

/// A failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. }
            | Error::InvalidGraph(_)
            | Error::TimeOutOfRange { .. }
            | Error::InvalidPartition { .. }
            | Error::InvalidArgument(_)
            | Error::Precondition(_) => EXIT_USAGE,
            Error::GuardExceeded(_) => EXIT_GUARD,
            _ => EXIT_INTERNAL,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<i32, Failure>;

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Solve {
            input,
            problem,
            method,
            format,
            jobs,
        } => cmd_solve(&input, &problem, method.as_deref(), format, jobs, out),
        Command::Check {
            input,
            sequence,
            problem,
            format,
        } => cmd_check(&input, &sequence, &problem, format, out),
        Command::Stats { input, format } => cmd_stats(&input, format, out),
        Command::Gen {
            n,
            tau,
            p,
            seed,
            output,
        } => cmd_gen(n, tau, p, seed, output.as_deref(), out),
        Command::Transform { input, output } => cmd_transform(&input, output.as_deref(), out),
        Command::Compare {
            input,
            problem,
            methods,
            format,
            jobs,
        } => cmd_compare(&input, &problem, &methods, format, jobs, out),
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::usage(format!("{}: {e}", path.display()))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| Failure {
        code: EXIT_INTERNAL,
        message: format!("cannot write output: {e}"),
    })
}

fn load(path: &Path) -> Result<TemporalGraph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    parse_instance(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn problem_by_name(name: &str) -> Result<ProblemDescriptor, Failure> {
    let registry = ProblemRegistry::with_builtins();
    registry.get(name).cloned().ok_or_else(|| {
        let known: Vec<&str> = registry.names().collect();
        Failure::usage(format!(
            "unknown problem `{name}` (known: {})",
            known.join(", ")
        ))
    })
}

fn method_by_name(name: &str) -> Result<Method, Failure> {
    name.parse()
        .map_err(|e: Error| Failure::usage(e.to_string()))
}

/// SHA-256 of the canonical text form.
pub fn instance_digest(g: &TemporalGraph) -> String {
    hex::encode(Sha256::digest(serialize_instance(g).as_bytes()))
}

fn default_method(g: &TemporalGraph) -> Method {
    if g.n() <= DEFAULT_ENUM_MAX_N {
        Method::Enum
    } else {
        Method::Tnd
    }
}

fn run_method(
    g: &TemporalGraph,
    prob: &ProblemDescriptor,
    method: Method,
    jobs: usize,
) -> Result<Option<SolveResult>, Error> {
    match method {
        Method::Tnd => {
            let opts = TndOptions {
                jobs,
                ..TndOptions::default()
            };
            solve_tnd_with(g, prob, &opts, None)
        }
        m => solve(g, prob, m),
    }
}

#[derive(Serialize, Debug, Default)]
struct ReportStats {
    elapsed_ms: f64,
    candidates_examined: u64,
    candidates_pruned: u64,
    dp_states: u64,
    flow_solves: u64,
}

#[derive(Serialize, Debug)]
struct RunReport {
    method: String,
    problem: String,
    instance_digest: String,
    verdict: &'static str,
    size: Option<usize>,
    sequence: Vec<Vec<Vertex>>,
    witnesses: Vec<Vec<(Vertex, Vertex)>>,
    stats: ReportStats,
}

impl RunReport {
    fn text(&self) -> String {
        let mut s = format!(
            "problem {}\nmethod {}\ninstance {}\nverdict {}\n",
            self.problem, self.method, self.instance_digest, self.verdict
        );
        if let Some(size) = self.size {
            s += &format!("size {size}\n");
        }
        for (t, set) in self.sequence.iter().enumerate() {
            let set: TokenSet = set.iter().copied().collect();
            s += &format!("T_{} {set}\n", t + 1);
        }
        for (t, pairs) in self.witnesses.iter().enumerate() {
            let moves: Vec<String> = pairs.iter().map(|(u, v)| format!("{u}>{v}")).collect();
            s += &format!("move {} {}\n", t + 1, moves.join(" "));
        }
        let st = &self.stats;
        s += &format!(
            "stats elapsed_ms={:.3} candidates_examined={} candidates_pruned={} dp_states={} flow_solves={}\n",
            st.elapsed_ms, st.candidates_examined, st.candidates_pruned, st.dp_states, st.flow_solves
        );
        s
    }
}

fn render<T: Serialize>(value: &T, format: Format, text: impl FnOnce(&T) -> String) -> String {
    match format {
        Format::Text => text(value),
        Format::Json => serde_json::to_string_pretty(value).expect("reports serialise") + "\n",
    }
}

fn report_for(
    g: &TemporalGraph,
    prob: &ProblemDescriptor,
    method: Method,
    result: Option<SolveResult>,
    elapsed_ms: f64,
) -> Result<RunReport, Failure> {
    let mut report = RunReport {
        method: method.name().into(),
        problem: prob.name.clone(),
        instance_digest: instance_digest(g),
        verdict: "infeasible",
        size: None,
        sequence: Vec::new(),
        witnesses: Vec::new(),
        stats: ReportStats {
            elapsed_ms,
            ..ReportStats::default()
        },
    };
    if let Some(r) = result {
        // never print a sequence that does not verify
        let witnesses = check_solution(g, prob, &r.sequence.sets).map_err(|v| Failure {
            code: EXIT_INTERNAL,
            message: format!("{method} returned an invalid sequence: {v}"),
        })?;
        report.verdict = "feasible";
        report.size = Some(r.size());
        report.sequence = r.sequence.sets.iter().map(|s| s.iter().collect()).collect();
        report.witnesses = witnesses.into_iter().map(|w| w.pairs).collect();
        report.stats.candidates_examined = r.stats.candidates_examined;
        report.stats.candidates_pruned = r.stats.candidates_pruned;
        report.stats.dp_states = r.stats.dp_states;
        report.stats.flow_solves = r.stats.flow_solves;
    }
    Ok(report)
}

fn cmd_solve(
    input: &Path,
    problem: &str,
    method: Option<&str>,
    format: Format,
    jobs: usize,
    out: &mut dyn Write,
) -> Outcome {
    let g = load(input)?;
    let prob = problem_by_name(problem)?;
    let method = match method {
        Some(m) => method_by_name(m)?,
        None => default_method(&g),
    };
    let start = Instant::now();
    let result = run_method(&g, &prob, method, jobs)?;
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let report = report_for(&g, &prob, method, result, elapsed)?;
    emit(out, &render(&report, format, RunReport::text))?;
    Ok(if report.size.is_some() {
        EXIT_OK
    } else {
        EXIT_INFEASIBLE
    })
}

#[derive(Serialize)]
struct CheckReport {
    problem: String,
    valid: bool,
    violation: Option<String>,
    witnesses: Vec<Vec<(Vertex, Vertex)>>,
}

fn cmd_check(
    input: &Path,
    sequence: &Path,
    problem: &str,
    format: Format,
    out: &mut dyn Write,
) -> Outcome {
    let g = load(input)?;
    let prob = problem_by_name(problem)?;
    let text = fs::read_to_string(sequence).map_err(|e| io_failure(sequence, e))?;
    let sets = parse_sequence(&text)
        .map_err(|e| Failure::usage(format!("{}: {e}", sequence.display())))?;
    let (report, code) = match check_solution(&g, &prob, &sets) {
        Ok(w) => (
            CheckReport {
                problem: prob.name.clone(),
                valid: true,
                violation: None,
                witnesses: w.into_iter().map(|w| w.pairs).collect(),
            },
            EXIT_OK,
        ),
        Err(v @ (Violation::Length { .. } | Violation::VertexOutOfRange { .. })) => {
            return Err(Failure::usage(format!("{}: {v}", sequence.display())));
        }
        Err(v) => (
            CheckReport {
                problem: prob.name.clone(),
                valid: false,
                violation: Some(v.to_string()),
                witnesses: Vec::new(),
            },
            EXIT_INFEASIBLE,
        ),
    };
    emit(
        out,
        &render(&report, format, |r| match &r.violation {
            None => "valid\n".to_string(),
            Some(v) => format!("invalid: {v}\n"),
        }),
    )?;
    Ok(code)
}

#[derive(Serialize)]
struct StatsReport {
    n: usize,
    tau: usize,
    snapshot_edges: Vec<usize>,
    max_snapshot_edges: usize,
    footprint_edges: usize,
    max_snapshot_degree: usize,
    tnd: usize,
    class_sizes: Vec<usize>,
    /// `class_kinds[t - 1][i]`, `"clique"` or `"independent"`
    class_kinds: Vec<Vec<&'static str>>,
}

fn cmd_stats(input: &Path, format: Format, out: &mut dyn Write) -> Outcome {
    let g = load(input)?;
    let partition = tnd_partition(&g);
    let tnd = tnd_graph(&g, &partition)?;
    let report = StatsReport {
        n: g.n(),
        tau: g.tau(),
        snapshot_edges: g.snapshots().iter().map(StaticGraph::edge_count).collect(),
        max_snapshot_edges: g.max_snapshot_edges(),
        footprint_edges: footprint(&g).edge_count(),
        max_snapshot_degree: g.max_snapshot_degree(),
        tnd: tnd.k(),
        class_sizes: tnd.sizes().to_vec(),
        class_kinds: (1..=g.tau())
            .map(|t| {
                (0..tnd.k())
                    .map(|i| match tnd.kind(t, i) {
                        ClassKind::Clique => "clique",
                        ClassKind::Independent => "independent",
                    })
                    .collect()
            })
            .collect(),
    };
    emit(
        out,
        &render(&report, format, |r| {
            let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
            let mut s = format!(
                "n {}\ntau {}\nsnapshot_edges {}\nmax_snapshot_edges {}\nfootprint_edges {}\nmax_snapshot_degree {}\ntnd {}\nclass_sizes {}\n",
                r.n,
                r.tau,
                join(&r.snapshot_edges),
                r.max_snapshot_edges,
                r.footprint_edges,
                r.max_snapshot_degree,
                r.tnd,
                join(&r.class_sizes)
            );
            for (t, kinds) in r.class_kinds.iter().enumerate() {
                let short: Vec<&str> = kinds.iter().map(|k| &k[..1]).collect();
                s += &format!("class_kinds t={} {}\n", t + 1, short.join(" "));
            }
            s
        }),
    )?;
    Ok(EXIT_OK)
}

fn write_target(output: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| io_failure(path, e)),
        None => emit(out, text),
    }
}

fn cmd_gen(
    n: usize,
    tau: usize,
    p: f64,
    seed: u64,
    output: Option<&Path>,
    out: &mut dyn Write,
) -> Outcome {
    let g = generate_random(n, tau, p, seed)?;
    write_target(output, &serialize_instance(&g), out)?;
    Ok(EXIT_OK)
}

fn cmd_transform(input: &Path, output: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let g = load(input)?;
    write_target(output, &build_time_expanded(&g).to_text(), out)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct CompareRow {
    method: String,
    verdict: String,
    size: Option<usize>,
    elapsed_ms: f64,
    /// Same verdict and size as the first method.
    agrees: bool,
    /// Size divided by the first method's size.
    ratio: Option<f64>,
}

#[derive(Serialize)]
struct CompareReport {
    problem: String,
    instance_digest: String,
    /// `tau * H(max_degree + 1)`, the guaranteed ratio of the approximation.
    approximation_bound: f64,
    rows: Vec<CompareRow>,
}

fn cmd_compare(
    input: &Path,
    problem: &str,
    methods: &str,
    format: Format,
    jobs: usize,
    out: &mut dyn Write,
) -> Outcome {
    let g = load(input)?;
    let prob = problem_by_name(problem)?;
    let methods: Vec<Method> = methods
        .split(',')
        .map(str::trim)
        .filter(|m| !m.is_empty())
        .map(method_by_name)
        .collect::<Result<_, _>>()?;
    if methods.is_empty() {
        return Err(Failure::usage("no methods given"));
    }
    let harmonic: f64 = (1..=g.max_snapshot_degree() + 1)
        .map(|i| 1.0 / i as f64)
        .sum();
    let mut report = CompareReport {
        problem: prob.name.clone(),
        instance_digest: instance_digest(&g),
        approximation_bound: g.tau() as f64 * harmonic,
        rows: Vec::new(),
    };
    let mut first_failure: Option<Failure> = None;
    let mut reference: Option<Option<usize>> = None;
    for method in methods {
        let start = Instant::now();
        let outcome = run_method(&g, &prob, method, jobs)
            .map_err(Failure::from)
            .and_then(|r| report_for(&g, &prob, method, r, 0.0));
        let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
        let row = match outcome {
            Ok(r) => {
                let reference = *reference.get_or_insert(r.size);
                CompareRow {
                    method: method.name().into(),
                    verdict: r.verdict.into(),
                    size: r.size,
                    elapsed_ms,
                    agrees: reference == r.size,
                    ratio: match (r.size, reference) {
                        (Some(a), Some(b)) if b > 0 => Some(a as f64 / b as f64),
                        (Some(0), Some(0)) => Some(1.0),
                        _ => None,
                    },
                }
            }
            Err(f) => {
                let row = CompareRow {
                    method: method.name().into(),
                    verdict: format!("error: {}", f.message),
                    size: None,
                    elapsed_ms,
                    agrees: false,
                    ratio: None,
                };
                first_failure.get_or_insert(f);
                row
            }
        };
        report.rows.push(row);
    }
    emit(
        out,
        &render(&report, format, |r| {
            let mut s = format!(
                "problem {}\ninstance {}\napproximation_bound {:.4}\n{:<8} {:<12} {:>6} {:>12} {:>7} {:>7}\n",
                r.problem, r.instance_digest, r.approximation_bound, "method", "verdict", "size", "elapsed_ms", "agrees", "ratio"
            );
            for row in &r.rows {
                let size = row.size.map_or("-".into(), |x| x.to_string());
                let ratio = row.ratio.map_or("-".into(), |x| format!("{x:.3}"));
                s += &format!(
                    "{:<8} {:<12} {:>6} {:>12.3} {:>7} {:>7}\n",
                    row.method, row.verdict, size, row.elapsed_ms, row.agrees, ratio
                );
            }
            s
        }),
    )?;
    if let Some(f) = first_failure {
        return Ok(f.code);
    }
    Ok(match reference {
        Some(Some(_)) => EXIT_OK,
        _ => EXIT_INFEASIBLE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(
            std::iter::once("tsr").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn usage_errors_exit_with_two() {
        assert_eq!(run_args(&["solve"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(
            run_args(&["gen", "--n", "3", "--tau", "1", "--p", "1.5"]).0,
            EXIT_USAGE
        );
    }

    #[test]
    fn help_exits_with_zero() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("solve"));
    }

    #[test]
    fn gen_to_stdout_parses() {
        let (code, out, _) =
            run_args(&["gen", "--n", "4", "--tau", "2", "--p", "0.5", "--seed", "3"]);
        assert_eq!(code, EXIT_OK);
        let g = parse_instance(&out).unwrap();
        assert_eq!((g.n(), g.tau()), (4, 2));
    }

    #[test]
    fn digest_is_hex_sha256() {
        let g = TemporalGraph::new(2, 1, [(0, 1, vec![1])]).unwrap();
        let d = instance_digest(&g);
        assert_eq!(d.len(), 64);
        assert!(d.chars().all(|c| c.is_ascii_hexdigit()));
    }

    #[test]
    fn error_codes() {
        assert_eq!(
            Failure::from(Error::GuardExceeded("x".into())).code,
            EXIT_GUARD
        );
        assert_eq!(
            Failure::from(Error::Precondition("x".into())).code,
            EXIT_USAGE
        );
        assert_eq!(Failure::from(Error::CostOverflow).code, EXIT_INTERNAL);
    }
}
