//! Command-line front end: parsing, solving, verification, generation
//! and benchmarking with machine-readable reports.
//!
//! Exit status 0 on success, 1 on invalid colouring or promise
//! violation, 2 on usage or I/O errors. Reports go to stdout, all
//! error text to stderr.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::SolveError;
use crate::hypergraph::{
    parse_colouring, parse_hypergraph, serialize_colouring, serialize_hypergraph,
    verify_lo_colouring, Colouring, Hypergraph,
};
use crate::instances::{brute_force_min_lo, gen_clique_gadget, gen_planted};
use crate::mod2::{solve_mod2, solve_mod2_edges, DEFAULT_BRUTE_THRESHOLD};
use crate::rational::solve_rational;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "locol",
    about = "Linearly ordered colourings of LO 2-colourable 3-uniform hypergraphs",
    version,
    disable_version_flag = true
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve an instance and write the colouring
    Solve(SolveArgs),
    /// Verify a colouring against an instance
    Verify(VerifyArgs),
    /// Generate an instance (planted or clique gadget)
    Gen(GenArgs),
    /// Exhaustive minimum-colour oracle for tiny instances
    Oracle(OracleArgs),
    /// Size sweep over planted instances, one report row each
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    /// GF(2) vertex-halving solver
    Mod2,
    /// GF(2) edge-quartering variant
    Mod2Edges,
    /// exact-rational unbalanced-solution solver
    Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Structured,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Algorithm to run
    #[arg(long, value_enum, default_value = "mod2")]
    pub algo: Algo,
    /// Instance file (p lo3 format)
    #[arg(long)]
    pub input: PathBuf,
    /// Colouring output file
    #[arg(long)]
    pub output: PathBuf,
    /// RNG seed (rational solver only)
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Brute-force base-case size
    #[arg(long, default_value_t = DEFAULT_BRUTE_THRESHOLD)]
    pub brute_threshold: usize,
    /// Sampling retry budget (rational solver only)
    #[arg(long, default_value_t = 64)]
    pub max_retries: usize,
    /// Report style on stdout
    #[arg(long, value_enum, default_value = "text")]
    pub report_format: ReportFormat,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Instance file
    #[arg(long)]
    pub input: PathBuf,
    /// Colouring file to check
    #[arg(long)]
    pub colouring: PathBuf,
    /// Report style on stdout
    #[arg(long, value_enum, default_value = "text")]
    pub report_format: ReportFormat,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// Vertex count (planted generator)
    #[arg(long, conflicts_with = "clique_gadget", required_unless_present = "clique_gadget")]
    pub n: Option<usize>,
    /// Edge count (planted generator)
    #[arg(long, requires = "n")]
    pub m: Option<usize>,
    /// Fraction of planted-1 vertices
    #[arg(long, default_value_t = 0.25)]
    pub ones_fraction: f64,
    /// RNG seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Build the k-clique gadget instead of a planted instance
    #[arg(long, value_name = "K")]
    pub clique_gadget: Option<usize>,
    /// Instance output file
    #[arg(long)]
    pub output: PathBuf,
    /// Optional planted-witness output file
    #[arg(long)]
    pub witness: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    /// Instance file (at most 10 vertices)
    #[arg(long)]
    pub input: PathBuf,
    /// Colour budget for the exhaustive search
    #[arg(long, default_value_t = 4)]
    pub budget: u32,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Algorithm to sweep
    #[arg(long, value_enum, default_value = "mod2")]
    pub algo: Algo,
    /// Smallest instance size; doubles up to --max-n
    #[arg(long, default_value_t = 32)]
    pub min_n: usize,
    /// Largest instance size
    #[arg(long, default_value_t = 2048)]
    pub max_n: usize,
    /// RNG seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Serialize)]
pub struct SolveRecord {
    pub algo: String,
    pub n: usize,
    pub m: usize,
    pub colours_used: usize,
    /// Theoretical colour bound for the chosen algorithm.
    pub bound: f64,
    pub iterations: usize,
    pub retries: usize,
    pub brute_forced_vertices: usize,
    pub elapsed_ms: f64,
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fallback: Option<String>,
}

impl SolveRecord {
    fn text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "algo: {}", self.algo).unwrap();
        writeln!(out, "n: {}", self.n).unwrap();
        writeln!(out, "m: {}", self.m).unwrap();
        writeln!(out, "colours_used: {}", self.colours_used).unwrap();
        writeln!(out, "bound: {:.4}", self.bound).unwrap();
        writeln!(out, "iterations: {}", self.iterations).unwrap();
        writeln!(out, "retries: {}", self.retries).unwrap();
        writeln!(out, "brute_forced_vertices: {}", self.brute_forced_vertices).unwrap();
        writeln!(out, "elapsed_ms: {:.3}", self.elapsed_ms).unwrap();
        writeln!(out, "valid: {}", self.valid).unwrap();
        if let Some(f) = &self.fallback {
            writeln!(out, "fallback: {f}").unwrap();
        }
        out
    }
}

fn colour_bound(algo: Algo, n: usize, m: usize) -> f64 {
    match algo {
        Algo::Mod2 => (n.max(2) as f64).log2(),
        Algo::Mod2Edges => 2.0 + 0.5 * (m.max(1) as f64).log2(),
        Algo::Rational => {
            let n = n as f64;
            2.0 + (8.0 * n.powf(1.5) * n.ln().sqrt()).log2().ceil()
        }
    }
}

fn algo_name(algo: Algo) -> &'static str {
    match algo {
        Algo::Mod2 => "mod2",
        Algo::Mod2Edges => "mod2-edges",
        Algo::Rational => "rational",
    }
}

/// Runs one solve and builds its report record; shared by `solve` and
/// `bench`.
pub fn solve_instance(h: &Hypergraph, args: &SolveArgs) -> Result<(Colouring, SolveRecord), SolveError> {
    let mut algo = args.algo;
    let mut fallback = None;
    if algo == Algo::Rational && h.n() < 8 {
        // The rational analysis needs n >= 8; route small instances.
        algo = Algo::Mod2;
        fallback = Some("rational solver requires n >= 8; fell back to mod2".to_string());
    }
    let (colouring, iterations, retries, brute, elapsed) = match algo {
        Algo::Mod2 => {
            let r = solve_mod2(h, args.brute_threshold)?;
            (r.colouring, r.iterations, 0, r.brute_forced_vertices, r.elapsed)
        }
        Algo::Mod2Edges => {
            let r = solve_mod2_edges(h)?;
            (r.colouring, r.iterations, 0, r.brute_forced_vertices, r.elapsed)
        }
        Algo::Rational => {
            let r = solve_rational(h, args.seed, args.max_retries)?;
            (r.colouring, 0, r.retries, 0, r.elapsed)
        }
    };
    let valid = verify_lo_colouring(h, &colouring).valid;
    let record = SolveRecord {
        algo: algo_name(algo).to_string(),
        n: h.n(),
        m: h.m(),
        colours_used: colouring.colours_used(),
        bound: colour_bound(algo, h.n(), h.m()),
        iterations,
        retries,
        brute_forced_vertices: brute,
        elapsed_ms: elapsed.as_secs_f64() * 1e3,
        valid,
        fallback,
    };
    Ok((colouring, record))
}

fn emit(record: &SolveRecord, format: ReportFormat) {
    match format {
        ReportFormat::Text => print!("{}", record.text()),
        ReportFormat::Structured => {
            println!("{}", serde_json::to_string(record).expect("serializable"))
        }
    }
}

/// Entry point behind `main`; returns the process exit status.
pub fn run(config: RunConfig) -> i32 {
    match dispatch(config) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Promise(msg)) => {
            eprintln!("error: {msg}");
            EXIT_INVALID
        }
    }
}

enum CliError {
    Usage(String),
    Promise(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<crate::error::ParseError> for CliError {
    fn from(e: crate::error::ParseError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::BadThreshold { .. } | SolveError::InstanceTooLarge(_)
            | SolveError::InfeasibleGenerator { .. } | SolveError::TooSmall(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Promise(e.to_string()),
        }
    }
}

fn dispatch(config: RunConfig) -> Result<i32, CliError> {
    match config.command {
        Command::Solve(args) => {
            let text = fs::read_to_string(&args.input)?;
            let h = parse_hypergraph(&text)?;
            let (colouring, record) = solve_instance(&h, &args)?;
            fs::write(&args.output, serialize_colouring(&colouring))?;
            emit(&record, args.report_format);
            Ok(if record.valid { EXIT_OK } else { EXIT_INVALID })
        }
        Command::Verify(args) => {
            let h = parse_hypergraph(&fs::read_to_string(&args.input)?)?;
            let c = parse_colouring(&fs::read_to_string(&args.colouring)?)?;
            if c.n() != h.n() {
                return Err(CliError::Usage(format!(
                    "colouring covers {} vertices, instance has {}",
                    c.n(),
                    h.n()
                )));
            }
            let report = verify_lo_colouring(&h, &c);
            match args.report_format {
                ReportFormat::Text => {
                    println!("valid: {}", report.valid);
                    println!("colours_used: {}", report.colours_used);
                    for (edge, why) in &report.violations {
                        println!("violation: edge {} {:?}", edge, why);
                    }
                }
                ReportFormat::Structured => {
                    #[derive(Serialize)]
                    struct V {
                        valid: bool,
                        colours_used: usize,
                        violations: Vec<(usize, String)>,
                    }
                    let v = V {
                        valid: report.valid,
                        colours_used: report.colours_used,
                        violations: report
                            .violations
                            .iter()
                            .map(|(e, w)| (*e, format!("{w:?}")))
                            .collect(),
                    };
                    println!("{}", serde_json::to_string(&v).expect("serializable"));
                }
            }
            Ok(if report.valid { EXIT_OK } else { EXIT_INVALID })
        }
        Command::Gen(args) => {
            if let Some(k) = args.clique_gadget {
                if k < 2 {
                    return Err(CliError::Usage("clique gadget needs k >= 2".into()));
                }
                let h = gen_clique_gadget(k);
                fs::write(&args.output, serialize_hypergraph(&h))?;
                return Ok(EXIT_OK);
            }
            let n = args.n.expect("clap enforces n or clique-gadget");
            let m = args.m.ok_or_else(|| CliError::Usage("--m is required with --n".into()))?;
            if n < 3 {
                return Err(CliError::Usage("planted generator needs n >= 3".into()));
            }
            if !(args.ones_fraction > 0.0 && args.ones_fraction < 1.0) {
                return Err(CliError::Usage("--ones-fraction must be in (0,1)".into()));
            }
            let inst = gen_planted(n, m, args.ones_fraction, args.seed)?;
            fs::write(&args.output, serialize_hypergraph(&inst.hypergraph))?;
            if let Some(path) = &args.witness {
                fs::write(path, serialize_colouring(&inst.planted))?;
            }
            Ok(EXIT_OK)
        }
        Command::Oracle(args) => {
            let h = parse_hypergraph(&fs::read_to_string(&args.input)?)?;
            match brute_force_min_lo(&h, args.budget)? {
                Some(k) => println!("min_colours: {k}"),
                None => println!("min_colours: none within budget {}", args.budget),
            }
            Ok(EXIT_OK)
        }
        Command::Bench(args) => {
            if args.min_n < 4 || args.max_n < args.min_n {
                return Err(CliError::Usage("need 4 <= min-n <= max-n".into()));
            }
            let mut sizes = Vec::new();
            let mut n = args.min_n;
            while n <= args.max_n {
                sizes.push(n);
                n *= 2;
            }
            // One solve per instance, instances run in parallel; each
            // solve stays single-threaded so per-instance timing and
            // output are deterministic.
            let rows: Vec<Result<SolveRecord, SolveError>> = std::thread::scope(|scope| {
                let handles: Vec<_> = sizes
                    .iter()
                    .map(|&n| {
                        let args = &args;
                        scope.spawn(move || {
                            let inst = gen_planted(n, 2 * n, 0.25, args.seed ^ n as u64)?;
                            let solve_args = SolveArgs {
                                algo: args.algo,
                                input: PathBuf::new(),
                                output: PathBuf::new(),
                                seed: args.seed,
                                brute_threshold: DEFAULT_BRUTE_THRESHOLD,
                                max_retries: 64,
                                report_format: ReportFormat::Structured,
                            };
                            solve_instance(&inst.hypergraph, &solve_args).map(|(_, r)| r)
                        })
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().expect("no panic")).collect()
            });
            for row in rows {
                let record = row?;
                println!("{}", serde_json::to_string(&record).expect("serializable"));
            }
            Ok(EXIT_OK)
        }
    }
}
