//! `frameproof` command-line tool.
//!
//! Exit codes: 0 success or pass, 1 verification or guarantee failure,
//! 2 parameter, input or capacity error, 3 construction failure.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use frameproof::bounds::{bound_report, FP_LOWER_SHANN, FP_THEOREM38, FP_UPPER_DIAG, EXPURGATION_43};
use frameproof::diagonal::build_diagonal;
use frameproof::expurgate::build_expurgated;
use frameproof::lll::{build_frameproof, build_strongly_selective};
use frameproof::sim::{guarantee_check, simulate_traced};
use frameproof::verify::{is_frameproof, is_lambda_matrix, is_strongly_selective};
use frameproof::{read_code, write_code, CodeMatrix, Error};
use serde::Serialize;

mod grid;

#[derive(Parser)]
#[command(name = "frameproof", version, about = "Frameproof and strongly selective codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code and write it in the text code format.
    Construct(ConstructArgs),
    /// Check a code file for a property.
    Verify(VerifyArgs),
    /// Print every length bound for (q, k, n).
    Bounds(BoundsArgs),
    /// Run the conflict resolution schedule of a code.
    Simulate(SimulateArgs),
    /// Construct, verify and tabulate frameproof codes over a parameter grid.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    LllFp,
    LllSs,
    Expurgate,
    Diagonal,
}

impl Construction {
    fn name(self) -> &'static str {
        match self {
            Construction::LllFp => "lll-fp",
            Construction::LllSs => "lll-ss",
            Construction::Expurgate => "expurgate",
            Construction::Diagonal => "diagonal",
        }
    }
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(value_enum)]
    method: Construction,
    #[arg(long)]
    q: u32,
    /// Coalition size (frameproof) or selectivity; unused by `diagonal`.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; the run report goes to `<out>.report.json`. Without it
    /// the code is printed to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PropertyArg {
    Fp,
    Ss,
    Lambda,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum)]
    property: PropertyArg,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    lambda: Option<usize>,
    #[arg(long)]
    w: Option<usize>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    q: u32,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    n: usize,
    /// Print real-valued bounds rounded up to integers.
    #[arg(long)]
    ceil: bool,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Comma-separated active stations.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["k", "trials"])]
    active: Option<Vec<usize>>,
    /// Largest random active set size.
    #[arg(long, requires = "trials")]
    k: Option<usize>,
    #[arg(long, requires = "k")]
    trials: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Print `slot channel transmitters outcome` lines (with --active).
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// `q=2,3;k=2,3;n=10,20`: semicolon-separated value lists, expanded as a
    /// Cartesian product.
    #[arg(long)]
    grid: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

/// Construction errors exit with 3; malformed requests with 2.
fn construction_failure(e: Error) -> Failure {
    let code = match e {
        Error::Construction(_) | Error::ResampleBudget { .. } | Error::Capacity { .. } => 3,
        _ => 2,
    };
    Failure { code, message: e.to_string() }
}

fn usage_failure(e: Error) -> Failure {
    Failure::usage(e.to_string())
}

type CmdResult = Result<ExitCode, Failure>;

#[derive(Serialize)]
struct RunReport {
    subcommand: &'static str,
    q: u32,
    k: Option<usize>,
    n: usize,
    seed: u64,
    t: usize,
    w: Option<usize>,
    lambda: Option<usize>,
    total_resamples: Option<u64>,
    deleted_columns: Option<Vec<usize>>,
    redraws: Option<u64>,
    wall_time_ms: f64,
}

fn require_k(k: Option<usize>, method: Construction) -> Result<usize, Failure> {
    k.ok_or_else(|| Failure::usage(format!("{} needs --k", method.name())))
}

fn construct(args: ConstructArgs) -> CmdResult {
    let start = Instant::now();
    let mut report = RunReport {
        subcommand: args.method.name(),
        q: args.q,
        k: args.k,
        n: args.n,
        seed: args.seed,
        t: 0,
        w: None,
        lambda: None,
        total_resamples: None,
        deleted_columns: None,
        redraws: None,
        wall_time_ms: 0.0,
    };
    let code = match args.method {
        Construction::LllFp | Construction::LllSs => {
            let k = require_k(args.k, args.method)?;
            let built = if matches!(args.method, Construction::LllFp) {
                build_frameproof(k, args.q, args.n, args.seed)
            } else {
                build_strongly_selective(k, args.q, args.n, args.seed)
            }
            .map_err(construction_failure)?;
            report.w = Some(built.params.w);
            report.lambda = Some(built.params.lambda);
            report.total_resamples = Some(built.log.total_resamples);
            built.code
        }
        Construction::Expurgate => {
            let k = require_k(args.k, args.method)?;
            let built = build_expurgated(args.q, k, args.n, args.seed).map_err(construction_failure)?;
            report.deleted_columns = Some(built.deleted);
            report.redraws = Some(built.redraws);
            built.code
        }
        Construction::Diagonal => build_diagonal(args.q, args.n).map_err(construction_failure)?,
    };
    report.t = code.t();
    report.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;

    let bytes = write_code(&code);
    match &args.out {
        Some(out) => {
            fs::write(out, &bytes).map_err(|e| Failure::usage(format!("{}: {e}", out.display())))?;
            let sidecar = sidecar_path(out);
            let json = serde_json::to_string_pretty(&report).expect("serializable");
            fs::write(&sidecar, json + "\n").map_err(|e| Failure::usage(format!("{}: {e}", sidecar.display())))?;
        }
        None => io::stdout().write_all(&bytes).map_err(|e| Failure::usage(e.to_string()))?,
    }
    Ok(ExitCode::SUCCESS)
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".report.json");
    PathBuf::from(name)
}

fn load(path: &Path) -> Result<CodeMatrix, Failure> {
    let bytes = fs::read(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    read_code(&bytes).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn verify(args: VerifyArgs) -> CmdResult {
    let code = load(&args.input)?;
    let need_k = || args.k.ok_or_else(|| Failure::usage("--k is required for this property"));
    let report = match args.property {
        PropertyArg::Fp => is_frameproof(&code, need_k()?).map_err(usage_failure)?,
        PropertyArg::Ss => is_strongly_selective(&code, need_k()?).map_err(usage_failure)?,
        PropertyArg::Lambda => {
            let (Some(lambda), Some(w)) = (args.lambda, args.w) else {
                return Err(Failure::usage("lambda property needs --lambda and --w"));
            };
            is_lambda_matrix(&code, lambda, w)
        }
    };
    println!("{report}");
    Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn bounds(args: BoundsArgs) -> CmdResult {
    let report = bound_report::<f64>(args.q, args.k, args.n).map_err(usage_failure)?;
    print!("{}", report.render(args.ceil));
    Ok(ExitCode::SUCCESS)
}

fn simulate(args: SimulateArgs) -> CmdResult {
    let code = load(&args.input)?;
    match (args.active, args.k, args.trials) {
        (Some(active), _, _) => {
            let (outcome, trace) = simulate_traced(&code, &active).map_err(usage_failure)?;
            print!("{outcome}");
            if args.trace {
                println!("slot\tchannel\ttransmitters\toutcome");
                for line in trace {
                    println!("{line}");
                }
            }
            Ok(if outcome.all_succeeded() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        (None, Some(k), Some(trials)) => {
            if k == 0 {
                return Err(Failure::usage("--k must be positive"));
            }
            let ok = guarantee_check(&code, k, trials, args.seed);
            println!("guarantee k={k} trials={trials} seed={} {}", args.seed, if ok { "pass" } else { "fail" });
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        _ => Err(Failure::usage("simulate needs --active or both --k and --trials")),
    }
}

fn bench(args: BenchArgs) -> CmdResult {
    let cells = grid::parse(&args.grid).map_err(Failure::usage)?;
    let mut exit = 0u8;
    println!("q\tk\tn\tt\tfp_theorem38\texpurgation_43\tfp_upper_diag\tfp_lower_shann\tverified");
    for cell in cells {
        let (q, k, n) = (cell.q, cell.k, cell.n);
        let report = match bound_report::<f64>(q, k, n) {
            Ok(r) => r,
            Err(e) => {
                eprintln!("q={q} k={k} n={n}: {e}");
                exit = exit.max(2);
                continue;
            }
        };
        let field = |key: &str| report.get(key).map_or_else(String::new, |e| {
            e.as_f64().map_or_else(|| "inapplicable".to_string(), |v| frameproof::bounds::format_significant(v, 6))
        });
        let (t, verified) = match build_frameproof(k, q, n, args.seed) {
            Ok(built) => {
                let lower = report.value(FP_LOWER_SHANN).unwrap_or(0.0);
                let status = match is_frameproof(&built.code, k) {
                    Ok(r) if r.passed && built.code.t() as f64 >= lower => "pass",
                    Ok(_) => {
                        exit = exit.max(1);
                        "fail"
                    }
                    Err(Error::Capacity { .. }) => "skipped",
                    Err(e) => {
                        eprintln!("q={q} k={k} n={n}: {e}");
                        exit = exit.max(2);
                        "error"
                    }
                };
                (built.code.t().to_string(), status)
            }
            Err(e) => {
                eprintln!("q={q} k={k} n={n}: {e}");
                exit = exit.max(construction_failure(e).code);
                ("-".to_string(), "error")
            }
        };
        println!(
            "{q}\t{k}\t{n}\t{t}\t{}\t{}\t{}\t{}\t{verified}",
            field(FP_THEOREM38),
            field(EXPURGATION_43),
            field(FP_UPPER_DIAG),
            field(FP_LOWER_SHANN),
        );
    }
    Ok(ExitCode::from(exit))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Construct(a) => construct(a),
        Command::Verify(a) => verify(a),
        Command::Bounds(a) => bounds(a),
        Command::Simulate(a) => simulate(a),
        Command::Bench(a) => bench(a),
    };
    result.unwrap_or_else(|f| {
        eprintln!("error: {}", f.message);
        ExitCode::from(f.code)
    })
}
