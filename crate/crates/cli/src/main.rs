use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use orliczlab::orlicz::{luxemburg_norm, DiscreteMeasure, SampledFunction, DEFAULT_TOL};
use orliczlab::report::{emit_norm_table, load_mesh, run_suite, Suite, SuiteConfig};
use orliczlab::{Error, Young64};
use serde_json::json;

#[derive(Parser)]
#[command(name = "orliczlab", version, about = "Orlicz norms, cochain complexes and the Cech-de Rham zig-zag")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Luxemburg norms of explicit vectors.
    Orlicz {
        #[command(subcommand)]
        op: OrliczOp,
    },
    /// Run a verification suite and emit a report.
    Verify(VerifyArgs),
    /// Norms of several vectors under several Young functions.
    Table(TableArgs),
    /// Print a generated mesh as JSON (usable as a `--mesh` file).
    Mesh {
        spec: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum OrliczOp {
    Norm {
        #[arg(long)]
        phi: String,
        /// Comma-separated sample values.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        values: Vec<f64>,
        /// Comma-separated positive weights (counting measure if absent).
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// orlicz, simplicial, poincare, bicomplex or endtoend.
    suite: String,
    #[arg(long)]
    mesh: Option<String>,
    #[arg(long, default_value = "power:p=2")]
    phi: String,
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, default_value_t = 0)]
    refine: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Include wall-clock time in the report.
    #[arg(long)]
    timing: bool,
}

#[derive(clap::Args)]
struct TableArgs {
    /// Young function specs, one per flag, in column order.
    #[arg(long)]
    phi: Vec<String>,
    /// Vectors separated by ';', entries by ','.
    #[arg(long, allow_hyphen_values = true)]
    values: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NumericalBreakdown { .. } | Error::NotACocycle(_) | Error::NotInKernel(_) => Failure::Check(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{}", text.trim_end()).and_then(|_| stdout.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Usage(format!("stdout: {e}"))),
                _ => Ok(()),
            }
        }
    }
}

fn parse_vectors(text: &str) -> Result<Vec<Vec<f64>>, Failure> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|v| {
            v.split(',')
                .map(|x| x.trim().parse::<f64>().map_err(|e| Failure::Usage(format!("bad value {x:?}: {e}"))))
                .collect()
        })
        .collect()
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Orlicz { op: OrliczOp::Norm { phi, values, weights, tol } } => {
            let phi = Young64::parse(&phi)?;
            let mu = match weights {
                Some(w) => DiscreteMeasure::new(w)?,
                None => DiscreteMeasure::counting(values.len()),
            };
            let r = luxemburg_norm(&phi, &SampledFunction(values), &mu, tol)?;
            let out = json!({"norm": r.norm, "modular_at_norm": r.modular_at_norm, "iterations": r.iterations});
            emit(&serde_json::to_string_pretty(&out).expect("json"), None)?;
            Ok(true)
        }
        Command::Verify(args) => {
            let suite = Suite::parse(&args.suite)?;
            let config = SuiteConfig {
                mesh: args.mesh,
                phi: args.phi,
                degree: args.degree,
                dim: args.dim,
                refine: args.refine,
                seed: args.seed,
                timing: args.timing,
            };
            let report = run_suite(suite, &config)?;
            let text = match args.format {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
            };
            emit(&text, args.out.as_ref())?;
            for c in report.failed() {
                eprintln!("FAIL {}: {:e} > {:e}", c.id, c.value, c.tolerance);
            }
            Ok(report.pass)
        }
        Command::Table(args) => {
            let phis = args.phi.iter().map(|s| Young64::parse(s)).collect::<Result<Vec<_>, _>>()?;
            let targets = parse_vectors(&args.values)?;
            let table = emit_norm_table(&phis, &targets, None)?;
            let text = match args.format {
                Format::Json => table.to_json(),
                Format::Csv => table.to_csv(),
            };
            emit(&text, args.out.as_ref())?;
            Ok(true)
        }
        Command::Mesh { spec, out } => {
            let mesh = load_mesh(&spec)?;
            emit(&mesh.to_json(), out.as_ref())?;
            Ok(true)
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    if let Ok(v) = std::env::var("ORLICZLAB_THREADS") {
        let n: usize = v.parse().map_err(|_| Failure::Usage(format!("ORLICZLAB_THREADS must be a positive integer, got {v:?}")))?;
        if n == 0 {
            return Err(Failure::Usage("ORLICZLAB_THREADS must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::Usage(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|_| run(cli)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
