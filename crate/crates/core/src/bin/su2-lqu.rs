use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use su2_lqu::cli::{self, CliError, Method};
use su2_lqu::lqu::DEFAULT_STARTS;
use su2_lqu::Spin;

/// Local quantum uncertainty of SU(2)-invariant spin-j ⊗ spin-1/2 and
/// spin-j ⊗ spin-1 states.
#[derive(Parser, Debug)]
#[command(name = "su2-lqu", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the LQU at one point. Passing --q selects the spin-1 partner.
    Compute(CommonArgs),
    /// CSV of LQU vs P for a spin-1/2 partner.
    SweepP(CommonArgs),
    /// CSV of LQU over the (P, Q) simplex for a spin-1 partner.
    SweepPq(CommonArgs),
    /// Print structural residuals of the state; exit 3 if any exceeds 1e-10.
    Validate(CommonArgs),
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Spin of the first particle, e.g. 5/2 or 3.
    #[arg(long)]
    j: Spin,
    /// Weight of the lowest total-spin sector (decimal or a/b).
    #[arg(long, value_parser = cli::parse_probability)]
    p: Option<f64>,
    /// Weight of the J = j sector; selects the spin-1 partner.
    #[arg(long, value_parser = cli::parse_probability)]
    q: Option<f64>,
    /// Grid points per axis for sweeps.
    #[arg(long, default_value_t = 201)]
    steps: usize,
    #[arg(long, value_enum, default_value_t = Method::Closed)]
    method: Method,
    /// Random starting directions for the numeric minimizer.
    #[arg(long, default_value_t = DEFAULT_STARTS)]
    seeds: usize,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn sink(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn require_point(args: &CommonArgs) -> Result<f64, CliError> {
    args.p
        .ok_or_else(|| CliError::Domain("--p is required".into()))
}

fn reject_point(args: &CommonArgs, command: &str) -> Result<(), CliError> {
    if args.p.is_some() || args.q.is_some() {
        return Err(CliError::Domain(format!(
            "{command} sweeps its own grid; drop --p/--q"
        )));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Compute(args) => {
            let p = require_point(&args)?;
            let mut out = sink(&args.out)?;
            cli::compute(args.j, p, args.q, args.method, args.seeds, &mut out)?;
            out.flush()?;
        }
        Command::SweepP(args) => {
            reject_point(&args, "sweep-p")?;
            let rows = cli::sweep_p(args.j, args.steps, args.method, args.seeds)?;
            let mut out = sink(&args.out)?;
            cli::write_csv(&rows, &mut out)?;
            out.flush()?;
        }
        Command::SweepPq(args) => {
            reject_point(&args, "sweep-pq")?;
            let rows = cli::sweep_pq(args.j, args.steps, args.method, args.seeds)?;
            let mut out = sink(&args.out)?;
            cli::write_csv(&rows, &mut out)?;
            out.flush()?;
        }
        Command::Validate(args) => {
            let p = require_point(&args)?;
            let report = cli::validate(args.j, p, args.q)?;
            let mut out = sink(&args.out)?;
            out.write_all(report.render().as_bytes())?;
            out.flush()?;
            if !report.passed() {
                return Err(CliError::Numerical(format!(
                    "largest residual {:e} exceeds {:e}",
                    report.worst(),
                    cli::VALIDATION_TOL
                )));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
