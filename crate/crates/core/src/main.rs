use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fefbound::cli::{
    cmd_bound, cmd_decompose, cmd_sweep, cmd_verify, Basis, Family, FamilyParams, OutputFormat,
    SweepParam, SweepSpec, StateSpec,
};
use fefbound::fef::OptimizerOptions;
use fefbound::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "fefbound", version, about = "Fully entangled fraction bounds and principal-basis decompositions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Audit every bound against the numeric FEF lower estimate.
    Bound {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        opt: OptArgs,
        /// Also write the report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the bounds over a parameter grid.
    Sweep {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        d: Option<usize>,
        /// Swept parameter: p (isotropic) or a (horodecki).
        #[arg(long)]
        param: SweepParam,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long)]
        steps: usize,
        #[command(flatten)]
        opt: OptArgs,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "csv")]
        format: OutputFormat,
    },
    /// Run the identity suite and report paper-claim findings.
    Verify {
        #[arg(long = "d-max", default_value_t = 4)]
        d_max: usize,
        #[command(flatten)]
        opt: OptArgs,
    },
    /// List nonzero coefficients in the principal or Bloch basis.
    Decompose {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value = "principal")]
        basis: Basis,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Random-family seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
struct StateArgs {
    /// JSON state file.
    #[arg(long, conflicts_with = "family")]
    state: Option<PathBuf>,
    #[arg(long)]
    family: Option<Family>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    p: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    /// Accept state files that fail the physicality checks.
    #[arg(long)]
    allow_unphysical: bool,
}

#[derive(Args, Debug)]
struct OptArgs {
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    #[arg(long = "max-iterations", default_value_t = 500)]
    max_iterations: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Seed for the optimizer and for the random family.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl OptArgs {
    fn options(&self) -> Result<OptimizerOptions> {
        if self.restarts == 0 || self.max_iterations == 0 {
            return Err(Error::Usage("--restarts and --max-iterations must be positive".into()));
        }
        Ok(OptimizerOptions {
            restarts: self.restarts,
            max_iterations: self.max_iterations,
            tolerance: self.tol,
            seed: self.seed,
        })
    }
}

impl StateArgs {
    fn spec(&self, seed: u64) -> Result<StateSpec> {
        match (&self.state, self.family) {
            (Some(path), None) => Ok(StateSpec::File {
                path: path.clone(),
                allow_unphysical: self.allow_unphysical,
            }),
            (None, Some(family)) => Ok(StateSpec::Family {
                family,
                params: FamilyParams {
                    d: self.d,
                    p: self.p,
                    a: self.a,
                    seed,
                },
            }),
            _ => Err(Error::Usage("give exactly one of --state or --family".into())),
        }
    }
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(std::fs::File::create(p).map_err(|source| Error::Io {
            path: p.clone(),
            source,
        })?),
        None => Box::new(io::stdout()),
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    let mut stdout = io::stdout();
    match cli.command {
        Command::Bound { state, opt, out } => {
            let spec = state.spec(opt.seed)?;
            cmd_bound(&spec, &opt.options()?, out.as_deref(), &mut stdout)?;
        }
        Command::Sweep {
            family,
            d,
            param,
            from,
            to,
            steps,
            opt,
            out,
            format,
        } => {
            let spec = SweepSpec {
                family,
                d,
                parameter: param,
                from,
                to,
                steps,
                optimizer: opt.options()?,
            };
            let rows = cmd_sweep(&spec, &out, format)?;
            println!("wrote {} rows to {}", rows.len(), out.display());
        }
        Command::Verify { d_max, opt } => {
            let report = cmd_verify(d_max, &opt.options()?, &mut stdout)?;
            if !report.passed() {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Decompose {
            state,
            basis,
            out,
            seed,
        } => {
            let spec = state.spec(seed)?;
            let mut sink = open_out(&out)?;
            cmd_decompose(&spec, basis, &mut *sink)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
