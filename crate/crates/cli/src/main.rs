use std::path::PathBuf;
use std::process::ExitCode;

use cawf_cli::{run, CliError, CliResult, Command, ScenarioConfig};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "cawf", version, about = "Cognitive dilution, CAWF and wealth-distribution models")]
struct Args {
    /// Scenario file (`[section]` / `key = value`); defaults apply when absent.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed, overriding `[run] seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the output to this directory instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print every configuration value with its origin to stderr.
    #[arg(long, global = true)]
    explain: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Retention limits, steady states and cognition densities.
    Cognition,
    /// Entropies, information values and the data-value index.
    Datavalue,
    /// Shrinkage fit, CAWF limits and the Monte Carlo CAWF summary.
    Consumption,
    /// Tax-economy aggregates and the low-versus-high tax comparison.
    Tax,
    /// Firm policy, wealth law and density statistics.
    Wealth,
    /// Closed-form equilibrium prices and the labor-market residual.
    Equilibrium,
    /// Emit the series behind one figure as CSV.
    Reproduce {
        /// Figure number, 1 to 14.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=14))]
        figure: u32,
    },
    /// Closed form against finite differences and Monte Carlo.
    Validate,
}

fn load(args: &Args) -> CliResult<ScenarioConfig> {
    let text = match &args.config {
        Some(p) => std::fs::read_to_string(p).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", p.display())))?,
        None => String::new(),
    };
    let cfg = ScenarioConfig::parse(&text)?;
    Ok(match args.seed {
        Some(s) => cfg.with_seed(s),
        None => cfg,
    })
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let cmd = match args.cmd {
        Cmd::Cognition => Command::Cognition,
        Cmd::Datavalue => Command::DataValue,
        Cmd::Consumption => Command::Consumption,
        Cmd::Tax => Command::Tax,
        Cmd::Wealth => Command::Wealth,
        Cmd::Equilibrium => Command::Equilibrium,
        Cmd::Reproduce { figure } => Command::Reproduce { figure },
        Cmd::Validate => Command::Validate,
    };
    let result = load(&args).and_then(|cfg| {
        if args.explain {
            eprint!("{}", cfg.explain());
        }
        let (text, status) = run(cmd, &cfg);
        if let Some(text) = text {
            match &args.out {
                Some(dir) => {
                    std::fs::create_dir_all(dir)?;
                    let path = dir.join(cmd.artifact());
                    std::fs::write(&path, text)?;
                    eprintln!("wrote {}", path.display());
                }
                None => print!("{text}"),
            }
        }
        status
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
