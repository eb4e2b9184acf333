//! Front end for `cawf-core`: scenario files, figure series and oracle checks.

pub mod config;
mod error;
pub mod figures;
pub mod report;
pub mod table;

pub use config::ScenarioConfig;
pub use error::{CliError, CliResult};
pub use table::SeriesTable;

/// One subcommand with its arguments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Cognition,
    DataValue,
    Consumption,
    Tax,
    Wealth,
    Equilibrium,
    Reproduce { figure: u32 },
    Validate,
}

impl Command {
    /// File name used under `--out`.
    pub fn artifact(&self) -> String {
        match self {
            Command::Reproduce { figure } => format!("figure_{figure:02}.csv"),
            Command::Cognition => "cognition.txt".into(),
            Command::DataValue => "datavalue.txt".into(),
            Command::Consumption => "consumption.txt".into(),
            Command::Tax => "tax.txt".into(),
            Command::Wealth => "wealth.txt".into(),
            Command::Equilibrium => "equilibrium.txt".into(),
            Command::Validate => "validate.txt".into(),
        }
    }
}

/// Header lines that let a CSV be regenerated.
pub fn provenance(figure: u32, cfg: &ScenarioConfig) -> String {
    format!(
        "generated by: cawf reproduce --figure {figure} --seed {} --config <the lines below>\nseed = {}\nconfig:\n{}",
        cfg.seed,
        cfg.seed,
        cfg.echo()
    )
}

pub fn reproduce_csv(figure: u32, cfg: &ScenarioConfig) -> CliResult<String> {
    figures::reproduce(figure, cfg)?.to_csv(&provenance(figure, cfg))
}

/// Runs `cmd`; the text is what goes to stdout (or the artifact file).
///
/// A failed validation still yields its report alongside the error.
pub fn run(cmd: Command, cfg: &ScenarioConfig) -> (Option<String>, CliResult<()>) {
    let text = match cmd {
        Command::Cognition => report::cognition(cfg),
        Command::DataValue => report::datavalue(cfg),
        Command::Consumption => report::consumption(cfg),
        Command::Tax => report::tax(cfg),
        Command::Wealth => report::wealth(cfg),
        Command::Equilibrium => report::equilibrium(cfg),
        Command::Reproduce { figure } => reproduce_csv(figure, cfg),
        Command::Validate => match report::validate(cfg) {
            Ok(v) if v.passed => Ok(v.text),
            Ok(v) => return (Some(v.text), Err(CliError::Validation("an oracle check failed".into()))),
            Err(e) => Err(e),
        },
    };
    match text {
        Ok(t) => (Some(t), Ok(())),
        Err(e) => (None, Err(e)),
    }
}
