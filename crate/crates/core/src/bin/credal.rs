use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use credal::criteria::CriterionId;
use credal::maxent::{LogBase, MaxEntOptions};
use credal::problem::Problem;
use credal::rational::parse_rational;
use credal::report::{self, ResultDocument};
use credal::Error;

#[derive(Parser, Debug)]
#[command(
    name = "credal",
    version,
    about = "Decisions under linear constraints on probabilities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that the constraints admit at least one distribution.
    Check(Common),
    /// Lower and upper expected utility of every action.
    Intervals(Common),
    /// Choose an action with a decision criterion.
    Decide {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        criterion: Criterion,
        /// Pessimism index in [0, 1] for gh and hurwicz (decimal or fraction).
        #[arg(long)]
        alpha: Option<String>,
    },
    /// Maximum-entropy joint distribution of the marginal tables.
    Maxent {
        #[command(flatten)]
        common: Common,
        /// Logarithm base for the entropy: e or 2.
        #[arg(long, default_value = "e")]
        base: String,
    },
    /// Reduce the marginal model toward the target variables.
    Reduce {
        #[command(flatten)]
        common: Common,
        /// Also print the utility intervals over the reduced model.
        #[arg(long)]
        intervals: bool,
    },
    /// List the E-admissible actions with witness distributions.
    Admissible(Common),
}

#[derive(clap::Args, Debug)]
struct Common {
    /// JSON problem file.
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Criterion {
    Gm,
    Gh,
    Levi,
    Pme,
    Maximin,
    Hurwicz,
    Regret,
}

impl From<Criterion> for CriterionId {
    fn from(c: Criterion) -> Self {
        match c {
            Criterion::Gm => CriterionId::Gm,
            Criterion::Gh => CriterionId::Gh,
            Criterion::Levi => CriterionId::Levi,
            Criterion::Pme => CriterionId::Pme,
            Criterion::Maximin => CriterionId::Maximin,
            Criterion::Hurwicz => CriterionId::Hurwicz,
            Criterion::Regret => CriterionId::MinimaxRegret,
        }
    }
}

fn load(common: &Common) -> Result<Problem, Error> {
    let text = std::fs::read_to_string(&common.file)
        .map_err(|e| Error::Problem(format!("{}: {e}", common.file.display())))?;
    Problem::from_json(&text)
}

fn run(command: &Command) -> Result<(ResultDocument, Format), Error> {
    match command {
        Command::Check(c) => Ok((report::run_check(&load(c)?)?, c.format)),
        Command::Intervals(c) => Ok((report::run_intervals(&load(c)?)?, c.format)),
        Command::Decide {
            common,
            criterion,
            alpha,
        } => {
            let alpha = alpha.as_deref().map(parse_rational).transpose()?;
            let doc = report::run_decide(&load(common)?, (*criterion).into(), alpha.as_ref())?;
            Ok((doc, common.format))
        }
        Command::Maxent { common, base } => {
            let base = LogBase::parse(base)
                .ok_or_else(|| Error::Problem(format!("unknown log base `{base}`")))?;
            let options = MaxEntOptions {
                base,
                ..MaxEntOptions::default()
            };
            Ok((report::run_maxent(&load(common)?, &options)?, common.format))
        }
        Command::Reduce { common, intervals } => Ok((
            report::run_reduce(&load(common)?, *intervals)?,
            common.format,
        )),
        Command::Admissible(c) => Ok((report::run_admissible(&load(c)?)?, c.format)),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("CREDAL_LOG")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli.command) {
        Ok((doc, format)) => {
            match format {
                Format::Text => print!("{}", doc.to_text()),
                Format::Json => println!("{}", doc.to_json()),
            }
            if doc.consistent == Some(false) {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
