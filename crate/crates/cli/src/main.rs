use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cocycle_lab::eval::{self, GridFlags};
use cocycle_lab::{run, to_json, CliError, Keys, Settings, Suite};

#[derive(Parser)]
#[command(
    name = "cocycle-lab",
    version,
    about = "Verification reports for group cocycles on finite extensions and loop groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a suite; exit 0 if every check passes, 1 if any fails, 2 on configuration errors.
    Verify(VerifyArgs),
    /// Cohomology of a group given as a JSON Cayley table.
    Cohomology {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        modulus: Option<u64>,
        #[arg(long)]
        module: Option<PathBuf>,
    },
    /// Evaluate Λ and C on map families described in TOML.
    Eval {
        family: PathBuf,
        /// Second family for C(first, second).
        #[arg(long)]
        with: Option<PathBuf>,
        #[arg(long, default_value_t = 64)]
        nr: usize,
        #[arg(long, default_value_t = 64)]
        ntheta: usize,
        #[arg(long, default_value_t = 64)]
        nt: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Finite,
    Loop,
    Extensions,
    All,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: SuiteArg,
    #[arg(long)]
    corpus: Option<String>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Config file; defaults to ./cocycle-lab.toml when present.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn verify(args: VerifyArgs) -> Result<bool, CliError> {
    let suite = match args.suite {
        SuiteArg::Finite => Suite::Finite,
        SuiteArg::Loop => Suite::Loop,
        SuiteArg::Extensions => Suite::Extensions,
        SuiteArg::All => Suite::All,
    };
    let cli = Keys {
        corpus: args.corpus,
        grid: args.grid,
        json: args.json,
        seed: args.seed,
    };
    let settings = Settings::from_keys(Keys::discover(args.config.as_deref())?.overridden_by(cli))?;
    let report = run(suite, &settings)?;
    println!("{}", cocycle_lab::suites::summary(&report));
    if let Some(path) = &settings.json {
        std::fs::write(path, to_json(&report))
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(report.pass)
}

fn print_json<T: serde::Serialize>(v: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(v).expect("output serializes")
    );
}

fn main() -> ExitCode {
    let outcome = match Cli::parse().command {
        Command::Verify(args) => verify(args),
        Command::Cohomology {
            group,
            degree,
            modulus,
            module,
        } => eval::cohomology_of(&group, modulus, module.as_deref(), degree).map(|o| {
            print_json(&o);
            true
        }),
        Command::Eval {
            family,
            with,
            nr,
            ntheta,
            nt,
        } => eval::family(&family, with.as_deref(), GridFlags { nr, ntheta, nt }).map(|o| {
            print_json(&o);
            true
        }),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("cocycle-lab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
