use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use blowdown::acceptance;
use blowdown::scenario::{
    builtin, render_machine, render_text, render_verify_machine, render_verify_text, run_source,
    verify_source, RunOptions, ScenarioError,
};

#[derive(Parser)]
#[command(name = "blowdown", version, about = "Rational blowdown bookkeeping for blown-up CP2")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Clone, Copy, ValueEnum)]
enum Builtin {
    #[value(name = "example-B4")]
    ExampleB4,
    #[value(name = "example-C4")]
    ExampleC4,
}

impl Builtin {
    fn name(self) -> &'static str {
        match self {
            Builtin::ExampleB4 => "example-B4",
            Builtin::ExampleC4 => "example-C4",
        }
    }
}

#[derive(clap::Args)]
struct Source {
    /// Scenario file (TOML).
    #[arg(required_unless_present = "builtin", conflicts_with = "builtin")]
    path: Option<PathBuf>,
    /// Run a built-in scenario instead of a file.
    #[arg(long, value_enum)]
    builtin: Option<Builtin>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

impl Source {
    fn read(&self) -> Result<String, ScenarioError> {
        match (&self.path, self.builtin) {
            (_, Some(b)) => Ok(builtin(b.name()).expect("known builtin").to_string()),
            (Some(p), None) => std::fs::read_to_string(p)
                .map_err(|e| ScenarioError::Parse(format!("{}: {e}", p.display()))),
            (None, None) => unreachable!("clap requires one source"),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline on a scenario.
    Run {
        #[command(flatten)]
        source: Source,
        /// Seed for the sign-lemma sampler.
        #[arg(long)]
        seed: Option<u64>,
        /// Expected homeomorphism type, e.g. CP2#8-CP2.
        #[arg(long)]
        expect: Option<String>,
    },
    /// Certify coordinates and run the Bezout audit only.
    VerifyConfig {
        #[command(flatten)]
        source: Source,
    },
    /// Run every acceptance criterion.
    Acceptance {
        /// Run all criteria (the default).
        #[arg(long)]
        all: bool,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn fail(e: &ScenarioError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            source,
            seed,
            expect,
        } => {
            let text = match source.read() {
                Ok(t) => t,
                Err(e) => return fail(&e),
            };
            let opts = RunOptions {
                seed,
                expect,
                samples: None,
            };
            match run_source(&text, &opts) {
                Ok(report) => {
                    match source.format {
                        Format::Text => print!("{}", render_text(&report)),
                        Format::Machine => print!("{}", render_machine(&report)),
                    }
                    ExitCode::from(report.exit_code() as u8)
                }
                Err(e) => fail(&e),
            }
        }
        Command::VerifyConfig { source } => {
            let text = match source.read() {
                Ok(t) => t,
                Err(e) => return fail(&e),
            };
            match verify_source(&text) {
                Ok(report) => {
                    match source.format {
                        Format::Text => print!("{}", render_verify_text(&report)),
                        Format::Machine => print!("{}", render_verify_machine(&report)),
                    }
                    if let Some(w) = &report.warning {
                        eprintln!("warning: {w}");
                    }
                    ExitCode::from(if report.ok() { 0 } else { 2 })
                }
                Err(e) => fail(&e),
            }
        }
        Command::Acceptance { all: _, seed } => {
            let results = acceptance::run_all(
                &acceptance::Fixtures::reference(),
                seed.unwrap_or(acceptance::DEFAULT_SEED),
            );
            for r in &results {
                println!("{r}");
            }
            if results.iter().all(|r| r.passed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
    }
}
