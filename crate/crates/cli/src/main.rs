use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod output;

#[derive(Parser, Debug)]
#[command(name = "dhk", version, about = "Duistermaat-Heckman measures via cone splines and localization")]
struct Cli {
    /// Directory for the JSON and CSV outputs
    #[arg(long, global = true, default_value = "dhk-out")]
    out: PathBuf,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Relative tolerance for the consistency reports
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Appendix-style analysis of a polyhedral set
    Cones {
        #[arg(long)]
        input: PathBuf,
        /// Extra direction to test, e.g. "1,-1/2"; repeatable
        #[arg(long = "xi", allow_hyphen_values = true)]
        xi: Vec<String>,
    },
    /// DH measure of a fixed-point model
    Abelian {
        #[arg(long)]
        input: PathBuf,
        /// Density grid "x0:x1:n,y0:y1:m"
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        #[arg(long, default_value_t = 20)]
        zeta_samples: usize,
        /// Chamber point used for renormalization, e.g. "1,2"
        #[arg(long, allow_hyphen_values = true)]
        chamber: Option<String>,
    },
    /// T-type and K-type measures of a coadjoint orbit
    Orbit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Measure::Both)]
        measure: Measure,
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        #[arg(long, default_value_t = 10)]
        zeta_samples: usize,
        #[arg(long, allow_hyphen_values = true)]
        chamber: Option<String>,
    },
    /// Run one acceptance suite (or "all")
    Verify { suite: String },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Measure {
    T,
    K,
    Both,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("DHK_LOG", "warn")).init();
    let cli = Cli::parse();
    let out = output::OutDir::new(cli.out);
    let result = out.and_then(|out| match cli.command {
        Command::Cones { input, xi } => commands::cones(&out, &input, &xi),
        Command::Abelian { input, grid, zeta_samples, chamber } => commands::abelian(
            &out,
            &input,
            &commands::Options { grid, zeta_samples, chamber, seed: cli.seed, tol: cli.tol },
        ),
        Command::Orbit { input, measure, grid, zeta_samples, chamber } => commands::orbit(
            &out,
            &input,
            measure,
            &commands::Options { grid, zeta_samples, chamber, seed: cli.seed, tol: cli.tol },
        ),
        Command::Verify { suite } => commands::verify(&out, &suite, cli.seed),
    });
    match result {
        Ok(summary) => {
            println!("{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("dhk: {e}");
            ExitCode::from(e.code())
        }
    }
}
