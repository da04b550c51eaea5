//! `whitext` command-line front end.

mod commands;
mod config;
mod error;
mod figures;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "whitext", version, about = "Whitney decompositions, set extension and weighted geodesics on voxel domains")]
pub struct Cli {
    /// TOML experiment config; command-line flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (defaults to one per core).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for random sets and pair sampling.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct DomainArgs {
    /// Generator: cube, ball, slit_square, outward_cusp, snowflake_approx, cantor_tube.
    #[arg(long = "domain")]
    pub generator: Option<String>,
    /// Resolution level; cells have side 2^-K.
    #[arg(long = "K")]
    pub k: Option<u32>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long = "slit-len")]
    pub slit_len: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub iterations: Option<u32>,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub lambda: Option<Vec<f64>>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Voxelize a generator domain.
    Gen {
        #[command(flatten)]
        dom: DomainArgs,
    },
    /// Whitney decomposition with the brute-force audit.
    Whitney {
        /// VOXD domain file (otherwise the domain flags or config are used).
        file: Option<PathBuf>,
        #[command(flatten)]
        dom: DomainArgs,
        #[arg(long)]
        lmax: Option<i32>,
    },
    /// Extend a set across the boundary and tabulate the inequality ratio.
    Extend {
        file: Option<PathBuf>,
        #[command(flatten)]
        dom: DomainArgs,
        /// half, quadrant, below-slit, random or cubes.
        #[arg(long)]
        set: Option<String>,
        /// Cell density of a random set.
        #[arg(long)]
        density: Option<f64>,
        #[arg(long, value_delimiter = ',')]
        p: Option<Vec<f64>>,
        /// Extra resolution levels.
        #[arg(long)]
        refine: Option<u32>,
        #[arg(long)]
        lmax: Option<i32>,
    },
    /// Complement-curve cost ratios over random boundary pairs.
    Curvescan {
        file: Option<PathBuf>,
        #[command(flatten)]
        dom: DomainArgs,
        #[arg(long, value_delimiter = ',')]
        p: Option<Vec<f64>>,
        /// Pairs per separation scale.
        #[arg(long)]
        pairs: Option<usize>,
    },
    /// One weighted geodesic.
    Geodesic {
        file: Option<PathBuf>,
        #[command(flatten)]
        dom: DomainArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        from: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        to: Vec<f64>,
        #[arg(long)]
        p: Option<f64>,
        /// complement or interior.
        #[arg(long, default_value = "complement")]
        side: String,
    },
    /// Build and certify the Cantor-tube construction.
    Cantor {
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, value_delimiter = ',')]
        lambda: Option<Vec<f64>>,
    },
    /// Summarize the runs in a directory.
    Report { dir: PathBuf },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    ExitCode::SUCCESS
                }
                _ => {
                    let msg = e.to_string();
                    let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
                    eprintln!("whitext: error: usage: {first}");
                    ExitCode::from(2)
                }
            };
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("whitext: error: {}", e.line());
            ExitCode::from(e.exit_code())
        }
    }
}
