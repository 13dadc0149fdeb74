mod commands;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "r1", version, about = "Symbolic rank-one words, canonical sequences, measures and towers")]
struct Cli {
    /// Comma-separated records with a header row.
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Print the stage word v_n.
    Expand {
        #[arg(long)]
        word: PathBuf,
        #[arg(long)]
        stage: usize,
        #[arg(long, default_value_t = rankone::DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Canonical report of the builders of v_n.
    Canon {
        #[arg(long)]
        word: PathBuf,
        #[arg(long)]
        stage: usize,
    },
    /// rho_{V,0..n} and the limit rho_V.
    Rho {
        #[arg(long)]
        word: PathBuf,
        #[arg(long)]
        stage: usize,
    },
    /// Distance between two words in the code space.
    Dist {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value_t = 4)]
        stage: usize,
    },
    /// Membership in O(N, r) (with --n, --r) or U(v, s) (with --v, --s).
    Nbhd {
        #[arg(long)]
        word: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        r: Option<String>,
        #[arg(long)]
        v: Option<String>,
        #[arg(long)]
        s: Option<String>,
        /// Also print a basic open set of the other kind around the word.
        #[arg(long)]
        cover: bool,
    },
    /// L(V, v).
    Ell {
        #[arg(long)]
        word: PathBuf,
        #[arg(long)]
        v: String,
    },
    /// Check a replacement scheme between --a and --b, or apply it to --a at --stage.
    Scheme {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: Option<PathBuf>,
        #[arg(long)]
        v: String,
        #[arg(long)]
        w: String,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long)]
        stage: Option<usize>,
    },
    /// Density construction: W near U with the exponent stream of V.
    Densify {
        #[arg(long)]
        u: PathBuf,
        #[arg(long)]
        v: PathBuf,
        #[arg(long)]
        eps: String,
        /// O(N, r) constraint as N:r; repeatable.
        #[arg(long = "constraint")]
        constraints: Vec<String>,
    },
    /// Level table of the stage-n tower.
    Tower {
        #[arg(long)]
        word: PathBuf,
        #[arg(long)]
        stage: usize,
        #[arg(long)]
        base: Option<String>,
    },
    /// Labels along the orbit of a point.
    Code {
        #[arg(long)]
        word: PathBuf,
        #[arg(long)]
        stage: usize,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value = "0")]
        point: String,
        #[arg(long)]
        base: Option<String>,
    },
    /// Cylinder measures mu and mu_0 of U_{alpha,k}.
    Measure {
        #[arg(long)]
        word: PathBuf,
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        position: i64,
    },
    /// Length-l subwords of v_n.
    Windows {
        #[arg(long)]
        word: PathBuf,
        #[arg(long)]
        length: usize,
        #[arg(long)]
        stage: usize,
    },
    /// Weak-distance bounds between the towers of two base lengths.
    Weakdist {
        #[arg(long)]
        word: PathBuf,
        /// Second word file; defaults to --word.
        #[arg(long)]
        other: Option<PathBuf>,
        #[arg(long)]
        stage: usize,
        #[arg(long)]
        base_a: Option<String>,
        #[arg(long)]
        base_b: Option<String>,
        /// Level indices of the first tower, comma-separated.
        #[arg(long)]
        levels: String,
    },
    /// Partial sums of the summability series.
    Summable {
        #[arg(long)]
        word: PathBuf,
    },
    /// Property suite over the bundled corpus.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(out) => {
            print!("{}", out.render(cli.csv));
            ExitCode::SUCCESS
        }
        Err(failure) => {
            let (out, e) = *failure;
            if let Some(out) = out {
                print!("{}", out.render(cli.csv));
            }
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
