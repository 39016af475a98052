mod commands;
mod output;
mod source;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Entanglement entropy and n-tangle of spin-flip group states, with an
/// optional statevector cross-check.
#[derive(Parser, Debug)]
#[command(name = "gstate", version)]
pub struct Cli {
    /// Largest state (in amplitudes) the dense oracle may allocate.
    #[arg(long, global = true, default_value_t = gstate::oracle::DEFAULT_GUARD)]
    pub guard: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Entropy of one state across one bipartition.
    Entropy {
        #[command(flatten)]
        source: SourceArgs,
        /// Side A as 1-based sites, e.g. `1,2,5`.
        #[arg(long)]
        partition: Option<String>,
        /// Also compute the entropy from the explicit statevector.
        #[arg(long)]
        oracle: bool,
    },
    /// Entropy table over all bipartitions (site 1 on side A), or over
    /// rectangles of a torus with `--torus WxH --rects`.
    Sweep {
        #[command(flatten)]
        source: SweepSource,
        /// Largest side A to include.
        #[arg(long)]
        max_size: Option<usize>,
        #[arg(long)]
        rects: bool,
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Closed-form n-tangle (even n only).
    Ntangle {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        oracle: bool,
    },
    /// Entropy of rectangular regions of a star-operator torus.
    Arealaw {
        /// Torus size `WxH`.
        #[arg(long)]
        torus: String,
        /// Region `x,y,w,h` in vertex coordinates (0-based corner).
        #[arg(long, conflicts_with = "sweep")]
        rect: Option<String>,
        /// All rectangles up to half the torus in each direction.
        #[arg(long)]
        sweep: bool,
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Entropy of loop-sector superpositions against the homogeneous state.
    Physcheck {
        #[arg(long)]
        torus: String,
        #[arg(long)]
        rect: String,
        /// Four complex coefficients `re,im;re,im;re,im;re,im` for the
        /// sectors 1, vertical loop, horizontal loop, both.
        #[arg(long, conflicts_with = "random")]
        coeffs: Option<String>,
        /// Number of random coefficient vectors instead.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Property suites comparing every closed form with the oracle.
    Verify {
        #[arg(long, value_enum, default_value_t = verify::Suite::All)]
        suite: verify::Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest system size for random instances.
        #[arg(long, default_value_t = 8)]
        n: usize,
        /// Random instances per suite.
        #[arg(long, default_value_t = 200)]
        count: usize,
        /// Negate one stabilizer generator in the fixtures (negative control).
        #[arg(long)]
        inject_sign_flip: bool,
    },
}

/// At most one source; commands that need one report its absence.
#[derive(Args, Debug, Clone)]
#[group(skip)]
#[command(group(clap::ArgGroup::new("source").multiple(false)))]
pub struct SourceArgs {
    /// GHZ group `<X^{⊗n}>` on n qubits.
    #[arg(long, value_name = "N", group = "source")]
    pub ghz: Option<usize>,
    /// Graph state of a path.
    #[arg(long, value_name = "N", group = "source")]
    pub line: Option<usize>,
    /// Graph state of a cycle.
    #[arg(long, value_name = "N", group = "source")]
    pub ring: Option<usize>,
    /// Graph state of an `RxC` grid.
    #[arg(long, value_name = "RxC", group = "source")]
    pub cluster: Option<String>,
    /// Cyclic shift group `<X^{⊗n}>` on qudits; dimension from `--dim`.
    #[arg(long, value_name = "N", group = "source")]
    pub cyclic: Option<usize>,
    /// Group file (`n=<int> d=<int>` header, one generator per line).
    #[arg(long, value_name = "FILE", group = "source")]
    pub group: Option<PathBuf>,
    /// Graph file (`n=<int>` header, one `u v` edge per line).
    #[arg(long, value_name = "FILE", group = "source")]
    pub graph: Option<PathBuf>,
    /// Weighted G-state JSON file.
    #[arg(long, value_name = "FILE", group = "source")]
    pub weighted: Option<PathBuf>,
    /// Local dimension for `--cyclic`.
    #[arg(long, default_value_t = 2, value_name = "D")]
    pub dim: u32,
}

#[derive(Args, Debug, Clone)]
pub struct SweepSource {
    #[command(flatten)]
    pub state: SourceArgs,
    /// Torus size `WxH`, used with `--rects`.
    #[arg(long)]
    pub torus: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
