use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

use gamma_lab::{EnumConfig, Kind, OrderMode};

#[derive(Debug, Parser)]
#[command(
    name = "gamma-lab",
    version,
    about = "Filters, congruences and claim search for finite ordered Γ-semigroups"
)]
struct Cli {
    /// Emit a machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the order axioms, compatibility and associativity.
    Validate { file: PathBuf },
    /// Band, commutativity, semilattice and order/absorption laws.
    Profile { file: PathBuf },
    /// Principal filters, up-sets and the full filter list.
    Filters {
        file: PathBuf,
        /// Restrict the N(a) / [a) report to one element.
        #[arg(long)]
        element: Option<usize>,
    },
    /// The relation N, its classes and the class order.
    Nrel { file: PathBuf },
    /// Every semilattice congruence, and the smallest ones.
    Congruences { file: PathBuf },
    /// The quotient by a partition (default: N).
    Quotient {
        file: PathBuf,
        /// Class labels per element, comma separated, e.g. `0,1,1`.
        #[arg(long, value_delimiter = ',')]
        partition: Option<Vec<usize>>,
        /// Also report the set of classes above the class of this element.
        #[arg(long)]
        element: Option<usize>,
    },
    /// Check catalogued claims on one structure.
    Claims {
        file: PathBuf,
        /// Only this claim (default: all).
        #[arg(long)]
        claim: Option<String>,
    },
    /// Search a corpus for counterexamples to one claim.
    Search {
        #[arg(long)]
        claim: String,
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Keep at most this many counterexamples in the report.
        #[arg(long, default_value_t = 10)]
        limit: usize,
    },
    /// Write structures in .pgs format.
    Gen {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Write one file per structure into this directory instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The Hasse diagram of the order in DOT format.
    Hasse { file: PathBuf },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Orders {
    All,
    Discrete,
}

#[derive(Debug, Args)]
struct CorpusArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    g: usize,
    /// Every structure with at most n elements and g labels.
    #[arg(long, conflicts_with = "samples")]
    exhaustive: bool,
    /// Number of seeded random structures with exactly n elements and g labels.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Orders::All)]
    orders: Orders,
    /// Keep isomorphic copies.
    #[arg(long)]
    no_dedup: bool,
    /// Drop associativity.
    #[arg(long)]
    groupoid: bool,
}

impl CorpusArgs {
    fn corpus(&self) -> gamma_lab::Corpus {
        let cfg = EnumConfig {
            n: self.n,
            g: self.g,
            order_mode: match self.orders {
                Orders::All => OrderMode::AllCompatible,
                Orders::Discrete => OrderMode::DiscreteOnly,
            },
            iso_dedup: !self.no_dedup,
            kind: if self.groupoid { Kind::Groupoid } else { Kind::Semigroup },
        };
        match (self.exhaustive, self.samples) {
            (false, Some(count)) => gamma_lab::Corpus::Random {
                cfg,
                count,
                seed: self.seed,
            },
            (true, _) => gamma_lab::Corpus::Exhaustive { cfg, cumulative: true },
            (false, None) => gamma_lab::Corpus::Exhaustive { cfg, cumulative: false },
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.command, cli.json) {
        Ok(status) => status.into(),
        Err(e) => {
            eprintln!("error: {e:#}");
            commands::Status::Usage.into()
        }
    }
}
