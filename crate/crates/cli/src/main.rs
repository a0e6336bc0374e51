use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod report;
mod towers;

use report::Report;

#[derive(Parser)]
#[command(name = "procover", version, about = "Coverings of finite graphs and finite towers of coverings")]
struct Cli {
    /// Print the report as a single JSON object
    #[arg(long, global = true)]
    json: bool,

    /// Seed for randomized suites
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Cap on search work for enumerations; exceeding it exits with code 3
    #[arg(long, global = true)]
    max_work: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a graph file for dart-level consistency
    Validate { graph: PathBuf },

    /// Quotient of a graph by a congruence
    Quotient {
        congruence: PathBuf,
        /// Graph the congruence lives on, when the file does not name one
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Write the quotient graph here
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Decide whether a morphism is a covering
    CheckCover { morphism: PathBuf },

    /// Spanning tree and free basis of the fundamental group
    Pi1 {
        graph: PathBuf,
        #[arg(long)]
        base: Option<String>,
    },

    /// The cover of a graph defined by a coset action of its fundamental group
    CoverFromRep {
        graph: PathBuf,
        rep: PathBuf,
        #[arg(long)]
        base: Option<String>,
        /// Write the covering morphism here
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// The subgroup of the base fundamental group carried by a covering
    ImageSubgroup {
        morphism: PathBuf,
        /// Base point in the covering graph
        #[arg(long)]
        base: Option<String>,
    },

    /// Lift a map into the base of a covering through the covering
    Lift {
        /// The map g to lift
        map: PathBuf,
        /// The covering f
        covering: PathBuf,
        /// Base point in the domain of g
        #[arg(long)]
        from: Option<String>,
        /// Base point in the domain of f
        #[arg(long)]
        to: Option<String>,
    },

    /// Deck transformation group of a covering
    Deck { morphism: PathBuf },

    /// Decide whether a covering is regular
    Regular { morphism: PathBuf },

    /// Orbit map of a free group action
    OrbitQuotient {
        action: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Factor a covering through the quotient by a subgroup of its deck group
    DeckQuotient {
        morphism: PathBuf,
        /// Deck element indices generating the subgroup
        #[arg(long, value_delimiter = ',')]
        generators: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Classify a pair of congruences for a morphism
    GoodPair {
        morphism: PathBuf,
        /// Congruence on the domain
        r: PathBuf,
        /// Congruence on the codomain
        s: PathBuf,
    },

    /// Enumerate subgroups of a free group of bounded index
    LowIndex {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        max_degree: usize,
        /// Keep only normal subgroups
        #[arg(long)]
        normal: bool,
        /// List the coset actions
        #[arg(long)]
        list: bool,
    },

    /// Commands on towers of coverings
    Tower {
        #[command(subcommand)]
        command: TowerCommand,
    },

    /// Compare lifting against subgroup containment on random cases
    CheckLifting {
        #[arg(long, default_value_t = 500)]
        cases: usize,
    },
}

#[derive(Subcommand)]
enum TowerCommand {
    /// Check level maps, squares, and the base point thread
    Validate { tower: PathBuf },

    /// Classify the kernel pairs of a level map
    GoodPairs {
        tower: PathBuf,
        /// Level whose map is tested; the top level by default
        #[arg(long)]
        level: Option<usize>,
    },

    /// Deck groups per level and their projections
    Deck { tower: PathBuf },

    /// Build the tower of a chain of normal subgroups
    Universal {
        spec: PathBuf,
        /// Write the tower here
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Check m-triviality of the fundamental groups
    Pi1Trivial {
        tower: PathBuf,
        #[arg(long)]
        bound: usize,
        /// Highest level whose subgroups decide the verdict
        #[arg(long, default_value_t = 0)]
        certify_through: usize,
    },

    /// Fibers over a thread of base vertices
    Fibers {
        tower: PathBuf,
        /// Vertex of the bottom base graph
        #[arg(long)]
        vertex: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = commands::Context {
        seed: cli.seed,
        max_work: cli.max_work,
    };
    let name = command_name(&cli.command);
    let (report, code) = match commands::dispatch(&cli.command, &ctx) {
        Ok(outcome) => (outcome.report, outcome.exit),
        Err(e) => {
            let code = e.exit_code();
            let verdict = if code == report::RESOURCE_GUARD { "resource limit" } else { "input error" };
            (Report::new(&name, verdict).with("error", e.to_string()), code)
        }
    };
    if cli.json {
        println!("{}", report.to_json());
    } else if code >= report::INPUT_ERROR {
        eprint!("{}", report.to_text());
    } else {
        print!("{}", report.to_text());
    }
    ExitCode::from(code)
}

fn command_name(c: &Command) -> String {
    let name = match c {
        Command::Validate { .. } => "validate",
        Command::Quotient { .. } => "quotient",
        Command::CheckCover { .. } => "check-cover",
        Command::Pi1 { .. } => "pi1",
        Command::CoverFromRep { .. } => "cover-from-rep",
        Command::ImageSubgroup { .. } => "image-subgroup",
        Command::Lift { .. } => "lift",
        Command::Deck { .. } => "deck",
        Command::Regular { .. } => "regular",
        Command::OrbitQuotient { .. } => "orbit-quotient",
        Command::DeckQuotient { .. } => "deck-quotient",
        Command::GoodPair { .. } => "good-pair",
        Command::LowIndex { .. } => "low-index",
        Command::CheckLifting { .. } => "check-lifting",
        Command::Tower { command } => {
            return format!(
                "tower {}",
                match command {
                    TowerCommand::Validate { .. } => "validate",
                    TowerCommand::GoodPairs { .. } => "good-pairs",
                    TowerCommand::Deck { .. } => "deck",
                    TowerCommand::Universal { .. } => "universal",
                    TowerCommand::Pi1Trivial { .. } => "pi1-trivial",
                    TowerCommand::Fibers { .. } => "fibers",
                }
            )
        }
    };
    name.to_owned()
}
