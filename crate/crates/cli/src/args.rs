use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "latcoh", version, about = "Lattice cohomology of plumbing graphs")]
pub struct Cli {
    /// Report format on stdout.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Determinant, definiteness, classes and canonical class.
    Info(GraphArgs),
    /// Full lattice cohomology per class.
    Cohomology {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        class: CharClassArgs,
        #[command(flatten)]
        tower: TowerArgs,
    },
    /// Surgery triple: members, determinants and exactness bookkeeping.
    Surgery {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        vertex: VertexArgs,
        #[command(flatten)]
        tower: TowerArgs,
    },
    /// Relative lattice cohomology of a vertex deletion at `kbar`.
    Relative {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        vertex: VertexArgs,
        /// Characteristic element of the graph, as E*-coefficients "a1,...,as".
        #[arg(long, allow_hyphen_values = true)]
        kbar: String,
        /// Also check the Euler characteristic identities.
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        tower: TowerArgs,
    },
    /// Reduced cohomology vanishing above the number of bad vertices.
    Vanishing {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        tower: TowerArgs,
    },
    /// Coefficients of the one-variable series of a class.
    Series {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        vertex: VertexArgs,
        #[command(flatten)]
        class: DualClassArgs,
        /// Number of coefficients.
        #[arg(long, default_value_t = 20)]
        coeffs: usize,
    },
    /// Periodic constant of the one-variable series of a class.
    Pc {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        vertex: VertexArgs,
        #[command(flatten)]
        class: DualClassArgs,
        /// Periods to fit, "p1,p2,..." (default: the denominator period and its double).
        #[arg(long)]
        periods: Option<String>,
        /// Number of coefficients to expand (default: enough for the periods).
        #[arg(long)]
        coeffs: Option<usize>,
    },
    /// Seiberg-Witten invariants, read off as the Euler characteristic.
    Sw {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        class: CharClassArgs,
        #[command(flatten)]
        tower: TowerArgs,
    },
    /// Chain-level identities on seeded random instances.
    CheckIdentities {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[arg(long, default_value_t = 5)]
        max_vertices: usize,
        #[arg(long, default_value_t = 4)]
        window: i64,
        #[arg(long, default_value_t = 2)]
        u_cutoff: i64,
    },
    /// Counting identity (or, for l'_j0 in [0,1), the periodic identity)
    /// between the series and the relative Euler characteristic.
    IdentityCheck {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        vertex: VertexArgs,
        /// l' as E*-coefficients "a1,...,as".
        #[arg(long, allow_hyphen_values = true)]
        lprime: String,
        /// Lower bound on every a_j (default 2·s·max|e|).
        #[arg(long, allow_hyphen_values = true)]
        threshold: Option<i64>,
        #[command(flatten)]
        tower: TowerArgs,
    },
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Graph file (text format, or JSON with a .json extension).
    #[arg(long)]
    pub graph: PathBuf,
}

#[derive(Debug, Args)]
pub struct VertexArgs {
    /// Vertex id, or its index when no id matches.
    #[arg(long)]
    pub vertex: String,
}

#[derive(Debug, Args)]
pub struct CharClassArgs {
    /// Class id (default: every class).
    #[arg(long, conflicts_with = "rep")]
    pub class: Option<usize>,
    /// Characteristic representative "a1,...,as" selecting the class.
    #[arg(long, allow_hyphen_values = true)]
    pub rep: Option<String>,
}

#[derive(Debug, Args)]
pub struct DualClassArgs {
    /// Class id in L'/L (default: the class of 0).
    #[arg(long, conflicts_with = "lprime")]
    pub class: Option<usize>,
    /// Element of L' "a1,...,as" selecting the class.
    #[arg(long, allow_hyphen_values = true)]
    pub lprime: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormalizationArg {
    Absolute,
    Canonical,
}

#[derive(Debug, Args)]
pub struct TowerArgs {
    /// Weight normalization.
    #[arg(long, value_enum, default_value_t = NormalizationArg::Absolute)]
    pub normalization: NormalizationArg,
    /// Fixed top level, skipping the stabilisation search.
    #[arg(long)]
    pub levels: Option<i64>,
    /// Highest level the stabilisation search may reach.
    #[arg(long, default_value_t = 64)]
    pub max_level: i64,
    /// Point limit for a single sublevel complex.
    #[arg(long, default_value_t = 400_000)]
    pub max_points: usize,
    /// Fixed box radius for indefinite graphs.
    #[arg(long)]
    pub box_radius: Option<i64>,
}
