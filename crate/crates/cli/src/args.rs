use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "finram", version, about = "Exact searches and certified witnesses for finite Ramsey statements")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// `builtin:<name>`, `table:<file>` or `exec:<cmd>`.
    #[arg(long, global = true)]
    pub coloring: Option<String>,
    /// Number of colors.
    #[arg(long, global = true)]
    pub colors: Option<u8>,
    /// Search-node limit; also bounds re-verification
    #[arg(long, global = true)]
    pub budget_nodes: Option<u64>,
    /// Wall-clock limit for searches
    #[arg(long, global = true)]
    pub budget_seconds: Option<f64>,
    /// Worker threads; 0 means all hardware threads.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    /// Directory of the exact-value cache.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Write the result document here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List elements, block sequences or types in canonical order.
    Enumerate {
        #[command(subcommand)]
        what: EnumerateWhat,
    },
    /// Elements of a span, one per line.
    Span {
        /// Block sequence, e.g. `1:3:[1,0,0];1:3:[0,1,1]`.
        sequence: String,
        /// `full`, `zero-one` or `neighbours:<l_1>,...,<l_k>`.
        #[arg(long, default_value = "full")]
        selector: String,
        /// Use the combined span down to this level instead of a selector.
        #[arg(long)]
        combined: Option<u8>,
        /// Tuple length of the span members.
        #[arg(long, default_value_t = 1)]
        dim: usize,
    },
    /// Types of elements and tuples.
    Type {
        #[command(subcommand)]
        what: TypeWhat,
    },
    /// Exact verifiers and minimal numbers.
    Search {
        #[command(subcommand)]
        what: SearchWhat,
    },
    /// Experimental probes.
    Probe {
        #[command(subcommand)]
        what: ProbeWhat,
    },
    /// Witness extraction through the pyramid recursion.
    Pipeline {
        #[command(subcommand)]
        what: PipelineWhat,
    },
    /// Ordered fans and their epimorphisms.
    Fans {
        #[command(subcommand)]
        what: FansWhat,
    },
    /// Upper-bound expressions and their evaluation.
    Bounds {
        #[command(subcommand)]
        what: BoundsWhat,
    },
    /// Re-check a certificate file independently of the search code.
    Verify { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum EnumerateWhat {
    Elements {
        level: u8,
        width: usize,
        /// Only elements attaining the level.
        #[arg(long)]
        attain: bool,
    },
    Blocks { level: u8, width: usize, len: usize },
    Types {
        level: u8,
        max_len: usize,
        #[arg(long, default_value_t = 1)]
        dim: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum TypeWhat {
    /// Type and underlying block sequence of an element or tuple.
    Of { object: String },
    /// Number of tuple types.
    Count { level: u8, max_len: usize, dim: usize },
    /// Image of a block sequence under a type.
    Apply { phi: String, sequence: String },
}

/// `--at n` checks one size; without it the least size is searched.
#[derive(Debug, Args)]
pub struct At {
    #[arg(long)]
    pub at: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum SearchWhat {
    MinGowers {
        k: u8,
        l: u8,
        m: usize,
        d: usize,
        #[command(flatten)]
        at: At,
    },
    MinMt {
        d: usize,
        m: usize,
        #[command(flatten)]
        at: At,
    },
    MinRamsey {
        k: usize,
        l: usize,
        #[command(flatten)]
        at: At,
    },
    TypeHom {
        k: u8,
        m: usize,
        d: usize,
        #[command(flatten)]
        at: At,
    },
    SizeInsens {
        /// `k_1,...,k_m`.
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<usize>,
        /// `l_1,...,l_m`.
        #[arg(long, value_delimiter = ',', required = true)]
        l: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[command(flatten)]
        at: At,
    },
}

#[derive(Debug, Subcommand)]
pub enum ProbeWhat {
    Neighbour {
        /// `l_1,...,l_k` with `l_j < j`.
        #[arg(long, value_delimiter = ',', required = true)]
        shifts: Vec<u8>,
        m: usize,
        #[arg(long)]
        at: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum PipelineWhat {
    Extract {
        k: u8,
        l: u8,
        m: usize,
        d: usize,
        /// `search` or `proof-bounds`.
        #[arg(long, default_value = "search")]
        mode: String,
        #[arg(long)]
        max_width: Option<usize>,
        /// Exact-value table for proof-bounds mode.
        #[arg(long)]
        table: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum FansWhat {
    /// Epimorphisms from `source` onto `target` (fans written `h:w`).
    Epis {
        source: String,
        target: String,
        /// Filter all vertex maps instead of the structured enumeration.
        #[arg(long)]
        naive: bool,
    },
    /// Amalgamate two epimorphisms with a common target.
    Amalgamate { phi1: String, phi2: String },
    /// A fan projecting onto both arguments.
    Jpp { a: String, b: String },
    /// Block-sequence code of an epimorphism.
    Encode { map: String },
    /// Does every coloring of the copies of `s` in `u` have a monochromatic copy of `t`?
    RamseyPair { s: String, t: String, u: String },
    /// Least `u` making `(s, t)` Ramsey.
    MinWitness { s: String, t: String },
}

#[derive(Debug, Subcommand)]
pub enum BoundsWhat {
    G { d: usize, k: usize, l: usize, m: usize, r: usize, #[command(flatten)] table: TableArg },
    T { d: usize, k: usize, m: usize, r: usize, #[command(flatten)] table: TableArg },
    S {
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        l: Vec<usize>,
        r: usize,
        #[command(flatten)]
        table: TableArg,
    },
    Sd {
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        l: Vec<usize>,
        d: usize,
        r: usize,
        #[command(flatten)]
        table: TableArg,
    },
    /// Evaluate an expression in printed form.
    Eval { expr: String, #[command(flatten)] table: TableArg },
}

#[derive(Debug, Args)]
pub struct TableArg {
    /// JSON table of exact values, merged with the cache.
    #[arg(long)]
    pub table: Option<PathBuf>,
}
