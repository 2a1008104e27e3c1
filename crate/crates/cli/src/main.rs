//! `surfcover`: command-line front end for the surfcover library.
//!
//! Exit codes: 0 success, 1 the checked property fails, 2 usage or input
//! error, 3 a search was refused for exceeding its budget.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "surfcover", version, about = "Graph covers, surface embeddings and ply bounds")]
pub struct Cli {
    /// Seed for every randomised step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for the genus and cover searches.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Output {
    /// Write the main artifact here instead of stdout.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a family member, e.g. `omega1:3`.
    Gen {
        family: String,
        #[command(flatten)]
        out: Output,
    },
    /// Minimum Euler genus with a witness embedding.
    Genus {
        graph: PathBuf,
        /// Face-trace budget.
        #[arg(long)]
        budget: Option<u64>,
        /// Enumerate every embedding of each non-planar block.
        #[arg(long)]
        exhaustive: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Planarity test with a Kuratowski certificate.
    Planar { graph: PathBuf },
    /// Check that a cover file is a covering map onto the base.
    VerifyCover {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        cover: PathBuf,
    },
    /// Build the cover derived from a voltage file or a search index.
    MakeCover {
        #[arg(long)]
        base: PathBuf,
        #[arg(long, conflicts_with_all = ["ply", "index"])]
        voltage: Option<PathBuf>,
        #[arg(long, requires = "index")]
        ply: Option<usize>,
        #[arg(long, requires = "ply")]
        index: Option<u64>,
        /// Also write the cover graph in graph format.
        #[arg(long)]
        graph_out: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Orientation double cover of an embedded graph.
    DoubleCover {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        embedding: PathBuf,
        /// Write the lifted embedding here.
        #[arg(long)]
        embedding_out: Option<PathBuf>,
        /// Write the cover graph in graph format.
        #[arg(long)]
        graph_out: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Apply a Y-minor operation to a base graph and lift it to a cover.
    LiftOp {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        cover: PathBuf,
        /// delete-edge E | delete-vertex V | contract E | add-edge V A B
        op: String,
        ids: Vec<u32>,
        /// Write the new base graph here.
        #[arg(long)]
        base_out: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Minor containment with a branch-set witness.
    Minor {
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// A path through k marked vertices or a subtree with k marked leaves.
    TreeLemma {
        tree: PathBuf,
        /// Comma-separated marked vertices.
        #[arg(long, value_delimiter = ',')]
        marked: Vec<u32>,
        #[arg(long)]
        k: usize,
    },
    /// Extract a family minor from disjoint Kuratowski copies.
    Extract {
        #[arg(long)]
        host: PathBuf,
        /// One copy per line, as whitespace-separated vertices.
        #[arg(long)]
        copies: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Reduce a K3,3-based family member to its K5 form with a certificate.
    Reduce {
        family: String,
        #[command(flatten)]
        out: Output,
    },
    /// Ply bound for a family at a given genus.
    Bound {
        #[arg(long)]
        family: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        genus: usize,
    },
    /// Check an embedded cover of a family member against the ply bounds.
    Validate {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        cover: PathBuf,
        #[arg(long)]
        embedding: PathBuf,
        /// Family of the base; read from its `family:` comment if omitted.
        #[arg(long)]
        family: Option<String>,
    },
    /// Exhaustive search over the voltage index space.
    Search {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        ply: usize,
        /// `planar` or `genus<=G`.
        #[arg(long, default_value = "planar")]
        filter: String,
        /// Checkpoint file to resume from and update.
        #[arg(long)]
        resume: Option<PathBuf>,
        /// Index range `lo:hi` for sharding.
        #[arg(long)]
        range: Option<String>,
        /// Stop after this many new indices.
        #[arg(long)]
        stop_after: Option<u64>,
    },
    /// Enumerate small connected graphs embeddable at a genus that cover a listed graph.
    DecideToy {
        #[arg(long)]
        genus: usize,
        /// Concatenated graph file of the graphs to cover.
        #[arg(long)]
        forbidden: PathBuf,
        #[arg(long)]
        max_n: usize,
    },
    /// Graphviz output; with a cover, vertices are coloured by fibre.
    ExportDot {
        graph: PathBuf,
        /// Cover file over `graph`; the cover graph is drawn.
        #[arg(long)]
        cover: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
