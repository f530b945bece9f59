mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

/// Clique-width tools for graph classes with forbidden induced subgraphs.
///
/// Graph arguments are a file in `n m` edge-list text or graph6, `-` for stdin, or
/// `pattern:NAME` for a named graph such as `pattern:C7`.
///
/// Exit codes: 0 success, 1 negative verdict, 2 usage or input error, 3 claim violation.
#[derive(Debug, Parser)]
#[command(name = "cwkit", version)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Test a graph for induced copies of forbidden patterns.
    Check {
        /// Comma-separated pattern names.
        #[arg(long, value_delimiter = ',', required = true)]
        free: Vec<String>,
        #[arg(long, default_value_t = 8)]
        cap: usize,
        graph: String,
    },
    /// Build a decomposition tree over a fixed vertex partition.
    Decompose {
        #[arg(long, value_enum, default_value_t = DecomposeMode::Canonical)]
        mode: DecomposeMode,
        /// Part index per vertex; canonical mode defaults to a bipartition.
        #[arg(long, value_delimiter = ',')]
        parts: Option<Vec<usize>>,
        /// Also print the expression read off the tree.
        #[arg(long)]
        expr: bool,
        graph: String,
    },
    /// Build, evaluate or validate clique-width expressions.
    Expr {
        #[command(subcommand)]
        op: ExprOp,
    },
    /// Chromatic number of a graph.
    Colour {
        #[arg(long, value_enum, default_value_t = ColourMethod::Oracle)]
        method: ColourMethod,
        /// Expression file for `--method expression`; without it an exact witness is used.
        #[arg(long)]
        expr: Option<PathBuf>,
        graph: String,
    },
    /// Run a reduction pipeline and emit its certificate.
    #[command(group(ArgGroup::new("pipeline").required(true)))]
    Reduce {
        /// (diamond, P1+2P2)-free graphs.
        #[arg(long, group = "pipeline")]
        diamond: bool,
        /// (K3, C5, S123)-free graphs.
        #[arg(long, group = "pipeline")]
        odd_cycle: bool,
        /// (K3, H)-free graphs; H is one of P1+P5, P1+P2+P3, S122.
        #[arg(long, group = "pipeline", value_name = "H")]
        triangle_free: Option<String>,
        /// Ten-set partition: class per vertex, 0-4 for V_i and 5-9 for W_i.
        #[arg(long, group = "pipeline", value_delimiter = ',', value_name = "CLASSES")]
        ten_set: Option<Vec<usize>>,
        /// Write the certificate here instead of stdout.
        #[arg(long)]
        emit_cert: Option<PathBuf>,
        graph: String,
    },
    /// Replay a certificate against a graph.
    Verify { cert: PathBuf, graph: String },
    /// Clique-width verdict for a pair, or colouring complexity for (diamond, H).
    #[command(group(ArgGroup::new("query").required(true)))]
    Classify {
        #[arg(long, group = "query", num_args = 2, value_names = ["H1", "H2"])]
        pair: Option<Vec<String>>,
        #[arg(long, group = "query", value_name = "H")]
        colouring: Option<String>,
        /// Verdict counts over all pairs of graphs up to this size.
        #[arg(long, group = "query", value_name = "N")]
        scan: Option<usize>,
    },
    /// Count or list small graphs, optionally restricted to a free class.
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        free: Vec<String>,
        /// Count labelled graphs on 0..n instead of isomorphism classes.
        #[arg(long)]
        labelled: bool,
        /// Print each graph in graph6.
        #[arg(long)]
        list: bool,
    },
    /// Generate graphs from a key=value spec.
    Gen {
        /// Spec file; `KEY=VALUE` arguments override its entries.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        pairs: Vec<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ExprOp {
    /// Print an expression for a graph.
    Build {
        #[arg(long, value_enum, default_value_t = BuildMethod::Exact)]
        method: BuildMethod,
        /// Largest width tried by the exact search.
        #[arg(long, default_value_t = 8)]
        max_k: usize,
        graph: String,
    },
    /// Print the graph an expression builds.
    Eval { expr: PathBuf },
    /// Check that an expression builds exactly the given graph.
    Validate { expr: PathBuf, graph: String },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DecomposeMode {
    /// Bipartite graphs with a 2-partition.
    Canonical,
    /// Any number of parts.
    K,
    /// Three parts under the three-part conditions.
    Three,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ColourMethod {
    Oracle,
    Expression,
    /// Through a diamond-pipeline certificate.
    Certificate,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BuildMethod {
    Exact,
    Distinct,
    #[value(name = "max-degree-2")]
    MaxDegree2,
    StarForest,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Text,
    Graph6,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = std::io::stdout().lock();
    let code = match commands::run(&cli.cmd, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    };
    ExitCode::from(code)
}
