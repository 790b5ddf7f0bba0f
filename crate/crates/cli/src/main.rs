mod commands;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exit statuses shared by every subcommand.
pub mod exit {
    pub const OK: u8 = 0;
    pub const NOT_COLORABLE: u8 = 1;
    pub const CLASS_VIOLATION: u8 = 2;
    pub const USAGE: u8 = 3;
}

/// Decide 3-colorability of (2P4, C5)-free graphs.
#[derive(Parser, Debug)]
#[command(name = "hered3", version)]
struct Cli {
    /// Worker threads for fuzzing and exhaustive runs (default: all cores).
    #[arg(long, global = true, env = "HERED3_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide 3-colorability, optionally with a coloring.
    Solve(SolveArgs),
    /// Check membership in the class; report a forbidden induced subgraph.
    CheckClass(InputArgs),
    /// Write a generated graph to stdout.
    Generate(GenerateArgs),
    /// Differential fuzzing against the brute-force oracle.
    Fuzz(FuzzArgs),
    /// Count proper 3-colorings by enumeration.
    CountColorings(InputArgs),
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Input graph; `-` or omitted reads stdin.
    input: Option<PathBuf>,
    /// Input format; guessed from the contents when omitted.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Print a JSON report instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Print a 3-coloring when one exists.
    #[arg(long)]
    witness: bool,
    /// Skip the class check (for inputs known to be in the class).
    #[arg(long)]
    assume_class: bool,
    /// Accepted and ignored: the solver is deterministic.
    #[arg(long)]
    seed_irrelevant: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Dimacs,
    EdgeList,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    ErdosRenyi,
    C7Gadget,
    C9Gadget,
    CographComposite,
    Named,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DirectedArg {
    RiBranch,
    SPair,
    SingleCut,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NamedArg {
    Petersen,
    K4,
    CoC7,
    C5,
    C7,
    C9,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Vertex count (erdos-renyi, cograph-composite).
    #[arg(long)]
    n: Option<usize>,
    /// Vertices beyond the core cycle (gadgets).
    #[arg(long)]
    extra: Option<usize>,
    /// Edge probability.
    #[arg(long, default_value_t = 0.3)]
    p: f64,
    /// Start a C7 gadget from a template aimed at one solver stage.
    #[arg(long, value_enum)]
    directed: Option<DirectedArg>,
    #[arg(long, value_enum)]
    name: Option<NamedArg>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "edge-list")]
    format: FormatArg,
}

#[derive(Args, Debug)]
struct FuzzArgs {
    /// Number of cases, or a time limit such as `30s`.
    #[arg(long, default_value = "1000")]
    budget: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Vertex counts: `8..16`, `8..=16` or `8,10,12`.
    #[arg(long, default_value = "8..=16")]
    sizes: String,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE } else { exit::OK });
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("hered3: cannot set up {n} threads: {e}");
            return ExitCode::from(exit::USAGE);
        }
    }
    let code = match cli.command {
        Command::Solve(a) => commands::solve(&a.input, a.witness, a.assume_class),
        Command::CheckClass(a) => commands::check_class(&a),
        Command::Generate(a) => commands::generate(&a),
        Command::Fuzz(a) => commands::fuzz(&a),
        Command::CountColorings(a) => commands::count_colorings(&a),
    };
    ExitCode::from(code.unwrap_or_else(|e| {
        eprintln!("hered3: {e}");
        exit::USAGE
    }))
}
