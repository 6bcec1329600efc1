mod algebra;
mod error;
mod geometry;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use error::CliError;
use output::Output;

#[derive(Parser)]
#[command(name = "pertinv", version, about = "Tree-indexed perturbative solutions and geometric invariants")]
struct Cli {
    /// Print one key=value pair per line, rationals as p/q.
    #[arg(long, global = true)]
    machine: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Labelled planar rooted trees.
    #[command(subcommand)]
    Trees(algebra::TreesCmd),
    /// Perturbative inversion of equations.
    #[command(subcommand)]
    Solve(algebra::SolveCmd),
    /// On-shell action hierarchy.
    #[command(subcommand)]
    Hierarchy(algebra::HierarchyCmd),
    /// Hodge data and the Laplace- and d-type solvers.
    #[command(subcommand)]
    Hodge(algebra::HodgeCmd),
    /// The discrete BF theory on configurations of points on the line.
    #[command(subcommand)]
    Bf(algebra::BfCmd),
    /// Linking numbers of polygonal links.
    #[command(subcommand)]
    Link(geometry::LinkCmd),
    /// Winding-area invariants of planar curves.
    #[command(subcommand)]
    Planar(geometry::PlanarCmd),
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("PERTINV_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Input(format!("PERTINV_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Input(format!("cannot configure thread pool: {e}")))
}

/// Commands may report partial results before failing; those are printed too.
fn run(command: Command, out: &mut Output) -> Result<(), CliError> {
    configure_threads()?;
    match command {
        Command::Trees(c) => algebra::trees(c, out),
        Command::Solve(c) => algebra::solve(c, out),
        Command::Hierarchy(c) => algebra::hierarchy(c, out),
        Command::Hodge(c) => algebra::hodge(c, out),
        Command::Bf(c) => algebra::bf(c, out),
        Command::Link(c) => geometry::link(c, out),
        Command::Planar(c) => geometry::planar(c, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Output::new(cli.machine);
    let result = run(cli.command, &mut out);
    out.print();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
