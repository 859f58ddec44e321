use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use metric_spectra::report::{run, Command, ExperimentConfig};
use metric_spectra::suite::SuiteKind;

/// Eigenvalue bounds, tree partitions and singular-number checks on metric graphs.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a graph file and print its summary.
    Validate,
    /// Discrete eigenvalues with bound margins and Weyl ratios.
    Spectrum,
    /// Eigenvalue bounds and the Laplacian comparison.
    Bounds,
    /// Convergence of the Weyl ratios under mesh refinement.
    Weyl,
    /// Partition of a rooted tree into at most n punctured subtrees.
    Partition,
    /// Step-function approximation bound for random test functions.
    Approx,
    /// Bump-weight search for the first-eigenvalue bound.
    Sharpness,
    /// Singular numbers of the weighted half-inverse Laplacian.
    Snumbers,
    /// Singular numbers of an integral operator.
    Kernel,
    /// Randomized property suite.
    Suite {
        #[arg(value_parser = clap::value_parser!(SuiteKind))]
        name: SuiteKind,
    },
}

#[derive(Args)]
struct Opts {
    /// Graph file (JSON).
    #[arg(long, global = true)]
    graph: Option<PathBuf>,
    /// Weight file replacing the graph's weights.
    #[arg(long, global = true)]
    weight: Option<PathBuf>,
    /// Mesh size.
    #[arg(long, global = true)]
    h: Option<f64>,
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long = "nmax", global = true)]
    n_max: Option<usize>,
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Run only this trial of a suite.
    #[arg(long, global = true)]
    trial: Option<usize>,
    /// Random seed; the METRIC_SPECTRA_SEED variable takes precedence.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Kernel expression in x and y, or a sample file.
    #[arg(long, global = true, allow_hyphen_values = true)]
    kernel: Option<String>,
    /// Assert that the kernel vanishes when x is at the root.
    #[arg(long, global = true)]
    vanishing: bool,
    #[arg(long = "tail-tol", global = true)]
    tail_tol: Option<f64>,
    /// phi_v, phi_l:<l>, measure or mass.
    #[arg(long, global = true)]
    phi: Option<String>,
    #[arg(long, global = true)]
    width: Option<f64>,
    #[arg(long, global = true)]
    length: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = match cli.command {
        Cmd::Validate => Command::Validate,
        Cmd::Spectrum => Command::Spectrum,
        Cmd::Bounds => Command::Bounds,
        Cmd::Weyl => Command::Weyl,
        Cmd::Partition => Command::Partition,
        Cmd::Approx => Command::Approx,
        Cmd::Sharpness => Command::Sharpness,
        Cmd::Snumbers => Command::Snumbers,
        Cmd::Kernel => Command::Kernel,
        Cmd::Suite { name } => Command::Suite(name),
    };
    let o = cli.opts;
    let cfg = ExperimentConfig {
        command,
        graph: o.graph,
        weight: o.weight,
        h: o.h,
        n: o.n,
        n_max: o.n_max,
        trials: o.trials,
        trial: o.trial,
        seed: o.seed,
        out: o.out,
        tol: o.tol,
        kernel: o.kernel,
        vanishing: o.vanishing,
        tail_tol: o.tail_tol,
        phi: o.phi,
        width: o.width,
        length: o.length,
    };
    let outcome = run(&cfg);
    if outcome.status.code() == 2 {
        eprintln!("error: {}", outcome.message);
    } else {
        println!("{}", outcome.message);
        for f in &outcome.files {
            println!("wrote {}", f.display());
        }
    }
    ExitCode::from(outcome.status.code() as u8)
}
