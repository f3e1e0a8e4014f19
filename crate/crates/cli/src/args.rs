//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "qtgrav",
    version,
    about = "Triangulations, quantum dilogarithms and flip intertwiners"
)]
pub struct Cli {
    /// Worker threads for parallel suites.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: u64,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output format; commands without a CSV form reject `csv`.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Triangulation files: summary, flips, exchange matrices, paths.
    #[command(subcommand)]
    Surface(SurfaceCmd),
    /// Quantum dilogarithm kernels.
    #[command(subcommand)]
    Qd(QdCmd),
    /// Heisenberg operator systems.
    #[command(subcommand)]
    Heis(HeisCmd),
    /// Operator-level and exact verification suites.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Mapping class group loops and representation elements.
    #[command(subcommand)]
    Mcg(McgCmd),
}

#[derive(Debug, Subcommand)]
pub enum SurfaceCmd {
    /// Signature, counts, legal flips, valences and automorphisms.
    Info { file: PathBuf },
    /// The triangulation after flipping one arc.
    Flip {
        file: PathBuf,
        /// 1-based arc label.
        #[arg(long)]
        arc: usize,
    },
    /// The exchange matrix ε.
    Eps { file: PathBuf },
    /// A shortest word from one triangulation to another.
    Path {
        from: PathBuf,
        to: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_depth: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum QdFunction {
    /// `F^ℏ_Λ(x, y)`.
    F,
    /// `Φ^ℏ(x + iy)`.
    Phi,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    /// Λ ∈ {−1, 0, 1}.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: i64,
    /// ℏ > 0.
    #[arg(long, default_value_t = 0.7)]
    pub hbar: f64,
}

#[derive(Debug, Subcommand)]
pub enum QdCmd {
    /// One value of `F^ℏ_Λ` or `Φ^ℏ`.
    Eval {
        #[arg(long, value_enum, default_value_t = QdFunction::F)]
        function: QdFunction,
        /// Λ ∈ {−1, 0, 1}; required for `F`.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<i64>,
        #[arg(long, default_value_t = 0.7)]
        hbar: f64,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        y: f64,
    },
    /// `F^ℏ_Λ` on a tensor grid; CSV unless `--format json`.
    Table {
        #[command(flatten)]
        kernel: KernelArgs,
        /// Range `a..b`.
        #[arg(long, allow_hyphen_values = true, default_value = "-3..3")]
        x: String,
        /// Range `a..b`.
        #[arg(long, allow_hyphen_values = true, default_value = "-3..3")]
        y: String,
        /// Points per axis, endpoints included.
        #[arg(long, default_value_t = 21)]
        points: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolutionKind {
    Irreducible,
    Reducible,
}

#[derive(Debug, Subcommand)]
pub enum HeisCmd {
    /// The constrained irreducible operator system.
    Irrep { file: PathBuf },
    /// Heisenberg relations and quantum constraints of a solution.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = SolutionKind::Irreducible)]
        solution: SolutionKind,
    },
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Points per axis, a power of two.
    #[arg(long = "grid")]
    pub n: Option<usize>,
    /// Half-width of the domain.
    #[arg(long = "domain")]
    pub l: Option<f64>,
    /// Residual tolerance.
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum CheckCmd {
    /// The pentagon identity of `Φ^ℏ` on a 1d grid.
    PhiPentagon {
        #[arg(long, default_value_t = 0.7)]
        hbar: f64,
        #[command(flatten)]
        grid: GridArgs,
        /// Run the refinement ladder N = 512, 1024, 2048 instead.
        #[arg(long, conflicts_with_all = ["n", "l"])]
        refine: bool,
    },
    /// The pentagon identity of `F^ℏ_Λ` on a 2d grid.
    FPentagon {
        #[command(flatten)]
        kernel: KernelArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Run the refinement ladder N = 512, 1024, 2048 instead.
        #[arg(long, conflicts_with_all = ["n", "l"])]
        refine: bool,
        /// Budget for the rotation resampling estimate; `inf` disables the guard.
        #[arg(long)]
        resampling_budget: Option<f64>,
    },
    /// Every flip and relabeling relation based at a triangulation.
    Relations {
        file: PathBuf,
        #[command(flatten)]
        kernel: KernelArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Also base relations at triangulations up to this many flips away.
        #[arg(long, default_value_t = 0)]
        radius: usize,
        /// Skip the operator-level pentagon residuals.
        #[arg(long)]
        exact_only: bool,
        /// Negative control: move this automorphism factor (0-based, in
        /// application order) of every pentagon to the wrong arc.
        #[arg(long)]
        corrupt_auto: Option<usize>,
        /// Budget for the rotation resampling estimate; `inf` disables the guard.
        #[arg(long)]
        resampling_budget: Option<f64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum McgCmd {
    /// Checks a loop file and the invariance of ε under its closing relabeling.
    Verify { file: PathBuf },
    /// The representation element of a loop.
    Rho {
        file: PathBuf,
        #[command(flatten)]
        kernel: KernelArgs,
    },
    /// Seeded homomorphism and path-independence suites on a triangulation.
    /// Only exact linear parts are compared, so no kernel is needed.
    Consistency {
        file: PathBuf,
        #[arg(long, default_value_t = 20)]
        pairs: usize,
        #[arg(long, default_value_t = 50)]
        paths: usize,
    },
}
