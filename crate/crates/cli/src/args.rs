use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "coulomb-exterior",
    version,
    about = "Coulomb bound states outside a ball under rotation-invariant boundary conditions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energies and per-level channel diagnostics for k = 1..kmax
    Spectrum(Common),
    /// Radial profiles or |ψ|² slices of one eigenfunction, for plotting
    Eigenfunction {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        opts: EigenfunctionOpts,
    },
    /// Run the seeded invariant suites and print a pass/fail summary
    Verify(Common),
    /// Finite-difference eigenvalues per channel
    Oracle {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        opts: OracleOpts,
    },
    /// Match oracle eigenvalues against the closed-form levels
    Compare {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        opts: OracleOpts,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Nuclear charge number
    #[arg(long = "Z", default_value_t = 1.0)]
    pub z: f64,
    /// Radius of the excluded ball
    #[arg(long, default_value_t = 0.1)]
    pub r0: f64,
    /// Highest principal quantum number
    #[arg(long, default_value_t = 4)]
    pub kmax: u32,
    /// Zonal α coefficients: comma list indexed by l, or @file
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Zonal β coefficients: comma list indexed by l, or @file
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    /// Admissible angular momenta per level
    #[arg(long, value_enum, default_value_t = Policy::Standard)]
    pub lmax_policy: Policy,
    /// Use the radial functions exactly as originally printed
    #[arg(long)]
    pub paper_literal: bool,
    /// Normalize with dr instead of r² dr
    #[arg(long, value_enum, default_value_t = Measure::Volume)]
    pub measure: Measure,
    /// Output format (verify defaults to a text summary)
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed for randomized verification draws
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct EigenfunctionOpts {
    /// Principal quantum number
    #[arg(long)]
    pub k: u32,
    /// What to tabulate
    #[arg(long, value_enum, default_value_t = Table::Radial)]
    pub table: Table,
    /// Replace the boundary data by the data under which E_k is an eigenvalue
    #[arg(long)]
    pub phi_matched: bool,
    /// Number of radii
    #[arg(long, default_value_t = 200)]
    pub rpoints: usize,
    /// Radial extent beyond r0, in units of 1/n
    #[arg(long, default_value_t = 30.0)]
    pub rspan: f64,
    /// Number of polar angles in a density slice
    #[arg(long, default_value_t = 61)]
    pub ntheta: usize,
    /// Azimuth of the density slice
    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,
}

#[derive(Debug, Clone, Args)]
pub struct OracleOpts {
    /// Problem to discretize
    #[arg(long, value_enum, default_value_t = Mode::Exterior)]
    pub mode: Mode,
    /// Truncation radius (default max(150, 40 kmax²/Z))
    #[arg(long)]
    pub rmax: Option<f64>,
    /// Mesh intervals
    #[arg(long, default_value_t = 8000)]
    pub npoints: usize,
    /// Relative matching tolerance
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Policy {
    Standard,
    Paper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Measure {
    Volume,
    Radial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Table {
    Radial,
    Density,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    WholeSpace,
    Exterior,
}
