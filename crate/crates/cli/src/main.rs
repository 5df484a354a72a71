use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

/// Quasi-modular forms, polarized Hodge structures and mirror-quintic periods.
#[derive(Parser, Debug)]
#[command(name = "qmf", version, about)]
pub struct Cli {
    /// Seed for randomized verifications.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of random trials for randomized verifications.
    #[arg(long, global = true, default_value_t = 20)]
    pub trials: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Eisenstein series E2, E4, E6 (or the graded g1, g2, g3).
    Eisenstein {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=3))]
        k: u32,
        #[arg(long)]
        terms: usize,
        /// Print g_k = a_k E_{2k} with its (2πi)-grade.
        #[arg(long)]
        graded: bool,
    },
    /// Quasi-modular polynomials in E2, E4, E6.
    #[command(subcommand)]
    Qm(QmCommand),
    /// Hodge-structure predicates and the Gauss–Manin connection.
    #[command(subcommand)]
    Hodge(HodgeCommand),
    /// Membership in the integral and filtration-preserving groups.
    #[command(subcommand)]
    Group(GroupCommand),
    /// Periods of the Weierstrass family and the inverse round trip.
    #[command(subcommand)]
    Elliptic(EllipticCommand),
    /// Riemann relations and the Siegel upper half-space.
    #[command(subcommand)]
    Siegel(SiegelCommand),
    /// Mirror-quintic pipeline.
    #[command(subcommand)]
    Mq(MqCommand),
}

#[derive(Subcommand, Debug)]
pub enum QmCommand {
    /// Apply the Ramanujan derivation, optionally checking it against q d/dq.
    Derive {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        check_terms: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum HodgeCommand {
    /// Check P1, P2, P3 at a point.
    Check {
        #[arg(long)]
        frame: PathBuf,
        /// Lattice basis p in matrix JSON.
        #[arg(long)]
        lattice: PathBuf,
        /// Read the matrix as a period matrix instead of a lattice basis.
        #[arg(long)]
        period: bool,
    },
    /// Connection matrix, transversality and the F/G ODEs along a builtin path.
    Connection {
        /// `builtin:elliptic`, `builtin:weierstrass`, `builtin:tau`, `builtin:tau-curve` or `builtin:siegel2`.
        #[arg(long)]
        path: String,
        /// Point, comma-separated complex literals such as `0.1+2i`.
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        /// Direction, same syntax as `--t`.
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
}

#[derive(Args, Debug)]
pub struct GroupArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    /// Frame JSON; defaults to the standard weight-one frame of matching size.
    #[arg(long)]
    pub frame: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum GroupCommand {
    /// Integral matrices preserving Ψ0.
    Gamma(GroupArgs),
    /// Complex matrices preserving Φ0 and the base filtration.
    G0(GroupArgs),
}

#[derive(Subcommand, Debug)]
pub enum EllipticCommand {
    /// Normalized period matrix of E_t; each parameter is `RE [IM]`.
    Periods {
        #[arg(long, num_args = 1..=2, allow_negative_numbers = true)]
        t1: Vec<f64>,
        #[arg(long, num_args = 1..=2, allow_negative_numbers = true)]
        t2: Vec<f64>,
        #[arg(long, num_args = 1..=2, allow_negative_numbers = true)]
        t3: Vec<f64>,
    },
    /// Eisenstein parameters at τ, their periods, and the j comparison.
    Roundtrip {
        #[arg(long, allow_negative_numbers = true)]
        tau_re: f64,
        #[arg(long)]
        tau_im: f64,
        #[arg(long, default_value_t = 60)]
        terms: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum SiegelCommand {
    /// Riemann relations for blocks x1..x4.
    Check {
        #[arg(long)]
        file: PathBuf,
    },
    /// x1 x3^{-1} and its Siegel-space checks.
    Map {
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum MqCommand {
    /// Instanton numbers n_1..n_D.
    Instantons {
        #[arg(long)]
        degree: usize,
    },
    /// Yukawa coupling in the mirror coordinate.
    Yukawa {
        #[arg(long)]
        terms: usize,
    },
    /// τ1 as a q-series plus its polynomial part.
    Tau1 {
        #[arg(long)]
        terms: usize,
    },
    /// Polarization, connection and transversality identities of the τ-matrix.
    VerifyTau {
        #[arg(long, default_value_t = 10)]
        terms: usize,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("QMF_LOG")).init();
    let cli = Cli::parse();
    log::debug!("{cli:?}");
    ExitCode::from(commands::run(&cli))
}
