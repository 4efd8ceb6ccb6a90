use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "minlen",
    version,
    about = "Bound states of delta and delta-prime point potentials with a minimal length"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Quadrature tolerance; overrides MINLEN_TOL.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct ProfileArgs {
    /// cutoff | power32 | kempf | custom:b=<b>,expr=<k(y)> | file:<path>
    #[arg(long)]
    pub profile: Option<String>,
    /// Scaled map k(y) for a custom profile.
    #[arg(long = "k-expr", conflicts_with = "profile")]
    pub k_expr: Option<String>,
    /// Momentum bound b that goes with --k-expr.
    #[arg(long, requires = "k_expr")]
    pub b: Option<f64>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct CouplingArgs {
    /// Dimensionless delta-prime strength alpha.
    #[arg(long, allow_hyphen_values = true, required_unless_present = "physical")]
    pub alpha: Option<f64>,
    /// Dimensionless delta strength gamma.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "physical")]
    pub gamma: Option<f64>,
    /// Physical mode: hbar,m,kappa,lambda.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "alpha")]
    pub physical: Option<String>,
    /// Deformation parameter beta; sets b for built-in profiles.
    #[arg(long, requires = "physical")]
    pub beta: Option<f64>,
    /// Momentum bound b in physical mode.
    #[arg(long, requires = "physical", conflicts_with = "beta")]
    pub bound: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig1,
    Fig2,
}

impl Figure {
    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for the bound state; prints JSON.
    Solve {
        #[command(flatten)]
        profile: ProfileArgs,
        #[command(flatten)]
        couplings: CouplingArgs,
        /// Use quadrature even where closed forms exist.
        #[arg(long)]
        quadrature: bool,
    },
    /// eps_star over an alpha grid at fixed gamma; prints CSV `alpha,eps_star`.
    Sweep {
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        gamma: f64,
        #[arg(long)]
        alpha_min: f64,
        #[arg(long)]
        alpha_max: f64,
        #[arg(long)]
        alpha_steps: usize,
        /// Log-spaced grid instead of linear.
        #[arg(long)]
        log: bool,
        #[arg(long)]
        quadrature: bool,
    },
    /// Existence threshold gamma0 = alpha I2(0); prints JSON.
    Threshold {
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        quadrature: bool,
    },
    /// I1, I2 by quadrature; prints CSV `eps,i1,i2,err1,err2`.
    Integrals {
        #[command(flatten)]
        profile: ProfileArgs,
        /// Comma-separated eps values.
        #[arg(long)]
        eps: String,
    },
    /// Closed forms against quadrature for a built-in profile.
    Verify {
        #[arg(long)]
        profile: String,
        #[arg(long)]
        eps: String,
    },
    /// Samples of the normalized eigenfunction; prints CSV `y,density,re,im`.
    Wavefunction {
        #[command(flatten)]
        profile: ProfileArgs,
        #[command(flatten)]
        couplings: CouplingArgs,
        #[arg(long, default_value_t = 201)]
        samples: usize,
        #[arg(long)]
        quadrature: bool,
    },
    /// Energy against geometrically spaced momentum bounds b at fixed physical
    /// couplings; prints CSV `b,gamma,eps_star,energy`.
    LimitSweep {
        /// Defaults to cutoff.
        #[command(flatten)]
        profile: ProfileArgs,
        /// hbar,m,kappa,lambda
        #[arg(long, allow_hyphen_values = true)]
        physical: String,
        #[arg(long)]
        b_min: f64,
        #[arg(long)]
        b_max: f64,
        #[arg(long)]
        steps: usize,
    },
    /// Curve data for the eps_star(alpha) figures, one CSV per (profile, gamma).
    Figure {
        #[arg(value_enum)]
        figure: Figure,
        #[arg(long)]
        out_dir: PathBuf,
        /// Repeatable; defaults to the three built-ins.
        #[arg(long = "profile")]
        profiles: Vec<String>,
        /// Comma-separated gamma values for fig2; defaults to -I2(0)/2, 0, 1.
        #[arg(long, allow_hyphen_values = true)]
        gammas: Option<String>,
        #[arg(long, default_value_t = 0.1)]
        alpha_min: f64,
        #[arg(long, default_value_t = 100.0)]
        alpha_max: f64,
        #[arg(long, default_value_t = 50)]
        alpha_steps: usize,
    },
}
