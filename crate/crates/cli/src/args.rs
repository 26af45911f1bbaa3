use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "pil", version, about = "Primes in logarithmic intervals: constants, optimizers and empirical checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format; inferred from --out's extension when omitted.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Shorthand for --format json.
    #[arg(long, global = true)]
    pub json: bool,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads (PIL_THREADS is used when absent).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a closed-form quantity.
    Constants {
        #[command(subcommand)]
        quantity: Quantity,
    },
    /// Optimize a constant over (ℓ, ω, ν).
    Optimize(OptimizeArgs),
    /// Sieve primes and query counting functions.
    Sieve(SieveArgs),
    /// Run finite-X checks on sieved data.
    Verify(VerifyArgs),
    /// Re-emit a saved JSON report in another format.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Unconditional,
    KTuple,
}

impl From<ModeArg> for pil_core::Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Unconditional => pil_core::Mode::Unconditional,
            ModeArg::KTuple => pil_core::Mode::KTuple,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ContextArgs {
    #[arg(long, value_enum, default_value = "unconditional")]
    pub mode: ModeArg,
    /// Bombieri–Davenport constant (forced to 1 in k-tuple mode).
    #[arg(long = "B", default_value_t = 3.454)]
    pub b: f64,
    #[arg(long)]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Quantity {
    /// P_k(y), or P̃_k(y) with --tilde.
    P {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        y: f64,
        #[arg(long)]
        tilde: bool,
    },
    /// S(k, r).
    Stirling {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
    },
    /// R_{k,ω}(λ) or its k-tuple variant.
    R {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        omega: f64,
        #[arg(long)]
        lambda: f64,
        #[command(flatten)]
        ctx: ContextArgs,
    },
    /// Δ_{ℓ,ω}(λ) or Δ̃_{ℓ,ω}(λ).
    Delta {
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        omega: f64,
        #[arg(long)]
        lambda: f64,
        #[command(flatten)]
        ctx: ContextArgs,
    },
    /// 𝔖(n).
    SingularSeries {
        #[arg(long)]
        n: u64,
        #[arg(long, value_parser = crate::parse::count)]
        cutoff: Option<u64>,
    },
    /// 2c₀ with its truncation bound.
    TwinConstant {
        #[arg(long, value_parser = crate::parse::count)]
        cutoff: Option<u64>,
    },
    /// 𝔖(h₁,…,h_r) for comma-separated offsets.
    SingularTuple {
        #[arg(long, value_delimiter = ',', required = true)]
        offsets: Vec<u64>,
        #[arg(long, value_parser = crate::parse::count)]
        cutoff: Option<u64>,
    },
    /// (λ₁, λ₂) for one parameter triple.
    LambdaInterval(TripleArgs),
    /// The largest admissible λ for one parameter triple.
    LambdaStar(TripleArgs),
    /// c₂ for one parameter triple.
    C2 {
        #[command(flatten)]
        triple: TripleArgs,
        #[arg(long)]
        lambda: f64,
    },
    /// Maximizers (u₁, u₂) for one parameter triple.
    UMax {
        #[command(flatten)]
        triple: TripleArgs,
        #[arg(long)]
        lambda: f64,
    },
    /// I₁, I₂, I₃ and c₃ for one parameter triple.
    C3(TripleArgs),
    /// c₄ and the optimal η at fixed (ℓ, ω).
    C4 {
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        omega: f64,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        alpha: f64,
        #[command(flatten)]
        ctx: ContextArgs,
    },
    /// Right side of the moment bound over primes.
    Thm1 {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        omega: f64,
        #[arg(long)]
        h: f64,
        #[arg(long = "X", alias = "x")]
        x: f64,
        #[arg(long, default_value_t = 0.0)]
        exponent_slack: f64,
        #[command(flatten)]
        ctx: ContextArgs,
    },
    /// Coefficient 1 − λ(B+ε)/2.
    Thm5 {
        #[arg(long)]
        lambda: f64,
        #[command(flatten)]
        ctx: ContextArgs,
    },
    /// Conditional lower bound from c₅, c₆.
    Thm7 {
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        c5: f64,
        #[arg(long)]
        c6: f64,
        /// Defaults to the optimal η.
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long = "X", alias = "x")]
        x: f64,
    },
    /// The Δ = 0 baselines 1 + 1/(2B) and 1 + 1/(12B²).
    Baselines {
        #[arg(long = "B", default_value_t = 3.454)]
        b: f64,
    },
}

#[derive(Debug, Clone, Args)]
pub struct TripleArgs {
    #[arg(long)]
    pub ell: usize,
    #[arg(long)]
    pub omega: f64,
    #[arg(long)]
    pub nu: f64,
    #[command(flatten)]
    pub ctx: ContextArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    C1,
    C2,
    C3,
    C4,
    LambdaStar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OmegaStrategyArg {
    Golden,
    DenseGrid,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(value_enum)]
    pub objective: ObjectiveArg,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// start:end:step, end inclusive.
    #[arg(long, value_parser = crate::parse::sweep, conflicts_with = "lambda")]
    pub lambda_sweep: Option<crate::parse::Sweep>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, value_parser = crate::parse::sweep, conflicts_with = "alpha")]
    pub alpha_sweep: Option<crate::parse::Sweep>,
    #[command(flatten)]
    pub ctx: ContextArgs,
    #[arg(long, default_value_t = 2)]
    pub ell_min: usize,
    #[arg(long, default_value_t = 64)]
    pub ell_max: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub nu_step: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, value_enum, default_value = "golden")]
    pub omega_strategy: OmegaStrategyArg,
}

#[derive(Debug, Args)]
pub struct SieveArgs {
    #[arg(long, value_parser = crate::parse::count)]
    pub limit: u64,
    #[arg(long, value_parser = crate::parse::count)]
    pub segment: Option<u64>,
    /// Load primes from this cache file, creating it if missing.
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Z and Z₁ at these n.
    #[arg(long, value_delimiter = ',')]
    pub twin: Vec<u64>,
    /// ψ at these points.
    #[arg(long, value_delimiter = ',')]
    pub psi: Vec<f64>,
    /// Σ_p (ψ(p+h) − ψ(p))^k at h = --moment-h.
    #[arg(long)]
    pub moment_h: Option<f64>,
    #[arg(long, default_value_t = 2)]
    pub moment_k: u32,
    /// |A|, |A₁|, |B|, |B₁| at K.
    #[arg(long)]
    pub sets: Option<f64>,
    /// Do not require the partner prime of A(K) to be ≤ X.
    #[arg(long)]
    pub uncapped: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckArg {
    All,
    Singseries,
    BdLower,
    BdUpper,
    Z1,
    Thm1,
    Thm2,
    Thm3Thm4,
    Thm5Cor6,
    Proof,
    Telescoping,
    RosserSchoenfeld,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub check: CheckArg,
    #[arg(long, value_parser = crate::parse::count, default_value = "1000000")]
    pub limit: u64,
    #[command(flatten)]
    pub ctx: ContextArgs,
    #[arg(long)]
    pub cache: Option<PathBuf>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long = "T")]
    pub t: Option<u64>,
    #[arg(long)]
    pub n_max: Option<u64>,
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long, value_parser = crate::parse::count)]
    pub x_small: Option<u64>,
    #[arg(long, value_parser = crate::parse::count)]
    pub singseries_limit: Option<u64>,
    #[arg(long)]
    pub singseries_c: Option<f64>,
    #[arg(long, value_parser = crate::parse::count)]
    pub prime_cutoff: Option<u64>,
    #[arg(long)]
    pub uncapped: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub input: PathBuf,
}
