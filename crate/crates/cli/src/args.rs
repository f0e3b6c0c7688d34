use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "homforge",
    version,
    about = "Finite hom-associative structures and their deformations"
)]
pub struct Cli {
    /// Worker threads for parallel searches (default: available parallelism).
    #[arg(long, global = true, env = "HOMFORGE_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Report hom-associativity, twisting-map properties and degeneracy of a structure.
    Check(CheckArgs),
    /// Enumerate, count or hunt for structures.
    Search(SearchArgs),
    /// Run an exhaustive verification sweep.
    Verify(VerifyArgs),
    /// Truncated formal deformations over a prime field.
    #[command(subcommand)]
    Deform(DeformCommand),
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// Structure JSON file, or "-" for standard input.
    #[arg(default_value = "-")]
    pub input: PathBuf,
    /// Also search for an associative untwist.
    #[arg(long)]
    pub twist: bool,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(long)]
    pub size: usize,
    /// any, surjective, identity or fixed:A0,A1,...
    #[arg(long, default_value = "any")]
    pub alpha: String,
    #[arg(long, value_enum, default_value_t = DegeneracyArg::Any)]
    pub degeneracy: DegeneracyArg,
    #[arg(long, value_enum, default_value_t = TwistArg::Any)]
    pub twist: TwistArg,
    /// One representative per isomorphism class.
    #[arg(long)]
    pub canonical: bool,
    /// Print only {"count", "constraints"}.
    #[arg(long, conflicts_with = "hunt")]
    pub count: bool,
    /// Print only the first match.
    #[arg(long)]
    pub hunt: bool,
    /// With --hunt, exit 1 when nothing is found.
    #[arg(long, requires = "hunt")]
    pub expect: bool,
    /// Include candidates that are not hom-associative.
    #[arg(long)]
    pub no_hom_assoc: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegeneracyArg {
    Any,
    Strong,
    NotStrong,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwistArg {
    Any,
    Twist,
    NonTwist,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PropArg {
    /// Twist or strongly degenerate.
    #[value(name = "1")]
    Dichotomy,
    /// Bijectivity of the twisting map and the case chains.
    #[value(name = "2")]
    Injectivity,
    /// Context associativity and helper identities.
    #[value(name = "lemma1")]
    Context,
    /// (N, +, x + shift).
    #[value(name = "nat")]
    Successor,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub prop: PropArg,
    #[arg(long, default_value_t = 3)]
    pub max_size: usize,
    #[arg(long, default_value_t = 1000)]
    pub bound: u64,
    /// Twisting map x + shift for --prop nat.
    #[arg(long, default_value_t = 1)]
    pub shift: u64,
}

#[derive(Subcommand, Debug)]
pub enum DeformCommand {
    /// Order-by-order hom-associativity defect of a deformation.
    Check {
        #[arg(default_value = "-")]
        input: PathBuf,
    },
    /// The associative deformation α_t⁻¹∘μ_t.
    Untwist {
        #[arg(default_value = "-")]
        input: PathBuf,
    },
    /// The deformation α_t∘⋆_t of a formal twisting.
    Twist {
        #[arg(default_value = "-")]
        input: PathBuf,
    },
    /// Inverse of a linear series.
    Invert {
        #[arg(default_value = "-")]
        input: PathBuf,
    },
    /// Whether PHI is an equivalence from FIRST to SECOND.
    Equiv {
        #[arg(long)]
        phi: PathBuf,
        first: PathBuf,
        second: PathBuf,
    },
    /// Moves a deformation along a formal isomorphism.
    Transport {
        #[arg(long)]
        phi: PathBuf,
        #[arg(default_value = "-")]
        input: PathBuf,
    },
    /// Moves an associative twisting along an algebra isomorphism.
    Conjugate {
        #[arg(default_value = "-")]
        input: PathBuf,
    },
    /// Checks that the deformed product leaves no element annihilated from both sides.
    Nondeg {
        #[arg(default_value = "-")]
        input: PathBuf,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}
