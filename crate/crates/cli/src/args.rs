use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug, Clone)]
#[command(
    name = "eqper",
    version,
    about = "Equivariant periodicity queries over representation rings of finite groups"
)]
pub struct Cli {
    /// builtin:NAME, file:PATH or an inline JSON group spec
    #[arg(long, global = true)]
    pub group: Option<String>,

    /// JSON object of label aliases, e.g. {"sigma": "chi1"}
    #[arg(long, global = true)]
    pub names: Option<PathBuf>,

    /// Character table document to load instead of computing one
    #[arg(long, global = true)]
    pub table: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// JSON array of argument lists, run concurrently and reported in order
    #[arg(long)]
    pub batch: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct LambdaArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: String,

    #[arg(long, default_value_t = 1)]
    pub power: u32,

    /// Read lambda as a real representation (its complexification must be
    /// given); only even powers are accepted
    #[arg(long)]
    pub lambda_real: bool,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Print the character table
    Chartab,
    /// Euler class power e_lambda^m and the quotient RU(G)/(e_lambda^m)
    Euler(LambdaArgs),
    /// Adams operation psi^k
    Adams {
        #[arg(long, allow_hyphen_values = true)]
        rep: String,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
    },
    /// Exterior power Lambda^i of an honest representation
    Exterior {
        #[arg(long, allow_hyphen_values = true)]
        rep: String,
        #[arg(long)]
        i: usize,
    },
    /// Tensor product of two virtual representations
    Tensor {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Matrix of multiplication by a virtual representation
    Mult {
        #[arg(long, allow_hyphen_values = true)]
        rep: String,
    },
    /// Rank of pi_{V-W} of equivariant K-theory
    Rank {
        #[arg(long, allow_hyphen_values = true)]
        alpha_plus: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        alpha_minus: String,
        /// Treat V and W as complex representations
        #[arg(long)]
        complex: bool,
    },
    /// Order of alpha in RU(G)/(e_lambda^m)
    Order {
        #[command(flatten)]
        lambda: LambdaArgs,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },
    /// J'-order of a real alpha, at a point or over C(a_lambda^m)
    Jorder {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long, default_value_t = 1)]
        power: u32,
        #[arg(long)]
        lambda_real: bool,
        /// Restrict Adams indices to odd k (default: off at a point, on
        /// over a sphere quotient)
        #[arg(long, num_args = 0..=1, default_missing_value = "true")]
        odd_only: Option<bool>,
    },
    /// Existence predicate for t_alpha-elements or J-periodicities
    Predicate {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, value_enum, default_value_t = PredicateKind::Talpha)]
        kind: PredicateKind,
    },
    /// The families F(alpha) and F[alpha]
    Families {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },
    /// Bundled existence and order certificate
    Certify {
        #[command(flatten)]
        lambda: LambdaArgs,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, default_value = "K")]
        flavor: String,
        #[arg(long, num_args = 0..=1, default_missing_value = "true", default_value = "true")]
        odd_only: bool,
    },
    /// Factor the multiplication matrix of a class through its image
    Factor {
        /// Factor multiplication by this class
        #[arg(long, allow_hyphen_values = true, required_unless_present = "euler_of")]
        rep: Option<String>,
        /// Factor multiplication by the Euler class of this representation
        #[arg(long, allow_hyphen_values = true, conflicts_with = "rep")]
        euler_of: Option<String>,
        #[arg(long)]
        expected_rank: Option<usize>,
    },
    /// Annihilator of e_lambda in RU(G)
    Annihilator {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// gamma(m) = #{0 < k <= m : k = 0, 1, 2, 4 mod 8}
    Gamma { m: u64 },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredicateKind {
    Talpha,
    Jper,
}
