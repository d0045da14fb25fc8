use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("code of dimension {dimension} exceeds the enumeration limit of {limit}")]
    EnumerationLimit { dimension: usize, limit: usize },

    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error("degenerate lattice: generator matrix is singular")]
    DegenerateLattice,

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("enumeration budget exceeded: estimated {estimated} vectors, budget {budget}")]
    BudgetExceeded { estimated: u128, budget: u128 },

    #[error("vector is not in the lattice")]
    NotInLattice,

    #[error("quotient is not elementary abelian of order 4: {0}")]
    NotKleinQuotient(String),

    #[error("series has zero leading coefficient")]
    ZeroLeadingCoefficient,

    #[error("exponent denominator {needed} exceeds the maximum {max}")]
    DenominatorOverflow { needed: u64, max: u64 },

    #[error("unsupported eta argument {0}: only positive integers and halves are allowed")]
    UnsupportedEtaArgument(String),

    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    #[error("mode {mode} lies outside the field window [{lo}, {hi}]")]
    OutOfWindow { mode: i64, lo: i64, hi: i64 },

    #[error("state degree {degree} exceeds the field cutoff {cutoff}")]
    DegreeCutoff { degree: i64, cutoff: i64 },

    #[error("fields are not local up to order {0}")]
    NotLocal(u32),

    #[error("replicable family is inconsistent: {0}")]
    FamilyInconsistent(String),

    #[error("no twisted-sector component yields a vanishing weight-one space")]
    NoTwistedComponent,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown check: {0}")]
    UnknownCheck(String),

    #[error("bad configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
