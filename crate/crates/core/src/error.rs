use num_bigint::BigInt;
use thiserror::Error;

use crate::qseries::{GaussInt, QExp};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("coefficient of q^{exp} is unknown: series is exact only below q^{trunc}")]
    BeyondTruncation { exp: QExp, trunc: QExp },

    #[error("exponent {num}/{den} is not a multiple of 1/24")]
    OffGrid { num: i64, den: i64 },

    #[error("leading coefficient {0} is not a unit of Z[i]")]
    NonUnitLeading(GaussInt),

    #[error("cannot invert the zero series")]
    ZeroSeries,

    #[error("inverting an exact multi-term series needs a truncation order")]
    Unbounded,

    #[error("q -> -q on q^{0} gives a phase outside Z[i]")]
    NonGaussianPhase(QExp),

    #[error("coefficient at q^{exp} is not divisible by {divisor}")]
    InexactDivision { exp: QExp, divisor: BigInt },

    #[error("theta_{index} derivative of order {order} vanishes identically at z = 0")]
    ParityVanishing { index: u8, order: u32 },

    #[error("non-convergent product: {0}")]
    Divergent(String),

    #[error("Im(tau) must be positive, got {0}")]
    BadTau(f64),

    #[error("|q| must be below 1, got {0}")]
    BadNome(f64),

    #[error("evaluation at a pole: {0}")]
    Pole(String),

    #[error("expected {expected} variables, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
