//! Exact truncated series in `q^(1/24)` with Gaussian-integer coefficients.

mod exponent;
mod gauss;
mod series;

pub use exponent::{QExp, EXP_DENOM};
pub use gauss::GaussInt;
pub use series::{QSeries, Sign};
