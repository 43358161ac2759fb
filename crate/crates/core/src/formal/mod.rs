//! Exact series constructors: q-Pochhammer products, theta values, eta
//! powers and lattice double sums, plus coefficient-identity verdicts.

mod identities;
mod lattice;
mod pochhammer;
mod theta;

pub use identities::{formal_identity_check, FormalIdentity, Verdict};
pub use lattice::{
    lattice_double_sum, lattice_double_sum_with_margin, literature_expansion, literature_expansion_with_margin,
    LatticeFamily, LiteratureExpansion, QuadForm,
};
pub use pochhammer::{eta_power_series, pentagonal_series, pochhammer_series, qq_power, PochhammerSpec};
pub use theta::{theta_null_product, theta_null_series, theta_rational_series, RationalThetaArg, ThetaNullSpec};
