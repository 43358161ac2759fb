//! Arbitrary-precision evaluation of theta functions and sampled
//! verification of identities in several complex variables.

mod catalog;
mod hp;
mod sample;
mod theta;
mod verify;

pub use catalog::{
    identity_residual, judge, suite_cases, IdentityCase, NumericIdentity, Suite, ADDITION_TAUS,
};
pub(crate) use catalog::series_sum;
pub use hp::{working_prec, HPComplex, GUARD_BITS};
pub use sample::{distance_to_lattice, sample_assignments, sample_assignments_where, Assignment, SampleDomain};
pub use theta::{
    imaginary_transform_check, log_deriv_series_eval, nome, pochhammer_eval, reduce_argument, theta_deriv_eval,
    theta_eval, theta_null, theta_product_eval, LogDeriv, Reduction, ThetaPoint, Transform,
};
pub use verify::{
    case_assignments, case_seed, passes, relative_log2, verify_case, verify_case_at, CaseOutcome, SampleOutcome,
    SampledCase, TOLERANCE_SLACK,
};
