use rayon::prelude::*;
use rug::Float;
use serde::Serialize;

use super::sample::{sample_assignments_where, Assignment, SampleDomain};
use crate::error::Result;

/// Bits of slack between the requested precision and the pass threshold.
pub const TOLERANCE_SLACK: i32 = 24;

/// An identity checked at sampled points.
pub trait SampledCase: Sync {
    fn id(&self) -> String;
    /// Human-readable statement of the identity.
    fn formula(&self) -> &'static str;
    fn arity(&self) -> usize;
    fn domain(&self) -> SampleDomain;
    /// Sample points to skip, e.g. near poles.
    fn admissible(&self, _a: &Assignment) -> bool {
        true
    }
    /// `|LHS - RHS|` and the magnitude it is judged against.
    fn residual(&self, a: &Assignment, prec: u32) -> Result<(Float, Float)>;
}

/// `log₂(residual/scale)`, `-∞` when the residual is exactly zero.
pub fn relative_log2(residual: &Float, scale: &Float) -> f64 {
    if residual.is_zero() {
        return f64::NEG_INFINITY;
    }
    let r = residual.clone().log2().to_f64();
    if scale.is_zero() {
        return r;
    }
    r - scale.clone().log2().to_f64()
}

/// Whether a relative residual passes at `prec` bits.
pub fn passes(rel_log2: f64, prec: u32) -> bool {
    rel_log2 < -(prec as f64) + TOLERANCE_SLACK as f64
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleOutcome {
    pub index: usize,
    pub assignment: Assignment,
    /// `log₂(residual/scale)`; `None` when evaluation failed.
    pub rel_log2: Option<f64>,
    pub error: Option<String>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseOutcome {
    pub id: String,
    pub formula: &'static str,
    pub precision: u32,
    pub samples: usize,
    pub failures: usize,
    pub errors: usize,
    /// Worst `log₂(residual/scale)` over all samples.
    pub max_rel_log2: f64,
    pub worst_sample: Option<usize>,
    pub pass: bool,
    #[serde(skip)]
    pub details: Vec<SampleOutcome>,
}

/// Deterministic sample points for `case`.
pub fn case_assignments(case: &dyn SampledCase, seed: u64, count: usize) -> Vec<Assignment> {
    sample_assignments_where(seed, count, case.arity(), &case.domain(), |a| case.admissible(a))
}

/// Evaluate `case` at the given points in parallel; the outcome is ordered
/// by sample index regardless of scheduling.
pub fn verify_case_at(case: &dyn SampledCase, points: &[Assignment], prec: u32) -> CaseOutcome {
    let details: Vec<SampleOutcome> = points
        .par_iter()
        .enumerate()
        .map(|(index, a)| match case.residual(a, prec) {
            Ok((r, s)) => {
                let rel = relative_log2(&r, &s);
                SampleOutcome { index, assignment: a.clone(), rel_log2: Some(rel), error: None, pass: passes(rel, prec) }
            }
            Err(e) => SampleOutcome { index, assignment: a.clone(), rel_log2: None, error: Some(e.to_string()), pass: false },
        })
        .collect();
    let failures = details.iter().filter(|d| !d.pass).count();
    let errors = details.iter().filter(|d| d.error.is_some()).count();
    let (worst_sample, max_rel_log2) = details
        .iter()
        .filter_map(|d| d.rel_log2.map(|r| (d.index, r)))
        .fold((None, f64::NEG_INFINITY), |(wi, wr), (i, r)| if r > wr { (Some(i), r) } else { (wi, wr) });
    CaseOutcome {
        id: case.id(),
        formula: case.formula(),
        precision: prec,
        samples: points.len(),
        failures,
        errors,
        max_rel_log2,
        worst_sample,
        pass: failures == 0,
        details,
    }
}

/// Draw `count` points from `seed` and verify.
pub fn verify_case(case: &dyn SampledCase, seed: u64, count: usize, prec: u32) -> CaseOutcome {
    let pts = case_assignments(case, seed, count);
    verify_case_at(case, &pts, prec)
}

/// Per-case seed derived from a run seed and the case's catalog position.
pub fn case_seed(seed: u64, position: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(position as u64 + 1)
}
