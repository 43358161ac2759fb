//! Strategies and property checks shared by the property and acceptance
//! targets.
#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use theta_forge::formal::{lattice_double_sum_with_margin, literature_expansion_with_margin, LatticeFamily, LiteratureExpansion};
use theta_forge::numeric::{nome, theta_eval, working_prec, HPComplex};
use theta_forge::qseries::{GaussInt, QExp, QSeries, Sign};

pub type Check = Result<(), TestCaseError>;

fn gauss() -> impl Strategy<Value = GaussInt> {
    (-9i64..=9, -9i64..=9).prop_map(|(a, b)| GaussInt::new(a, b))
}

/// Truncated series with exponents that are multiples of `step` units.
pub fn series_on(step: i64) -> impl Strategy<Value = QSeries> {
    (prop::collection::vec((0i64..16, gauss()), 0..10), 4i64..20).prop_map(move |(terms, t)| {
        let terms = terms.into_iter().filter(|(k, _)| *k < t).map(|(k, c)| (QExp::from_units(k * step), c));
        QSeries::from_terms(terms, Some(QExp::from_units(t * step)))
    })
}

pub fn series() -> impl Strategy<Value = QSeries> {
    series_on(1)
}

/// Series with a unit constant term.
pub fn invertible() -> impl Strategy<Value = QSeries> {
    (series_on(3), 0u32..4).prop_map(|(s, k)| {
        let tail = QSeries::from_terms(s.terms().filter(|(e, _)| *e > QExp::ZERO).map(|(e, c)| (e, c.clone())), s.trunc_order());
        &tail + &QSeries::monomial(GaussInt::i_pow(k as i64), QExp::ZERO)
    })
}

/// Equality below the smaller of the two truncation orders.
pub fn same_below(a: &QSeries, b: &QSeries) -> bool {
    match (a.trunc_order(), b.trunc_order()) {
        (Some(x), Some(y)) => {
            let t = x.min(y);
            a.truncate(t) == b.truncate(t)
        }
        (Some(x), None) | (None, Some(x)) => a.truncate(x) == b.truncate(x),
        (None, None) => a == b,
    }
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(TestCaseError::fail(format!($($msg)+)));
        }
    };
}

pub fn ring_axioms(a: &QSeries, b: &QSeries, c: &QSeries) -> Check {
    ensure!(same_below(&(a + b), &(b + a)), "a+b != b+a");
    ensure!(same_below(&(a * b), &(b * a)), "ab != ba");
    ensure!(same_below(&(&(a + b) + c), &(a + &(b + c))), "addition not associative");
    ensure!(same_below(&(&(a * b) * c), &(a * &(b * c))), "multiplication not associative");
    ensure!(same_below(&(a * &(b + c)), &(&(a * b) + &(a * c))), "not distributive");
    ensure!(same_below(&(a * &QSeries::one()), a), "one is not neutral");
    ensure!((a + &(-a)).is_zero(), "a + (-a) != 0");
    Ok(())
}

/// Substitution `q -> ±q^{num/den}` respects sums and products.
pub fn substitution_homomorphism(a: &QSeries, b: &QSeries, minus: bool, num: i64, den: i64) -> Check {
    let sign = if minus { Sign::Minus } else { Sign::Plus };
    let s = |x: &QSeries| x.substitute(sign, num, den).map_err(|e| TestCaseError::fail(e.to_string()));
    ensure!(same_below(&s(&(a * b))?, &(&s(a)? * &s(b)?)), "product not preserved");
    ensure!(same_below(&s(&(a + b))?, &(&s(a)? + &s(b)?)), "sum not preserved");
    Ok(())
}

pub fn invert_twice(a: &QSeries) -> Check {
    let inv = a.invert().map_err(|e| TestCaseError::fail(e.to_string()))?;
    ensure!(same_below(&(a * &inv), &QSeries::one()), "a · a⁻¹ != 1");
    let back = inv.invert().map_err(|e| TestCaseError::fail(e.to_string()))?;
    ensure!(same_below(&back, a) && back.trunc_order() == a.trunc_order(), "(a⁻¹)⁻¹ != a");
    Ok(())
}

pub const NUMERIC_PREC: u32 = 96;

fn close(a: &HPComplex, b: &HPComplex) -> bool {
    let scale = a.log2_abs().max(b.log2_abs());
    (a - b).log2_abs() - scale < -(NUMERIC_PREC as f64) + 24.0
}

/// `θ_j(z+π)`, `θ_j(z+πτ)` and `θ_j(-z)` against `θ_j(z)`.
pub fn quasi_periodicity(j: u8, z: (f64, f64), tau: (f64, f64)) -> Check {
    let w = working_prec(NUMERIC_PREC);
    let z = HPComplex::from_f64(w, z.0, z.1);
    let tau = HPComplex::from_f64(w, tau.0, tau.1);
    let th = |x: &HPComplex| theta_eval(j, x, &tau, NUMERIC_PREC).map_err(|e| TestCaseError::fail(e.to_string()));
    let pi = HPComplex::real(HPComplex::pi(w));
    let f = th(&z)?;
    let odd_or_pi_flip = |k: u8| if k == 1 { -f.clone() } else { f.clone() };
    ensure!(close(&th(&-&z)?, &odd_or_pi_flip(j)), "parity of θ{j}");
    let pi_shift = if j <= 2 { -f.clone() } else { f.clone() };
    ensure!(close(&th(&(&z + &pi))?, &pi_shift), "π shift of θ{j}");
    // θ_j(z + πτ) = ± q^{-1} e^{-2iz} θ_j(z), minus for j = 1, 4
    let m = &nome(&tau).recip() * &z.scale_f64(-2.0).exp_i();
    let m = if j == 1 || j == 4 { -m } else { m };
    ensure!(close(&th(&(&z + &(&pi * &tau)))?, &(&m * &f)), "πτ shift of θ{j}");
    Ok(())
}

#[derive(Clone, Copy, Debug)]
pub enum LatticeSum {
    Family(LatticeFamily),
    Literature(LiteratureExpansion),
}

pub fn lattice_sum() -> impl Strategy<Value = LatticeSum> {
    prop_oneof![
        prop::sample::select(LatticeFamily::ALL.to_vec()).prop_map(LatticeSum::Family),
        prop::sample::select(LiteratureExpansion::ALL.to_vec()).prop_map(LatticeSum::Literature),
    ]
}

/// Scanning a larger box does not change a lattice sum.
pub fn radius_invariance(which: LatticeSum, order: i64, margin: i64) -> Check {
    let order = QExp::int(order);
    let at = |m| match which {
        LatticeSum::Family(f) => lattice_double_sum_with_margin(f, order, m),
        LatticeSum::Literature(l) => literature_expansion_with_margin(l, order, m),
    };
    let (a, b) = match (at(0), at(margin)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return Err(TestCaseError::fail(e.to_string())),
    };
    ensure!(a == b, "{which:?} changes with margin {margin}");
    Ok(())
}

pub fn numeric_args() -> impl Strategy<Value = (u8, (f64, f64), (f64, f64))> {
    (1u8..=4, (-3.0f64..3.0, -1.0f64..1.0), (-0.5f64..0.5, 0.8f64..1.6))
}

pub fn substitution_args() -> impl Strategy<Value = (QSeries, QSeries, bool, i64, i64)> {
    (series_on(12), series_on(12), any::<bool>(), 1i64..5, prop::sample::select(vec![1i64, 2, 3, 4, 6, 12]))
}

fn fmt<T: std::fmt::Debug>(r: Result<(), proptest::test_runner::TestError<T>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

/// Runs of every property suite at `cases` instances each, by name.
pub fn run_all(cases: u32) -> Vec<(&'static str, Result<(), String>)> {
    let cfg = || TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    vec![
        ("ring axioms", fmt(cfg().run(&(series(), series(), series()), |(a, b, c)| ring_axioms(&a, &b, &c)))),
        (
            "substitution homomorphism",
            fmt(cfg().run(&substitution_args(), |(a, b, m, n, d)| substitution_homomorphism(&a, &b, m, n, d))),
        ),
        ("double inversion", fmt(cfg().run(&invertible(), |a| invert_twice(&a)))),
        ("quasi-periodicity and parity", fmt(cfg().run(&numeric_args(), |(j, z, t)| quasi_periodicity(j, z, t)))),
        (
            "lattice radius invariance",
            fmt(cfg().run(&(lattice_sum(), 1i64..40, 1i64..6), |(w, o, m)| radius_invariance(w, o, m))),
        ),
    ]
}
