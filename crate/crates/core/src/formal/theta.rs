use num_bigint::BigInt;
use num_traits::Pow;

use super::pochhammer::{pochhammer_series, PochhammerSpec};
use crate::error::{Error, Result};
use crate::qseries::{GaussInt, QExp, QSeries, Sign, EXP_DENOM};

/// `ϑ_j(tτ)` or one of its `z`-derivatives at `z = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ThetaNullSpec {
    pub index: u8,
    /// Multiplier `t` of τ, a positive multiple of 1/24.
    pub tau_scale: QExp,
    pub derivative: u32,
}

impl ThetaNullSpec {
    pub fn new(index: u8, tau_scale: QExp, derivative: u32) -> Self {
        ThetaNullSpec { index, tau_scale, derivative }
    }

    /// `ϑ_j(tτ)` for integer `t`.
    pub fn value(index: u8, t: i64) -> Self {
        ThetaNullSpec::new(index, QExp::int(t), 0)
    }
}

/// Argument `rπ + sπτ` of `θ_j(· | tτ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RationalThetaArg {
    /// Coefficient of π, a multiple of 1/4.
    pub r: QExp,
    /// Coefficient of πτ, a multiple of 1/4.
    pub s: QExp,
    pub tau_scale: QExp,
}

fn check_index(j: u8) -> Result<()> {
    if (1..=4).contains(&j) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("theta index must be 1..=4, got {j}")))
    }
}

fn check_quarter(name: &str, v: QExp) -> Result<()> {
    if v.units() % (EXP_DENOM / 4) != 0 {
        return Err(Error::InvalidArgument(format!("{name} = {v} must have denominator dividing 4")));
    }
    Ok(())
}

/// Integer range containing every `k` with `a k² + b k + c < bound`, `a > 0`.
pub(crate) fn quadratic_window(a: f64, b: f64, c: f64, bound: f64, margin: i64) -> Option<(i64, i64)> {
    let disc = b * b - 4.0 * a * (c - bound);
    if disc < 0.0 {
        // nothing below the bound; still probe the vertex when a margin is requested
        let v = (-b / (2.0 * a)).round() as i64;
        return (margin > 0).then_some((v - margin, v + margin));
    }
    let r = disc.sqrt();
    let lo = ((-b - r) / (2.0 * a)).floor() as i64 - 1 - margin;
    let hi = ((-b + r) / (2.0 * a)).ceil() as i64 + 1 + margin;
    Some((lo, hi))
}

/// Sum of the defining series of `θ_j(rπ + sπτ | tτ)`, differentiated
/// `deriv` times in `z`, exact below `order`.
///
/// Writing `Q = q^t`, the `k`-th term of θ₁, θ₂ carries `Q^{(k+1/2)²}` and
/// `e^{(2k+1)iz}`; θ₃, θ₄ carry `Q^{k²}` and `e^{2kiz}`. With
/// `z = rπ + sπτ` the exponential becomes `e^{iπ m r} q^{m s}` for the
/// frequency `m`.
fn theta_sum(j: u8, arg: RationalThetaArg, deriv: u32, order: QExp) -> Result<QSeries> {
    check_index(j)?;
    if arg.tau_scale <= QExp::ZERO {
        return Err(Error::InvalidArgument(format!("tau scale {} must be positive", arg.tau_scale)));
    }
    let (t, r, s) = (arg.tau_scale.units(), arg.r.units(), arg.s.units());
    let odd = j <= 2;
    // exponent in 1/24 units as a function of the frequency m:
    //   odd:  t m²/4 + m s      even: t m²/4 + m s   (m = 2k)
    // both read t m²/4 + m s; in k this is t k² + (t + 2s) k + t/4 + s (odd)
    // or 4t k²/4 + 2s k (even)
    let (qa, qb, qc) = if odd {
        (t as f64, (t + 2 * s) as f64, t as f64 / 4.0 + s as f64)
    } else {
        (t as f64, 2.0 * s as f64, 0.0)
    };
    let Some((lo, hi)) = quadratic_window(qa, qb, qc, order.units() as f64, 0) else {
        return Ok(QSeries::zero().truncate(order));
    };
    let mut terms = Vec::new();
    for k in lo..=hi {
        let m = if odd { 2 * k + 1 } else { 2 * k };
        let num = t * m * m + 4 * m * s;
        if num % 4 != 0 {
            return Err(Error::OffGrid { num, den: 4 * EXP_DENOM });
        }
        let units = num / 4;
        if units >= order.units() {
            continue;
        }
        // e^{iπ m r} is a Gaussian unit only when m r is a multiple of 1/2
        if (m * r) % (EXP_DENOM / 2) != 0 {
            return Err(Error::NonGaussianPhase(QExp::from_units(m * r)));
        }
        let mut c = GaussInt::i_pow(m * r / (EXP_DENOM / 2));
        if j == 1 || j == 4 {
            let sign = if k.rem_euclid(2) == 0 { 1 } else { -1 };
            c = c.scale(&BigInt::from(sign));
        }
        if j == 1 {
            c = &c * &GaussInt::new(0, -1);
        }
        if deriv > 0 {
            // d/dz brings down i·m per derivative
            let factor = BigInt::from(m).pow(deriv);
            c = &c.scale(&factor) * &GaussInt::i_pow(deriv as i64);
        }
        terms.push((QExp::from_units(units), c));
    }
    Ok(QSeries::from_terms(terms, Some(order)))
}

/// Series of `ϑ_j^{(d)}(tτ)` from the defining sums.
///
/// θ₁ is odd and θ₂, θ₃, θ₄ are even in `z`, so derivatives of the wrong
/// parity vanish identically; those requests are rejected.
pub fn theta_null_series(spec: ThetaNullSpec, order: QExp) -> Result<QSeries> {
    check_index(spec.index)?;
    if spec.derivative > 4 {
        return Err(Error::InvalidArgument(format!("derivative order {} above 4", spec.derivative)));
    }
    let odd_fn = spec.index == 1;
    if odd_fn != (spec.derivative % 2 == 1) {
        return Err(Error::ParityVanishing { index: spec.index, order: spec.derivative });
    }
    let arg = RationalThetaArg { r: QExp::ZERO, s: QExp::ZERO, tau_scale: spec.tau_scale };
    theta_sum(spec.index, arg, spec.derivative, order)
}

/// Product forms of the theta null values:
/// `ϑ₁' = 2Q^{1/4}(Q²;Q²)³`, `ϑ₂ = 2Q^{1/4}(Q²;Q²)(-Q²;Q²)²`,
/// `ϑ₃ = (Q²;Q²)(-Q;Q²)²`, `ϑ₄ = (Q²;Q²)(Q;Q²)²` with `Q = q^t`.
///
/// Only the value (`derivative = 0`) of ϑ₂, ϑ₃, ϑ₄ and the first derivative
/// of ϑ₁ have a product form.
pub fn theta_null_product(spec: ThetaNullSpec, order: QExp) -> Result<QSeries> {
    check_index(spec.index)?;
    let t = spec.tau_scale;
    if t <= QExp::ZERO {
        return Err(Error::InvalidArgument(format!("tau scale {t} must be positive")));
    }
    let tu = t.units();
    let quarter = QExp::frac(tu, 4 * EXP_DENOM)?;
    let q2 = QExp::from_units(2 * tu);
    let pair = |sign: Sign, start: QExp, ord: QExp| pochhammer_series(PochhammerSpec::new(sign, start, q2), ord);
    match (spec.index, spec.derivative) {
        (1, 1) => {
            let ord = order - quarter;
            let p = pair(Sign::Plus, q2, ord)?;
            Ok(p.pow(3).scale_int(2).shift(quarter))
        }
        (2, 0) => {
            let ord = order - quarter;
            let a = pair(Sign::Plus, q2, ord)?;
            let b = pair(Sign::Minus, q2, ord)?;
            Ok((&a * &b.pow(2)).scale_int(2).shift(quarter))
        }
        (3, 0) | (4, 0) => {
            let sign = if spec.index == 3 { Sign::Minus } else { Sign::Plus };
            let a = pair(Sign::Plus, q2, order)?;
            let b = pair(sign, t, order)?;
            Ok(&a * &b.pow(2))
        }
        (j, d) => Err(Error::InvalidArgument(format!("no product form for theta_{j} derivative {d}"))),
    }
}

/// Exact series of `θ_j(rπ + sπτ | tτ)` with `r`, `s` multiples of 1/4.
pub fn theta_rational_series(j: u8, arg: RationalThetaArg, order: QExp) -> Result<QSeries> {
    check_quarter("r", arg.r)?;
    check_quarter("s", arg.s)?;
    theta_sum(j, arg, 0, order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frac(n: i64, d: i64) -> QExp {
        QExp::frac(n, d).unwrap()
    }

    fn series(terms: &[(QExp, i64)], order: QExp) -> QSeries {
        QSeries::from_terms(terms.iter().map(|(e, c)| (*e, GaussInt::from(*c))), Some(order))
    }

    #[test]
    fn theta3_half_tau() {
        let order = QExp::int(5);
        let s = theta_null_series(ThetaNullSpec::new(3, frac(1, 2), 0), order).unwrap();
        let expect = series(
            &[(QExp::ZERO, 1), (frac(1, 2), 2), (QExp::int(2), 2), (frac(9, 2), 2)],
            order,
        );
        assert_eq!(s, expect);
    }

    #[test]
    fn theta1_prime_sum() {
        let order = QExp::int(13);
        let s = theta_null_series(ThetaNullSpec::new(1, QExp::int(1), 1), order).unwrap();
        let q4 = frac(1, 4);
        let expect = series(
            &[(q4, 2), (q4 + QExp::int(2), -6), (q4 + QExp::int(6), 10), (q4 + QExp::int(12), -14)],
            order,
        );
        assert_eq!(s, expect);
        let p = theta_null_product(ThetaNullSpec::new(1, QExp::int(1), 1), order).unwrap();
        assert_eq!(s, p);
    }

    #[test]
    fn theta3_second_derivative_doubled_tau() {
        let order = QExp::int(9);
        let s = theta_null_series(ThetaNullSpec::new(3, QExp::int(2), 2), order).unwrap();
        assert_eq!(s, series(&[(QExp::int(2), -8), (QExp::int(8), -32)], order));
    }

    #[test]
    fn parity_rejected() {
        for (j, d) in [(1, 0), (1, 2), (2, 1), (3, 1), (4, 3)] {
            let r = theta_null_series(ThetaNullSpec::new(j, QExp::int(1), d), QExp::int(4));
            assert!(matches!(r, Err(Error::ParityVanishing { .. })), "{j} {d}");
        }
    }

    #[test]
    fn sum_and_product_nulls_agree() {
        let order = QExp::int(40);
        for j in 2..=4 {
            for t in [frac(1, 2), QExp::int(1), QExp::int(2), QExp::int(3)] {
                let spec = ThetaNullSpec::new(j, t, 0);
                assert_eq!(
                    theta_null_series(spec, order).unwrap(),
                    theta_null_product(spec, order).unwrap(),
                    "theta_{j}({t} tau)"
                );
            }
        }
    }

    #[test]
    fn theta2_quarter_shift() {
        // θ₂(πτ/2 | 2τ) = q Σ q^{2k²+3k}
        let order = QExp::int(30);
        let arg = RationalThetaArg { r: QExp::ZERO, s: frac(1, 2), tau_scale: QExp::int(2) };
        let s = theta_rational_series(2, arg, order).unwrap();
        let terms: Vec<(QExp, i64)> = (-6i64..6).map(|k| (QExp::int(2 * k * k + 3 * k + 1), 1)).collect();
        assert_eq!(s, series(&terms, order));
    }

    #[test]
    fn theta1_tau_shift_triple() {
        // θ₁(πτ | 3τ) = i q^{-1/4} (q²;q²)_∞
        let order = QExp::int(20);
        let arg = RationalThetaArg { r: QExp::ZERO, s: QExp::int(1), tau_scale: QExp::int(3) };
        let s = theta_rational_series(1, arg, order).unwrap();
        let quarter = frac(-1, 4);
        let p = pochhammer_series(PochhammerSpec::plus(2, 2), order - quarter).unwrap();
        let rhs = p.shift(quarter).scale(&GaussInt::i());
        assert_eq!(s, rhs);
    }

    #[test]
    fn theta1_at_origin_vanishes() {
        let arg = RationalThetaArg { r: QExp::ZERO, s: QExp::ZERO, tau_scale: QExp::int(1) };
        let s = theta_rational_series(1, arg, QExp::int(10)).unwrap();
        assert!(s.is_zero());
    }

    #[test]
    fn quarter_pi_phases() {
        // θ₃(π/4 | τ) = Σ i^k q^{k²}: real parts only, since i^k + i^{-k} = 2 Re i^k
        let arg = RationalThetaArg { r: frac(1, 4), s: QExp::ZERO, tau_scale: QExp::int(1) };
        let s = theta_rational_series(3, arg, QExp::int(10)).unwrap();
        let expect = series(&[(QExp::ZERO, 1), (QExp::int(4), -2)], QExp::int(10));
        assert_eq!(s, expect);
        // θ₁(π/4 | τ) needs eighth roots of unity
        let r = theta_rational_series(1, arg, QExp::int(10));
        assert!(matches!(r, Err(Error::NonGaussianPhase(_))));
    }

    #[test]
    fn rejects_bad_denominators() {
        let arg = RationalThetaArg { r: frac(1, 3), s: QExp::ZERO, tau_scale: QExp::int(1) };
        assert!(theta_rational_series(3, arg, QExp::int(4)).is_err());
        let arg = RationalThetaArg { r: QExp::ZERO, s: frac(1, 8), tau_scale: QExp::int(1) };
        assert!(theta_rational_series(3, arg, QExp::int(4)).is_err());
    }
}
