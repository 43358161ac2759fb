use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::qseries::{GaussInt, QExp, QSeries, Sign};

/// `(a; q^step)_∞` with `a = ±q^start`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PochhammerSpec {
    pub sign: Sign,
    pub start: QExp,
    pub step: QExp,
}

impl PochhammerSpec {
    pub fn new(sign: Sign, start: QExp, step: QExp) -> Self {
        PochhammerSpec { sign, start, step }
    }

    /// `(q^start; q^step)_∞` for integer exponents.
    pub fn plus(start: i64, step: i64) -> Self {
        PochhammerSpec::new(Sign::Plus, QExp::int(start), QExp::int(step))
    }

    /// `(-q^start; q^step)_∞` for integer exponents.
    pub fn minus(start: i64, step: i64) -> Self {
        PochhammerSpec::new(Sign::Minus, QExp::int(start), QExp::int(step))
    }

    fn validate(&self) -> Result<()> {
        if self.step <= QExp::ZERO {
            return Err(Error::Divergent(format!("step q^{} must be positive", self.step)));
        }
        if self.start <= -self.step {
            return Err(Error::Divergent(format!(
                "start q^{} must exceed -step q^{}",
                self.start, self.step
            )));
        }
        Ok(())
    }
}

/// Truncated product `∏_{n≥0} (1 - a q^{n·step})`, exact below `order`.
///
/// Only the first factor can carry a negative exponent, so factors are
/// collected up to `order - min(0, start)`; anything beyond cannot touch a
/// coefficient below `order`.
pub fn pochhammer_series(spec: PochhammerSpec, order: QExp) -> Result<QSeries> {
    spec.validate()?;
    let low = spec.start.units().min(0);
    let cutoff = order.units() - low;
    if order.units() <= low {
        return Ok(QSeries::zero().truncate(order));
    }
    // all exponents that can occur are multiples of g
    let g = spec.start.units().gcd(&spec.step.units()).max(1);
    let base = Integer::div_floor(&low, &g);
    let top = Integer::div_ceil(&order.units(), &g);
    let len = (top - base) as usize;
    let mut acc = vec![BigInt::zero(); len];
    acc[(-base) as usize] = BigInt::from(1);
    // factor (1 - a q^e) = 1 + c q^e
    let c: i64 = match spec.sign {
        Sign::Plus => -1,
        Sign::Minus => 1,
    };
    let mut e = spec.start.units();
    while e < cutoff {
        let shift = e / g;
        if shift == 0 {
            // (1 + c) scales everything
            if c == -1 {
                return Ok(QSeries::zero().truncate(order));
            }
            acc.iter_mut().for_each(|x| *x *= 2);
        } else if shift > 0 {
            let s = shift as usize;
            for i in (s..len).rev() {
                if !acc[i - s].is_zero() {
                    let t = &acc[i - s] * c;
                    acc[i] += t;
                }
            }
        } else {
            let s = (-shift) as usize;
            for i in 0..len.saturating_sub(s) {
                if !acc[i + s].is_zero() {
                    let t = &acc[i + s] * c;
                    acc[i] += t;
                }
            }
        }
        e += spec.step.units();
    }
    let terms = acc
        .into_iter()
        .enumerate()
        .map(|(k, v)| (QExp::from_units((base + k as i64) * g), GaussInt::from(v)));
    Ok(QSeries::from_terms(terms, Some(order)))
}

/// Euler's pentagonal series `Σ (-1)^k q^{k(3k-1)/2}`, exact below `order`.
///
/// Built directly from the exponent pattern, independently of
/// [`pochhammer_series`], so it can serve as the oracle for `(q;q)_∞`.
pub fn pentagonal_series(order: QExp) -> QSeries {
    let mut terms = vec![(QExp::ZERO, GaussInt::one())];
    for k in 1i64.. {
        let sign = GaussInt::from(if k % 2 == 0 { 1 } else { -1 });
        // k(3k-1)/2 < k(3k+1)/2, both increasing in k
        let lo = QExp::int(k * (3 * k - 1) / 2);
        if lo >= order {
            break;
        }
        terms.push((lo, sign.clone()));
        terms.push((QExp::int(k * (3 * k + 1) / 2), sign));
    }
    QSeries::from_terms(terms, Some(order))
}

/// `(q;q)_∞^k`, exact below `order`.
pub fn qq_power(k: u32, order: QExp) -> Result<QSeries> {
    Ok(pochhammer_series(PochhammerSpec::plus(1, 1), order)?.pow(k))
}

/// `η^k = q^{k/24} (q;q)_∞^k`, exact below `order`.
pub fn eta_power_series(k: u32, order: QExp) -> Result<QSeries> {
    let shift = QExp::from_units(k as i64);
    Ok(qq_power(k, order - shift)?.shift(shift))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &QSeries, n: usize) -> Vec<i64> {
        s.int_coeffs(n).unwrap().iter().map(|b| i64::try_from(b).unwrap()).collect()
    }

    #[test]
    fn euler_product_matches_pentagonal() {
        let order = QExp::int(60);
        let prod = pochhammer_series(PochhammerSpec::plus(1, 1), order).unwrap();
        assert_eq!(prod, pentagonal_series(order));
        assert_eq!(ints(&prod, 8), [1, -1, -1, 0, 0, 1, 0, 1]);
    }

    #[test]
    fn theta3_null_product() {
        let order = QExp::int(5);
        let a = pochhammer_series(PochhammerSpec::minus(1, 2), order).unwrap();
        let b = pochhammer_series(PochhammerSpec::plus(2, 2), order).unwrap();
        let t3 = &(&a * &a) * &b;
        assert_eq!(ints(&t3, 5), [1, 2, 0, 0, 2]);
    }

    #[test]
    fn below_first_factor_is_one() {
        let s = pochhammer_series(PochhammerSpec::plus(1, 1), QExp::frac(1, 2).unwrap()).unwrap();
        assert_eq!(s, QSeries::one().truncate(QExp::frac(1, 2).unwrap()));
        let s = pochhammer_series(PochhammerSpec::plus(1, 1), QExp::ZERO).unwrap();
        assert!(s.is_zero());
        assert_eq!(s.trunc_order(), Some(QExp::ZERO));
    }

    #[test]
    fn rejects_non_stabilising() {
        let bad = PochhammerSpec::new(Sign::Plus, QExp::int(1), QExp::ZERO);
        assert!(matches!(pochhammer_series(bad, QExp::int(4)), Err(Error::Divergent(_))));
        let bad = PochhammerSpec::new(Sign::Plus, QExp::int(-4), QExp::int(4));
        assert!(pochhammer_series(bad, QExp::int(4)).is_err());
    }

    #[test]
    fn negative_first_factor() {
        // (-q^{-1}; q^4) = (1 + q^{-1})(1 + q^3)(1 + q^7)...
        let s = pochhammer_series(PochhammerSpec::minus(-1, 4), QExp::int(8)).unwrap();
        let expect = QSeries::from_terms(
            [-1, 0, 2, 3, 6, 7].map(|e| (QExp::int(e), GaussInt::one())),
            Some(QExp::int(8)),
        );
        assert_eq!(s, expect);
    }

    #[test]
    fn eta_squares_and_sixth() {
        let o = QExp::int(12);
        assert_eq!(ints(&qq_power(2, o).unwrap(), 11), [1, -2, -1, 2, 1, 2, -2, 0, -2, -2, 1]);
        let six = qq_power(6, o).unwrap();
        assert_eq!(ints(&six, 2), [1, -6]);
        let eta = eta_power_series(1, QExp::int(3)).unwrap();
        let expect = QSeries::from_terms(
            [(1, 1), (25, -1), (49, -1)].map(|(u, c)| (QExp::from_units(u), GaussInt::from(c))),
            Some(QExp::int(3)),
        );
        assert_eq!(eta, expect);
    }
}
