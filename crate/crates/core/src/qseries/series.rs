use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;

use super::{GaussInt, QExp, EXP_DENOM};
use crate::error::{Error, Result};

/// Dense accumulators are used for products whose exponent span (in 1/24
/// steps) stays below this size.
const DENSE_LIMIT: i64 = 1 << 22;

/// Sign of the variable in a substitution `q -> ±q^scale`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

/// Truncated formal series in `q^(1/24)` over the Gaussian integers.
///
/// Coefficients are exact for every exponent strictly below the truncation
/// order; `None` marks an exact (finite) series with no unknown tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    coeffs: BTreeMap<QExp, GaussInt>,
    trunc: Option<QExp>,
}

fn min_opt(a: Option<QExp>, b: Option<QExp>) -> Option<QExp> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl QSeries {
    /// The exact zero series.
    pub fn zero() -> Self {
        QSeries { coeffs: BTreeMap::new(), trunc: None }
    }

    pub fn one() -> Self {
        QSeries::monomial(GaussInt::one(), QExp::ZERO)
    }

    /// Exact single term `c q^e`.
    pub fn monomial(c: GaussInt, e: QExp) -> Self {
        QSeries::from_terms([(e, c)], None)
    }

    /// Sums the given terms, dropping zeros and anything at or beyond `trunc`.
    pub fn from_terms<I>(terms: I, trunc: Option<QExp>) -> Self
    where
        I: IntoIterator<Item = (QExp, GaussInt)>,
    {
        let mut coeffs: BTreeMap<QExp, GaussInt> = BTreeMap::new();
        for (e, c) in terms {
            if trunc.is_some_and(|t| e >= t) || c.is_zero() {
                continue;
            }
            *coeffs.entry(e).or_default() += &c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        QSeries { coeffs, trunc }
    }

    /// Exact polynomial in integer powers of `q` from a coefficient list.
    pub fn from_int_coeffs(cs: &[i64]) -> Self {
        QSeries::from_terms(
            cs.iter().enumerate().map(|(k, &c)| (QExp::int(k as i64), GaussInt::from(c))),
            None,
        )
    }

    pub fn trunc_order(&self) -> Option<QExp> {
        self.trunc
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    /// No stored coefficients (the series is zero below its truncation order).
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Least stored exponent.
    pub fn min_exp(&self) -> Option<QExp> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<QExp> {
        self.coeffs.keys().next_back().copied()
    }

    /// Stored terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (QExp, &GaussInt)> + '_ {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    /// Coefficient of `q^e`; an error when `e` is at or past the truncation order.
    pub fn coeff(&self, e: QExp) -> Result<GaussInt> {
        if let Some(t) = self.trunc {
            if e >= t {
                return Err(Error::BeyondTruncation { exp: e, trunc: t });
            }
        }
        Ok(self.coeffs.get(&e).cloned().unwrap_or_default())
    }

    /// Integer-exponent coefficient as a plain integer; errors on a
    /// non-real coefficient or an unknown one.
    pub fn int_coeff(&self, n: i64) -> Result<BigInt> {
        let c = self.coeff(QExp::int(n))?;
        if !c.is_real() {
            return Err(Error::InvalidArgument(format!("coefficient of q^{n} is not real: {c}")));
        }
        Ok(c.re)
    }

    /// Restrict to exponents below `order` (keeps the tighter of the two bounds).
    pub fn truncate(&self, order: QExp) -> Self {
        let trunc = min_opt(self.trunc, Some(order));
        let coeffs = self.coeffs.range(..trunc.unwrap()).map(|(e, c)| (*e, c.clone())).collect();
        QSeries { coeffs, trunc }
    }

    pub fn scale(&self, k: &GaussInt) -> Self {
        if k.is_zero() {
            return QSeries { coeffs: BTreeMap::new(), trunc: self.trunc };
        }
        let coeffs = self.coeffs.iter().map(|(e, c)| (*e, c * k)).collect();
        QSeries { coeffs, trunc: self.trunc }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&GaussInt::from(k))
    }

    /// Multiply by `q^e`.
    pub fn shift(&self, e: QExp) -> Self {
        let coeffs = self.coeffs.iter().map(|(x, c)| (*x + e, c.clone())).collect();
        QSeries { coeffs, trunc: self.trunc.map(|t| t + e) }
    }

    /// Divide every coefficient by `d`, failing if any division is inexact.
    pub fn div_exact(&self, d: i64) -> Result<Self> {
        let d = BigInt::from(d);
        let mut coeffs = BTreeMap::new();
        for (e, c) in &self.coeffs {
            let q = c.div_exact(&d).ok_or(Error::InexactDivision { exp: *e, divisor: d.clone() })?;
            coeffs.insert(*e, q);
        }
        Ok(QSeries { coeffs, trunc: self.trunc })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = QSeries::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Truncation order of a product, or `None` when both factors are exact.
    fn product_trunc(a: &QSeries, b: &QSeries) -> Option<QExp> {
        let amin = a.min_exp().unwrap_or(QExp::ZERO);
        let bmin = b.min_exp().unwrap_or(QExp::ZERO);
        min_opt(b.trunc.map(|t| amin + t), a.trunc.map(|t| bmin + t))
    }

    fn mul_impl(a: &QSeries, b: &QSeries) -> QSeries {
        if (a.is_exact() && a.is_zero()) || (b.is_exact() && b.is_zero()) {
            return QSeries::zero();
        }
        let trunc = Self::product_trunc(a, b);
        let (Some(amin), Some(bmin)) = (a.min_exp(), b.min_exp()) else {
            return QSeries { coeffs: BTreeMap::new(), trunc };
        };
        let base = (amin + bmin).units();
        let top = match trunc {
            Some(t) => t.units(),
            None => (a.max_exp().unwrap() + b.max_exp().unwrap()).units() + 1,
        };
        if top <= base {
            return QSeries { coeffs: BTreeMap::new(), trunc };
        }
        let bterms: Vec<(i64, &GaussInt)> = b.coeffs.iter().map(|(e, c)| (e.units(), c)).collect();
        if top - base <= DENSE_LIMIT {
            let mut acc = vec![GaussInt::zero(); (top - base) as usize];
            for (ea, ca) in &a.coeffs {
                let ea = ea.units();
                if ea + bmin.units() >= top {
                    break;
                }
                for &(eb, cb) in &bterms {
                    let e = ea + eb;
                    if e >= top {
                        break;
                    }
                    acc[(e - base) as usize].add_product(ca, cb);
                }
            }
            let coeffs = acc
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (QExp::from_units(base + k as i64), c))
                .collect();
            QSeries { coeffs, trunc }
        } else {
            let mut coeffs: BTreeMap<QExp, GaussInt> = BTreeMap::new();
            for (ea, ca) in &a.coeffs {
                for &(eb, cb) in &bterms {
                    let e = ea.units() + eb;
                    if e >= top {
                        break;
                    }
                    coeffs.entry(QExp::from_units(e)).or_default().add_product(ca, cb);
                }
            }
            coeffs.retain(|_, c| !c.is_zero());
            QSeries { coeffs, trunc }
        }
    }

    fn add_impl(a: &QSeries, b: &QSeries, negate_b: bool) -> QSeries {
        let trunc = min_opt(a.trunc, b.trunc);
        let mut coeffs: BTreeMap<QExp, GaussInt> = BTreeMap::new();
        let below = |e: &QExp| trunc.is_none_or(|t| *e < t);
        for (e, c) in a.coeffs.iter().filter(|(e, _)| below(e)) {
            coeffs.insert(*e, c.clone());
        }
        for (e, c) in b.coeffs.iter().filter(|(e, _)| below(e)) {
            let slot = coeffs.entry(*e).or_default();
            if negate_b {
                *slot -= c;
            } else {
                *slot += c;
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        QSeries { coeffs, trunc }
    }

    /// Apply `q -> sign * q^(num/den)` to every term.
    ///
    /// Under `q -> -q` a term `c q^e` picks up the phase `exp(i*pi*e)`, which
    /// is a Gaussian unit only when `e` is a multiple of 1/2.
    pub fn substitute(&self, sign: Sign, num: i64, den: i64) -> Result<Self> {
        if num <= 0 || den <= 0 {
            return Err(Error::InvalidArgument(format!("substitution scale {num}/{den} must be positive")));
        }
        let g = num.gcd(&den);
        let (num, den) = (num / g, den / g);
        if EXP_DENOM % den != 0 {
            return Err(Error::InvalidArgument(format!("substitution scale {num}/{den}: denominator must divide 24")));
        }
        let mut coeffs = BTreeMap::new();
        for (e, c) in &self.coeffs {
            let scaled = e.units() * num;
            if scaled % den != 0 {
                return Err(Error::OffGrid { num: scaled, den: den * EXP_DENOM });
            }
            let c = match sign {
                Sign::Plus => c.clone(),
                Sign::Minus => {
                    if e.units() % (EXP_DENOM / 2) != 0 {
                        return Err(Error::NonGaussianPhase(*e));
                    }
                    &GaussInt::i_pow(e.units() / (EXP_DENOM / 2)) * c
                }
            };
            coeffs.insert(QExp::from_units(scaled / den), c);
        }
        Ok(QSeries { coeffs, trunc: self.trunc.map(|t| t.scale_ceil(num, den)) })
    }

    /// Multiplicative inverse below the truncation order.
    ///
    /// The leading coefficient must be a unit of ℤ[i]. An exact input must be
    /// a single monomial; anything else needs a truncation order first.
    pub fn invert(&self) -> Result<Self> {
        let Some((&lead_e, lead_c)) = self.coeffs.iter().next() else {
            return Err(Error::ZeroSeries);
        };
        let unit_inv = lead_c.unit_inverse().ok_or_else(|| Error::NonUnitLeading(lead_c.clone()))?;
        let Some(trunc) = self.trunc else {
            if self.coeffs.len() == 1 {
                return Ok(QSeries::monomial(unit_inv, -lead_e));
            }
            return Err(Error::Unbounded);
        };
        let n = (trunc - lead_e).units() as usize;
        let rest: Vec<(usize, &GaussInt)> = self
            .coeffs
            .iter()
            .skip(1)
            .map(|(e, c)| ((*e - lead_e).units() as usize, c))
            .take_while(|(j, _)| *j < n)
            .collect();
        let neg_inv = -&unit_inv;
        let mut b: Vec<GaussInt> = Vec::with_capacity(n);
        for k in 0..n {
            if k == 0 {
                b.push(unit_inv.clone());
                continue;
            }
            let mut acc = GaussInt::zero();
            for &(j, c) in &rest {
                if j > k {
                    break;
                }
                let prev = &b[k - j];
                if !prev.is_zero() {
                    acc.add_product(c, prev);
                }
            }
            b.push(if acc.is_zero() { acc } else { &acc * &neg_inv });
        }
        let coeffs = b
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (QExp::from_units(k as i64) - lead_e, c))
            .collect();
        Ok(QSeries { coeffs, trunc: Some(trunc - lead_e - lead_e) })
    }

    /// Least exponent where `self` and `other` differ, looking only below the
    /// common truncation order.
    pub fn first_difference(&self, other: &QSeries) -> Option<QExp> {
        (self - other).min_exp()
    }

    /// Coefficients of integer exponents `0..n` as plain integers; every
    /// requested exponent must lie below the truncation order.
    pub fn int_coeffs(&self, n: usize) -> Result<Vec<BigInt>> {
        (0..n as i64).map(|k| self.int_coeff(k)).collect()
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        QSeries::add_impl(self, rhs, false)
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        QSeries::add_impl(self, rhs, true)
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        QSeries::mul_impl(self, rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries { coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(), trunc: self.trunc }
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        }
        for (k, (e, c)) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if *e == QExp::ZERO {
                write!(f, "{c}")?;
            } else {
                write!(f, "({c})q^{e}")?;
            }
        }
        if let Some(t) = self.trunc {
            write!(f, " + O(q^{t})")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> QExp {
        QExp::int(n)
    }

    fn poly(cs: &[i64], trunc: Option<i64>) -> QSeries {
        let s = QSeries::from_int_coeffs(cs);
        match trunc {
            Some(t) => s.truncate(q(t)),
            None => s,
        }
    }

    #[test]
    fn add_zero_keeps_trunc() {
        let a = poly(&[1, 1], None);
        let s = &a + &QSeries::zero();
        assert_eq!(s, a);
        let a = poly(&[1, 1], Some(5));
        assert_eq!((&a + &QSeries::zero()).trunc_order(), Some(q(5)));
    }

    #[test]
    fn add_inverse_cancels() {
        let e = QExp::frac(1, 4).unwrap();
        let a = QSeries::monomial(GaussInt::one(), e);
        let b = QSeries::monomial(GaussInt::real(-1), e);
        assert!((&a + &b).is_zero());
    }

    #[test]
    fn add_propagates_truncation() {
        let a = poly(&[1, -1], Some(3));
        let b = poly(&[0, 1, 1], Some(2));
        let s = &a + &b;
        assert_eq!(s.trunc_order(), Some(q(2)));
        assert_eq!(s, poly(&[1], Some(2)));
        assert!(s.coeff(q(2)).is_err());
    }

    #[test]
    fn geometric_inverse_product() {
        let one_minus_q = poly(&[1, -1], None);
        let geo = poly(&[1; 10], Some(10));
        let p = &one_minus_q * &geo;
        assert_eq!(p.trunc_order(), Some(q(10)));
        assert_eq!(p, poly(&[1], Some(10)));
    }

    #[test]
    fn quarter_powers_add() {
        let e = QExp::frac(1, 4).unwrap();
        let a = QSeries::monomial(GaussInt::one(), e);
        assert_eq!(&a * &a, QSeries::monomial(GaussInt::one(), QExp::frac(1, 2).unwrap()));
    }

    #[test]
    fn pentagonal_square() {
        // (q;q)_inf below q^8 is 1 - q - q^2 + q^5 + q^7
        let p = poly(&[1, -1, -1, 0, 0, 1, 0, 1], Some(8));
        let sq = &p * &p;
        assert_eq!(sq.int_coeffs(6).unwrap(), [1, -2, -1, 2, 1, 2].map(BigInt::from));
    }

    #[test]
    fn product_trunc_rule() {
        let a = poly(&[0, 1], Some(4)); // q + O(q^4)
        let b = poly(&[1, 1], Some(3)); // 1 + q + O(q^3)
        assert_eq!((&a * &b).trunc_order(), Some(q(4)));
        let e = QSeries::zero().truncate(q(10));
        assert_eq!((&e * &b).trunc_order(), Some(q(3)));
    }

    #[test]
    fn substitute_scales() {
        let a = QSeries::from_terms([(q(0), 1.into()), (q(1), 1.into()), (q(4), 1.into())], None);
        let b = a.substitute(Sign::Plus, 3, 1).unwrap();
        assert_eq!(
            b,
            QSeries::from_terms([(q(0), 1.into()), (q(3), 1.into()), (q(12), 1.into())], None)
        );
    }

    #[test]
    fn substitute_half_power_phase() {
        let a = QSeries::monomial(GaussInt::one(), QExp::frac(1, 2).unwrap());
        let b = a.substitute(Sign::Minus, 1, 1).unwrap();
        assert_eq!(b, QSeries::monomial(GaussInt::i(), QExp::frac(1, 2).unwrap()));
    }

    #[test]
    fn substitute_rejects_quarter_phase() {
        let a = QSeries::monomial(GaussInt::one(), QExp::frac(1, 4).unwrap());
        assert!(matches!(a.substitute(Sign::Minus, 1, 1), Err(Error::NonGaussianPhase(_))));
    }

    #[test]
    fn signed_theta_becomes_plain() {
        // sum (-1)^n q^(n^2) under q -> -q
        let terms = (-5i64..=5).map(|n| (q(n * n), GaussInt::from(if n % 2 == 0 { 1 } else { -1 })));
        let s = QSeries::from_terms(terms, Some(q(30)));
        let t = s.substitute(Sign::Minus, 1, 1).unwrap();
        let plain = QSeries::from_terms((-5i64..=5).map(|n| (q(n * n), GaussInt::one())), Some(q(30)));
        assert_eq!(t, plain);
    }

    #[test]
    fn invert_geometric() {
        let inv = poly(&[1, -1], Some(8)).invert().unwrap();
        assert_eq!(inv, poly(&[1; 8], Some(8)));
    }

    #[test]
    fn invert_one_is_one() {
        assert_eq!(QSeries::one().invert().unwrap(), QSeries::one());
    }

    #[test]
    fn invert_rejects_non_unit() {
        assert!(matches!(poly(&[2, 1], Some(4)).invert(), Err(Error::NonUnitLeading(_))));
        assert!(matches!(QSeries::zero().invert(), Err(Error::ZeroSeries)));
        assert!(matches!(poly(&[1, 1], None).invert(), Err(Error::Unbounded)));
    }

    #[test]
    fn invert_shifted() {
        // i q^{-1/4} (1 - q) inverted
        let e = QExp::frac(-1, 4).unwrap();
        let a = poly(&[1, -1], Some(6)).shift(e).scale(&GaussInt::i());
        let b = a.invert().unwrap();
        let p = &a * &b;
        assert_eq!(p.first_difference(&QSeries::one()), None);
        assert!(p.trunc_order().unwrap() > QExp::ZERO);
    }

    #[test]
    fn coeff_contract() {
        let a = poly(&[1, 2], Some(5));
        assert_eq!(a.coeff(q(1)).unwrap(), GaussInt::real(2));
        assert_eq!(QSeries::zero().truncate(q(10)).coeff(q(5)).unwrap(), GaussInt::zero());
        assert!(matches!(a.coeff(q(5)), Err(Error::BeyondTruncation { .. })));
    }
}
