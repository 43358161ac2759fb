use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use super::pochhammer::{pochhammer_series, qq_power, PochhammerSpec};
use super::theta::{quadratic_window, theta_null_product, theta_null_series, theta_rational_series, RationalThetaArg, ThetaNullSpec};
use crate::error::{Error, Result};
use crate::qseries::{GaussInt, QExp, QSeries, Sign, EXP_DENOM};

/// Exact product and sum identities checked coefficient by coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormalIdentity {
    /// `ϑ₂²(τ) = 2ϑ₂(2τ)ϑ₃(2τ)`.
    NullDuplication,
    /// `ϑ₁'(τ) = ϑ₂(τ)ϑ₃(τ)ϑ₄(τ)`.
    JacobiDerivative,
    /// `ϑ₄²(2τ) = ϑ₃(τ)ϑ₄(τ)`.
    Theta4Duplication,
    /// `θ₂(πτ/2 | 2τ) = (q⁴;q⁴)(-q;q²)`.
    Theta2QuarterShift,
    /// `θ₁(πτ | 3τ) = i q^{-1/4}(q²;q²)`.
    Theta1TauShift,
    /// Sum and product forms of `ϑ₁'`, `ϑ₂`, `ϑ₃`, `ϑ₄` at nome `q^t`.
    NullSumProduct { index: u8, tau_scale: QExp },
    /// `(q;q)(z;q)(q/z;q) = Σ (-1)^n z^n q^{n(n-1)/2}` at `z = ±q^s`, `-1 < s < 2`.
    TripleProduct { sign: Sign, s: QExp },
    /// `Σ q^{n²} = (-q;-q)/(q;-q)`.
    SignFlipTheta3,
    /// `(q;q)⁷ ≡ (q⁷;q⁷)` coefficientwise mod 7.
    SeventhPowerMod7,
    /// `ϑ₂²(τ)` against `3ϑ₂(2τ)ϑ₃(2τ)`; must fail.
    PerturbedDuplication,
}

impl FormalIdentity {
    /// The fixed catalog used by the verification suites.
    pub fn catalog() -> Vec<FormalIdentity> {
        let mut v = vec![
            FormalIdentity::NullDuplication,
            FormalIdentity::JacobiDerivative,
            FormalIdentity::Theta4Duplication,
            FormalIdentity::Theta2QuarterShift,
            FormalIdentity::Theta1TauShift,
        ];
        for index in 1..=4 {
            for t in [QExp::frac(1, 2).unwrap(), QExp::int(1), QExp::int(3)] {
                v.push(FormalIdentity::NullSumProduct { index, tau_scale: t });
            }
        }
        for sign in [Sign::Plus, Sign::Minus] {
            for s in ["-1/2", "0", "1/4", "1/3", "1", "3/2"] {
                v.push(FormalIdentity::TripleProduct { sign, s: s.parse().unwrap() });
            }
        }
        v.push(FormalIdentity::SignFlipTheta3);
        v.push(FormalIdentity::SeventhPowerMod7);
        v
    }

    pub fn id(&self) -> String {
        match self {
            FormalIdentity::NullDuplication => "null-duplication".into(),
            FormalIdentity::JacobiDerivative => "jacobi-derivative".into(),
            FormalIdentity::Theta4Duplication => "theta4-duplication".into(),
            FormalIdentity::Theta2QuarterShift => "theta2-quarter-shift".into(),
            FormalIdentity::Theta1TauShift => "theta1-tau-shift".into(),
            FormalIdentity::NullSumProduct { index, tau_scale } => format!("null-sum-product:{index}@{tau_scale}"),
            FormalIdentity::TripleProduct { sign, s } => {
                let c = if *sign == Sign::Plus { '+' } else { '-' };
                format!("triple-product:{c}{s}")
            }
            FormalIdentity::SignFlipTheta3 => "sign-flip-theta3".into(),
            FormalIdentity::SeventhPowerMod7 => "seventh-power-mod7".into(),
            FormalIdentity::PerturbedDuplication => "perturbed-duplication".into(),
        }
    }

    /// Both sides, exact below `order`.
    pub fn sides(&self, order: QExp) -> Result<(QSeries, QSeries)> {
        let null = |j: u8, t: i64| theta_null_series(ThetaNullSpec::value(j, t), order);
        Ok(match *self {
            FormalIdentity::NullDuplication | FormalIdentity::PerturbedDuplication => {
                let k = if *self == FormalIdentity::NullDuplication { 2 } else { 3 };
                let lhs = null(2, 1)?.pow(2);
                let rhs = (&null(2, 2)? * &null(3, 2)?).scale_int(k);
                (lhs, rhs)
            }
            FormalIdentity::JacobiDerivative => {
                let lhs = theta_null_series(ThetaNullSpec::new(1, QExp::int(1), 1), order)?;
                let rhs = &(&null(2, 1)? * &null(3, 1)?) * &null(4, 1)?;
                (lhs, rhs)
            }
            FormalIdentity::Theta4Duplication => (null(4, 2)?.pow(2), &null(3, 1)? * &null(4, 1)?),
            FormalIdentity::Theta2QuarterShift => {
                let arg = RationalThetaArg { r: QExp::ZERO, s: QExp::frac(1, 2)?, tau_scale: QExp::int(2) };
                let lhs = theta_rational_series(2, arg, order)?;
                let rhs = &pochhammer_series(PochhammerSpec::plus(4, 4), order)?
                    * &pochhammer_series(PochhammerSpec::minus(1, 2), order)?;
                (lhs, rhs)
            }
            FormalIdentity::Theta1TauShift => {
                let arg = RationalThetaArg { r: QExp::ZERO, s: QExp::int(1), tau_scale: QExp::int(3) };
                let lhs = theta_rational_series(1, arg, order)?;
                let quarter = QExp::frac(-1, 4)?;
                let rhs = pochhammer_series(PochhammerSpec::plus(2, 2), order - quarter)?
                    .shift(quarter)
                    .scale(&GaussInt::i());
                (lhs, rhs)
            }
            FormalIdentity::NullSumProduct { index, tau_scale } => {
                let spec = ThetaNullSpec::new(index, tau_scale, u32::from(index == 1));
                (theta_null_series(spec, order)?, theta_null_product(spec, order)?)
            }
            FormalIdentity::TripleProduct { sign, s } => triple_product_sides(sign, s, order)?,
            FormalIdentity::SignFlipTheta3 => {
                let lhs = null(3, 1)?;
                // (q;q)/(-q;q) evaluated at -q
                let a = pochhammer_series(PochhammerSpec::plus(1, 1), order)?;
                let b = pochhammer_series(PochhammerSpec::minus(1, 1), order)?.invert()?;
                let rhs = (&a * &b).substitute(Sign::Minus, 1, 1)?;
                (lhs, rhs)
            }
            FormalIdentity::SeventhPowerMod7 => {
                let lhs = qq_power(7, order)?;
                let rhs = pochhammer_series(PochhammerSpec::plus(7, 7), order)?;
                (lhs, rhs)
            }
        })
    }

    fn modulus(&self) -> Option<i64> {
        (*self == FormalIdentity::SeventhPowerMod7).then_some(7)
    }
}

impl fmt::Display for FormalIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl FromStr for FormalIdentity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::Unknown { kind: "formal identity", name: s.to_string() };
        if let Some(rest) = s.strip_prefix("null-sum-product:") {
            let (j, t) = rest.split_once('@').ok_or_else(unknown)?;
            let index: u8 = j.parse().map_err(|_| unknown())?;
            return Ok(FormalIdentity::NullSumProduct { index, tau_scale: t.parse()? });
        }
        if let Some(rest) = s.strip_prefix("triple-product:") {
            let sign = match rest.chars().next() {
                Some('+') => Sign::Plus,
                Some('-') => Sign::Minus,
                _ => return Err(unknown()),
            };
            return Ok(FormalIdentity::TripleProduct { sign, s: rest[1..].parse()? });
        }
        [
            FormalIdentity::NullDuplication,
            FormalIdentity::JacobiDerivative,
            FormalIdentity::Theta4Duplication,
            FormalIdentity::Theta2QuarterShift,
            FormalIdentity::Theta1TauShift,
            FormalIdentity::SignFlipTheta3,
            FormalIdentity::SeventhPowerMod7,
            FormalIdentity::PerturbedDuplication,
        ]
        .into_iter()
        .find(|v| v.id() == s)
        .ok_or_else(unknown)
    }
}

fn triple_product_sides(sign: Sign, s: QExp, order: QExp) -> Result<(QSeries, QSeries)> {
    let one = QExp::int(1);
    if s <= -one || s >= QExp::int(2) {
        return Err(Error::InvalidArgument(format!("triple product needs -1 < s < 2, got {s}")));
    }
    // z = σ q^s, so (z;q) = (σ q^s; q) and (q/z;q) = (σ q^{1-s}; q)
    // a factor with a negative leading exponent costs that much truncation order
    let ext = order + (-s).max(QExp::ZERO) + (s - one).max(QExp::ZERO);
    let p = |start: QExp| pochhammer_series(PochhammerSpec::new(sign, start, one), ext);
    let lhs = (&(&qq_power(1, ext)? * &p(s)?) * &p(one - s)?).truncate(order);
    // (-1)^n z^n q^{n(n-1)/2} = (-σ)^n q^{n(n-1)/2 + ns}; units 12n² + (s - 12)n
    let su = s.units();
    let a = (EXP_DENOM / 2) as f64;
    let mut terms = Vec::new();
    if let Some((lo, hi)) = quadratic_window(a, (su - EXP_DENOM / 2) as f64, 0.0, order.units() as f64, 0) {
        for n in lo..=hi {
            let e = EXP_DENOM / 2 * n * n + (su - EXP_DENOM / 2) * n;
            if e >= order.units() {
                continue;
            }
            let flip = (sign == Sign::Plus) && n.rem_euclid(2) == 1;
            terms.push((QExp::from_units(e), GaussInt::from(if flip { -1 } else { 1 })));
        }
    }
    Ok((lhs, QSeries::from_terms(terms, Some(order))))
}

/// Outcome of a coefficient comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    /// Exponent below which both sides were known exactly.
    pub checked_below: Option<QExp>,
    /// Least exponent where the sides differ.
    pub first_discrepancy: Option<QExp>,
}

impl Verdict {
    /// Compare `lhs` and `rhs` below their common truncation order, optionally
    /// only modulo `modulus`.
    pub fn compare(lhs: &QSeries, rhs: &QSeries, modulus: Option<i64>) -> Verdict {
        let checked_below = match (lhs.trunc_order(), rhs.trunc_order()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let diff = lhs - rhs;
        let first = match modulus {
            None => diff.min_exp(),
            Some(m) => {
                let m = BigInt::from(m);
                diff.terms().find(|(_, c)| !c.rem_euclid(&m).is_zero()).map(|(e, _)| e)
            }
        };
        Verdict { holds: first.is_none(), checked_below, first_discrepancy: first }
    }
}

/// Build both sides of `id` and report where they first disagree, if anywhere
/// below `order`.
pub fn formal_identity_check(id: FormalIdentity, order: QExp) -> Result<Verdict> {
    let (lhs, rhs) = id.sides(order)?;
    Ok(Verdict::compare(&lhs, &rhs, id.modulus()))
}
