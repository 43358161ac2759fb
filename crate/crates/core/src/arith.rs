//! Integer-sequence oracles: partitions, filtered divisor sums and
//! representation counts by sums of squares.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formal::qq_power;
use crate::qseries::QExp;

/// `p(0..=n)` by Euler's pentagonal recurrence.
pub fn partition_numbers(n: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); n + 1];
    p[0] = BigInt::from(1);
    for m in 1..=n {
        let mut acc = BigInt::zero();
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > m {
                break;
            }
            let plus = k % 2 == 1;
            for g in [g1, g1 + k] {
                if g <= m {
                    if plus {
                        acc += &p[m - g];
                    } else {
                        acc -= &p[m - g];
                    }
                }
            }
        }
        p[m] = acc;
    }
    p
}

/// Which divisors `d` of `n` take part in a divisor sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DivisorKind {
    All,
    /// `d ≡ c (mod m)`.
    Congruence { c: u64, m: u64 },
    /// `k ∤ d`.
    NotDivisibleBy(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SignRule {
    None,
    /// Each divisor weighted by `(-1)^{n+d}`.
    AlternatingNd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorFilter {
    pub kind: DivisorKind,
    pub sign: SignRule,
}

impl DivisorFilter {
    pub const ALL: DivisorFilter = DivisorFilter { kind: DivisorKind::All, sign: SignRule::None };

    pub fn congruent(c: u64, m: u64) -> Self {
        DivisorFilter { kind: DivisorKind::Congruence { c, m }, sign: SignRule::None }
    }

    pub fn not_divisible_by(k: u64) -> Self {
        DivisorFilter { kind: DivisorKind::NotDivisibleBy(k), sign: SignRule::None }
    }

    pub fn alternating() -> Self {
        DivisorFilter { kind: DivisorKind::All, sign: SignRule::AlternatingNd }
    }

    fn accepts(&self, d: u64) -> bool {
        match self.kind {
            DivisorKind::All => true,
            DivisorKind::Congruence { c, m } => d % m == c,
            DivisorKind::NotDivisibleBy(k) => !d.is_multiple_of(k),
        }
    }
}

/// Divisors of `n` in increasing order, by trial division.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `Σ sign·d^power` over the divisors of `n` passing `filter`.
pub fn divisor_sum(n: i64, power: u32, filter: DivisorFilter) -> Result<i64> {
    if n <= 0 {
        return Err(Error::InvalidArgument(format!("divisor sums need n >= 1, got {n}")));
    }
    if let DivisorKind::Congruence { c, m } = filter.kind {
        if m == 0 || c >= m {
            return Err(Error::InvalidArgument(format!("bad congruence filter {c} mod {m}")));
        }
    }
    let nu = n as u64;
    let mut s = 0i64;
    for d in divisors(nu).into_iter().filter(|&d| filter.accepts(d)) {
        let mut t = (d as i64).pow(power);
        if filter.sign == SignRule::AlternatingNd && (nu + d) % 2 == 1 {
            t = -t;
        }
        s += t;
    }
    Ok(s)
}

/// `r_l(0..=n)` by repeated convolution of `r_1`.
pub fn rep_counts(n: usize, l: u32) -> Vec<u64> {
    let mut r1 = vec![0u64; n + 1];
    r1[0] = 1;
    let mut k = 1usize;
    while k * k <= n {
        r1[k * k] = 2;
        k += 1;
    }
    let conv = |a: &[u64], b: &[u64]| -> Vec<u64> {
        let mut out = vec![0u64; n + 1];
        for (i, &x) in a.iter().enumerate().filter(|(_, x)| **x != 0) {
            for (j, &y) in b[..=n - i].iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    };
    // binary powering of r_1 under convolution
    let mut acc = vec![0u64; n + 1];
    acc[0] = 1;
    let (mut base, mut e) = (r1, l);
    while e > 0 {
        if e & 1 == 1 {
            acc = conv(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = conv(&base, &base);
        }
    }
    acc
}

/// Number of ordered representations of `n` as a sum of `l` squares.
pub fn rep_count_bruteforce(n: usize, l: u32) -> u64 {
    rep_counts(n, l)[n]
}

/// Number of integer pairs with `x² + 3y² = n`.
pub fn rep_count_13_bruteforce(n: u64) -> u64 {
    let mut count = 0;
    let mut y = 0u64;
    while 3 * y * y <= n {
        let rest = n - 3 * y * y;
        let x = rest.isqrt();
        if x * x == rest {
            let xs = if x == 0 { 1 } else { 2 };
            let ys = if y == 0 { 1 } else { 2 };
            count += xs * ys;
        }
        y += 1;
    }
    count
}

/// The divisor formulas for representation counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SquaresFormula {
    R2,
    R4,
    R8,
    /// Representations by `x² + 3y²`.
    R13,
}

impl SquaresFormula {
    pub const ALL: [SquaresFormula; 4] = [SquaresFormula::R2, SquaresFormula::R4, SquaresFormula::R8, SquaresFormula::R13];

    /// Brute-force count for every `n ≤ max_n`.
    pub fn bruteforce_table(self, max_n: usize) -> Vec<u64> {
        match self {
            SquaresFormula::R2 => rep_counts(max_n, 2),
            SquaresFormula::R4 => rep_counts(max_n, 4),
            SquaresFormula::R8 => rep_counts(max_n, 8),
            SquaresFormula::R13 => (0..=max_n as u64).map(rep_count_13_bruteforce).collect(),
        }
    }
}

impl FromStr for SquaresFormula {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2" | "r2" => Ok(SquaresFormula::R2),
            "4" | "r4" => Ok(SquaresFormula::R4),
            "8" | "r8" => Ok(SquaresFormula::R8),
            "13" | "r13" => Ok(SquaresFormula::R13),
            _ => Err(Error::Unknown { kind: "squares formula", name: s.to_string() }),
        }
    }
}

/// Closed-form divisor expression for `r_2`, `r_4`, `r_8` or `r_{1,3}`.
pub fn jacobi_formula(n: i64, which: SquaresFormula) -> Result<i64> {
    let count = |c, m| divisor_sum(n, 0, DivisorFilter::congruent(c, m));
    Ok(match which {
        SquaresFormula::R2 => 4 * (count(1, 4)? - count(3, 4)?),
        SquaresFormula::R4 => 8 * divisor_sum(n, 1, DivisorFilter::not_divisible_by(4))?,
        SquaresFormula::R8 => 16 * divisor_sum(n, 3, DivisorFilter::alternating())?,
        SquaresFormula::R13 => 4 * (count(4, 12)? - count(8, 12)?) + 2 * (count(1, 3)? - count(2, 3)?),
    })
}

/// The Legendre symbol `(n/3)`.
pub fn legendre3(n: u64) -> i8 {
    match n % 3 {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// Memoized sequences shared by the arithmetic checks.
#[derive(Clone, Debug)]
pub struct ArithTable {
    pub partition: Vec<BigInt>,
    /// Coefficients of `(q;q)⁶`.
    pub a_coeffs: Vec<BigInt>,
}

impl ArithTable {
    /// Tables covering indices `0..=n`.
    pub fn new(n: usize) -> Result<Self> {
        let six = qq_power(6, QExp::int(n as i64 + 1))?;
        Ok(ArithTable { partition: partition_numbers(n), a_coeffs: six.int_coeffs(n + 1)? })
    }
}

/// First failure of a congruence scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceFailure {
    pub sequence: &'static str,
    pub index: u64,
    pub value: String,
    pub modulus: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceVerdict {
    pub holds: bool,
    pub checked: u64,
    pub first_failure: Option<CongruenceFailure>,
}

fn scan(name: &'static str, values: &[BigInt], max_n: u64, modulus: u64) -> CongruenceVerdict {
    let m = BigInt::from(modulus);
    let mut checked = 0;
    for n in 0..=max_n {
        let idx = 7 * n + 5;
        let v = &values[idx as usize];
        checked += 1;
        if !v.mod_floor(&m).is_zero() {
            let first_failure = Some(CongruenceFailure { sequence: name, index: idx, value: v.to_string(), modulus });
            return CongruenceVerdict { holds: false, checked, first_failure };
        }
    }
    CongruenceVerdict { holds: true, checked, first_failure: None }
}

/// `p(7n+5) ≡ 0 (mod 7)` for `n ≤ max_n`.
pub fn partition_congruence(max_n: u64) -> CongruenceVerdict {
    let p = partition_numbers((7 * max_n + 5) as usize);
    scan("p", &p, max_n, 7)
}

/// `a(7n+5) ≡ 0 (mod 49)` for `n ≤ max_n`, where `(q;q)⁶ = Σ a(n) qⁿ`.
pub fn eta6_congruence(max_n: u64) -> Result<CongruenceVerdict> {
    let top = 7 * max_n as i64 + 6;
    let a = qq_power(6, QExp::int(top))?.int_coeffs(top as usize)?;
    Ok(scan("a", &a, max_n, 49))
}

/// Both congruences for `n ≤ max_n`.
pub fn congruence_suite(max_n: u64) -> Result<CongruenceVerdict> {
    let p = partition_congruence(max_n);
    if !p.holds {
        return Ok(p);
    }
    let a = eta6_congruence(max_n)?;
    Ok(CongruenceVerdict { checked: p.checked + a.checked, ..a })
}

/// Coefficients of `ϑ₃^l` with nome `q`, i.e. `(Σ q^{k²})^l`, up to `max_n`.
pub fn theta3_power_coeffs(max_n: usize, l: u32) -> Result<Vec<u64>> {
    use crate::formal::{theta_null_series, ThetaNullSpec};
    let order = QExp::int(max_n as i64 + 1);
    let t = theta_null_series(ThetaNullSpec::value(3, 1), order)?.pow(l);
    t.int_coeffs(max_n + 1)?
        .into_iter()
        .map(|c| c.to_u64().ok_or_else(|| Error::InvalidArgument(format!("negative coefficient {c}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitions() {
        let p = partition_numbers(20);
        let small: Vec<i64> = p.iter().take(11).map(|x| x.try_into().unwrap()).collect();
        assert_eq!(small, [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
        assert_eq!(p[12], BigInt::from(77));
        assert_eq!(p[19], BigInt::from(490));
    }

    #[test]
    fn partitions_match_series_inverse() {
        let order = QExp::int(60);
        let inv = qq_power(1, order).unwrap().invert().unwrap();
        assert_eq!(inv.int_coeffs(60).unwrap(), partition_numbers(59));
    }

    #[test]
    fn divisor_sums() {
        assert_eq!(divisor_sum(4, 1, DivisorFilter::not_divisible_by(4)).unwrap(), 3);
        assert_eq!(divisor_sum(2, 3, DivisorFilter::alternating()).unwrap(), 7);
        assert_eq!(divisor_sum(1, 0, DivisorFilter::congruent(1, 4)).unwrap(), 1);
        assert!(divisor_sum(0, 1, DivisorFilter::ALL).is_err());
        assert_eq!(divisors(36), [1, 2, 3, 4, 6, 9, 12, 18, 36]);
    }

    #[test]
    fn representation_counts() {
        assert_eq!(rep_count_bruteforce(5, 2), 8);
        assert_eq!(rep_count_bruteforce(0, 4), 1);
        assert_eq!(rep_count_bruteforce(1, 8), 16);
        assert_eq!(rep_count_13_bruteforce(4), 6);
        assert_eq!(rep_count_13_bruteforce(1), 2);
        assert_eq!(rep_count_13_bruteforce(2), 0);
    }

    #[test]
    fn formulas() {
        assert_eq!(jacobi_formula(5, SquaresFormula::R2).unwrap(), 8);
        assert_eq!(jacobi_formula(2, SquaresFormula::R4).unwrap(), 24);
        assert_eq!(jacobi_formula(4, SquaresFormula::R13).unwrap(), 6);
        for w in SquaresFormula::ALL {
            let table = w.bruteforce_table(300);
            for n in 1..=300 {
                assert_eq!(jacobi_formula(n, w).unwrap() as u64, table[n as usize], "{w:?} {n}");
            }
        }
    }

    #[test]
    fn parity_split_of_cubes() {
        for n in 1..=300i64 {
            let all = divisor_sum(n, 3, DivisorFilter::ALL).unwrap();
            // d odd with 2d | n
            let odd_half: i64 = divisors(n as u64)
                .into_iter()
                .filter(|d| d % 2 == 1 && (n as u64).is_multiple_of(2 * d))
                .map(|d| (d as i64).pow(3))
                .sum();
            assert_eq!(all - 2 * odd_half, divisor_sum(n, 3, DivisorFilter::alternating()).unwrap());
        }
    }

    #[test]
    fn legendre() {
        assert_eq!([legendre3(3), legendre3(4), legendre3(5)], [0, 1, -1]);
    }

    #[test]
    fn congruences() {
        assert!(congruence_suite(10).unwrap().holds);
        let t = ArithTable::new(12).unwrap();
        assert_eq!(t.a_coeffs[5].mod_floor(&BigInt::from(49)), BigInt::zero());
        assert_eq!(t.partition[5], BigInt::from(7));
    }

    #[test]
    fn theta_power_route() {
        for l in [2, 4, 8] {
            assert_eq!(theta3_power_coeffs(60, l).unwrap(), rep_counts(60, l));
        }
    }
}
