use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::qseries::{GaussInt, QExp, QSeries};

use super::theta::quadratic_window;

/// `a m² + b mn + c n² + d m + e n + f`, in 1/24 units.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub e: i64,
    pub f: i64,
}

impl QuadForm {
    pub const fn new(a: i64, b: i64, c: i64, d: i64, e: i64, f: i64) -> Self {
        QuadForm { a, b, c, d, e, f }
    }

    pub fn eval(&self, m: i64, n: i64) -> i64 {
        self.a * m * m + self.b * m * n + self.c * n * n + self.d * m + self.e * n + self.f
    }

    fn is_positive_definite(&self) -> bool {
        self.a > 0 && 4 * self.a * self.c > self.b * self.b
    }

    /// Every `(m, n)` with `eval < bound`, plus a ring of `margin` extra
    /// lattice points on each side of every window.
    fn box_points(&self, bound: i64, margin: i64) -> Vec<(i64, i64)> {
        let (a, b, c, d, e, f) = (
            self.a as f64,
            self.b as f64,
            self.c as f64,
            self.d as f64,
            self.e as f64,
            self.f as f64,
        );
        // minimising over n leaves a quadratic in m
        let am = a - b * b / (4.0 * c);
        let bm = d - b * e / (2.0 * c);
        let cm = f - e * e / (4.0 * c);
        let Some((mlo, mhi)) = quadratic_window(am, bm, cm, bound as f64, margin) else {
            return Vec::new();
        };
        let mut pts = Vec::new();
        for m in mlo..=mhi {
            let mf = m as f64;
            let lin = b * mf + e;
            let cst = a * mf * mf + d * mf + f;
            if let Some((nlo, nhi)) = quadratic_window(c, lin, cst, bound as f64, margin) {
                pts.extend((nlo..=nhi).map(|n| (m, n)));
            }
        }
        pts
    }
}

/// Summation range of a lattice sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Domain {
    /// All of ℤ².
    Plane,
    /// `n ≥ 2|m|`.
    Cone,
    /// `m ≥ 0`, `|n| ≤ m`.
    Triangle,
}

type Weight = fn(i64, i64) -> i64;

#[derive(Clone, Copy)]
struct Term {
    form: QuadForm,
    weight: Weight,
}

struct Expansion {
    domain: Domain,
    terms: Vec<Term>,
    divisor: i64,
}

fn sgn(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn term(form: QuadForm, weight: Weight) -> Term {
    Term { form, weight }
}

fn plane(terms: Vec<Term>, divisor: i64) -> Expansion {
    Expansion { domain: Domain::Plane, terms, divisor }
}

impl Expansion {
    fn candidates(&self, form: &QuadForm, bound: i64, margin: i64) -> Vec<(i64, i64)> {
        match self.domain {
            Domain::Plane => form.box_points(bound, margin),
            Domain::Cone => {
                // every form used here is at least 12m² on the cone and increasing in n
                let Some((mlo, mhi)) = quadratic_window(12.0, 0.0, 0.0, bound as f64, margin) else {
                    return Vec::new();
                };
                let mut pts = Vec::new();
                for m in mlo..=mhi {
                    let n0 = 2 * m.abs();
                    let lin = (form.b * m + form.e) as f64;
                    let cst = (form.a * m * m + form.d * m + form.f) as f64;
                    if let Some((_, nhi)) = quadratic_window(form.c as f64, lin, cst, bound as f64, margin) {
                        pts.extend((n0..=nhi).map(|n| (m, n)));
                    }
                }
                pts
            }
            Domain::Triangle => {
                // every form used here is at least 12(m² + m) on the triangle
                let (_, mhi) = quadratic_window(12.0, 12.0, 0.0, bound as f64, margin).unwrap_or((0, margin));
                (0..=mhi.max(0)).flat_map(|m| (-m..=m).map(move |n| (m, n))).collect()
            }
        }
    }

    fn sum(&self, order: QExp, margin: i64) -> Result<QSeries> {
        let bound = order.units();
        let mut acc: BTreeMap<i64, i128> = BTreeMap::new();
        for t in &self.terms {
            for (m, n) in self.candidates(&t.form, bound, margin) {
                let e = t.form.eval(m, n);
                if e >= bound {
                    continue;
                }
                let w = (t.weight)(m, n);
                if w != 0 {
                    *acc.entry(e).or_default() += w as i128;
                }
            }
        }
        let terms = acc
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|(e, c)| (QExp::from_units(e), GaussInt::real(c)));
        QSeries::from_terms(terms, Some(order)).div_exact(self.divisor)
    }
}

macro_rules! named_enum {
    ($(#[$doc:meta])* $name:ident, $kind:literal { $($var:ident => $s:literal),* $(,)? }) => {
        $(#[$doc])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum $name { $($var),* }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$var),*];

            pub fn name(self) -> &'static str {
                match self { $($name::$var => $s),* }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }

        impl FromStr for $name {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                $name::ALL
                    .iter()
                    .copied()
                    .find(|v| v.name() == s)
                    .ok_or_else(|| Error::Unknown { kind: $kind, name: s.to_string() })
            }
        }
    };
}

named_enum!(
    /// Double-sum expansions derived from the theta addition formulas.
    LatticeFamily, "lattice family" {
        C1_1 => "c1_1",
        C1_2 => "c1_2",
        C1_3 => "c1_3",
        C1_4 => "c1_4",
        C2_1 => "c2_1",
        C2_2 => "c2_2",
        C2_3 => "c2_3",
        C2_4 => "c2_4",
        C3 => "c3",
    }
);

named_enum!(
    /// Classical lattice-sum expansions of `(q;q)²` and `(q;q)⁶`.
    LiteratureExpansion, "literature expansion" {
        Rogers => "rogers",
        Ewell => "ewell",
        Shen => "shen",
        LiuA => "liu-a",
        LiuB => "liu-b",
        Schoeneberg => "schoeneberg",
        LiuEta6 => "liu-eta6",
    }
);

impl LatticeFamily {
    /// Power `k` of `(q;q)_∞` the family expands.
    pub fn eta_power(self) -> u32 {
        match self {
            LatticeFamily::C1_1 | LatticeFamily::C1_2 | LatticeFamily::C1_3 | LatticeFamily::C1_4 => 2,
            _ => 6,
        }
    }

    fn expansion(self) -> Expansion {
        use LatticeFamily::*;
        // (3m²+1)/4 + 3n² with q^{2n} or q^m
        let c1a = QuadForm::new(18, 0, 72, 0, 48, 6);
        let c1b = QuadForm::new(18, 0, 72, 24, 0, 6);
        // 1 + 3m(m+1) + 3n²/4 with q^{2m+1} or q^n
        let c1c = QuadForm::new(72, 0, 18, 120, 0, 48);
        let c1d = QuadForm::new(72, 0, 18, 72, 24, 24);
        // m(m+1) + n²/4
        let c2ab = QuadForm::new(24, 0, 6, 24, 0, 0);
        // n² + (m²-1)/4
        let c2cd = QuadForm::new(6, 0, 24, 0, 0, -6);
        // m² + n(n+1)
        let c3 = QuadForm::new(24, 0, 24, 0, 24, 0);
        match self {
            C1_1 => plane(vec![term(c1a, |m, _| sgn(m)), term(c1b, |m, _| -sgn(m))], 1),
            C1_2 => plane(vec![term(c1c, |_, _| 1), term(c1d, |_, _| -1)], 1),
            C1_3 => plane(vec![term(c1c, |_, n| sgn(n)), term(c1d, |_, n| -sgn(n))], 1),
            C1_4 => plane(vec![term(c1b, |_, _| 1), term(c1a, |_, _| -1)], 1),
            C2_1 => plane(vec![term(c2ab, |m, n| (2 * m + 1).pow(2) - n * n)], 2),
            C2_2 => plane(vec![term(c2ab, |m, n| sgn(n) * ((2 * m + 1).pow(2) - n * n))], 2),
            C2_3 => plane(vec![term(c2cd, |m, n| m * m - 4 * n * n)], 2),
            C2_4 => plane(vec![term(c2cd, |m, n| sgn(m) * (4 * n * n - m * m))], 2),
            C3 => plane(vec![term(c3, |m, n| (2 * n + 1).pow(2) - 4 * m * m)], 2),
        }
    }
}

impl LiteratureExpansion {
    pub fn eta_power(self) -> u32 {
        match self {
            LiteratureExpansion::Schoeneberg | LiteratureExpansion::LiuEta6 => 6,
            _ => 2,
        }
    }

    fn expansion(self) -> Expansion {
        use LiteratureExpansion::*;
        match self {
            // n(n+1)/2 - m(3m-1)/2 over n ≥ 2|m|
            Rogers => Expansion {
                domain: Domain::Cone,
                terms: vec![term(QuadForm::new(-36, 0, 12, 12, 12, 0), |m, n| sgn(m + n))],
                divisor: 1,
            },
            Ewell => plane(
                vec![
                    term(QuadForm::new(72, 0, 72, 0, 24, 0), |_, _| 1),
                    term(QuadForm::new(72, 0, 72, 72, 48, 24), |_, _| -1),
                ],
                1,
            ),
            Shen => plane(vec![term(QuadForm::new(24, 24, 24, 0, 12, 0), |m, _| sgn(m))], 1),
            // (1 - q^{2n+1}) q^{2n² + n - j(3j+1)/2} over n ≥ 0, |j| ≤ n
            LiuA => Expansion {
                domain: Domain::Triangle,
                terms: vec![
                    term(QuadForm::new(48, 0, -36, 24, -12, 0), |_, j| sgn(j)),
                    term(QuadForm::new(48, 0, -36, 72, -12, 24), |_, j| -sgn(j)),
                ],
                divisor: 1,
            },
            LiuB => plane(vec![term(QuadForm::new(18, 0, 18, 24, 0, 6), |m, n| sgn(n) - sgn(m))], 2),
            // Re(m + 2ni)² = m² - 4n²
            Schoeneberg => plane(vec![term(QuadForm::new(6, 0, 24, 0, 0, -6), |m, n| m * m - 4 * n * n)], 2),
            LiuEta6 => plane(vec![term(QuadForm::new(6, 0, 6, 0, 0, -6), |m, n| sgn(m) * (n * n - m * m))], 4),
        }
    }
}

fn check_plane(e: &Expansion) {
    if e.domain == Domain::Plane {
        debug_assert!(e.terms.iter().all(|t| t.form.is_positive_definite()));
    }
}

/// Exact truncated series of a double-sum family.
pub fn lattice_double_sum(family: LatticeFamily, order: QExp) -> Result<QSeries> {
    lattice_double_sum_with_margin(family, order, 0)
}

/// As [`lattice_double_sum`], scanning `margin` extra lattice points beyond
/// every enumeration window. The result must not depend on `margin`.
pub fn lattice_double_sum_with_margin(family: LatticeFamily, order: QExp, margin: i64) -> Result<QSeries> {
    let e = family.expansion();
    check_plane(&e);
    e.sum(order, margin)
}

/// Exact truncated series of a classical expansion.
pub fn literature_expansion(name: LiteratureExpansion, order: QExp) -> Result<QSeries> {
    literature_expansion_with_margin(name, order, 0)
}

pub fn literature_expansion_with_margin(name: LiteratureExpansion, order: QExp, margin: i64) -> Result<QSeries> {
    let e = name.expansion();
    check_plane(&e);
    e.sum(order, margin)
}
