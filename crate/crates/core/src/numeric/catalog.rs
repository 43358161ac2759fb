use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rug::Float;

use super::hp::{working_prec, HPComplex};
use super::sample::{distance_to_lattice, Assignment, SampleDomain};
use super::theta::{log_deriv_series_eval, nome, pochhammer_eval, theta_deriv_eval, theta_eval, theta_null, LogDeriv, Transform, TAIL_GUARD};
use super::verify::SampledCase;
use crate::error::{Error, Result};

/// Groups of sampled identities run together.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Addition,
    SquaresLambert,
    Transforms,
}

impl Suite {
    pub const ALL: [Suite; 3] = [Suite::Addition, Suite::SquaresLambert, Suite::Transforms];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Addition => "addition",
            Suite::SquaresLambert => "squares-lambert",
            Suite::Transforms => "transforms",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Unknown { kind: "suite", name: s.to_string() })
    }
}

/// Identities in two or more complex variables, checked numerically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NumericIdentity {
    DuplicationTheta2Theta3,
    DuplicationTheta2Theta4,
    DuplicationTheta3Theta3,
    DuplicationTheta3Theta4,
    ProductTheta1Theta1,
    ProductTheta2Theta2,
    SumOfProducts,
    DifferenceOfProducts,
    DoubleTauCross,
    FourVariable,
    ThreeVariableTheta2,
    ThreeVariableTheta3,
    CubicThirdTau,
    Theta1Theta2Product,
    QuarterTauShift,
    TangentLambert,
    Theta4FourthLambert,
    Theta4EighthLambert,
    LogDerivTheta1,
    LogDerivTheta3,
    Imaginary(Transform),
}

use NumericIdentity as N;

const ADDITION: [NumericIdentity; 16] = [
    N::DuplicationTheta2Theta3,
    N::DuplicationTheta2Theta4,
    N::DuplicationTheta3Theta3,
    N::DuplicationTheta3Theta4,
    N::ProductTheta1Theta1,
    N::ProductTheta2Theta2,
    N::SumOfProducts,
    N::DifferenceOfProducts,
    N::DoubleTauCross,
    N::FourVariable,
    N::ThreeVariableTheta2,
    N::ThreeVariableTheta3,
    N::CubicThirdTau,
    N::Theta1Theta2Product,
    N::QuarterTauShift,
    N::TangentLambert,
];

impl NumericIdentity {
    pub fn suite(self) -> Suite {
        match self {
            N::Theta4FourthLambert | N::Theta4EighthLambert | N::LogDerivTheta1 | N::LogDerivTheta3 => Suite::SquaresLambert,
            N::Imaginary(_) => Suite::Transforms,
            _ => Suite::Addition,
        }
    }

    pub fn members(suite: Suite) -> Vec<NumericIdentity> {
        match suite {
            Suite::Addition => ADDITION.to_vec(),
            Suite::SquaresLambert => vec![N::Theta4FourthLambert, N::Theta4EighthLambert, N::LogDerivTheta1, N::LogDerivTheta3],
            Suite::Transforms => Transform::ALL.into_iter().map(N::Imaginary).collect(),
        }
    }

    pub fn all() -> Vec<NumericIdentity> {
        Suite::ALL.into_iter().flat_map(NumericIdentity::members).collect()
    }

    pub fn id(self) -> &'static str {
        match self {
            N::DuplicationTheta2Theta3 => "duplication-theta2-theta3",
            N::DuplicationTheta2Theta4 => "duplication-theta2-theta4",
            N::DuplicationTheta3Theta3 => "duplication-theta3-theta3",
            N::DuplicationTheta3Theta4 => "duplication-theta3-theta4",
            N::ProductTheta1Theta1 => "product-theta1-theta1",
            N::ProductTheta2Theta2 => "product-theta2-theta2",
            N::SumOfProducts => "sum-of-products",
            N::DifferenceOfProducts => "difference-of-products",
            N::DoubleTauCross => "double-tau-cross",
            N::FourVariable => "four-variable",
            N::ThreeVariableTheta2 => "three-variable-theta2",
            N::ThreeVariableTheta3 => "three-variable-theta3",
            N::CubicThirdTau => "cubic-third-tau",
            N::Theta1Theta2Product => "theta1-theta2-product",
            N::QuarterTauShift => "quarter-tau-shift",
            N::TangentLambert => "tangent-lambert",
            N::Theta4FourthLambert => "theta4-fourth-lambert",
            N::Theta4EighthLambert => "theta4-eighth-lambert",
            N::LogDerivTheta1 => "log-derivative-theta1",
            N::LogDerivTheta3 => "log-derivative-theta3",
            N::Imaginary(t) => t.id(),
        }
    }

    pub fn formula(self) -> &'static str {
        match self {
            N::DuplicationTheta2Theta3 => "θ2(2y|2τ)θ3(x|τ/2) - θ2(2x|2τ)θ3(y|τ/2) = θ1(x-y)θ1(x+y)",
            N::DuplicationTheta2Theta4 => "θ2(2y|2τ)θ4(x|τ/2) - θ2(2x|2τ)θ4(y|τ/2) = θ1(x-y)θ1(x+y)",
            N::DuplicationTheta3Theta3 => "θ3(2y|2τ)θ3(x|τ/2) - θ3(2x|2τ)θ3(y|τ/2) = -θ1(x-y)θ1(x+y)",
            N::DuplicationTheta3Theta4 => "θ3(2y|2τ)θ4(x|τ/2) - θ3(2x|2τ)θ4(y|τ/2) = θ1(x-y)θ1(x+y)",
            N::ProductTheta1Theta1 => "θ1(x)θ1(y) = θ2(x-y|2τ)θ3(x+y|2τ) - θ2(x+y|2τ)θ3(x-y|2τ)",
            N::ProductTheta2Theta2 => "θ2(x)θ2(y) = θ2(x-y|2τ)θ3(x+y|2τ) + θ2(x+y|2τ)θ3(x-y|2τ)",
            N::SumOfProducts => "θ1(x)θ1(y) + θ2(x)θ2(y) = 2θ2(x-y|2τ)θ3(x+y|2τ)",
            N::DifferenceOfProducts => "θ2(x)θ2(y) - θ1(x)θ1(y) = 2θ2(x+y|2τ)θ3(x-y|2τ)",
            N::DoubleTauCross => "θ3(2x|2τ)θ2(2y|2τ) - θ2(2x|2τ)θ3(2y|2τ) = θ1(x-y)θ1(x+y)",
            N::FourVariable => {
                "θ1(x-u)θ1(x+u)θ2(y-v)θ2(y+v) - θ1(y-u)θ1(y+u)θ2(x-v)θ2(x+v) = θ2(u-v)θ2(u+v)θ1(x-y)θ1(x+y)"
            }
            N::ThreeVariableTheta2 => "θ1(x-u)θ1(x+u)θ2(2y|2τ) - θ1(y-u)θ1(y+u)θ2(2x|2τ) = θ2(2u|2τ)θ1(x-y)θ1(x+y)",
            N::ThreeVariableTheta3 => "θ1(x-u)θ1(x+u)θ3(2y|2τ) - θ1(y-u)θ1(y+u)θ3(2x|2τ) = θ3(2u|2τ)θ1(x-y)θ1(x+y)",
            N::CubicThirdTau => {
                "θ1³(x)θ1(y|τ/3) - θ1³(y)θ1(x|τ/3) = ϑ1'(τ/3)/ϑ1'(τ) θ1(x)θ1(y)θ1(x-y)θ1(x+y)"
            }
            N::Theta1Theta2Product => "θ1(z)θ2(z) = ϑ4(2τ)θ1(2z|2τ)",
            N::QuarterTauShift => "2θ1(x-πτ/4)θ1(x+πτ/4) = q^(-1/8)ϑ2(τ/2)θ4(x|τ/2)",
            N::TangentLambert => {
                "tan y (q²;q²)⁴(q²e^{2iy};q²)(q²e^{-2iy};q²) / ((q⁴;q⁴)²(-q²e^{2iy};q²)(-q²e^{-2iy};q²)) = tan y + 4Σ(-1)ⁿq^{2n}/(1+q^{2n}) sin 2ny"
            }
            N::Theta4FourthLambert => "ϑ4⁴ = 1 + 8Σ(-1)ⁿ n qⁿ/(1+qⁿ)",
            N::Theta4EighthLambert => "ϑ4⁸ = 1 + 16Σ n³(-q)ⁿ/(1-qⁿ)",
            N::LogDerivTheta1 => "θ1'(x)/θ1(x) = cot x + 4Σ q^{2n}/(1-q^{2n}) sin 2nx",
            N::LogDerivTheta3 => "θ3'(x)/θ3(x) = 4Σ(-1)ⁿ qⁿ/(1-q^{2n}) sin 2nx",
            N::Imaginary(Transform::Theta1) => "θ1(zτ'|τ') = i√(-iτ) e^{iz²/(πτ)} θ1(z|τ)",
            N::Imaginary(Transform::Theta2To4) => "θ2(zτ'|τ') = √(-iτ) e^{iz²/(πτ)} θ4(z|τ)",
            N::Imaginary(Transform::Theta1Over) => "θ1(z/τ|τ') = -i√(-iτ) e^{iz²/(πτ)} θ1(z|τ)",
            N::Imaginary(Transform::Theta4To2) => "θ4(z/τ|τ') = √(-iτ) e^{iz²/(πτ)} θ2(z|τ)",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            N::FourVariable => 4,
            N::ThreeVariableTheta2 | N::ThreeVariableTheta3 => 3,
            N::Theta1Theta2Product | N::QuarterTauShift | N::TangentLambert | N::LogDerivTheta1 | N::LogDerivTheta3 => 1,
            N::Imaginary(_) => 1,
            N::Theta4FourthLambert | N::Theta4EighthLambert => 0,
            _ => 2,
        }
    }

    pub fn roles(self) -> &'static [&'static str] {
        match self.arity() {
            0 => &[],
            1 => match self {
                N::TangentLambert => &["y"],
                N::LogDerivTheta1 | N::LogDerivTheta3 | N::QuarterTauShift => &["x"],
                _ => &["z"],
            },
            2 => &["x", "y"],
            3 => &["x", "y", "u"],
            _ => &["x", "y", "u", "v"],
        }
    }

    /// Default sampling domain.
    pub fn default_domain(self) -> SampleDomain {
        match self {
            N::TangentLambert | N::LogDerivTheta1 | N::LogDerivTheta3 => SampleDomain::default().real(),
            _ => SampleDomain::default(),
        }
    }

    fn admissible(self, a: &Assignment) -> bool {
        match self {
            // stay away from the poles and zeros of tan
            N::TangentLambert => distance_to_lattice(a.vars[0][0], PI / 2.0) >= 0.1,
            N::LogDerivTheta1 => distance_to_lattice(a.vars[0][0], PI) >= 0.1,
            _ => true,
        }
    }

    /// Terms of both sides at `(vars, τ)`; each side is the sum of its terms.
    pub fn terms(self, vars: &[HPComplex], tau: &HPComplex, prec: u32) -> Result<(Vec<HPComplex>, Vec<HPComplex>)> {
        if vars.len() != self.arity() {
            return Err(Error::Arity { expected: self.arity(), got: vars.len() });
        }
        let w = working_prec(prec);
        let tau = tau.with_prec(w);
        let vars: Vec<HPComplex> = vars.iter().map(|v| v.with_prec(w)).collect();
        let t2 = tau.scale_f64(2.0);
        let th = |j: u8, z: &HPComplex, t: &HPComplex| theta_eval(j, z, t, prec);
        let t1 = |z: &HPComplex| th(1, z, &tau);
        let th_half = tau.scale_f64(0.5);
        let two = |z: &HPComplex| z.scale_f64(2.0);
        let p_xy = |x: &HPComplex, y: &HPComplex| -> Result<HPComplex> { Ok(&t1(&(x - y))? * &t1(&(x + y))?) };
        let neg = |z: HPComplex| -z;

        Ok(match self {
            N::DuplicationTheta2Theta3 | N::DuplicationTheta2Theta4 | N::DuplicationTheta3Theta3 | N::DuplicationTheta3Theta4 => {
                let (x, y) = (&vars[0], &vars[1]);
                let (a, b) = match self {
                    N::DuplicationTheta2Theta3 => (2, 3),
                    N::DuplicationTheta2Theta4 => (2, 4),
                    N::DuplicationTheta3Theta3 => (3, 3),
                    _ => (3, 4),
                };
                let l1 = &th(a, &two(y), &t2)? * &th(b, x, &th_half)?;
                let l2 = &th(a, &two(x), &t2)? * &th(b, y, &th_half)?;
                let p = p_xy(x, y)?;
                let rhs = if self == N::DuplicationTheta3Theta3 { -p } else { p };
                (vec![l1, -l2], vec![rhs])
            }
            N::ProductTheta1Theta1 | N::ProductTheta2Theta2 | N::SumOfProducts | N::DifferenceOfProducts => {
                let (x, y) = (&vars[0], &vars[1]);
                let (d, s) = (x - y, x + y);
                let a = &th(2, &d, &t2)? * &th(3, &s, &t2)?;
                let b = &th(2, &s, &t2)? * &th(3, &d, &t2)?;
                let p1 = &t1(x)? * &t1(y)?;
                let p2 = &th(2, x, &tau)? * &th(2, y, &tau)?;
                match self {
                    N::ProductTheta1Theta1 => (vec![p1], vec![a, -b]),
                    N::ProductTheta2Theta2 => (vec![p2], vec![a, b]),
                    N::SumOfProducts => (vec![p1, p2], vec![a.scale_f64(2.0)]),
                    _ => (vec![p2, -p1], vec![b.scale_f64(2.0)]),
                }
            }
            N::DoubleTauCross => {
                let (x, y) = (&vars[0], &vars[1]);
                let l1 = &th(3, &two(x), &t2)? * &th(2, &two(y), &t2)?;
                let l2 = &th(2, &two(x), &t2)? * &th(3, &two(y), &t2)?;
                (vec![l1, -l2], vec![p_xy(x, y)?])
            }
            N::FourVariable => {
                let (x, y, u, v) = (&vars[0], &vars[1], &vars[2], &vars[3]);
                let pair = |j: u8, a: &HPComplex, b: &HPComplex| -> Result<HPComplex> {
                    Ok(&th(j, &(a - b), &tau)? * &th(j, &(a + b), &tau)?)
                };
                let l1 = &pair(1, x, u)? * &pair(2, y, v)?;
                let l2 = &pair(1, y, u)? * &pair(2, x, v)?;
                let r = &pair(2, u, v)? * &p_xy(x, y)?;
                (vec![l1, -l2], vec![r])
            }
            N::ThreeVariableTheta2 | N::ThreeVariableTheta3 => {
                let (x, y, u) = (&vars[0], &vars[1], &vars[2]);
                let j = if self == N::ThreeVariableTheta2 { 2 } else { 3 };
                let l1 = &p_xy(x, u)? * &th(j, &two(y), &t2)?;
                let l2 = &p_xy(y, u)? * &th(j, &two(x), &t2)?;
                let r = &th(j, &two(u), &t2)? * &p_xy(x, y)?;
                (vec![l1, -l2], vec![r])
            }
            N::CubicThirdTau => {
                let (x, y) = (&vars[0], &vars[1]);
                let mut t3 = tau.clone();
                t3.re /= 3u32;
                t3.im /= 3u32;
                let (ax, ay) = (t1(x)?, t1(y)?);
                let l1 = &ax.powi(3) * &th(1, y, &t3)?;
                let l2 = &ay.powi(3) * &th(1, x, &t3)?;
                let ratio = &theta_null(1, &t3, prec)? / &theta_null(1, &tau, prec)?;
                let r = &(&ratio * &(&ax * &ay)) * &p_xy(x, y)?;
                (vec![l1, -l2], vec![r])
            }
            N::Theta1Theta2Product => {
                let z = &vars[0];
                let l = &t1(z)? * &th(2, z, &tau)?;
                let r = &theta_null(4, &t2, prec)? * &th(1, &two(z), &t2)?;
                (vec![l], vec![r])
            }
            N::QuarterTauShift => {
                let x = &vars[0];
                let pi = HPComplex::pi(w);
                let shift = tau.scale(&pi).scale_f64(0.25);
                let l = (&t1(&(x - &shift))? * &t1(&(x + &shift))?).scale_f64(2.0);
                // q^{-1/8} = e^{-πiτ/8}
                let q_m8 = tau.scale(&pi).scale_f64(-0.125).exp_i();
                let r = &(&q_m8 * &theta_null(2, &th_half, prec)?) * &th(4, x, &th_half)?;
                (vec![l], vec![r])
            }
            N::TangentLambert => {
                let y = &vars[0];
                let q = nome(&tau);
                let q2 = &q * &q;
                let q4 = &q2 * &q2;
                let e2 = two(y).exp_i();
                let e2i = e2.recip();
                let a = &q2 * &e2;
                let b = &q2 * &e2i;
                let num = &(&pochhammer_eval(&q2, &q2, prec)?.powi(4) * &pochhammer_eval(&a, &q2, prec)?)
                    * &pochhammer_eval(&b, &q2, prec)?;
                let den = &pochhammer_eval(&q4, &q4, prec)?.powi(2)
                    * &(&pochhammer_eval(&neg(a), &q2, prec)? * &pochhammer_eval(&neg(b), &q2, prec)?);
                let tan = y.tan();
                let lhs = &(&tan * &num) / &den;
                let one = HPComplex::one(w);
                // 4 Σ (-1)ⁿ q^{2n}/(1+q^{2n}) sin 2ny
                let lr = 2.0 * q.log2_abs() + 2.0 * y.im.to_f64().abs() * std::f64::consts::LOG2_E;
                let (mut qn, mut en, mut emn) = (q2.clone(), e2.clone(), e2i.clone());
                let s = series_sum(w, lr, 0, |n| {
                    let sin = (&en - &emn).mul_i().scale_f64(-0.5);
                    let mut t = &(&qn / &(&one + &qn)) * &sin;
                    if n % 2 == 1 {
                        t = -t;
                    }
                    qn = &qn * &q2;
                    en = &en * &e2;
                    emn = &emn * &e2i;
                    t.scale_f64(4.0)
                })?;
                (vec![lhs], vec![tan, s])
            }
            N::Theta4FourthLambert | N::Theta4EighthLambert => {
                let q = nome(&tau);
                let one = HPComplex::one(w);
                let t4 = theta_null(4, &tau, prec)?;
                let fourth = self == N::Theta4FourthLambert;
                let lr = q.log2_abs();
                let mut qn = q.clone();
                let s = series_sum(w, lr, if fourth { 1 } else { 3 }, |n| {
                    let nf = n as f64;
                    let t = if fourth {
                        // (-1)ⁿ n qⁿ/(1+qⁿ)
                        let v = (&qn / &(&one + &qn)).scale_f64(8.0 * nf);
                        if n % 2 == 1 { -v } else { v }
                    } else {
                        // n³ (-q)ⁿ/(1-qⁿ)
                        let v = (&qn / &(&one - &qn)).scale_f64(16.0 * nf * nf * nf);
                        if n % 2 == 1 { -v } else { v }
                    };
                    qn = &qn * &q;
                    t
                })?;
                let lhs = t4.powi(if fourth { 4 } else { 8 });
                (vec![lhs], vec![one, s])
            }
            N::LogDerivTheta1 | N::LogDerivTheta3 => {
                let x = &vars[0];
                let (j, which) = if self == N::LogDerivTheta1 { (1, LogDeriv::Theta1) } else { (3, LogDeriv::Theta3) };
                let direct = &theta_deriv_eval(j, 1, x, &tau, prec)? / &th(j, x, &tau)?;
                (vec![direct], vec![log_deriv_series_eval(which, x, &tau, prec)?])
            }
            N::Imaginary(t) => {
                let (l, r) = t.sides(&vars[0], &tau, prec)?;
                (vec![l], vec![r])
            }
        })
    }

    /// `|LHS - RHS|` and `max(|LHS|, |RHS|, largest term)`.
    pub fn residual(self, vars: &[HPComplex], tau: &HPComplex, prec: u32) -> Result<(Float, Float)> {
        let (l, r) = self.terms(vars, tau, prec)?;
        Ok(judge(&l, &r))
    }
}

/// Residual and scale of a two-sided sum of terms.
pub fn judge(lhs: &[HPComplex], rhs: &[HPComplex]) -> (Float, Float) {
    let w = lhs.iter().chain(rhs).map(HPComplex::prec).max().unwrap_or(64);
    let sum = |v: &[HPComplex]| v.iter().fold(HPComplex::zero(w), |acc, t| &acc + t);
    let (ls, rs) = (sum(lhs), sum(rhs));
    let residual = (&ls - &rs).abs();
    let mut scale = ls.abs().max(&rs.abs());
    for t in lhs.iter().chain(rhs) {
        scale = scale.max(&t.abs());
    }
    (residual, scale)
}

/// `Σ_{n≥1} term(n)` where `|term(n)| ≲ n^deg 2^{n·lr}`, stopped once the
/// geometric tail is below `2^{-w-10}` relative to the largest term.
pub(crate) fn series_sum(w: u32, lr: f64, deg: u32, mut term: impl FnMut(u32) -> HPComplex) -> Result<HPComplex> {
    if lr >= -0.25 {
        return Err(Error::Divergent(format!("series ratio 2^{lr} too close to 1")));
    }
    let mut sum = HPComplex::zero(w);
    let mut tmax = 0.0f64;
    let tail = -(1.0 - (lr / 2.0).exp2()).log2() + 4.0;
    let mut n = 1u32;
    loop {
        let nf = n as f64;
        let lb = nf * lr + deg as f64 * nf.log2() + 4.0;
        tmax = tmax.max(lb);
        let ratio_ok = deg as f64 * ((nf + 1.0) / nf).log2() <= -lr / 2.0;
        if ratio_ok && lb + tail < tmax - w as f64 - TAIL_GUARD {
            break;
        }
        sum += &term(n);
        n += 1;
    }
    Ok(sum)
}

impl fmt::Display for NumericIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for NumericIdentity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        NumericIdentity::all()
            .into_iter()
            .find(|v| v.id() == s)
            .ok_or_else(|| Error::Unknown { kind: "numeric identity", name: s.to_string() })
    }
}

/// A catalog entry bound to a sampling domain.
#[derive(Clone, Debug)]
pub struct IdentityCase {
    pub identity: NumericIdentity,
    pub domain: SampleDomain,
}

impl IdentityCase {
    pub fn new(identity: NumericIdentity) -> Self {
        IdentityCase { identity, domain: identity.default_domain() }
    }

    /// Same identity with `τ` restricted to the given values.
    pub fn with_taus(identity: NumericIdentity, taus: &[[f64; 2]]) -> Self {
        let mut domain = identity.default_domain();
        domain.fixed_tau = Some(taus.to_vec());
        IdentityCase { identity, domain }
    }
}

/// `τ` values used for the addition-formula catalog.
pub const ADDITION_TAUS: [[f64; 2]; 2] = [[0.1, 1.0], [-0.3, 1.4]];

/// The catalog for `suite` with its default domains.
pub fn suite_cases(suite: Suite) -> Vec<IdentityCase> {
    NumericIdentity::members(suite)
        .into_iter()
        .map(|id| match suite {
            Suite::Addition => IdentityCase::with_taus(id, &ADDITION_TAUS),
            _ => IdentityCase::new(id),
        })
        .collect()
}

impl SampledCase for IdentityCase {
    fn id(&self) -> String {
        self.identity.id().to_string()
    }

    fn formula(&self) -> &'static str {
        self.identity.formula()
    }

    fn arity(&self) -> usize {
        self.identity.arity()
    }

    fn domain(&self) -> SampleDomain {
        self.domain.clone()
    }

    fn admissible(&self, a: &Assignment) -> bool {
        self.identity.admissible(a)
    }

    fn residual(&self, a: &Assignment, prec: u32) -> Result<(Float, Float)> {
        let w = working_prec(prec);
        let tau = a.tau_hp(w).ok_or_else(|| Error::InvalidArgument("assignment carries no tau".into()))?;
        self.identity.residual(&a.vars_hp(w), &tau, prec)
    }
}

/// Residual and scale of `case` at one assignment.
pub fn identity_residual(case: &IdentityCase, a: &Assignment, prec: u32) -> Result<(Float, Float)> {
    case.residual(a, prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::verify::{relative_log2, verify_case};

    const P: u32 = 128;

    #[test]
    fn every_identity_passes_a_few_samples() {
        for id in NumericIdentity::all() {
            let case = match id.suite() {
                Suite::Addition => IdentityCase::with_taus(id, &ADDITION_TAUS),
                _ => IdentityCase::new(id),
            };
            let out = verify_case(&case, 11, 4, P);
            assert!(out.pass, "{id}: worst 2^{} errors {}", out.max_rel_log2, out.errors);
        }
    }

    #[test]
    fn product_identity_at_origin() {
        let w = working_prec(P);
        let zero = HPComplex::zero(w);
        let tau = HPComplex::from_f64(w, 0.1, 1.0);
        let (l, r) = N::ProductTheta1Theta1.terms(&[zero.clone(), zero], &tau, P).unwrap();
        assert!(l[0].is_zero());
        let (res, _) = judge(&l, &r);
        assert!(res.is_zero());
    }

    #[test]
    fn four_variable_at_y_equal_u() {
        let w = working_prec(P);
        let v = |a, b| HPComplex::from_f64(w, a, b);
        let tau = v(-0.3, 1.4);
        let u = v(0.4, 0.1);
        let (res, scale) = N::FourVariable.residual(&[v(1.1, -0.2), u.clone(), u, v(-0.7, 0.3)], &tau, P).unwrap();
        assert!(relative_log2(&res, &scale) < -(P as f64));
    }

    #[test]
    fn arity_checked() {
        let w = working_prec(P);
        let tau = HPComplex::from_f64(w, 0.0, 1.0);
        assert!(matches!(N::FourVariable.terms(&[], &tau, P), Err(Error::Arity { expected: 4, got: 0 })));
    }

    #[test]
    fn ids_parse() {
        for id in NumericIdentity::all() {
            assert_eq!(id.id().parse::<NumericIdentity>().unwrap(), id);
            assert_eq!(id.roles().len(), id.arity());
        }
        assert_eq!(NumericIdentity::all().len(), 24);
    }
}
