//! Gosper's q-analogues of sine and cosine and the constant `Π_q`.
//!
//! With `q = e^{πiτ}` and `τ' = -1/τ`,
//! `sin_q z = θ₁(z|τ')/ϑ₂(τ')` and `cos_q z = θ₂(z|τ')/ϑ₂(τ')`.
//! The product definitions are available as a second route.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rug::Float;

use crate::error::{Error, Result};
use crate::numeric::{
    judge, nome, pochhammer_eval, relative_log2, series_sum, theta_deriv_eval, theta_null, working_prec,
    Assignment, HPComplex, SampleDomain, SampledCase,
};

/// A nome `q` with `|q| < 1` together with the matching `τ` and `τ'`.
#[derive(Clone, Debug)]
pub struct QTrigContext {
    q: HPComplex,
    tau: HPComplex,
    tau_p: HPComplex,
    prec: u32,
}

impl QTrigContext {
    /// Context for a complex nome; `τ = ln q/(πi)` on the principal branch.
    pub fn new(q: &HPComplex, prec: u32) -> Result<Self> {
        let w = working_prec(prec);
        let q = q.with_prec(w);
        let lq = q.log2_abs();
        if q.is_zero() || lq >= 0.0 {
            return Err(Error::BadNome(lq.exp2()));
        }
        let inv_pi = Float::with_val(w, 1) / HPComplex::pi(w);
        let tau = q.ln().mul_i().scale(&inv_pi).scale_f64(-1.0);
        Ok(QTrigContext { q, ..QTrigContext::from_tau(&tau, prec)? })
    }

    pub fn real(q: f64, prec: u32) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::BadNome(q));
        }
        QTrigContext::new(&HPComplex::from_f64(working_prec(prec), q, 0.0), prec)
    }

    pub fn from_tau(tau: &HPComplex, prec: u32) -> Result<Self> {
        let w = working_prec(prec);
        let tau = tau.with_prec(w);
        if !(tau.im.is_finite() && tau.im.is_sign_positive() && !tau.im.is_zero()) {
            return Err(Error::BadTau(tau.im.to_f64()));
        }
        let tau_p = -tau.recip();
        Ok(QTrigContext { q: nome(&tau), tau, tau_p, prec })
    }

    pub fn q(&self) -> &HPComplex {
        &self.q
    }

    pub fn tau(&self) -> &HPComplex {
        &self.tau
    }

    pub fn tau_prime(&self) -> &HPComplex {
        &self.tau_p
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Context for `q^{num/den}` on the branch fixed by `τ`.
    pub fn power(&self, num: u32, den: u32) -> QTrigContext {
        let mut tau = self.tau.scale_f64(num as f64);
        tau.re /= den;
        tau.im /= den;
        QTrigContext::from_tau(&tau, self.prec).expect("positive multiple of τ stays in the upper half-plane")
    }

    /// `q^x = e^{πiτx}`.
    fn q_pow(&self, x: &HPComplex) -> HPComplex {
        let pi = HPComplex::pi(self.tau.prec());
        (&self.tau * x).scale(&pi).exp_i()
    }

    pub fn is_real(&self) -> bool {
        self.q.im.is_zero() && self.q.re.is_sign_positive()
    }

    fn require_real(&self, what: &str) -> Result<()> {
        if self.is_real() {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("{what} needs a real nome in (0,1)")))
        }
    }

    fn ln_q(&self) -> HPComplex {
        self.tau.scale(&HPComplex::pi(self.tau.prec())).mul_i()
    }
}

fn trig_deriv(ctx: &QTrigContext, j: u8, z: &HPComplex, order: u32) -> Result<HPComplex> {
    let num = theta_deriv_eval(j, order, z, &ctx.tau_p, ctx.prec)?;
    Ok(&num / &theta_null(2, &ctx.tau_p, ctx.prec)?)
}

pub fn sin_q(ctx: &QTrigContext, z: &HPComplex) -> Result<HPComplex> {
    trig_deriv(ctx, 1, z, 0)
}

pub fn cos_q(ctx: &QTrigContext, z: &HPComplex) -> Result<HPComplex> {
    trig_deriv(ctx, 2, z, 0)
}

/// `d^k/dz^k sin_q z`, `k ≤ 4`.
pub fn sin_q_deriv(ctx: &QTrigContext, z: &HPComplex, order: u32) -> Result<HPComplex> {
    trig_deriv(ctx, 1, z, order)
}

/// `d^k/dz^k cos_q z`, `k ≤ 4`.
pub fn cos_q_deriv(ctx: &QTrigContext, z: &HPComplex, order: u32) -> Result<HPComplex> {
    trig_deriv(ctx, 2, z, order)
}

/// `sin_q(πw) = q^{(w-1/2)²} (q^{2-2w};q²)_∞ (q^{2w};q²)_∞ / (q;q²)_∞²` at `w = z/π`.
pub fn sin_q_product(ctx: &QTrigContext, z: &HPComplex) -> Result<HPComplex> {
    product_route(ctx, z, true)
}

/// `cos_q(πw) = q^{w²} (q^{1-2w};q²)_∞ (q^{1+2w};q²)_∞ / (q;q²)_∞²` at `w = z/π`.
pub fn cos_q_product(ctx: &QTrigContext, z: &HPComplex) -> Result<HPComplex> {
    product_route(ctx, z, false)
}

fn product_route(ctx: &QTrigContext, z: &HPComplex, sine: bool) -> Result<HPComplex> {
    let w = working_prec(ctx.prec);
    let inv_pi = Float::with_val(w, 1) / HPComplex::pi(w);
    let x = z.with_prec(w).scale(&inv_pi);
    let one = HPComplex::one(w);
    let q2 = &ctx.q * &ctx.q;
    let two_x = x.scale_f64(2.0);
    let (lead, a, b) = if sine {
        let h = &x - &one.scale_f64(0.5);
        (&h * &h, &one.scale_f64(2.0) - &two_x, two_x.clone())
    } else {
        (&x * &x, &one - &two_x, &one + &two_x)
    };
    let num = &pochhammer_eval(&ctx.q_pow(&a), &q2, ctx.prec)? * &pochhammer_eval(&ctx.q_pow(&b), &q2, ctx.prec)?;
    let den = pochhammer_eval(&ctx.q, &q2, ctx.prec)?.powi(2);
    Ok(&(&ctx.q_pow(&lead) * &num) / &den)
}

/// `Π_q` together with the `τ` it was computed for.
#[derive(Clone, Debug)]
pub struct PiQValue {
    pub tau: HPComplex,
    pub value: HPComplex,
}

/// `Π_q = q^{1/4} (q²;q²)_∞² / (q;q²)_∞²`.
pub fn pi_q(ctx: &QTrigContext) -> Result<PiQValue> {
    let w = working_prec(ctx.prec);
    let q2 = &ctx.q * &ctx.q;
    let ratio = &pochhammer_eval(&q2, &q2, ctx.prec)? / &pochhammer_eval(&ctx.q, &q2, ctx.prec)?;
    let value = &ctx.q_pow(&HPComplex::from_f64(w, 0.25, 0.0)) * &ratio.powi(2);
    Ok(PiQValue { tau: ctx.tau.clone(), value })
}

/// `Π_{qⁿ}` with `qⁿ` substituted into the product.
fn pi_of(ctx: &QTrigContext, n: u32) -> Result<HPComplex> {
    Ok(pi_q(&QTrigContext::new(&ctx.q.powi(n as i32), ctx.prec)?)?.value)
}

fn cbrt(z: &HPComplex) -> HPComplex {
    if z.im.is_zero() {
        HPComplex::real(z.re.clone().cbrt())
    } else {
        z.powc(&HPComplex::from_f64(z.prec(), 1.0 / 3.0, 0.0))
    }
}

/// Reject `d` when it vanishes to within the requested precision.
fn nonvanishing(d: HPComplex, scale: f64, prec: u32, what: &str) -> Result<HPComplex> {
    if d.log2_abs() - scale.max(0.0) < -(prec as f64) + 24.0 {
        return Err(Error::Pole(format!("{what} vanishes")));
    }
    Ok(d)
}

/// Identities between `sin_q`, `cos_q` and `Π_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QTrigIdentity {
    SinSumDifference,
    SinDerivativeSquare,
    CosSecondDerivativeOrigin,
    CosDoubleAngle,
    FourVariableSinCos,
    SecondDerivativeThreeVariable,
    HalfNomeSecondDerivative,
    CubicNomeProduct,
    CubicNomeSine,
    SinPiSixthCube,
    CosPiSixthCube,
    Theta3PochhammerQuotient,
    PiRatioTheta(u32),
    PiNineRelation,
    PiCubeRootRelation,
    PiCubeRootLinear,
}

use QTrigIdentity as Q;

/// Nomes the trigonometric catalog is checked at.
pub const CATALOG_NOMES: [f64; 3] = [0.2, 0.5, 0.8];
/// Nomes the relations between `Π_q`, `Π_{q³}` and `Π_{q⁹}` are checked at.
pub const PI_NOMES: [f64; 4] = [0.3, 0.5, 0.7, 0.9];

impl QTrigIdentity {
    pub fn all() -> Vec<QTrigIdentity> {
        vec![
            Q::SinSumDifference,
            Q::SinDerivativeSquare,
            Q::CosSecondDerivativeOrigin,
            Q::CosDoubleAngle,
            Q::FourVariableSinCos,
            Q::SecondDerivativeThreeVariable,
            Q::HalfNomeSecondDerivative,
            Q::CubicNomeProduct,
            Q::CubicNomeSine,
            Q::SinPiSixthCube,
            Q::CosPiSixthCube,
            Q::Theta3PochhammerQuotient,
            Q::PiRatioTheta(2),
            Q::PiRatioTheta(3),
            Q::PiRatioTheta(5),
            Q::PiNineRelation,
            Q::PiCubeRootRelation,
            Q::PiCubeRootLinear,
        ]
    }

    pub fn id(self) -> String {
        let s = match self {
            Q::SinSumDifference => "sin-sum-difference",
            Q::SinDerivativeSquare => "sin-derivative-square",
            Q::CosSecondDerivativeOrigin => "cos-second-derivative-origin",
            Q::CosDoubleAngle => "cos-double-angle",
            Q::FourVariableSinCos => "four-variable-sin-cos",
            Q::SecondDerivativeThreeVariable => "second-derivative-three-variable",
            Q::HalfNomeSecondDerivative => "half-nome-second-derivative",
            Q::CubicNomeProduct => "cubic-nome-product",
            Q::CubicNomeSine => "cubic-nome-sine",
            Q::SinPiSixthCube => "sin-pi-sixth-cube",
            Q::CosPiSixthCube => "cos-pi-sixth-cube",
            Q::Theta3PochhammerQuotient => "theta3-pochhammer-quotient",
            Q::PiRatioTheta(n) => return format!("pi-ratio-theta-{n}"),
            Q::PiNineRelation => "pi-nine-relation",
            Q::PiCubeRootRelation => "pi-cube-root-relation",
            Q::PiCubeRootLinear => "pi-cube-root-linear",
        };
        s.to_string()
    }

    pub fn formula(self) -> &'static str {
        match self {
            Q::SinSumDifference => "sin_q(x+y)sin_q(x-y) = sin_q²x cos_q²y - cos_q²x sin_q²y",
            Q::SinDerivativeSquare => "(sin_q'z)² = sin_q z sin_q''z + (sin_q'0)²cos_q²z - cos_q''0 sin_q²z",
            Q::CosSecondDerivativeOrigin => {
                "cos_q''0 = (sin_q'0)² + 2cos_√q''0 = (2 ln q/π²)(1 - 4 ln q Σ q^{2n-1}/(1-q^{2n-1})²)"
            }
            Q::CosDoubleAngle => "cos_q(2x) = cos_q⁴x - sin_q⁴x",
            Q::FourVariableSinCos => {
                "sin_q(x-u)sin_q(x+u)cos_q(y-v)cos_q(y+v) - cos_q(x-v)cos_q(x+v)sin_q(y-u)sin_q(y+u) = cos_q(u-v)cos_q(u+v)sin_q(x+y)sin_q(x-y)"
            }
            Q::SecondDerivativeThreeVariable => {
                "cos_q(z-v)cos_q(z+v)W_s(u) + sin_q(z-u)sin_q(z+u)W_c(v) = cos_q(u-v)cos_q(u+v)W_s(z), W_s = sin_q'² - sin_q''sin_q, W_c = cos_q'² - cos_q''cos_q"
            }
            Q::HalfNomeSecondDerivative => {
                "cos_q''0 cos_√q(2z) = (sin_q'z)² - sin_q z sin_q''z + 2cos_√q''0 cos_q²z"
            }
            Q::CubicNomeProduct => {
                "sin_q³(y)cos_q³x - cos_q³(x)sin_q³y = 3Π_q³/Π_q cos_q x sin_q y cos_q(x-y)cos_q(x+y) (first factors at nome q³)"
            }
            Q::CubicNomeSine => "sin_{q³}y - sin_q³y = 3Π_{q³}/Π_q sin_q y cos_q²y",
            Q::SinPiSixthCube => "sin_{q³}(π/6)³ = 1/((Π_q/Π_{q³})² - 1)",
            Q::CosPiSixthCube => "cos_{q³}(π/6)³ = (Π_q/Π_{q³})^{3/2}/((Π_q/Π_{q³})² - 1)",
            Q::Theta3PochhammerQuotient => "Σ q^{n²} = (-q;-q)_∞/(q;-q)_∞",
            Q::PiRatioTheta(_) => "Π_q/Π_{qⁿ} = n ϑ1'(τ')ϑ2(τ'/n)/(ϑ1'(τ'/n)ϑ2(τ'))",
            Q::PiNineRelation => "√(Π_q Π_{q⁹})(Π_q + 3Π_{q⁹}) = Π_{q³}² + 3Π_q Π_{q⁹}",
            Q::PiCubeRootRelation => {
                "1/∛((Π_{q³}/Π_{q⁹})² - 1) - 1/((Π_q/Π_{q³})² - 1) = 3Π_qΠ_{q⁹}/Π_{q³}² · 1/((Π_q/Π_{q³})² - 1)"
            }
            Q::PiCubeRootLinear => "∛((Π_{q³}/Π_{q⁹})² - 1) = √(Π_q/Π_{q⁹}) - 1",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Q::SinSumDifference | Q::CubicNomeProduct => 2,
            Q::SinDerivativeSquare | Q::CosDoubleAngle | Q::HalfNomeSecondDerivative | Q::CubicNomeSine => 1,
            Q::FourVariableSinCos => 4,
            Q::SecondDerivativeThreeVariable => 3,
            _ => 0,
        }
    }

    /// Nomes this identity is checked at by default.
    pub fn default_nomes(self) -> &'static [f64] {
        match self {
            Q::PiNineRelation | Q::PiCubeRootRelation | Q::PiCubeRootLinear => &PI_NOMES,
            _ => &CATALOG_NOMES,
        }
    }

    /// Each identity as one or more equations, every side a sum of terms.
    pub fn equations(self, vars: &[HPComplex], ctx: &QTrigContext) -> Result<Vec<(Vec<HPComplex>, Vec<HPComplex>)>> {
        if vars.len() != self.arity() {
            return Err(Error::Arity { expected: self.arity(), got: vars.len() });
        }
        let w = working_prec(ctx.prec);
        let v: Vec<HPComplex> = vars.iter().map(|z| z.with_prec(w)).collect();
        let zero = HPComplex::zero(w);
        let one = HPComplex::one(w);
        let s = |z: &HPComplex| sin_q(ctx, z);
        let c = |z: &HPComplex| cos_q(ctx, z);
        let sd = |z: &HPComplex, k| sin_q_deriv(ctx, z, k);
        let cd = |z: &HPComplex, k| cos_q_deriv(ctx, z, k);
        let sq = |z: HPComplex| &z * &z;
        let pi6 = HPComplex::real(HPComplex::pi(w) / 6u32);
        let eq = |l: Vec<HPComplex>, r: Vec<HPComplex>| vec![(l, r)];
        if matches!(
            self,
            Q::CosSecondDerivativeOrigin | Q::HalfNomeSecondDerivative | Q::PiNineRelation | Q::PiCubeRootRelation | Q::PiCubeRootLinear
        ) {
            ctx.require_real(&self.id())?;
        }

        Ok(match self {
            Q::SinSumDifference => {
                let (x, y) = (&v[0], &v[1]);
                let l = &s(&(x + y))? * &s(&(x - y))?;
                let r1 = &sq(s(x)?) * &sq(c(y)?);
                let r2 = &sq(c(x)?) * &sq(s(y)?);
                eq(vec![l], vec![r1, -r2])
            }
            Q::SinDerivativeSquare => {
                let z = &v[0];
                let (s0, s1, s2) = (s(z)?, sd(z, 1)?, sd(z, 2)?);
                let r1 = &s0 * &s2;
                let r2 = &sq(sd(&zero, 1)?) * &sq(c(z)?);
                let r3 = &cd(&zero, 2)? * &sq(s0.clone());
                eq(vec![sq(s1)], vec![r1, r2, -r3])
            }
            Q::CosSecondDerivativeOrigin => {
                let half = ctx.power(1, 2);
                let c2 = cd(&zero, 2)?;
                let e1 = (vec![c2.clone()], vec![sq(sd(&zero, 1)?), cos_q_deriv(&half, &zero, 2)?.scale_f64(2.0)]);
                let lnq = ctx.ln_q();
                let q2 = &ctx.q * &ctx.q;
                let mut qk = ctx.q.clone();
                let sum = series_sum(w, 2.0 * ctx.q.log2_abs(), 0, |_| {
                    let d = &one - &qk;
                    let t = &qk / &(&d * &d);
                    qk = &qk * &q2;
                    t
                })?;
                let pi2 = HPComplex::pi(w).square();
                let pre = lnq.scale_f64(2.0).scale(&(Float::with_val(w, 1) / pi2));
                let inner = &one - &(&lnq * &sum).scale_f64(4.0);
                let e2 = (vec![c2], vec![&pre * &inner]);
                vec![e1, e2]
            }
            Q::CosDoubleAngle => {
                let x = &v[0];
                eq(vec![c(&x.scale_f64(2.0))?], vec![c(x)?.powi(4), -s(x)?.powi(4)])
            }
            Q::FourVariableSinCos => {
                let (x, y, u, vv) = (&v[0], &v[1], &v[2], &v[3]);
                let ss = |a: &HPComplex, b: &HPComplex| -> Result<HPComplex> { Ok(&s(&(a - b))? * &s(&(a + b))?) };
                let cc = |a: &HPComplex, b: &HPComplex| -> Result<HPComplex> { Ok(&c(&(a - b))? * &c(&(a + b))?) };
                let l1 = &ss(x, u)? * &cc(y, vv)?;
                let l2 = &cc(x, vv)? * &ss(y, u)?;
                let r = &cc(u, vv)? * &ss(x, y)?;
                eq(vec![l1, -l2], vec![r])
            }
            Q::SecondDerivativeThreeVariable => {
                let (z, u, vv) = (&v[0], &v[1], &v[2]);
                let ws = |a: &HPComplex| -> Result<HPComplex> { Ok(&sq(sd(a, 1)?) - &(&sd(a, 2)? * &s(a)?)) };
                let wc = |a: &HPComplex| -> Result<HPComplex> { Ok(&sq(cd(a, 1)?) - &(&cd(a, 2)? * &c(a)?)) };
                let l1 = &(&c(&(z - vv))? * &c(&(z + vv))?) * &ws(u)?;
                let l2 = &(&s(&(z - u))? * &s(&(z + u))?) * &wc(vv)?;
                let r = &(&c(&(u - vv))? * &c(&(u + vv))?) * &ws(z)?;
                eq(vec![l1, l2], vec![r])
            }
            Q::HalfNomeSecondDerivative => {
                let z = &v[0];
                let half = ctx.power(1, 2);
                let l = &cd(&zero, 2)? * &cos_q(&half, &z.scale_f64(2.0))?;
                let s0 = s(z)?;
                let r1 = sq(sd(z, 1)?);
                let r2 = &s0 * &sd(z, 2)?;
                let r3 = (&cos_q_deriv(&half, &zero, 2)? * &sq(c(z)?)).scale_f64(2.0);
                eq(vec![l], vec![r1, -r2, r3])
            }
            Q::CubicNomeProduct | Q::CubicNomeSine => {
                let cube = ctx.power(3, 1);
                let k = (&pi_of(ctx, 3)? / &pi_of(ctx, 1)?).scale_f64(3.0);
                if self == Q::CubicNomeSine {
                    let y = &v[0];
                    let sy = s(y)?;
                    let r = &(&k * &sy) * &sq(c(y)?);
                    eq(vec![sin_q(&cube, y)?, -sy.powi(3)], vec![r])
                } else {
                    let (x, y) = (&v[0], &v[1]);
                    let (cx, sy) = (c(x)?, s(y)?);
                    let l1 = &sin_q(&cube, y)? * &cx.powi(3);
                    let l2 = &cos_q(&cube, x)? * &sy.powi(3);
                    let r = &(&(&k * &cx) * &sy) * &(&c(&(x - y))? * &c(&(x + y))?);
                    eq(vec![l1, -l2], vec![r])
                }
            }
            Q::SinPiSixthCube | Q::CosPiSixthCube => {
                let cube = ctx.power(3, 1);
                let r = &pi_of(ctx, 1)? / &pi_of(ctx, 3)?;
                let r2 = sq(r.clone());
                let den = nonvanishing(&r2 - &one, r2.log2_abs(), ctx.prec, "(Π_q/Π_{q³})² - 1")?;
                if self == Q::SinPiSixthCube {
                    eq(vec![sin_q(&cube, &pi6)?.powi(3)], vec![den.recip()])
                } else {
                    let r32 = &r * &r.sqrt();
                    eq(vec![cos_q(&cube, &pi6)?.powi(3)], vec![&r32 / &den])
                }
            }
            Q::Theta3PochhammerQuotient => {
                let mq = -ctx.q.clone();
                let r = &pochhammer_eval(&mq, &mq, ctx.prec)? / &pochhammer_eval(&ctx.q, &mq, ctx.prec)?;
                eq(vec![theta_null(3, &ctx.tau, ctx.prec)?], vec![r])
            }
            Q::PiRatioTheta(n) => {
                let tp = &ctx.tau_p;
                let tpn = ctx.power(n, 1).tau_p;
                let l = &pi_of(ctx, 1)? / &pi_of(ctx, n)?;
                let num = (&theta_null(1, tp, ctx.prec)? * &theta_null(2, &tpn, ctx.prec)?).scale_f64(n as f64);
                let den = &theta_null(1, &tpn, ctx.prec)? * &theta_null(2, tp, ctx.prec)?;
                eq(vec![l], vec![&num / &den])
            }
            Q::PiNineRelation => {
                let (p1, p3, p9) = (pi_of(ctx, 1)?, pi_of(ctx, 3)?, pi_of(ctx, 9)?);
                let p19 = &p1 * &p9;
                let l = &p19.sqrt() * &(&p1 + &p9.scale_f64(3.0));
                eq(vec![l], vec![sq(p3), p19.scale_f64(3.0)])
            }
            Q::PiCubeRootRelation | Q::PiCubeRootLinear => {
                let (p1, p3, p9) = (pi_of(ctx, 1)?, pi_of(ctx, 3)?, pi_of(ctx, 9)?);
                let a = &sq(&p3 / &p9) - &one;
                let x = cbrt(&a);
                if self == Q::PiCubeRootLinear {
                    let y = (&p1 / &p9).sqrt();
                    eq(vec![x], vec![y, -one])
                } else {
                    let r2 = sq(&p1 / &p3);
                    let d = nonvanishing(&r2 - &one, r2.log2_abs(), ctx.prec, "(Π_q/Π_{q³})² - 1")?;
                    let x = nonvanishing(x, 0.0, ctx.prec, "cube root")?;
                    let di = d.recip();
                    let k = &(&p1 * &p9) / &sq(p3);
                    eq(vec![x.recip(), -di.clone()], vec![(&k * &di).scale_f64(3.0)])
                }
            }
        })
    }

    /// Residual and scale of the worst equation.
    pub fn residual(self, vars: &[HPComplex], ctx: &QTrigContext) -> Result<(Float, Float)> {
        let mut worst: Option<(f64, (Float, Float))> = None;
        for (l, r) in self.equations(vars, ctx)? {
            let (res, scale) = judge(&l, &r);
            let rel = relative_log2(&res, &scale);
            if worst.as_ref().is_none_or(|(w, _)| rel > *w) {
                worst = Some((rel, (res, scale)));
            }
        }
        Ok(worst.expect("every identity has an equation").1)
    }
}

impl fmt::Display for QTrigIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl FromStr for QTrigIdentity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        QTrigIdentity::all()
            .into_iter()
            .find(|v| v.id() == s)
            .ok_or_else(|| Error::Unknown { kind: "q-trig identity", name: s.to_string() })
    }
}

/// Residual and scale of `id` at the variables of `a`.
pub fn qtrig_identity_residual(id: QTrigIdentity, a: &Assignment, ctx: &QTrigContext) -> Result<(Float, Float)> {
    id.residual(&a.vars_hp(working_prec(ctx.prec)), ctx)
}

/// An identity at a fixed real nome, sampled over its variables.
#[derive(Clone, Copy, Debug)]
pub struct QTrigCase {
    pub identity: QTrigIdentity,
    pub q: f64,
}

impl QTrigCase {
    /// Points needed for `requested` samples; constant identities need one.
    pub fn sample_count(&self, requested: usize) -> usize {
        if self.identity.arity() == 0 {
            requested.min(1)
        } else {
            requested
        }
    }
}

impl SampledCase for QTrigCase {
    fn id(&self) -> String {
        format!("{}@q={}", self.identity.id(), self.q)
    }

    fn formula(&self) -> &'static str {
        self.identity.formula()
    }

    fn arity(&self) -> usize {
        self.identity.arity()
    }

    fn domain(&self) -> SampleDomain {
        SampleDomain { z_re_max: PI, ..SampleDomain::tau_free() }
    }

    fn residual(&self, a: &Assignment, prec: u32) -> Result<(Float, Float)> {
        let ctx = QTrigContext::real(self.q, prec)?;
        qtrig_identity_residual(self.identity, a, &ctx)
    }
}

/// Every identity at each of its default nomes.
pub fn qtrig_cases() -> Vec<QTrigCase> {
    QTrigIdentity::all()
        .into_iter()
        .flat_map(|identity| identity.default_nomes().iter().map(move |&q| QTrigCase { identity, q }))
        .collect()
}

/// Polynomial in two variables with integer coefficients, keyed by
/// `(deg x, deg y)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BiPoly(BTreeMap<(u32, u32), i64>);

impl BiPoly {
    /// From `(coefficient, deg x, deg y)` triples.
    pub fn from_terms(terms: &[(i64, u32, u32)]) -> Self {
        let mut p = BiPoly::default();
        for &(c, i, j) in terms {
            p.add_term(c, i, j);
        }
        p
    }

    fn add_term(&mut self, c: i64, i: u32, j: u32) {
        let e = self.0.entry((i, j)).or_insert(0);
        *e += c;
        if *e == 0 {
            self.0.remove(&(i, j));
        }
    }

    pub fn mul(&self, other: &BiPoly) -> BiPoly {
        let mut p = BiPoly::default();
        for (&(i, j), &a) in &self.0 {
            for (&(k, l), &b) in &other.0 {
                p.add_term(a * b, i + k, j + l);
            }
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

/// `y⁴ - 3xy² - x⁴ - x³ - x - 1 = (y - x - 1)(y + x + 1)(y² + x² - x + 1)`,
/// checked by exact expansion.
pub fn quartic_factorization_holds() -> bool {
    let lhs = BiPoly::from_terms(&[(1, 0, 4), (-3, 1, 2), (-1, 4, 0), (-1, 3, 0), (-1, 1, 0), (-1, 0, 0)]);
    let a = BiPoly::from_terms(&[(1, 0, 1), (-1, 1, 0), (-1, 0, 0)]);
    let b = BiPoly::from_terms(&[(1, 0, 1), (1, 1, 0), (1, 0, 0)]);
    let c = BiPoly::from_terms(&[(1, 0, 2), (1, 2, 0), (-1, 1, 0), (1, 0, 0)]);
    a.mul(&b).mul(&c) == lhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{passes, sample_assignments, verify_case};

    const P: u32 = 128;

    fn w() -> u32 {
        working_prec(P)
    }

    fn rel(a: &HPComplex, b: &HPComplex) -> f64 {
        (a - b).log2_abs() - a.log2_abs().max(b.log2_abs()).max(0.0)
    }

    #[test]
    fn values_at_origin() {
        let ctx = QTrigContext::real(0.5, P).unwrap();
        let z = HPComplex::zero(w());
        assert!(sin_q(&ctx, &z).unwrap().is_zero());
        assert_eq!(cos_q(&ctx, &z).unwrap(), HPComplex::one(w()));
        assert!(sin_q_product(&ctx, &z).unwrap().is_zero());
        assert!(rel(&cos_q_product(&ctx, &z).unwrap(), &HPComplex::one(w())) < -(P as f64));
        assert!(cos_q_deriv(&ctx, &z, 1).unwrap().log2_abs() < -(P as f64));
    }

    #[test]
    fn product_and_theta_routes_agree() {
        let pts = sample_assignments(5, 50, 2, &SampleDomain::tau_free());
        for a in pts {
            // second coordinate picks a nome in (0.1, 0.9)
            let q = 0.5 + 0.4 * a.vars[1][0] / PI;
            let ctx = QTrigContext::real(q, P).unwrap();
            let z = HPComplex::from_f64(w(), a.vars[0][0], a.vars[0][1]);
            let (s1, s2) = (sin_q(&ctx, &z).unwrap(), sin_q_product(&ctx, &z).unwrap());
            let (c1, c2) = (cos_q(&ctx, &z).unwrap(), cos_q_product(&ctx, &z).unwrap());
            assert!(rel(&s1, &s2) < -(P as f64) + 8.0, "sin at q={q}: 2^{}", rel(&s1, &s2));
            assert!(rel(&c1, &c2) < -(P as f64) + 8.0, "cos at q={q}: 2^{}", rel(&c1, &c2));
        }
    }

    #[test]
    fn cos_is_shifted_sin() {
        let ctx = QTrigContext::real(0.3, P).unwrap();
        let half_pi = HPComplex::real(HPComplex::pi(w()) / 2u32);
        for a in sample_assignments(2, 10, 1, &SampleDomain::tau_free()) {
            let z = a.vars_hp(w()).remove(0);
            let c = cos_q(&ctx, &z).unwrap();
            assert!(rel(&c, &sin_q(&ctx, &(&half_pi - &z)).unwrap()) < -(P as f64));
            assert!(rel(&c, &sin_q(&ctx, &(&half_pi + &z)).unwrap()) < -(P as f64));
        }
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let ctx = QTrigContext::real(0.6, P).unwrap();
        let z = HPComplex::from_f64(w(), 0.8, -0.2);
        let h = HPComplex::from_f64(w(), (2.0f64).powi(-(P as i32) / 3), 0.0);
        let fd = (&sin_q(&ctx, &(&z + &h)).unwrap() - &sin_q(&ctx, &(&z - &h)).unwrap()) / h.scale_f64(2.0);
        let d = sin_q_deriv(&ctx, &z, 1).unwrap();
        assert!(rel(&fd, &d) < -(2.0 * P as f64 / 3.0) + 4.0);
    }

    #[test]
    fn pi_q_small_nome() {
        let ctx = QTrigContext::real(1e-6, P).unwrap();
        let v = pi_q(&ctx).unwrap().value;
        assert!(v.im.is_zero() && v.re.is_sign_positive());
        let ratio = v.re.to_f64() / 1e-6f64.powf(0.25);
        assert!((ratio - 1.0).abs() < 1e-5);
    }

    #[test]
    fn sin_pi_sixth_cube_at_half() {
        let ctx = QTrigContext::real(0.5, P).unwrap();
        let (r, s) = Q::SinPiSixthCube.residual(&[], &ctx).unwrap();
        assert!(passes(relative_log2(&r, &s), P));
    }

    #[test]
    fn sin_sum_difference_on_diagonal() {
        let ctx = QTrigContext::real(0.2, P).unwrap();
        let x = HPComplex::from_f64(w(), 0.4, 0.1);
        let eqs = Q::SinSumDifference.equations(&[x.clone(), x], &ctx).unwrap();
        assert!(eqs[0].0[0].is_zero());
    }

    #[test]
    fn cubic_product_at_zero_is_cubic_sine() {
        let ctx = QTrigContext::real(0.5, P).unwrap();
        let y = HPComplex::from_f64(w(), 0.9, 0.2);
        let zero = HPComplex::zero(w());
        let (r, s) = Q::CubicNomeProduct.residual(&[zero, y.clone()], &ctx).unwrap();
        assert!(passes(relative_log2(&r, &s), P));
        let (r, s) = Q::CubicNomeSine.residual(&[y], &ctx).unwrap();
        assert!(passes(relative_log2(&r, &s), P));
    }

    #[test]
    fn catalog_passes() {
        for case in qtrig_cases() {
            let out = verify_case(&case, 3, case.sample_count(3), P);
            assert!(out.pass, "{}: 2^{} errors {}", case.id(), out.max_rel_log2, out.errors);
        }
    }

    #[test]
    fn rejects_bad_nome() {
        assert!(QTrigContext::real(1.0, P).is_err());
        assert!(QTrigContext::real(0.0, P).is_err());
        assert!(QTrigContext::new(&HPComplex::from_f64(w(), 0.6, 0.9), P).is_err());
        let complex = QTrigContext::new(&HPComplex::from_f64(w(), 0.3, 0.4), P).unwrap();
        assert!(Q::HalfNomeSecondDerivative.residual(&[HPComplex::zero(w())], &complex).is_err());
        let (r, s) = Q::SinSumDifference
            .residual(&[HPComplex::from_f64(w(), 0.3, 0.1), HPComplex::from_f64(w(), -1.2, 0.2)], &complex)
            .unwrap();
        assert!(passes(relative_log2(&r, &s), P));
    }

    #[test]
    fn factorization() {
        assert!(quartic_factorization_holds());
        let wrong = BiPoly::from_terms(&[(1, 0, 1), (-1, 1, 0)]);
        assert!(!wrong.mul(&wrong).is_zero());
    }

    #[test]
    fn ids_round_trip() {
        for id in QTrigIdentity::all() {
            assert_eq!(id.id().parse::<QTrigIdentity>().unwrap(), id);
        }
    }
}
