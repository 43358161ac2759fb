use rug::Float;

use super::hp::{working_prec, HPComplex};
use crate::error::{Error, Result};

/// Extra bits demanded of every series tail beyond the working precision.
pub const TAIL_GUARD: f64 = 10.0;

/// A point `(z, τ)` with `Im τ > 0`.
#[derive(Clone, Debug)]
pub struct ThetaPoint {
    pub z: HPComplex,
    pub tau: HPComplex,
}

impl ThetaPoint {
    pub fn new(z: HPComplex, tau: HPComplex) -> Result<Self> {
        check_tau(&tau)?;
        Ok(ThetaPoint { z, tau })
    }

    /// The nome `q = e^{πiτ}`.
    pub fn nome(&self) -> HPComplex {
        nome(&self.tau)
    }
}

pub(crate) fn check_tau(tau: &HPComplex) -> Result<()> {
    if tau.im.is_sign_positive() && !tau.im.is_zero() && tau.is_finite() {
        Ok(())
    } else {
        Err(Error::BadTau(tau.im.to_f64()))
    }
}

fn check_index(j: u8) -> Result<()> {
    if (1..=4).contains(&j) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("theta index must be 1..=4, got {j}")))
    }
}

/// `e^{πiτ}`.
pub fn nome(tau: &HPComplex) -> HPComplex {
    let pi = HPComplex::pi(tau.prec());
    tau.scale(&pi).exp_i()
}

/// `e^{πiτ·t}` for a real multiple `t`.
fn nome_pow(tau: &HPComplex, t: f64) -> HPComplex {
    let pi = HPComplex::pi(tau.prec());
    tau.scale(&pi).scale_f64(t).exp_i()
}

/// `θ_j(z|τ) = K e^{-iαz} θ_index(z_red|τ)`.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub z: HPComplex,
    pub index: u8,
    pub factor: HPComplex,
    pub alpha: i64,
    /// `K e^{-iαz}` at the original `z`.
    pub multiplier: HPComplex,
}

/// θ_j(w + πτ/2) = c_j q^{-1/4} e^{-iw} θ_{σ(j)}(w).
fn half_tau(j: u8) -> (u8, HPComplex) {
    match j {
        1 => (4, HPComplex::i(2)),
        2 => (3, HPComplex::one(2)),
        3 => (2, HPComplex::one(2)),
        _ => (1, HPComplex::i(2)),
    }
}

/// θ_j(w + π/2) = s_j θ_{ρ(j)}(w).
fn half_real(j: u8) -> (u8, i32) {
    match j {
        1 => (2, 1),
        2 => (1, -1),
        3 => (4, 1),
        _ => (3, 1),
    }
}

/// Shift `z` by half periods into `|Re z| ≤ π/4`, `|Im z| ≤ π Im τ / 4`
/// (up to rounding), tracking the quasi-periodicity multiplier.
pub fn reduce_argument(j: u8, z: &HPComplex, tau: &HPComplex) -> Result<Reduction> {
    check_index(j)?;
    check_tau(tau)?;
    let p = z.prec().max(tau.prec());
    let (z, tau) = (z.with_prec(p), tau.with_prec(p));
    let pi = HPComplex::pi(p);
    let half_tau_shift = tau.scale(&pi).scale_f64(0.5);
    let half_pi = HPComplex::real(Float::with_val(p, &pi / 2u32));
    let q_m4 = nome_pow(&tau, -0.25);
    let q_m4_inv = nome_pow(&tau, 0.25);

    let mut index = j;
    let mut k = HPComplex::one(p);
    let mut alpha = 0i64;
    let mut delta = HPComplex::zero(p);

    let im_tau = tau.im.to_f64();
    let h = (2.0 * z.im.to_f64() / (std::f64::consts::PI * im_tau)).round() as i64;
    for _ in 0..h.unsigned_abs() {
        if h > 0 {
            let (next, c) = half_tau(index);
            k = &(&(&k * &c.with_prec(p)) * &q_m4) * &(&delta + &half_tau_shift).exp_i();
            alpha += 1;
            delta += &half_tau_shift;
            index = next;
        } else {
            let (next, _) = half_tau(index);
            let (_, c) = half_tau(next);
            let c_inv = c.with_prec(p).conj();
            k = &(&(&k * &c_inv) * &q_m4_inv) * &(-&delta).exp_i();
            alpha -= 1;
            delta -= &half_tau_shift;
            index = next;
        }
    }
    let re_left = (&z - &delta).re.to_f64();
    let r = (2.0 * re_left / std::f64::consts::PI).round() as i64;
    for _ in 0..r.unsigned_abs() {
        let (next, s) = half_real(index);
        if r > 0 {
            k = k.scale_f64(s as f64);
            delta += &half_pi;
        } else {
            let (_, s_back) = half_real(next);
            k = k.scale_f64(s_back as f64);
            delta -= &half_pi;
        }
        index = next;
    }
    let z_red = &z - &delta;
    let multiplier = &k * &z.scale_f64(-(alpha as f64)).exp_i();
    Ok(Reduction { z: z_red, index, factor: k, alpha, multiplier })
}

/// Term-wise differentiated defining series of `θ_j^{(d)}(z|τ)`, summed at
/// the precision of `z` until the tail is below `2^{-prec-10}` relative to the
/// largest term. Intended for reduced arguments.
fn theta_series(j: u8, d: u32, z: &HPComplex, tau: &HPComplex) -> HPComplex {
    let p = z.prec();
    let odd = j <= 2;
    let pi = std::f64::consts::PI;
    let im_tau = tau.im.to_f64();
    // log₂|q|
    let lq = -pi * im_tau * std::f64::consts::LOG2_E;
    let b = z.im.to_f64().abs() / (pi * im_tau);
    let log2_bound = |m: f64| (m * m / 4.0 - m * b) * lq + d as f64 * m.max(1.0).log2() + 1.0;

    let q = nome(tau);
    let q2 = &q * &q;
    let m0: i64 = if odd { 1 } else { 2 };
    let mut qm = nome_pow(tau, (m0 * m0) as f64 / 4.0);
    let mut step = nome_pow(tau, (m0 + 1) as f64);
    let e2 = z.scale_f64(2.0).exp_i();
    let e2_inv = e2.recip();
    let mut ep = z.scale_f64(m0 as f64).exp_i();
    let mut em = ep.recip();

    let mut sum = if !odd && d == 0 { HPComplex::one(p) } else { HPComplex::zero(p) };
    let mut tmax = if !odd && d == 0 { 0.0f64 } else { f64::NEG_INFINITY };
    // e^{imz} + eps (-1)^d e^{-imz}
    let eps: i32 = if j == 1 { -1 } else { 1 };
    let pair_sign = if d.is_multiple_of(2) { eps } else { -eps };
    let mut m = m0;
    loop {
        let mf = m as f64;
        let lb = log2_bound(mf);
        tmax = tmax.max(lb);
        let ratio = ((mf + 1.0) - 2.0 * b) * lq + d as f64 * ((mf + 2.0) / mf).log2();
        if lb < tmax - p as f64 - TAIL_GUARD - 2.0 && ratio <= -1.0 {
            break;
        }
        let k = if odd { (m - 1) / 2 } else { m / 2 };
        let mut t = if pair_sign > 0 { &ep + &em } else { &ep - &em };
        t = &t * &qm;
        if d > 0 {
            // (im)^d
            t = t.scale_f64((mf).powi(d as i32));
            for _ in 0..d {
                t = t.mul_i();
            }
        }
        match j {
            1 => {
                // -i (-1)^k
                t = t.mul_i();
                if k % 2 == 0 {
                    t = -t;
                }
            }
            4 if k % 2 == 1 => t = -t,
            _ => {}
        }
        sum += &t;
        qm = &qm * &step;
        step = &step * &q2;
        ep = &ep * &e2;
        em = &em * &e2_inv;
        m += 2;
    }
    sum
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `θ_j^{(d)}(z|τ)` for `d ≤ 4`, accurate to `prec` bits relative to the
/// largest term of the reduced series.
pub fn theta_deriv_eval(j: u8, d: u32, z: &HPComplex, tau: &HPComplex, prec: u32) -> Result<HPComplex> {
    if d > 4 {
        return Err(Error::InvalidArgument(format!("derivative order {d} above 4")));
    }
    let w = working_prec(prec);
    let (z, tau) = (z.with_prec(w), tau.with_prec(w));
    let red = reduce_argument(j, &z, &tau)?;
    // Leibniz rule on K e^{-iαz}: the k-th derivative of the multiplier is (-iα)^k times it
    let mut acc = HPComplex::zero(w);
    let mut mk = red.multiplier.clone();
    for k in 0..=d {
        let term = theta_series(red.index, d - k, &red.z, &tau);
        acc += &(&mk * &term).scale_f64(binomial(d, k));
        mk = mk.scale_f64(-(red.alpha as f64)).mul_i();
    }
    Ok(acc)
}

/// `θ_j(z|τ)`.
pub fn theta_eval(j: u8, z: &HPComplex, tau: &HPComplex, prec: u32) -> Result<HPComplex> {
    theta_deriv_eval(j, 0, z, tau, prec)
}

/// `ϑ_j(τ)`, or `ϑ₁'(τ)` for `j = 1`.
pub fn theta_null(j: u8, tau: &HPComplex, prec: u32) -> Result<HPComplex> {
    let zero = HPComplex::zero(working_prec(prec));
    theta_deriv_eval(j, u32::from(j == 1), &zero, tau, prec)
}

/// `(a; Q)_∞`, truncated once the remaining factors are within
/// `2^{-prec-10}` of 1 as a product.
pub fn pochhammer_eval(a: &HPComplex, base: &HPComplex, prec: u32) -> Result<HPComplex> {
    let w = working_prec(prec);
    let (a, base) = (a.with_prec(w), base.with_prec(w));
    let lq = base.log2_abs();
    if lq >= 0.0 {
        return Err(Error::BadNome(lq.exp2()));
    }
    let la = a.log2_abs();
    let mut acc = HPComplex::one(w);
    let mut x = a.clone();
    // Σ_{n≥N} |x_n| ≤ |x_N|/(1-|Q|), and |log(1-x)| ≤ 2|x| once |x| ≤ 1/2
    let tail_scale = -(1.0 - lq.exp2()).log2() + 1.0;
    let mut n = 0.0f64;
    loop {
        let lx = la + n * lq;
        if lx < -1.0 && lx + tail_scale < -(w as f64) - TAIL_GUARD {
            break;
        }
        acc = &acc - &(&acc * &x);
        x = &x * &base;
        n += 1.0;
    }
    Ok(acc)
}

/// `θ_j(z|τ)` from its infinite-product form, at the reduced argument.
pub fn theta_product_eval(j: u8, z: &HPComplex, tau: &HPComplex, prec: u32) -> Result<HPComplex> {
    let w = working_prec(prec);
    let (z, tau) = (z.with_prec(w), tau.with_prec(w));
    let red = reduce_argument(j, &z, &tau)?;
    let zr = &red.z;
    let q = nome(&tau);
    let q2 = &q * &q;
    let e2 = zr.scale_f64(2.0).exp_i();
    let e2i = e2.recip();
    let one = HPComplex::one(w);
    let qq = pochhammer_eval(&q2, &q2, prec)?;
    let v = match red.index {
        1 | 2 => {
            let sign = if red.index == 1 { 1.0 } else { -1.0 };
            let a = pochhammer_eval(&(&q2 * &e2).scale_f64(sign), &q2, prec)?;
            let b = pochhammer_eval(&(&q2 * &e2i).scale_f64(sign), &q2, prec)?;
            let trig = if red.index == 1 { zr.sin() } else { zr.cos() };
            let pre = nome_pow(&tau, 0.25).scale_f64(2.0);
            &(&(&pre * &trig) * &qq) * &(&a * &b)
        }
        _ => {
            let sign = if red.index == 3 { -1.0 } else { 1.0 };
            let a = pochhammer_eval(&(&q * &e2).scale_f64(sign), &q2, prec)?;
            let b = pochhammer_eval(&(&q * &e2i).scale_f64(sign), &q2, prec)?;
            &(&qq * &a) * &(&b * &one)
        }
    };
    Ok(&red.multiplier * &v)
}

/// Which logarithmic derivative to expand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogDeriv {
    /// `θ₁'/θ₁ = cot x + 4Σ q^{2n}/(1-q^{2n}) sin 2nx`.
    Theta1,
    /// `θ₃'/θ₃ = 4Σ (-1)ⁿ qⁿ/(1-q^{2n}) sin 2nx`.
    Theta3,
}

/// Lambert-type expansion of `θ'/θ` at `x`.
pub fn log_deriv_series_eval(which: LogDeriv, x: &HPComplex, tau: &HPComplex, prec: u32) -> Result<HPComplex> {
    check_tau(tau)?;
    let w = working_prec(prec);
    let (x, tau) = (x.with_prec(w), tau.with_prec(w));
    let q = nome(&tau);
    let lq = q.log2_abs();
    let c = if which == LogDeriv::Theta1 { 2.0 } else { 1.0 };
    let lgrowth = 2.0 * x.im.to_f64().abs() * std::f64::consts::LOG2_E;
    let lratio = c * lq + lgrowth;
    if lratio >= -0.5 {
        return Err(Error::Divergent(format!("Lambert series for |Im x| = {} diverges", x.im.to_f64())));
    }
    let mut sum = match which {
        LogDeriv::Theta1 => {
            let s = x.sin();
            if s.log2_abs() < -(w as f64) / 2.0 {
                return Err(Error::Pole(format!("cot at x = {}", x.re.to_f64())));
            }
            x.cot()
        }
        LogDeriv::Theta3 => HPComplex::zero(w),
    };
    let mut tmax = sum.log2_abs().max(0.0);
    let qc = if which == LogDeriv::Theta1 { &q * &q } else { q.clone() };
    let q2 = &q * &q;
    let e2 = x.scale_f64(2.0).exp_i();
    let e2i = e2.recip();
    let (mut qn, mut q2n, mut ep, mut em) = (qc.clone(), q2.clone(), e2.clone(), e2i.clone());
    let one = HPComplex::one(w);
    let tail = -(1.0 - lratio.exp2()).log2() + 3.0;
    let mut n = 1u32;
    loop {
        let lb = n as f64 * lratio + 3.0;
        tmax = tmax.max(lb);
        if lb + tail < tmax - w as f64 - TAIL_GUARD {
            break;
        }
        // 4 (sign) qⁿ/(1-q^{2n}) · (e^{2inx} - e^{-2inx})/(2i)
        let sin2 = (&ep - &em).mul_i().scale_f64(-0.5);
        let mut t = &(&qn / &(&one - &q2n)) * &sin2;
        if which == LogDeriv::Theta3 && n % 2 == 1 {
            t = -t;
        }
        sum += &t.scale_f64(4.0);
        qn = &qn * &qc;
        q2n = &q2n * &q2;
        ep = &ep * &e2;
        em = &em * &e2i;
        n += 1;
    }
    Ok(sum)
}

/// Imaginary transformations relating `τ` and `τ' = -1/τ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Transform {
    /// `θ₁(zτ'|τ') = i√(-iτ) e^{iz²/(πτ)} θ₁(z|τ)`.
    Theta1,
    /// `θ₂(zτ'|τ') = √(-iτ) e^{iz²/(πτ)} θ₄(z|τ)`.
    Theta2To4,
    /// `θ₁(z/τ|τ') = -i√(-iτ) e^{iz²/(πτ)} θ₁(z|τ)`.
    Theta1Over,
    /// `θ₄(z/τ|τ') = √(-iτ) e^{iz²/(πτ)} θ₂(z|τ)`.
    Theta4To2,
}

impl Transform {
    pub const ALL: [Transform; 4] = [Transform::Theta1, Transform::Theta2To4, Transform::Theta1Over, Transform::Theta4To2];

    pub fn id(self) -> &'static str {
        match self {
            Transform::Theta1 => "imaginary-theta1",
            Transform::Theta2To4 => "imaginary-theta2-theta4",
            Transform::Theta1Over => "imaginary-theta1-over-tau",
            Transform::Theta4To2 => "imaginary-theta4-theta2",
        }
    }

    /// Both sides of the transformation at `(z, τ)`.
    pub fn sides(self, z: &HPComplex, tau: &HPComplex, prec: u32) -> Result<(HPComplex, HPComplex)> {
        check_tau(tau)?;
        let w = working_prec(prec);
        let (z, tau) = (z.with_prec(w), tau.with_prec(w));
        let tau_p = -tau.recip();
        let pi = HPComplex::real(HPComplex::pi(w));
        let s = tau.mul_i().scale_f64(-1.0).sqrt();
        let e = (&(&z * &z) / &(&pi * &tau)).exp_i();
        let se = &s * &e;
        let (lj, lz, rj, rf) = match self {
            Transform::Theta1 => (1, &z * &tau_p, 1, se.mul_i()),
            Transform::Theta2To4 => (2, &z * &tau_p, 4, se),
            Transform::Theta1Over => (1, &z / &tau, 1, -se.mul_i()),
            Transform::Theta4To2 => (4, &z / &tau, 2, se),
        };
        let lhs = theta_eval(lj, &lz, &tau_p, prec)?;
        let rhs = &rf * &theta_eval(rj, &z, &tau, prec)?;
        Ok((lhs, rhs))
    }
}

/// `|LHS - RHS|` and `max(|LHS|, |RHS|)` for an imaginary transformation.
pub fn imaginary_transform_check(which: Transform, z: &HPComplex, tau: &HPComplex, prec: u32) -> Result<(Float, Float)> {
    let (l, r) = which.sides(z, tau, prec)?;
    let res = (&l - &r).abs();
    let scale = l.abs().max(&r.abs());
    Ok((res, scale))
}
