use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

/// Bits carried beyond the requested precision by every evaluation.
pub const GUARD_BITS: u32 = 32;

/// Working precision for a requested result precision.
pub fn working_prec(prec: u32) -> u32 {
    prec + GUARD_BITS
}

/// Complex number with MPFR real and imaginary parts of a common precision.
#[derive(Clone, PartialEq)]
pub struct HPComplex {
    pub re: Float,
    pub im: Float,
}

impl HPComplex {
    pub fn new(re: Float, im: Float) -> Self {
        let p = re.prec().max(im.prec());
        HPComplex { re: Float::with_val(p, re), im: Float::with_val(p, im) }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        HPComplex { re: Float::with_val(prec, re), im: Float::with_val(prec, im) }
    }

    pub fn real(x: Float) -> Self {
        let p = x.prec();
        HPComplex { re: x, im: Float::new(p) }
    }

    pub fn zero(prec: u32) -> Self {
        HPComplex { re: Float::new(prec), im: Float::new(prec) }
    }

    pub fn one(prec: u32) -> Self {
        HPComplex::from_f64(prec, 1.0, 0.0)
    }

    pub fn i(prec: u32) -> Self {
        HPComplex::from_f64(prec, 0.0, 1.0)
    }

    pub fn pi(prec: u32) -> Float {
        Float::with_val(prec, Constant::Pi)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    /// Same value rounded to `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Self {
        HPComplex { re: Float::with_val(prec, &self.re), im: Float::with_val(prec, &self.im) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.clone().square() + self.im.clone().square())
    }

    /// `log₂ |z|`, `-∞` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.abs().log2().to_f64()
    }

    pub fn conj(&self) -> Self {
        HPComplex { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn scale(&self, k: &Float) -> Self {
        let p = self.prec();
        HPComplex { re: Float::with_val(p, &self.re * k), im: Float::with_val(p, &self.im * k) }
    }

    pub fn scale_f64(&self, k: f64) -> Self {
        self.scale(&Float::with_val(self.prec(), k))
    }

    /// Multiply by `i`.
    pub fn mul_i(&self) -> Self {
        HPComplex { re: -self.im.clone(), im: self.re.clone() }
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        let p = self.prec();
        HPComplex { re: Float::with_val(p, &self.re / &n), im: Float::with_val(p, -(self.im.clone() / &n)) }
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let r = Float::with_val(p, self.re.exp_ref());
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        HPComplex { re: Float::with_val(p, &r * &c), im: r * s }
    }

    /// `e^{iz}`.
    pub fn exp_i(&self) -> Self {
        self.mul_i().exp()
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        let p = self.prec();
        let arg = self.im.clone().atan2(&self.re);
        HPComplex { re: self.abs().ln(), im: Float::with_val(p, arg) }
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let p = self.prec();
        let r = self.abs().sqrt();
        let half = self.im.clone().atan2(&self.re) / 2u32;
        let (s, c) = half.sin_cos(Float::new(p));
        HPComplex { re: Float::with_val(p, &r * &c), im: r * s }
    }

    pub fn sin(&self) -> Self {
        let iz = self.mul_i();
        let (a, b) = (iz.exp(), (-&iz).exp());
        // (e^{iz} - e^{-iz}) / 2i
        (&a - &b).mul_i().scale_f64(-0.5)
    }

    pub fn cos(&self) -> Self {
        let iz = self.mul_i();
        (&iz.exp() + &(-&iz).exp()).scale_f64(0.5)
    }

    pub fn tan(&self) -> Self {
        &self.sin() / &self.cos()
    }

    pub fn cot(&self) -> Self {
        &self.cos() / &self.sin()
    }

    pub fn powi(&self, k: i32) -> Self {
        if k < 0 {
            return self.powi(-k).recip();
        }
        let mut acc = HPComplex::one(self.prec());
        let mut base = self.clone();
        let mut e = k as u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Principal power `exp(w ln z)`.
    pub fn powc(&self, w: &HPComplex) -> Self {
        (w * &self.ln()).exp()
    }

    /// Real `x^y` lifted to a complex value; `x > 0`.
    pub fn real_pow(x: &Float, y: &Float) -> Self {
        HPComplex::real(Float::with_val(x.prec(), x.pow(y)))
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $body:expr) => {
        impl $tr for &HPComplex {
            type Output = HPComplex;
            fn $f(self, rhs: &HPComplex) -> HPComplex {
                $body(self, rhs)
            }
        }
        impl $tr for HPComplex {
            type Output = HPComplex;
            fn $f(self, rhs: HPComplex) -> HPComplex {
                $body(&self, &rhs)
            }
        }
        impl $tr<&HPComplex> for HPComplex {
            type Output = HPComplex;
            fn $f(self, rhs: &HPComplex) -> HPComplex {
                $body(&self, rhs)
            }
        }
    };
}

fn add(a: &HPComplex, b: &HPComplex) -> HPComplex {
    let p = a.prec().max(b.prec());
    HPComplex { re: Float::with_val(p, &a.re + &b.re), im: Float::with_val(p, &a.im + &b.im) }
}

fn sub(a: &HPComplex, b: &HPComplex) -> HPComplex {
    let p = a.prec().max(b.prec());
    HPComplex { re: Float::with_val(p, &a.re - &b.re), im: Float::with_val(p, &a.im - &b.im) }
}

fn mul(a: &HPComplex, b: &HPComplex) -> HPComplex {
    let p = a.prec().max(b.prec());
    let rr = Float::with_val(p, &a.re * &b.re);
    let ii = Float::with_val(p, &a.im * &b.im);
    let ri = Float::with_val(p, &a.re * &b.im);
    let ir = Float::with_val(p, &a.im * &b.re);
    HPComplex { re: rr - ii, im: ri + ir }
}

fn div(a: &HPComplex, b: &HPComplex) -> HPComplex {
    mul(a, &b.recip())
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);
binop!(Div, div, div);

impl Neg for &HPComplex {
    type Output = HPComplex;
    fn neg(self) -> HPComplex {
        HPComplex { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl Neg for HPComplex {
    type Output = HPComplex;
    fn neg(self) -> HPComplex {
        HPComplex { re: -self.re, im: -self.im }
    }
}

impl AddAssign<&HPComplex> for HPComplex {
    fn add_assign(&mut self, rhs: &HPComplex) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&HPComplex> for HPComplex {
    fn sub_assign(&mut self, rhs: &HPComplex) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&HPComplex> for HPComplex {
    fn mul_assign(&mut self, rhs: &HPComplex) {
        *self = mul(self, rhs);
    }
}

impl fmt::Debug for HPComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for HPComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = Some(((self.prec() as f64) * std::f64::consts::LOG10_2).ceil() as usize);
        let im = &self.im;
        let sign = if im.is_sign_negative() { "-" } else { "+" };
        let mag = im.clone().abs();
        write!(f, "{}{}{}i", self.re.to_string_radix(10, digits), sign, mag.to_string_radix(10, digits))
    }
}
