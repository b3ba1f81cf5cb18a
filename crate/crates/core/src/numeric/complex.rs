use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Serialize, Serializer};

use super::real::Real;

/// Complex number over [`Real`] parts.
#[derive(Clone, PartialEq)]
pub struct HComplex {
    pub re: Real,
    pub im: Real,
}

impl HComplex {
    pub fn new(re: Real, im: Real) -> Self {
        HComplex { re, im }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        HComplex { re: Real::new(prec, re), im: Real::new(prec, im) }
    }

    pub fn from_real(re: Real) -> Self {
        let im = Real::zero(re.prec());
        HComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Self::from_f64(prec, 0.0, 0.0)
    }

    pub fn one(prec: u32) -> Self {
        Self::from_f64(prec, 1.0, 0.0)
    }

    pub fn i(prec: u32) -> Self {
        Self::from_f64(prec, 0.0, 1.0)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        HComplex { re: self.re.with_prec(prec), im: self.im.with_prec(prec) }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn to_c64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn conj(&self) -> Self {
        HComplex { re: self.re.clone(), im: -&self.im }
    }

    pub fn norm_sqr(&self) -> Real {
        self.re.square() + self.im.square()
    }

    pub fn abs(&self) -> Real {
        self.re.hypot(&self.im)
    }

    /// Argument in (-pi, pi].
    pub fn arg(&self) -> Real {
        self.im.atan2(&self.re)
    }

    /// log2 |z| as f64; `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        let a = self.re.log2_abs();
        let b = self.im.log2_abs();
        let hi = a.max(b);
        if hi == f64::NEG_INFINITY {
            return hi;
        }
        let lo = a.min(b);
        hi + 0.5 * (1.0 + (2.0 * (lo - hi)).exp2()).log2()
    }

    /// Multiplication by i.
    pub fn mul_i(&self) -> Self {
        HComplex { re: -&self.im, im: self.re.clone() }
    }

    pub fn scale(&self, r: &Real) -> Self {
        HComplex { re: &self.re * r, im: &self.im * r }
    }

    pub fn scale_f64(&self, v: f64) -> Self {
        HComplex { re: self.re.mul_f64(v), im: self.im.mul_f64(v) }
    }

    pub fn add_real(&self, r: &Real) -> Self {
        HComplex { re: &self.re + r, im: self.im.clone() }
    }

    pub fn add_f64(&self, re: f64, im: f64) -> Self {
        HComplex { re: self.re.add_f64(re), im: self.im.add_f64(im) }
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        HComplex { re: &self.re / &n, im: -(&self.im / &n) }
    }

    pub fn exp(&self) -> Self {
        let m = self.re.exp();
        let (s, c) = self.im.sin_cos();
        HComplex { re: &m * &c, im: &m * &s }
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        HComplex { re: self.abs().ln(), im: self.arg() }
    }

    pub fn sqrt(&self) -> Self {
        let r = self.abs();
        if r.is_zero() {
            return self.clone();
        }
        let half = (&r + &self.re.abs()).mul_f64(0.5).sqrt();
        let other = &self.im.abs() / &(half.mul_f64(2.0));
        if !self.re.is_sign_negative() {
            let im = if self.im.is_sign_negative() { -&other } else { other };
            HComplex { re: half, im }
        } else {
            let im = if self.im.is_sign_negative() { -&half } else { half };
            HComplex { re: other, im }
        }
    }

    pub fn powi(&self, n: i64) -> Self {
        let mut base = if n < 0 { self.recip() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = HComplex::one(self.prec());
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

    pub fn sinh(&self) -> Self {
        let (sh, ch) = self.re.sinh_cosh();
        let (s, c) = self.im.sin_cos();
        HComplex { re: &sh * &c, im: &ch * &s }
    }

    pub fn cosh(&self) -> Self {
        let (sh, ch) = self.re.sinh_cosh();
        let (s, c) = self.im.sin_cos();
        HComplex { re: &ch * &c, im: &sh * &s }
    }

    pub fn tanh(&self) -> Self {
        &self.sinh() / &self.cosh()
    }
}

macro_rules! cplx_binop {
    ($tr:ident, $f:ident, |$a:ident, $b:ident| $body:expr) => {
        impl $tr<&HComplex> for &HComplex {
            type Output = HComplex;
            fn $f(self, o: &HComplex) -> HComplex {
                let $a = self;
                let $b = o;
                $body
            }
        }
        impl $tr<HComplex> for HComplex {
            type Output = HComplex;
            fn $f(self, o: HComplex) -> HComplex {
                (&self).$f(&o)
            }
        }
        impl $tr<&HComplex> for HComplex {
            type Output = HComplex;
            fn $f(self, o: &HComplex) -> HComplex {
                (&self).$f(o)
            }
        }
        impl $tr<HComplex> for &HComplex {
            type Output = HComplex;
            fn $f(self, o: HComplex) -> HComplex {
                self.$f(&o)
            }
        }
    };
}

cplx_binop!(Add, add, |a, b| HComplex { re: &a.re + &b.re, im: &a.im + &b.im });
cplx_binop!(Sub, sub, |a, b| HComplex { re: &a.re - &b.re, im: &a.im - &b.im });
cplx_binop!(Mul, mul, |a, b| HComplex {
    re: &a.re * &b.re - &a.im * &b.im,
    im: &a.re * &b.im + &a.im * &b.re,
});
cplx_binop!(Div, div, |a, b| {
    let n = b.norm_sqr();
    HComplex {
        re: (&a.re * &b.re + &a.im * &b.im) / &n,
        im: (&a.im * &b.re - &a.re * &b.im) / &n,
    }
});

impl AddAssign<&HComplex> for HComplex {
    fn add_assign(&mut self, o: &HComplex) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&HComplex> for HComplex {
    fn sub_assign(&mut self, o: &HComplex) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&HComplex> for HComplex {
    fn mul_assign(&mut self, o: &HComplex) {
        *self = &*self * o;
    }
}

impl Neg for HComplex {
    type Output = HComplex;
    fn neg(self) -> HComplex {
        HComplex { re: -self.re, im: -self.im }
    }
}

impl Neg for &HComplex {
    type Output = HComplex;
    fn neg(self) -> HComplex {
        HComplex { re: -&self.re, im: -&self.im }
    }
}

impl fmt::Debug for HComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}i)", self.re, self.im)
    }
}

impl Serialize for HComplex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.re.to_f64(), self.im.to_f64()].serialize(s)
    }
}
