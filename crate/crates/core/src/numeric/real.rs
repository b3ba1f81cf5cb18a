use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

/// Multiprecision real with MPFR's extended exponent range.
///
/// Binary operations round to the larger of the two operand precisions.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct Real(Float);

impl Real {
    pub fn new(prec: u32, v: f64) -> Self {
        Real(Float::with_val(prec, v))
    }

    pub fn from_i64(prec: u32, v: i64) -> Self {
        Real(Float::with_val(prec, v))
    }

    /// Exact ratio `num/den` rounded once.
    pub fn ratio(prec: u32, num: i64, den: i64) -> Self {
        let n = Float::with_val(prec, num);
        Real(Float::with_val(prec, n / den))
    }

    pub fn zero(prec: u32) -> Self {
        Real(Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::new(prec, 1.0)
    }

    pub fn pi(prec: u32) -> Self {
        Real(Float::with_val(prec, Constant::Pi))
    }

    pub fn euler_gamma(prec: u32) -> Self {
        Real(Float::with_val(prec, Constant::Euler))
    }

    pub fn ln2(prec: u32) -> Self {
        Real(Float::with_val(prec, Constant::Log2))
    }

    /// 2^e as an exact power of two.
    pub fn pow2(prec: u32, e: i32) -> Self {
        let one = Float::with_val(prec, 1);
        Real(one << e)
    }

    /// Riemann zeta at a positive integer.
    pub fn zeta_u(prec: u32, u: u32) -> Self {
        Real(Float::with_val(prec, Float::zeta_u(u)))
    }

    pub fn factorial(prec: u32, n: u32) -> Self {
        Real(Float::with_val(prec, Float::factorial(n)))
    }

    pub fn from_float(f: Float) -> Self {
        Real(f)
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn prec(&self) -> u32 {
        self.0.prec()
    }

    /// Copy rounded (or zero-extended) to `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Self {
        Real(Float::with_val(prec, &self.0))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// log2 of the magnitude as f64; `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.0.is_zero() {
            return f64::NEG_INFINITY;
        }
        let (m, e) = self.0.to_f64_exp();
        m.abs().log2() + e as f64
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn is_sign_negative(&self) -> bool {
        self.0.is_sign_negative()
    }

    pub fn abs(&self) -> Self {
        Real(self.0.clone().abs())
    }

    pub fn square(&self) -> Self {
        Real(self.0.clone().square())
    }

    pub fn recip(&self) -> Self {
        Real(self.0.clone().recip())
    }

    pub fn sqrt(&self) -> Self {
        Real(self.0.clone().sqrt())
    }

    pub fn exp(&self) -> Self {
        Real(self.0.clone().exp())
    }

    pub fn exp_m1(&self) -> Self {
        Real(self.0.clone().exp_m1())
    }

    pub fn ln(&self) -> Self {
        Real(self.0.clone().ln())
    }

    pub fn ln_1p(&self) -> Self {
        Real(self.0.clone().ln_1p())
    }

    pub fn sin(&self) -> Self {
        Real(self.0.clone().sin())
    }

    pub fn cos(&self) -> Self {
        Real(self.0.clone().cos())
    }

    pub fn sin_cos(&self) -> (Self, Self) {
        let (s, c) = self.0.clone().sin_cos(Float::new(self.prec()));
        (Real(s), Real(c))
    }

    pub fn atan(&self) -> Self {
        Real(self.0.clone().atan())
    }

    pub fn atan2(&self, x: &Real) -> Self {
        let p = self.prec().max(x.prec());
        Real(Float::with_val(p, &self.0).atan2(&x.0))
    }

    pub fn sinh(&self) -> Self {
        Real(self.0.clone().sinh())
    }

    pub fn cosh(&self) -> Self {
        Real(self.0.clone().cosh())
    }

    pub fn sinh_cosh(&self) -> (Self, Self) {
        let (s, c) = self.0.clone().sinh_cosh(Float::new(self.prec()));
        (Real(s), Real(c))
    }

    pub fn tanh(&self) -> Self {
        Real(self.0.clone().tanh())
    }

    pub fn hypot(&self, o: &Real) -> Self {
        let p = self.prec().max(o.prec());
        Real(Float::with_val(p, &self.0).hypot(&o.0))
    }

    pub fn powi(&self, n: i32) -> Self {
        Real(self.0.clone().pow(n))
    }

    pub fn floor(&self) -> Self {
        Real(self.0.clone().floor())
    }

    pub fn round(&self) -> Self {
        Real(self.0.clone().round())
    }

    pub fn max(&self, o: &Real) -> Self {
        if self >= o {
            self.clone()
        } else {
            o.clone()
        }
    }

    pub fn min(&self, o: &Real) -> Self {
        if self <= o {
            self.clone()
        } else {
            o.clone()
        }
    }

    pub fn mul_f64(&self, v: f64) -> Self {
        Real(Float::with_val(self.prec(), &self.0 * v))
    }

    pub fn add_f64(&self, v: f64) -> Self {
        Real(Float::with_val(self.prec(), &self.0 + v))
    }

    pub fn div_f64(&self, v: f64) -> Self {
        Real(Float::with_val(self.prec(), &self.0 / v))
    }

    pub fn mul_i64(&self, v: i64) -> Self {
        Real(Float::with_val(self.prec(), &self.0 * v))
    }

    pub fn div_i64(&self, v: i64) -> Self {
        Real(Float::with_val(self.prec(), &self.0 / v))
    }

    pub fn total_cmp(&self, o: &Real) -> Ordering {
        self.partial_cmp(o).unwrap_or(Ordering::Equal)
    }
}

macro_rules! real_binop {
    ($tr:ident, $f:ident, $atr:ident, $af:ident) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $f(self, o: &Real) -> Real {
                let p = self.0.prec().max(o.0.prec());
                Real(Float::with_val(p, (&self.0).$f(&o.0)))
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $f(self, o: Real) -> Real {
                (&self).$f(&o)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $f(self, o: &Real) -> Real {
                (&self).$f(o)
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $f(self, o: Real) -> Real {
                self.$f(&o)
            }
        }
        impl $tr<f64> for &Real {
            type Output = Real;
            fn $f(self, o: f64) -> Real {
                Real(Float::with_val(self.0.prec(), (&self.0).$f(o)))
            }
        }
        impl $tr<f64> for Real {
            type Output = Real;
            fn $f(self, o: f64) -> Real {
                (&self).$f(o)
            }
        }
        impl $atr<&Real> for Real {
            fn $af(&mut self, o: &Real) {
                if o.0.prec() > self.0.prec() {
                    self.0.set_prec(o.0.prec());
                }
                self.0.$af(&o.0);
            }
        }
        impl $atr<Real> for Real {
            fn $af(&mut self, o: Real) {
                self.$af(&o);
            }
        }
    };
}

real_binop!(Add, add, AddAssign, add_assign);
real_binop!(Sub, sub, SubAssign, sub_assign);
real_binop!(Mul, mul, MulAssign, mul_assign);
real_binop!(Div, div, DivAssign, div_assign);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(-self.0)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(-self.0.clone())
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.to_string_radix(10, Some(24)))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_precision_takes_the_larger() {
        let a = Real::new(64, 1.0);
        let b = Real::new(256, 3.0);
        let c = &a / &b;
        assert_eq!(c.prec(), 256);
        let third = Real::ratio(256, 1, 3);
        assert!((&c - &third).is_zero());
    }

    #[test]
    fn extended_exponent_range() {
        let big = Real::new(128, 1e300).powi(50);
        assert!(big.is_finite());
        assert!((big.ln().to_f64() - 50.0 * 1e300f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn pow2_and_log2() {
        let x = Real::pow2(128, -700);
        assert!((x.log2_abs() + 700.0).abs() < 1e-12);
    }
}
