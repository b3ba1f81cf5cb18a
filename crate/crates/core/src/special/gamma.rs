use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::numeric::{HComplex, PrecisionContext, Real};

/// Extra bits carried internally by the special functions.
pub(crate) const GUARD_BITS: u32 = 32;

/// Bernoulli numbers B_2, B_4, ... at `prec` bits, memoised per precision.
pub(crate) fn bernoulli_even(prec: u32, count: usize) -> Arc<Vec<Real>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<Real>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("bernoulli cache").get(&prec) {
        if v.len() >= count {
            return v.clone();
        }
    }
    // B_2j = (-1)^(j+1) 2 (2j)! zeta(2j) / (2 pi)^(2j)
    let two_pi = Real::pi(prec).mul_f64(2.0);
    let mut out = Vec::with_capacity(count);
    let mut pow = Real::one(prec);
    for j in 1..=count {
        pow = &pow * &two_pi.square();
        let mut b = Real::factorial(prec, 2 * j as u32) * Real::zeta_u(prec, 2 * j as u32);
        b = b.mul_f64(2.0) / &pow;
        out.push(if j % 2 == 1 { b } else { -b });
    }
    let out = Arc::new(out);
    cache.lock().expect("bernoulli cache").insert(prec, out.clone());
    out
}

/// Shift target for the asymptotic series: large enough that the optimally
/// truncated series reaches 2^(-prec).
fn shift_target(prec: u32) -> f64 {
    (20.0f64).max(0.12 * prec as f64)
}

/// Number of Bernoulli terms to prepare for the asymptotic series at |w| >= r.
fn series_terms(prec: u32, r: f64) -> usize {
    let max_terms = (std::f64::consts::PI * r).ceil() as usize + 2;
    max_terms.min(prec as usize).max(8)
}

fn check_pole(z: &HComplex) -> Result<()> {
    if z.im.is_zero() && !z.re.is_sign_negative() && !z.re.is_zero() {
        return Ok(());
    }
    if z.im.is_zero() && (z.re.is_zero() || z.re == z.re.floor()) {
        return Err(Error::PoleArgument(format!("gamma pole at {:?}", z.re)));
    }
    Ok(())
}

/// Shift `z` by a nonnegative integer so that Re(z + k) >= r.
fn shift_count(z: &HComplex, r: f64) -> u64 {
    let re = z.re.to_f64();
    if re >= r {
        0
    } else {
        (r - re).ceil() as u64
    }
}

/// Principal log Gamma (analytic on the plane cut along the negative real axis).
pub fn log_gamma(z: &HComplex, ctx: &PrecisionContext) -> Result<HComplex> {
    check_pole(z)?;
    let wp = ctx.bits + GUARD_BITS;
    let z = z.with_prec(wp);
    let r = shift_target(wp);
    let k = shift_count(&z, r);
    let mut shift_sum = HComplex::zero(wp);
    for j in 0..k {
        shift_sum += &z.add_f64(j as f64, 0.0).ln();
    }
    let w = z.add_f64(k as f64, 0.0);
    let out = stirling_log_gamma(&w, wp)? - shift_sum;
    Ok(out.with_prec(ctx.bits))
}

fn stirling_log_gamma(w: &HComplex, wp: u32) -> Result<HComplex> {
    let ln_w = w.ln();
    let half_ln_2pi = Real::pi(wp).mul_f64(2.0).ln().mul_f64(0.5);
    let mut sum = (&w.add_f64(-0.5, 0.0) * &ln_w) - w;
    sum = sum.add_real(&half_ln_2pi);
    let terms = series_terms(wp, w.abs().to_f64());
    let b = bernoulli_even(wp, terms);
    let inv = w.recip();
    let inv2 = &inv * &inv;
    let mut pw = inv.clone();
    let target = sum.log2_abs() - wp as f64;
    for (j, bj) in b.iter().enumerate().take(terms) {
        let jj = (j + 1) as i64;
        let term = pw.scale(&bj.div_i64(2 * jj * (2 * jj - 1)));
        let small = term.log2_abs() < target;
        sum += &term;
        if small {
            return Ok(sum);
        }
        pw = &pw * &inv2;
    }
    Err(Error::NoConvergence { what: "Stirling series".into(), iterations: terms })
}

/// Digamma psi(z) = d/dz log Gamma(z).
pub fn digamma(z: &HComplex, ctx: &PrecisionContext) -> Result<HComplex> {
    check_pole(z)?;
    let wp = ctx.bits + GUARD_BITS;
    let z = z.with_prec(wp);
    let r = shift_target(wp);
    let k = shift_count(&z, r);
    let mut shift = HComplex::zero(wp);
    for j in 0..k {
        shift += &z.add_f64(j as f64, 0.0).recip();
    }
    let w = z.add_f64(k as f64, 0.0);
    let inv = w.recip();
    let mut sum = w.ln() - inv.scale_f64(0.5);
    let terms = series_terms(wp, w.abs().to_f64());
    let b = bernoulli_even(wp, terms);
    let inv2 = &inv * &inv;
    let mut pw = inv2.clone();
    let target = sum.log2_abs() - wp as f64;
    let mut done = false;
    for (j, bj) in b.iter().enumerate().take(terms) {
        let term = pw.scale(&bj.div_i64(2 * (j as i64 + 1)));
        let small = term.log2_abs() < target;
        sum -= &term;
        if small {
            done = true;
            break;
        }
        pw = &pw * &inv2;
    }
    if !done {
        return Err(Error::NoConvergence { what: "digamma series".into(), iterations: terms });
    }
    Ok((sum - shift).with_prec(ctx.bits))
}

/// Trigamma psi'(z).
pub fn trigamma(z: &HComplex, ctx: &PrecisionContext) -> Result<HComplex> {
    check_pole(z)?;
    let wp = ctx.bits + GUARD_BITS;
    let z = z.with_prec(wp);
    let r = shift_target(wp);
    let k = shift_count(&z, r);
    let mut shift = HComplex::zero(wp);
    for j in 0..k {
        let zj = z.add_f64(j as f64, 0.0);
        shift += &(&zj * &zj).recip();
    }
    let w = z.add_f64(k as f64, 0.0);
    let inv = w.recip();
    let inv2 = &inv * &inv;
    let mut sum = &inv + &inv2.scale_f64(0.5);
    let terms = series_terms(wp, w.abs().to_f64());
    let b = bernoulli_even(wp, terms);
    let mut pw = &inv2 * &inv;
    let target = sum.log2_abs() - wp as f64;
    let mut done = false;
    for bj in b.iter().take(terms) {
        let term = pw.scale(bj);
        let small = term.log2_abs() < target;
        sum += &term;
        if small {
            done = true;
            break;
        }
        pw = &pw * &inv2;
    }
    if !done {
        return Err(Error::NoConvergence { what: "trigamma series".into(), iterations: terms });
    }
    Ok((sum + shift).with_prec(ctx.bits))
}

/// Hurwitz zeta(s, a) for integer s >= 2 and integer a >= 1, by Euler-Maclaurin.
pub fn hurwitz_zeta_int(s: u32, a: u64, prec: u32) -> Real {
    assert!(s >= 2 && a >= 1);
    let wp = prec + GUARD_BITS;
    let l = a.max(2 * s as u64 + prec as u64 / 2);
    let mut sum = Real::zero(wp);
    for n in a..l {
        sum += &Real::from_i64(wp, n as i64).powi(-(s as i32));
    }
    let lr = Real::from_i64(wp, l as i64);
    let l_pow = lr.powi(1 - s as i32);
    sum += &l_pow.div_i64(s as i64 - 1);
    let l_s = &l_pow / &lr;
    sum += &l_s.mul_f64(0.5);
    let b = bernoulli_even(wp, (prec as usize / 2).max(8));
    let inv_l2 = lr.square().recip();
    // term_j = B_2j/(2j)! * s(s+1)...(s+2j-2) * L^(-s-2j+1)
    let mut rising = Real::from_i64(wp, s as i64);
    let mut fact = Real::from_i64(wp, 2);
    let mut pw = &l_s / &lr;
    let target = sum.log2_abs() - wp as f64;
    for (j, bj) in b.iter().enumerate() {
        let jj = (j + 1) as i64;
        let term = &(&(bj * &rising) / &fact) * &pw;
        let small = term.log2_abs() < target;
        sum += &term;
        if small {
            break;
        }
        rising = rising.mul_i64(s as i64 + 2 * jj - 1).mul_i64(s as i64 + 2 * jj);
        fact = fact.mul_i64(2 * jj + 1).mul_i64(2 * jj + 2);
        pw = &pw * &inv_l2;
    }
    sum.with_prec(prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(128)
    }

    fn cr(v: f64) -> HComplex {
        HComplex::from_f64(128, v, 0.0)
    }

    fn rel(a: &HComplex, b: &HComplex) -> f64 {
        ((a - b).abs() / b.abs()).to_f64()
    }

    #[test]
    fn bernoulli_first_values() {
        let b = bernoulli_even(128, 4);
        let want = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0];
        for (x, w) in b.iter().zip(want) {
            assert!((x.to_f64() - w).abs() < 1e-16);
        }
    }

    #[test]
    fn log_gamma_special_values() {
        let c = ctx();
        let half = log_gamma(&cr(0.5), &c).unwrap();
        let want = Real::pi(128).sqrt().ln();
        assert!(((&half.re - &want).abs()).to_f64() < 1e-37);
        let five = log_gamma(&cr(5.0), &c).unwrap();
        assert!((five.re.to_f64() - 24f64.ln()).abs() < 1e-15);
        assert!(five.im.is_zero());
    }

    #[test]
    fn log_gamma_poles() {
        for v in [0.0, -1.0, -7.0] {
            assert!(matches!(log_gamma(&cr(v), &ctx()), Err(Error::PoleArgument(_))));
        }
    }

    #[test]
    fn log_gamma_recurrence_complex() {
        let c = ctx();
        let z = HComplex::from_f64(128, -2.3, 1.7);
        let a = log_gamma(&z, &c).unwrap();
        let b = log_gamma(&z.add_f64(1.0, 0.0), &c).unwrap();
        let ratio = (b - a).exp();
        assert!(rel(&ratio, &z) < 1e-35);
    }

    #[test]
    fn log_gamma_reflection() {
        // Gamma(z) Gamma(1-z) = pi / sin(pi z)
        let c = ctx();
        let z = HComplex::from_f64(128, 0.3, 0.8);
        let one_minus = HComplex::one(128) - &z;
        let lhs = (log_gamma(&z, &c).unwrap() + log_gamma(&one_minus, &c).unwrap()).exp();
        let pz = z.scale(&Real::pi(128));
        let sin = (pz.mul_i().exp() - pz.mul_i().scale_f64(-1.0).exp()) / HComplex::from_f64(128, 0.0, 2.0);
        let rhs = HComplex::from_real(Real::pi(128)) / sin;
        assert!(rel(&lhs, &rhs) < 1e-35);
    }

    #[test]
    fn high_precision_log_gamma() {
        let c = PrecisionContext::new(1024);
        let z = HComplex::from_f64(1024, 0.5, 0.0);
        let v = log_gamma(&z, &c).unwrap();
        let want = Real::pi(1024).sqrt().ln();
        assert!((&v.re - &want).abs().log2_abs() < -1010.0);
    }

    #[test]
    fn digamma_values() {
        let c = ctx();
        let g = Real::euler_gamma(128);
        let one = digamma(&cr(1.0), &c).unwrap();
        assert!((&one.re + &g).abs().to_f64() < 1e-37);
        let half = digamma(&cr(0.5), &c).unwrap();
        let want = -(&g + &Real::ln2(128).mul_f64(2.0));
        assert!((&half.re - &want).abs().to_f64() < 1e-37);
        let t = trigamma(&cr(1.0), &c).unwrap();
        let basel = Real::pi(128).square().div_f64(6.0);
        assert!((&t.re - &basel).abs().to_f64() < 1e-37);
    }

    #[test]
    fn polygamma_recurrences() {
        let c = ctx();
        let z = HComplex::from_f64(128, 0.7, -2.2);
        let z1 = z.add_f64(1.0, 0.0);
        let d = digamma(&z1, &c).unwrap() - digamma(&z, &c).unwrap();
        assert!(rel(&d, &z.recip()) < 1e-34);
        let t = trigamma(&z1, &c).unwrap() - trigamma(&z, &c).unwrap();
        let want = -(&z * &z).recip();
        assert!(rel(&t, &want) < 1e-33);
    }

    #[test]
    fn hurwitz_matches_riemann() {
        for s in [2u32, 3, 7, 30] {
            let h = hurwitz_zeta_int(s, 1, 128);
            let z = Real::zeta_u(128, s);
            assert!(((&h - &z).abs() / &z).to_f64() < 1e-36, "s={s}");
        }
        // zeta(2, 5) = zeta(2) - 1 - 1/4 - 1/9 - 1/16
        let h = hurwitz_zeta_int(2, 5, 128);
        let want = Real::zeta_u(128, 2) - Real::ratio(128, 205, 144);
        assert!(((&h - &want).abs()).to_f64() < 1e-37);
    }
}
