use super::gamma::{hurwitz_zeta_int, log_gamma, GUARD_BITS};
use crate::error::{Error, Result};
use crate::numeric::{exp_sinh_half_line, HComplex, PrecisionContext, Real};

/// True when `z` is 0, -1, -2, ... where G vanishes.
fn is_barnes_zero(z: &HComplex) -> bool {
    z.im.is_zero() && (z.re.is_zero() || (z.re.is_sign_negative() && z.re == z.re.floor()))
}

/// log G(z) by the Weierstrass product for G(1 + w), w = z - 1.
///
/// The first `N - 1` factors are summed exactly; the remainder is the
/// convergent series -sum_k (-w)^k/k [zeta(k-1, N) - (N-1) zeta(k, N)], k >= 3.
pub fn log_barnes_g_product(z: &HComplex, ctx: &PrecisionContext) -> Result<HComplex> {
    if is_barnes_zero(z) {
        return Err(Error::PoleArgument(format!("G vanishes at {:?}", z.re)));
    }
    let wp = ctx.bits + GUARD_BITS;
    let w = z.with_prec(wp).add_f64(-1.0, 0.0);
    let aw = w.abs().to_f64();
    let n_cut = (8.0 * aw).ceil().max(32.0) as u64;

    let gamma = Real::euler_gamma(wp);
    let ln_2pi = Real::pi(wp).mul_f64(2.0).ln();
    let w2 = &w * &w;
    let mut acc = w.scale(&ln_2pi).scale_f64(0.5);
    acc -= &(&w * &w.add_f64(1.0, 0.0)).scale_f64(0.5);
    acc -= &w2.scale(&gamma).scale_f64(0.5);

    let pctx = PrecisionContext::new(wp);
    let mut ln_gamma_n = Real::zero(wp);
    let mut ln_gamma_wn = log_gamma(&w.add_f64(1.0, 0.0), &pctx)?;
    let mut psi = -&gamma;
    let mut psi1 = Real::pi(wp).square().div_f64(6.0);
    for n in 1..n_cut {
        let nr = Real::from_i64(wp, n as i64);
        let mut s = HComplex::from_real(ln_gamma_n.clone()) - &ln_gamma_wn;
        s += &w.scale(&psi);
        s += &w2.scale(&psi1).scale_f64(0.5);
        acc += &s;
        ln_gamma_n += &nr.ln();
        ln_gamma_wn += &w.add_real(&nr).ln();
        psi += &nr.recip();
        psi1 -= &nr.square().recip();
    }

    let mut tail = HComplex::zero(wp);
    let neg_w = -&w;
    let mut pw = &(&neg_w * &neg_w) * &neg_w;
    let nm1 = Real::from_i64(wp, n_cut as i64 - 1);
    let target = acc.log2_abs().max(0.0) - wp as f64;
    let mut converged = false;
    for k in 3..(4 * wp) {
        let zk1 = hurwitz_zeta_int(k - 1, n_cut, wp);
        let zk = hurwitz_zeta_int(k, n_cut, wp);
        let coeff = (zk1 - &nm1 * &zk).div_i64(k as i64);
        let term = pw.scale(&coeff);
        let small = term.log2_abs() < target;
        tail -= &term;
        if small {
            converged = true;
            break;
        }
        pw = &pw * &neg_w;
    }
    if !converged {
        return Err(Error::NoConvergence { what: "Barnes product tail".into(), iterations: 4 * wp as usize });
    }
    Ok((acc + tail).with_prec(ctx.bits))
}

/// Integrand of the log G(1 + w) representation at node `t`, including e^(-t).
fn barnes_integrand(w: &HComplex, t: &Real) -> HComplex {
    let wp = t.prec();
    let wt = w.scale(t);
    let bracket = if wt.abs().to_f64() < 0.5 {
        // sum_{k>=3} (-wt)^k / k!
        let neg = -&wt;
        let mut term = &(&neg * &neg) * &neg;
        term = term.scale(&Real::from_i64(wp, 6).recip());
        let mut sum = term.clone();
        let target = term.log2_abs() - wp as f64 - 4.0;
        for k in 4..(4 * wp as i64) {
            term = (&term * &neg).scale(&Real::from_i64(wp, k).recip());
            sum += &term;
            if term.log2_abs() < target {
                break;
            }
        }
        sum.scale(&(-t).exp())
    } else {
        // e^(-t) e^(-wt) is formed as one exponential so that it cannot overflow.
        let e = (-&w.add_f64(1.0, 0.0).scale(t)).exp();
        let poly = (HComplex::one(wp) - &wt) + (&wt * &wt).scale_f64(0.5);
        e - poly.scale(&(-t).exp())
    };
    let d = (-t).exp_m1();
    let denom = &(t * &d) * &d;
    bracket.scale(&denom.recip())
}

/// log G(z) by the integral representation, valid for Re z > 0.
///
/// log G(1 + w) = -int_0^inf dt e^(-t)/t [e^(-wt) - 1 + wt - w^2 t^2/2]/(1 - e^(-t))^2
///                - (1 + gamma) w^2/2 + (w/2) ln 2 pi - w/2.
/// Other points are reached through G(z) = G(z + k) / prod_j Gamma(z + j).
pub fn log_barnes_g_integral(z: &HComplex, ctx: &PrecisionContext) -> Result<HComplex> {
    if is_barnes_zero(z) {
        return Err(Error::PoleArgument(format!("G vanishes at {:?}", z.re)));
    }
    let re = z.re.to_f64();
    let shift = if re > 0.5 { 0u64 } else { (0.5 - re).ceil() as u64 + 1 };
    if shift > 100_000 {
        return Err(Error::RouteDomain(format!("Re z = {re} too far from the half-plane Re z > 0")));
    }
    let wp = ctx.bits + GUARD_BITS;
    let zs = z.with_prec(wp).add_f64(shift as f64, 0.0);
    let mut shift_terms = HComplex::zero(wp);
    let pctx = PrecisionContext::new(wp);
    for j in 0..shift {
        shift_terms += &log_gamma(&z.with_prec(wp).add_f64(j as f64, 0.0), &pctx)?;
    }

    let w = zs.add_f64(-1.0, 0.0);
    let qp = wp + 32;
    let wq = w.with_prec(qp);
    let integral = exp_sinh_half_line(|t| Ok(barnes_integrand(&wq, t)), qp, wp)?;
    let gamma = Real::euler_gamma(wp);
    let w2 = &w * &w;
    let mut out = -integral.with_prec(wp);
    out -= &w2.scale(&gamma.add_f64(1.0)).scale_f64(0.5);
    out += &w.scale(&Real::pi(wp).mul_f64(2.0).ln()).scale_f64(0.5);
    out -= &w.scale_f64(0.5);
    Ok((out - shift_terms).with_prec(ctx.bits))
}

/// Barnes G(z) through the product route; exactly zero at z = 0, -1, -2, ...
pub fn barnes_g(z: &HComplex, ctx: &PrecisionContext) -> Result<HComplex> {
    if is_barnes_zero(z) {
        return Ok(HComplex::zero(ctx.bits));
    }
    Ok(log_barnes_g_product(z, ctx)?.exp())
}

/// Both evaluations of G(z) and their relative discrepancy.
#[derive(Clone, Debug)]
pub struct BarnesRoutes {
    pub product: HComplex,
    pub integral: HComplex,
    pub rel_diff: f64,
}

pub fn barnes_g_routes(z: &HComplex, ctx: &PrecisionContext) -> Result<BarnesRoutes> {
    let product = log_barnes_g_product(z, ctx)?.exp();
    let integral = log_barnes_g_integral(z, ctx)?.exp();
    let rel_diff = ((&product - &integral).abs() / product.abs()).to_f64();
    Ok(BarnesRoutes { product, integral, rel_diff })
}
