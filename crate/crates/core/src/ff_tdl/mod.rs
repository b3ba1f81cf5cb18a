//! Thermodynamic-limit quantities: the Baxter and eigenvalue ratios, the
//! Omega factors and the two closed forms of the scaled form factor.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bethe::BetheState;
use crate::error::{Error, Result};
use crate::numeric::{oscillatory_tail_quad, HComplex, PrecisionContext, Real};
use crate::special::{log_barnes_g_product, log_gamma};

/// Rapidities of the two holes of a two-spinon triplet.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolePair {
    pub mu_h1: f64,
    pub mu_h2: f64,
}

impl HolePair {
    pub fn new(mu_h1: f64, mu_h2: f64) -> Result<Self> {
        if !mu_h1.is_finite() || !mu_h2.is_finite() {
            return Err(Error::InvalidInput("hole rapidities must be finite".into()));
        }
        Ok(HolePair { mu_h1, mu_h2 })
    }

    /// The pair (dmu/2, -dmu/2).
    pub fn symmetric(dmu: f64) -> Result<Self> {
        Self::new(dmu / 2.0, -dmu / 2.0)
    }

    pub fn from_state(e: &BetheState) -> Result<Self> {
        let h = e.holes_f64();
        if h.len() != 2 {
            return Err(Error::InvalidInput(format!("expected two holes, state has {}", h.len())));
        }
        Self::new(h[0], h[1])
    }

    pub fn delta(&self) -> f64 {
        self.mu_h1 - self.mu_h2
    }

    fn as_array(&self) -> [f64; 2] {
        [self.mu_h1, self.mu_h2]
    }
}

/// Limit of q_e/q_g off the real axis:
/// (1/2i) prod_a Gamma(x_a)/Gamma(1/2 + x_a), x_a = (lambda - mu_ha)/(2i), above the axis,
/// and the conjugate branch -(1/2i) prod_a Gamma(-x_a)/Gamma(1/2 - x_a) below.
pub fn phi(lambda: &HComplex, holes: &HolePair, ctx: &PrecisionContext) -> Result<HComplex> {
    if lambda.im.is_zero() {
        return Err(Error::RealAxisArgument);
    }
    let prec = ctx.bits.max(lambda.prec());
    let upper = !lambda.im.is_sign_negative();
    let half = Real::ratio(prec, 1, 2);
    let mut acc = HComplex::zero(prec);
    for h in holes.as_array() {
        // (lambda - h)/(2i) = -i (lambda - h)/2
        let x = lambda.with_prec(prec).add_f64(-h, 0.0).mul_i().scale_f64(-0.5);
        let x = if upper { x } else { -x };
        acc += &log_gamma(&x, ctx)?;
        acc -= &log_gamma(&x.add_real(&half), ctx)?;
    }
    // 1/(2i) = -i/2
    let pref = HComplex::from_f64(prec, 0.0, if upper { -0.5 } else { 0.5 });
    Ok(&pref * &acc.exp())
}

/// Limit of tau_e/tau_g on the real axis: prod_a tanh(pi (lambda - mu_ha)/2).
pub fn chi(lambda: f64, holes: &HolePair) -> f64 {
    holes
        .as_array()
        .iter()
        .map(|h| (std::f64::consts::FRAC_PI_2 * (lambda - h)).tanh())
        .product()
}

/// n^2 prod_a [(n - 1/2)^2 + (lambda - mu_ha)^2/4] / (n - 1/2)^6.
pub fn omega_n(lambda: f64, holes: &HolePair, n: u32) -> f64 {
    let nf = n as f64;
    let s = nf - 0.5;
    let prod: f64 = holes.as_array().iter().map(|h| s * s + (lambda - h).powi(2) / 4.0).product();
    nf * nf * prod / s.powi(6)
}

/// Omega_n from the shifted ratios:
/// 16 n^2/(n - 1/2)^6 |phi(lambda + 2ni)|^2 |phi(lambda + (2n-1)i)|^2 prod_a [(n - 1/2)^2 + (lambda - mu_ha)^2/4]^2.
pub fn omega_n_baxter(lambda: f64, holes: &HolePair, n: u32, ctx: &PrecisionContext) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput("omega_n needs n >= 1".into()));
    }
    let nf = n as f64;
    let s = nf - 0.5;
    let a = phi(&HComplex::from_f64(ctx.bits, lambda, 2.0 * nf), holes, ctx)?;
    let b = phi(&HComplex::from_f64(ctx.bits, lambda, 2.0 * nf - 1.0), holes, ctx)?;
    let prod: f64 = holes.as_array().iter().map(|h| (s * s + (lambda - h).powi(2) / 4.0).powi(2)).product();
    Ok(16.0 * nf * nf / s.powi(6) * a.norm_sqr().to_f64() * b.norm_sqr().to_f64() * prod)
}

fn x_of(delta: f64, prec: u32) -> HComplex {
    HComplex::from_f64(prec, 0.0, -delta / 2.0)
}

/// Partial product over n = 1..=terms of
/// ((n - 1/2)/n)^2 (Gamma(n + 1/2)/Gamma(n))^4 |Gamma(n - 1/2 + x)/Gamma(n + x)|^4, x = delta/(2i).
pub fn omega_partial_product(delta: f64, terms: usize) -> Result<f64> {
    let ctx = PrecisionContext::new(64);
    let x = x_of(delta, 64);
    // ln Gamma(1/2 + x) - ln Gamma(1 + x), then advanced by recurrence.
    let lr = &log_gamma(&x.add_f64(0.5, 0.0), &ctx)? - &log_gamma(&x.add_f64(1.0, 0.0), &ctx)?;
    let mut ln_ratio = lr.to_c64().re;
    let xc = Complex64::new(0.0, -delta / 2.0);
    let mut ln_half = 0.5 * std::f64::consts::PI.ln() - std::f64::consts::LN_2;
    let mut acc = 0.0;
    for n in 1..=terms {
        let nf = n as f64;
        acc += 2.0 * ((nf - 0.5) / nf).ln() + 4.0 * ln_half + 4.0 * ln_ratio;
        ln_half += ((nf + 0.5) / nf).ln();
        ln_ratio += ((nf - 0.5 + xc) / (nf + xc)).norm().ln();
    }
    Ok(acc.exp())
}

/// Barnes G value of the infinite product:
/// G(1/2)^2 G(2)^2 / G(3/2)^6 * |G(1 + x)|^4 / |G(1/2 + x)|^4.
pub fn omega_product_limit(delta: f64, ctx: &PrecisionContext) -> Result<f64> {
    let p = ctx.bits;
    let lg = |z: HComplex| log_barnes_g_product(&z, ctx);
    let x = x_of(delta, p);
    let half = lg(HComplex::from_f64(p, 0.5, 0.0))?.re;
    let three_half = lg(HComplex::from_f64(p, 1.5, 0.0))?.re;
    let a = lg(x.add_f64(1.0, 0.0))?.re;
    let b = lg(x.add_f64(0.5, 0.0))?.re;
    let log = half.mul_i64(2) - three_half.mul_i64(6) + (a - b).mul_i64(4);
    Ok(log.exp().to_f64())
}

/// 2/G(1/2)^4 |G(x) G(1 + x) / (G(1/2 + x) G(3/2 + x))|^2 with x = dmu/(2i).
pub fn ff_closed_form(holes: &HolePair, ctx: &PrecisionContext) -> Result<f64> {
    let delta = holes.delta();
    if delta == 0.0 {
        return Ok(0.0);
    }
    let p = ctx.bits;
    let x = x_of(delta, p);
    let lg = |z: HComplex| log_barnes_g_product(&z, ctx);
    let mut log = lg(x.clone())?.re + lg(x.add_f64(1.0, 0.0))?.re;
    log -= &(lg(x.add_f64(0.5, 0.0))?.re + lg(x.add_f64(1.5, 0.0))?.re);
    let log = log.mul_i64(2) - lg(HComplex::from_f64(p, 0.5, 0.0))?.re.mul_i64(4) + Real::ln2(p);
    Ok(log.exp().to_f64())
}

/// (1/t) e^t (cos(2 d t) cosh 2t - 1)/(cosh t sinh 2t), written without cancellation.
fn log_ff_integrand(t: f64, d: f64) -> f64 {
    if t < 1e-8 {
        return 1.0 - d * d;
    }
    let num = 2.0 * t.sinh().powi(2) - 2.0 * (d * t).sin().powi(2) * (2.0 * t).cosh();
    if t < 20.0 {
        return t.exp() * num / (t * t.cosh() * (2.0 * t).sinh());
    }
    // e^t cosh 2t/(cosh t sinh 2t) and e^t/(cosh t sinh 2t) in decaying exponentials.
    let q = (-2.0 * t).exp();
    let den = (1.0 + q) * (1.0 - q * q);
    let c = 2.0 * (1.0 + q * q) / den;
    let r = 4.0 * q / den;
    ((2.0 * d * t).cos() * c - r) / t
}

/// 2 exp(-I(dmu)) with I integrated numerically; the large-t tail
/// 2 cos(2 dmu t)/t is added as a cosine integral.
pub fn ff_integral_rep(holes: &HolePair) -> Result<f64> {
    let d = holes.delta();
    if d == 0.0 {
        return Err(Error::DivergentTail);
    }
    let i = oscillatory_tail_quad(|t| log_ff_integrand(t, d), 0.0, 2.0 * d, 2.0, 1e-13)?;
    Ok(2.0 * (-i).exp())
}

/// Both representations of the scaled thermodynamic form factor.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TdlFormFactor {
    pub mu_h1: f64,
    pub mu_h2: f64,
    pub dmu: f64,
    pub closed_form: f64,
    pub integral_rep: f64,
    pub rel_diff: f64,
    /// Set when dmu = 0 and both values are 0 by continuity.
    pub zero_by_convention: bool,
    pub bits_used: u32,
}

pub fn tdl_form_factor(holes: &HolePair, ctx: &PrecisionContext) -> Result<TdlFormFactor> {
    let closed_form = ff_closed_form(holes, ctx)?;
    let (integral_rep, zero) = match ff_integral_rep(holes) {
        Ok(v) => (v, false),
        Err(Error::DivergentTail) => (0.0, true),
        Err(e) => return Err(e),
    };
    let rel_diff = if zero { 0.0 } else { (closed_form - integral_rep).abs() / closed_form };
    Ok(TdlFormFactor {
        mu_h1: holes.mu_h1,
        mu_h2: holes.mu_h2,
        dmu: holes.delta(),
        closed_form,
        integral_rep,
        rel_diff,
        zero_by_convention: zero,
        bits_used: ctx.bits,
    })
}

/// Scaled thermodynamic form factor at the hole rapidities of a finite-M triplet.
pub fn scaled_ff_prediction(e: &BetheState) -> Result<f64> {
    ff_closed_form(&HolePair::from_state(e)?, &PrecisionContext::new(128))
}
