use num_complex::Complex64;

use super::complex::HComplex;
use super::real::Real;
use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

const MAX_INTERVALS: usize = 5000;

/// Kronrod estimate and |Kronrod - Gauss| on one panel.
fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

fn adaptive_finite(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (v, e) = gk15(f, a, b);
    let mut panels = vec![(a, b, v, e)];
    loop {
        let total: f64 = panels.iter().map(|p| p.2).sum();
        let err: f64 = panels.iter().map(|p| p.3).sum();
        if !total.is_finite() {
            return Err(Error::NoConvergence { what: "adaptive quadrature (non-finite integrand)".into(), iterations: panels.len() });
        }
        if err <= tol * (1.0 + total.abs()) {
            return Ok(total);
        }
        if panels.len() >= MAX_INTERVALS {
            return Err(Error::NoConvergence { what: "adaptive quadrature".into(), iterations: panels.len() });
        }
        let (i, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("nonempty");
        let (pa, pb, _, pe) = panels.swap_remove(i);
        let mid = 0.5 * (pa + pb);
        if mid <= pa || mid >= pb {
            // Panel can no longer be split; keep its estimate and stop refining it.
            panels.push((pa, pb, gk15(f, pa, pb).0, 0.0));
            if pe > tol * (1.0 + total.abs()) {
                return Err(Error::NoConvergence { what: "adaptive quadrature (panel underflow)".into(), iterations: panels.len() });
            }
            continue;
        }
        let (v1, e1) = gk15(f, pa, mid);
        let (v2, e2) = gk15(f, mid, pb);
        panels.push((pa, mid, v1, e1));
        panels.push((mid, pb, v2, e2));
    }
}

/// Adaptive Gauss-Kronrod (7/15) quadrature of `f` over `[a, b]`.
///
/// Infinite endpoints are handled by the maps `t = a + x/(1-x)` and
/// `t = x/(1-x^2)`. The target is `|error| <= tol * (1 + |result|)`.
pub fn adaptive_quad(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a.is_nan() || b.is_nan() || !(tol > 0.0) {
        return Err(Error::InvalidInput("quadrature bounds or tolerance".into()));
    }
    if a > b {
        return adaptive_quad(f, b, a, tol).map(|v| -v);
    }
    match (a.is_finite(), b.is_finite()) {
        (true, true) => adaptive_finite(&f, a, b, tol),
        (true, false) => {
            let g = |x: f64| {
                let d = 1.0 - x;
                f(a + x / d) / (d * d)
            };
            adaptive_finite(&g, 0.0, 1.0, tol)
        }
        (false, true) => {
            let g = |x: f64| {
                let d = 1.0 - x;
                f(b - x / d) / (d * d)
            };
            adaptive_finite(&g, 0.0, 1.0, tol)
        }
        (false, false) => {
            let g = |x: f64| {
                let d = 1.0 - x * x;
                f(x / d) * (1.0 + x * x) / (d * d)
            };
            adaptive_finite(&g, -1.0, 1.0, tol)
        }
    }
}

/// Cosine integral Ci(x) = gamma + ln x + int_0^x (cos t - 1)/t dt for x > 0.
pub fn cos_integral(x: f64) -> f64 {
    const EULER: f64 = 0.577_215_664_901_532_9;
    assert!(x > 0.0, "Ci needs a positive argument");
    if x <= 2.0 {
        let x2 = x * x;
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..60 {
            let kk = 2 * k;
            term *= -x2 / ((kk - 1) * kk) as f64;
            let add = term / kk as f64;
            sum += add;
            if add.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        return EULER + x.ln() + sum;
    }
    // Lentz continued fraction for E1(ix).
    let tiny = 1e-300;
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 2..1000 {
        let a = -((i - 1) * (i - 1)) as f64;
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            break;
        }
    }
    h *= Complex64::new(x.cos(), -x.sin());
    -h.re
}

/// Integrate `f` over `[a, inf)` when `f(t) ~ c cos(freq t)/t + O(e^(-2t))`.
///
/// The range `[a, T]` is integrated adaptively with `T = max(40, -ln(tol)/2)`
/// and the tail is added in closed form as `-c Ci(freq T)`.
pub fn oscillatory_tail_quad(
    f: impl Fn(f64) -> f64,
    a: f64,
    freq: f64,
    c: f64,
    tol: f64,
) -> Result<f64> {
    if freq == 0.0 && c != 0.0 {
        return Err(Error::DivergentTail);
    }
    let cutoff = 40f64.max(-tol.ln() / 2.0).max(a + 1.0);
    let body = adaptive_quad(&f, a, cutoff, tol)?;
    let tail = if c == 0.0 { 0.0 } else { -c * cos_integral(freq.abs() * cutoff) };
    Ok(body + tail)
}

/// Exp-sinh quadrature of a complex integrand over `(0, inf)` at `prec` bits.
///
/// Levels halve the step until two successive sums agree to `2^(-tol_bits)`.
/// The integrand must be bounded near 0 and decay at infinity.
pub fn exp_sinh_half_line(
    f: impl Fn(&Real) -> Result<HComplex>,
    prec: u32,
    tol_bits: u32,
) -> Result<HComplex> {
    let half_pi = Real::pi(prec).mul_f64(0.5);
    let node = |t: &Real| -> (Real, Real) {
        let (sh, ch) = t.sinh_cosh();
        let x = (&half_pi * &sh).exp();
        let w = &(&half_pi * &ch) * &x;
        (x, w)
    };
    let lo_cut = -((tol_bits + 40) as f64);
    let hi_cut = 40.0;
    let negligible = |term: &HComplex, sum: &HComplex| -> bool {
        let ls = sum.log2_abs();
        term.log2_abs() < ls.max(-1e9) - (tol_bits as f64) - 12.0
    };

    // Sum over t = offset + k*step in both directions from the offset.
    let sweep = |step: &Real, offset: &Real, sum_hint: &HComplex| -> Result<HComplex> {
        let mut acc = HComplex::zero(prec);
        for dir in [1.0f64, -1.0] {
            let mut quiet = 0;
            let mut k: i64 = if dir > 0.0 { 0 } else { -1 };
            loop {
                let t = offset + &step.mul_i64(k);
                let (x, w) = node(&t);
                let lx = x.log2_abs();
                if lx > hi_cut || lx < lo_cut {
                    break;
                }
                let term = f(&x)?.scale(&w);
                let reference = if sum_hint.is_zero() { acc.clone() } else { sum_hint.clone() };
                if !reference.is_zero() && negligible(&term, &reference) {
                    quiet += 1;
                    if quiet >= 3 {
                        break;
                    }
                } else {
                    quiet = 0;
                }
                acc += &term;
                k += if dir > 0.0 { 1 } else { -1 };
            }
        }
        Ok(acc)
    };

    let mut h = Real::one(prec);
    let zero = Real::zero(prec);
    let raw = sweep(&h, &zero, &HComplex::zero(prec))?;
    let mut s = raw.scale(&h);
    for level in 1..=14 {
        h = h.mul_f64(0.5);
        let hint = s.clone();
        let odd = sweep(&h.mul_f64(2.0), &h, &hint)?;
        let next = s.scale_f64(0.5) + odd.scale(&h);
        let diff = (&next - &s).log2_abs();
        let mag = next.log2_abs();
        s = next;
        if level >= 3 && (diff < mag - tol_bits as f64 || s.is_zero()) {
            return Ok(s);
        }
    }
    Err(Error::NoConvergence { what: "exp-sinh quadrature".into(), iterations: 14 })
}
