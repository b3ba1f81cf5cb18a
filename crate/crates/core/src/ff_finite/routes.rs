use std::collections::BTreeMap;

use super::cauchy::sinh_cauchy_matrix;
use super::matrices::{bordered_slavnov_matrix, gaudin_matrix, slavnov_matrix};
use super::{Diagnostics, FormFactorResult, Route};
use crate::bethe::{hole_density_hp, BetheState, StateKind};
use crate::error::{Error, Result};
use crate::numeric::{det_logscaled, escalate, lu_decompose, HComplex, LogDet, Matrix, PrecisionContext, Real};

struct Eval {
    log: HComplex,
    components: BTreeMap<String, f64>,
}

fn check_pair(g: &BetheState, e: &BetheState) -> Result<(usize, usize)> {
    if g.kind != StateKind::Ground || e.kind != StateKind::TwoSpinonTriplet {
        return Err(Error::InvalidInput("expected a ground state and a two-spinon triplet".into()));
    }
    if g.m != e.m {
        return Err(Error::InvalidInput(format!("chain lengths differ: {} vs {}", g.m, e.m)));
    }
    e.hole_slots.ok_or_else(|| Error::InvalidInput("triplet without hole slots".into()))
}

fn c(r: &Real) -> HComplex {
    HComplex::from_real(r.clone())
}

fn roots_c(s: &BetheState) -> Vec<HComplex> {
    s.roots.iter().map(c).collect()
}

fn with_i_half(xs: &[HComplex], prec: u32) -> Vec<HComplex> {
    let mut v = xs.to_vec();
    v.push(HComplex::from_f64(prec, 0.0, 0.5));
    v
}

fn ln_minus_two(prec: u32) -> HComplex {
    HComplex::new(Real::from_i64(prec, 2).ln(), Real::pi(prec))
}

fn ctx_at(bits: u32) -> PrecisionContext {
    PrecisionContext::new(bits)
}

fn determinant_eval(g: &BetheState, e: &BetheState) -> Result<Eval> {
    let bits = g.bits;
    let lam = roots_c(g);
    let mu = roots_c(e);
    let mut pref = ln_minus_two(bits);
    for m in &mu {
        let x = m.add_f64(0.0, -1.0);
        pref += &(g.log_baxter_q(&x) - e.log_baxter_q(&x));
    }
    for l in &lam {
        let x = l.add_f64(0.0, -1.0);
        pref += &(e.log_baxter_q(&x) - g.log_baxter_q(&x));
    }
    let ctx = ctx_at(bits);
    let sl = det_logscaled(&slavnov_matrix(g, &with_i_half(&mu, bits))?, &ctx)?;
    let fw = det_logscaled(&bordered_slavnov_matrix(e, &with_i_half(&lam, bits))?, &ctx)?;
    let ng = det_logscaled(&gaudin_matrix(g)?, &ctx)?;
    let ne = det_logscaled(&gaudin_matrix(e)?, &ctx)?;
    let log = &(&(&pref + &sl.as_log()) + &fw.as_log()) - &(&ng.as_log() + &ne.as_log());
    let components = BTreeMap::from([
        ("prefactor".to_string(), pref.re.to_f64()),
        ("slavnov".to_string(), sl.log_modulus.to_f64()),
        ("bordered_slavnov".to_string(), fw.log_modulus.to_f64()),
        ("gaudin_ground".to_string(), ng.log_modulus.to_f64()),
        ("gaudin_excited".to_string(), ne.log_modulus.to_f64()),
    ]);
    Ok(Eval { log, components })
}

/// log of prod chi(lambda_j) / prod chi(mu_j), chi = tau_e/tau_g.
fn log_chi_ratio(g: &BetheState, e: &BetheState) -> Result<HComplex> {
    let mut acc = HComplex::zero(g.bits);
    for j in 0..g.n() {
        let x = c(&g.roots[j]);
        acc += &(e.transfer_eigenvalue_tau(&x)? / g.tau_at_root(j)?).ln();
    }
    for j in 0..e.n() {
        let x = c(&e.roots[j]);
        acc -= &(e.tau_at_root(j)? / g.transfer_eigenvalue_tau(&x)?).ln();
    }
    Ok(acc)
}

/// log of prod (lambda_j - mu_k)^2 / (prod_{j!=k}(lambda_j - lambda_k) prod_{j!=k}(mu_j - mu_k)).
fn log_rational_factor(lam: &[HComplex], mu: &[HComplex]) -> HComplex {
    let mut acc = HComplex::zero(lam[0].prec());
    for l in lam {
        for m in mu {
            acc += &(l - m).ln().scale_f64(2.0);
        }
    }
    for xs in [lam, mu] {
        for (j, a) in xs.iter().enumerate() {
            for (k, b) in xs.iter().enumerate() {
                if j != k {
                    acc -= &(a - b).ln();
                }
            }
        }
    }
    acc
}

/// The excited-state Cauchy matrix with its rank-2 hole correction and the
/// two extra rows, columns q = (lambda, i/2).
pub fn hole_corrected_matrix(g: &BetheState, e: &BetheState) -> Result<Matrix<HComplex>> {
    let bits = g.bits;
    let q = with_i_half(&roots_c(g), bits);
    let mu = roots_c(e);
    let holes: Vec<HComplex> = e.holes.iter().map(c).collect();
    let ne = mu.len();
    let base = sinh_cauchy_matrix(&mu, &q)?;
    let pi = Real::pi(bits);
    let hole_kernel: Vec<Vec<HComplex>> = holes
        .iter()
        .map(|h| q.iter().map(|qk| HComplex::from_real(pi.clone()) / (qk - h).scale(&pi).sinh()).collect())
        .collect();
    let aph: Vec<HComplex> = holes.iter().map(|h| e.counting_a_prime(h)).collect::<Result<_>>()?;
    // -2 pi i rho_h(mu_j - h_a) / a_e'(h_a)
    let mut coeff = vec![Vec::with_capacity(2); ne];
    for (j, m) in e.roots.iter().enumerate() {
        for (a, h) in e.holes.iter().enumerate() {
            let rho = hole_density_hp(&(m - h))?;
            let w = HComplex::new(Real::zero(bits), -(pi.mul_i64(2) * &rho));
            coeff[j].push(&w / &aph[a]);
        }
    }
    let aq: Vec<HComplex> = q.iter().map(|x| e.counting_a(x)).collect::<Result<_>>()?;
    Matrix::try_from_fn(ne + 2, q.len(), |j, k| {
        if j < ne {
            let mut v = base[(j, k)].clone();
            for a in 0..2 {
                v += &(&coeff[j][a] * &hole_kernel[a][k]);
            }
            Ok(v)
        } else {
            let den = aq[k].add_f64(1.0, 0.0);
            let num = if j == ne { aq[k].add_f64(-1.0, 0.0) } else { &(&aq[k] * &q[k].add_f64(0.0, 1.0)) - &q[k] };
            Ok(num / den)
        }
    })
}

fn cauchy_eval(g: &BetheState, e: &BetheState) -> Result<Eval> {
    let bits = g.bits;
    let lam = roots_c(g);
    let mu = roots_c(e);
    let chi = log_chi_ratio(g, e)?;
    let rat = log_rational_factor(&lam, &mu);
    let ctx = ctx_at(bits);
    let rg = det_logscaled(&sinh_cauchy_matrix(&lam, &with_i_half(&mu, bits))?, &ctx)?;
    let re = det_logscaled(&hole_corrected_matrix(g, e)?, &ctx)?;
    let log = &(&(&(&ln_minus_two(bits) + &chi) + &rat) + &rg.as_log()) + &re.as_log();
    let components = BTreeMap::from([
        ("chi".to_string(), chi.re.to_f64()),
        ("rational".to_string(), rat.re.to_f64()),
        ("cauchy_ground".to_string(), rg.log_modulus.to_f64()),
        ("cauchy_excited".to_string(), re.log_modulus.to_f64()),
    ]);
    Ok(Eval { log, components })
}

fn ln_sinh_pi(z: &HComplex) -> HComplex {
    z.scale(&Real::pi(z.prec())).sinh().ln()
}

fn sinh_eval(g: &BetheState, e: &BetheState) -> Result<Eval> {
    let bits = g.bits;
    let m = g.m as i64;
    let lam = roots_c(g);
    let mu = roots_c(e);
    let h: Vec<HComplex> = e.holes.iter().map(c).collect();
    let delta = &h[0] - &h[1];
    let pi = Real::pi(bits);
    let mut scale = HComplex::from_real(Real::from_i64(bits, 2).ln() + pi.ln().mul_i64(m - 1));
    scale += &delta.ln();
    scale -= &HComplex::from_real(Real::from_i64(bits, m).ln().mul_i64(2));
    scale += &ln_sinh_pi(&delta);
    let chi = log_chi_ratio(g, e)?;
    let rat = log_rational_factor(&lam, &mu);
    let mut holes_f = HComplex::zero(bits);
    for ha in &h {
        for x in &mu {
            holes_f += &ln_sinh_pi(&(ha - x));
        }
        for x in &lam {
            holes_f -= &ln_sinh_pi(&(ha - x));
        }
    }
    let mut sinh_f = HComplex::zero(bits);
    for xs in [&lam, &mu] {
        for (j, a) in xs.iter().enumerate() {
            for (k, b) in xs.iter().enumerate() {
                if j != k {
                    sinh_f += &ln_sinh_pi(&(a - b));
                }
            }
        }
    }
    for l in &lam {
        for x in &mu {
            sinh_f -= &ln_sinh_pi(&(l - x)).scale_f64(2.0);
        }
    }
    let log = &(&(&(&scale + &chi) + &rat) + &holes_f) + &sinh_f;
    let components = BTreeMap::from([
        ("scale".to_string(), scale.re.to_f64()),
        ("chi".to_string(), chi.re.to_f64()),
        ("rational".to_string(), rat.re.to_f64()),
        ("hole_sinh".to_string(), holes_f.re.to_f64()),
        ("sinh_double".to_string(), sinh_f.re.to_f64()),
    ]);
    Ok(Eval { log, components })
}

fn run(
    g: &BetheState,
    e: &BetheState,
    ctx: &PrecisionContext,
    route: Route,
    eval: fn(&BetheState, &BetheState) -> Result<Eval>,
) -> Result<FormFactorResult> {
    let slots = check_pair(g, e)?;
    let esc = escalate(ctx, |bits| {
        let gb = g.at_precision(bits)?;
        let eb = e.at_precision(bits)?;
        let ev = eval(&gb, &eb)?;
        let v = ev.log.re.exp();
        Ok(((ev, eb.holes_f64()), v))
    })?;
    let (ev, holes) = esc.value;
    let ld = LogDet::from_log(&ev.log);
    let phase = ld.phase.to_f64();
    let imag_fraction = phase.sin().abs();
    if route == Route::Determinant && imag_fraction > (-(esc.bits_used as f64) / 4.0).exp2() {
        return Err(Error::PrecisionExhausted { bits: esc.bits_used, rel_diff: imag_fraction });
    }
    let log_value = ld.log_modulus.to_f64();
    Ok(FormFactorResult {
        m: g.m,
        hole_slots: slots,
        hole_rapidities: [holes[0], holes[1]],
        value: log_value.exp(),
        log_value,
        route,
        bits_used: esc.bits_used,
        rel_diff: esc.rel_diff,
        diagnostics: Diagnostics { components: ev.components, phase, imag_fraction },
    })
}

/// Exact |F_z|^2 from the Slavnov, bordered Slavnov and Gaudin determinants.
pub fn ff_determinant(g: &BetheState, e: &BetheState, ctx: &PrecisionContext) -> Result<FormFactorResult> {
    run(g, e, ctx, Route::Determinant, determinant_eval)
}

/// |F_z|^2 from the two Cauchy determinants with exact chi factors.
pub fn ff_cauchy(g: &BetheState, e: &BetheState, ctx: &PrecisionContext) -> Result<FormFactorResult> {
    run(g, e, ctx, Route::Cauchy, cauchy_eval)
}

/// |F_z|^2 from the sinh and rational double products.
pub fn ff_sinh_product(g: &BetheState, e: &BetheState, ctx: &PrecisionContext) -> Result<FormFactorResult> {
    run(g, e, ctx, Route::SinhProduct, sinh_eval)
}

pub fn ff_route(route: Route, g: &BetheState, e: &BetheState, ctx: &PrecisionContext) -> Result<FormFactorResult> {
    match route {
        Route::Determinant => ff_determinant(g, e, ctx),
        Route::Cauchy => ff_cauchy(g, e, ctx),
        Route::SinhProduct => ff_sinh_product(g, e, ctx),
    }
}

/// The matrix P with R_e = P C, reduced three ways.
#[derive(Clone, Debug)]
pub struct DetPReport {
    /// det R_e / det C.
    pub full: HComplex,
    /// det P11 det(P22 - P21 P11^{-1} P12) from the explicit P.
    pub schur: HComplex,
    /// det(P22 - P21 P12), taking P11 to be the identity.
    pub identity_block: HComplex,
    /// (h_2 - h_1)/(a_e'(h_1) a_e'(h_2)).
    pub prediction: HComplex,
    /// Largest entry of |P11 - I|.
    pub block_defect: f64,
    pub bits: u32,
}

impl DetPReport {
    pub fn rel_discrepancy(&self) -> f64 {
        ((&self.full - &self.prediction).abs() / self.prediction.abs()).to_f64()
    }
}

fn transpose(a: &Matrix<HComplex>) -> Matrix<HComplex> {
    Matrix::from_fn(a.cols(), a.rows(), |r, k| a[(k, r)].clone())
}

fn det2(a: &Matrix<HComplex>) -> HComplex {
    &(&a[(0, 0)] * &a[(1, 1)]) - &(&a[(0, 1)] * &a[(1, 0)])
}

pub fn det_p_report(g: &BetheState, e: &BetheState) -> Result<DetPReport> {
    check_pair(g, e)?;
    let bits = g.bits.min(e.bits);
    let ctx = ctx_at(bits);
    let re = hole_corrected_matrix(g, e)?;
    let mut nu = roots_c(e);
    nu.extend(e.holes.iter().map(c));
    let cm = sinh_cauchy_matrix(&nu, &with_i_half(&roots_c(g), bits))?;
    let full = det_logscaled(&re, &ctx)?.div(&det_logscaled(&cm, &ctx)?).value();

    // P^T = (C^T)^{-1} R_e^T
    let p = transpose(&lu_decompose(&transpose(&cm), bits)?.solve_matrix(&transpose(&re))?);
    let n = p.rows();
    let k = n - 2;
    let p11 = p.submatrix(0..k, 0..k);
    let p12 = p.submatrix(0..k, k..n);
    let p21 = p.submatrix(k..n, 0..k);
    let p22 = p.submatrix(k..n, k..n);
    let mut block_defect = 0.0f64;
    for r in 0..k {
        for s in 0..k {
            let d = if r == s { p11[(r, s)].add_f64(-1.0, 0.0) } else { p11[(r, s)].clone() };
            block_defect = block_defect.max(d.abs().to_f64());
        }
    }
    let lu11 = lu_decompose(&p11, bits)?;
    let x = lu11.solve_matrix(&p12)?;
    let corr = p21.matmul(&x)?;
    let schur_block = Matrix::from_fn(2, 2, |r, s| &p22[(r, s)] - &corr[(r, s)]);
    let schur = &lu11.log_det().value() * &det2(&schur_block);
    let ab = p21.matmul(&p12)?;
    let id_block = Matrix::from_fn(2, 2, |r, s| &p22[(r, s)] - &ab[(r, s)]);
    let identity_block = det2(&id_block);

    let h1 = c(&e.holes[0]);
    let h2 = c(&e.holes[1]);
    let prediction = (&h2 - &h1) / (&e.counting_a_prime(&h1)? * &e.counting_a_prime(&h2)?);
    Ok(DetPReport { full, schur, identity_block, prediction, block_defect, bits })
}
