use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use spinon_core::bethe::{solve_ground, solve_two_spinon_triplet, BetheState, QuantumNumbers};
use spinon_core::ed::{completeness, ff_ed_for_state, load_or_compute, match_state, multiplicity, EdSpectrum};
use spinon_core::ff_finite::{
    big_cauchy_det, ff_determinant, logdet_rel_diff, sinh_cauchy_det, sinh_cauchy_matrix, small_cauchy_det,
};
use spinon_core::ff_tdl::{omega_partial_product, omega_product_limit, tdl_form_factor, HolePair};
use spinon_core::numeric::{det_logscaled, HComplex, PrecisionContext};
use spinon_core::special::{barnes_g, barnes_g_routes, log_gamma};

use crate::args::{Format, ValidateArgs};
use crate::commands::chain;
use crate::output::emit_rows;
use crate::CliError;

const SEED: u64 = 0x5eed;

#[derive(Serialize)]
struct CheckRow {
    suite: &'static str,
    check: String,
    passed: bool,
    detail: String,
    bits_used: u32,
}

impl CheckRow {
    fn new(suite: &'static str, check: impl Into<String>, passed: bool, detail: String, bits: u32) -> Self {
        CheckRow { suite, check: check.into(), passed, detail, bits_used: bits }
    }
}

fn spectrum(a: &ValidateArgs, sz: i32) -> Result<EdSpectrum, CliError> {
    Ok(match &a.cache {
        Some(dir) => load_or_compute(dir, a.m, sz)?,
        None => EdSpectrum::compute(a.m, sz)?,
    })
}

fn ed_suite(a: &ValidateArgs) -> Result<Vec<CheckRow>, CliError> {
    let c = chain(a.m, a.bits)?;
    let bits = c.ctx.bits;
    let s0 = spectrum(a, 0)?;
    let sp = spectrum(a, 1)?;
    let sm = spectrum(a, -1)?;
    let all = [&sm, &s0, &sp];
    let g = solve_ground(&c)?;
    let mut rows = Vec::new();

    let de = (s0.energies[0] - g.energy().to_f64()).abs();
    rows.push(CheckRow::new("ed", "ground energy", de < 1e-12, format!("|dE| = {de:e}"), bits));
    let gi = match_state(&s0, &g);
    rows.push(CheckRow::new("ed", "ground match", matches!(gi, Ok(0)), format!("{gi:?}"), bits));

    let k = QuantumNumbers::triplet_vacancies(a.m).len();
    let pairs: Vec<(usize, usize)> = (1..=k).flat_map(|i| (i + 1..=k).map(move |j| (i, j))).collect();
    let eval = |&(i, j): &(usize, usize)| -> Result<(CheckRow, usize), CliError> {
        let e: BetheState = solve_two_spinon_triplet(&c, (i, j))?;
        let f = ff_determinant(&g, &e, &c.ctx)?;
        let x = ff_ed_for_state(&s0, &e)?;
        let mult = multiplicity(&all, e.energy().to_f64(), e.momentum().to_f64());
        let rel = (f.value - x.value).abs() / x.value;
        let ok = rel <= 1e-10 && x.spread < 1e-12 && mult == 3;
        let detail = format!("det {:e} ed {:e} rel {rel:e} spread {:e} multiplicity {mult}", f.value, x.value, x.spread);
        Ok((CheckRow::new("ed", format!("triplet ({i},{j})"), ok, detail, f.bits_used), x.index))
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs.max(1))
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let results: Vec<Result<(CheckRow, usize), CliError>> = pool.install(|| pairs.par_iter().map(eval).collect());
    let mut matched = Vec::new();
    for r in results {
        let (row, idx) = r?;
        rows.push(row);
        matched.push(idx);
    }
    let mut uniq = matched.clone();
    uniq.sort_unstable();
    uniq.dedup();
    rows.push(CheckRow::new(
        "ed",
        "injective matching",
        uniq.len() == matched.len(),
        format!("{} triplets, {} distinct levels", matched.len(), uniq.len()),
        bits,
    ));
    let cm = completeness(&s0, &uniq)?;
    rows.push(CheckRow::new(
        "ed",
        "sum rule",
        (cm.total - 1.0).abs() < 1e-12,
        format!("total {} triplet share {}", cm.total, cm.selected_share),
        bits,
    ));
    Ok(rows)
}

/// 2n + 1 increasing points with random gaps, split alternately into an
/// n-set and an (n + 1)-set, with random imaginary parts up to `im`.
fn interlaced(rng: &mut ChaCha8Rng, n: usize, prec: u32, im: f64) -> (Vec<HComplex>, Vec<HComplex>) {
    let mut t = -0.3 * n as f64;
    let (mut odd, mut even) = (Vec::new(), Vec::new());
    for k in 0..=2 * n {
        t += rng.gen_range(0.05..0.6);
        let z = HComplex::from_f64(prec, t, rng.gen_range(-im..=im));
        if k % 2 == 1 {
            odd.push(z);
        } else {
            even.push(z);
        }
    }
    (odd, even)
}

fn cauchy_suite(bits: u32) -> Result<Vec<CheckRow>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let ctx = PrecisionContext::new(bits);
    let tol = 2f64.powi(-(bits as i32) / 2);
    let (mut worst_gen, mut worst_small, mut worst_big) = (0f64, 0f64, 0f64);
    for _ in 0..20 {
        let n = rng.gen_range(2..=12);
        let (x, mut y) = interlaced(&mut rng, n, bits, 0.3);
        y.pop();
        let direct = det_logscaled(&sinh_cauchy_matrix(&x, &y)?, &ctx)?;
        worst_gen = worst_gen.max(logdet_rel_diff(&direct, &sinh_cauchy_det(&x, &y)?));

        let (lam, mut nu) = interlaced(&mut rng, n, bits, 0.0);
        let a = rng.gen_range(0..nu.len());
        let h1 = nu.remove(a);
        let h2 = nu.remove(rng.gen_range(0..nu.len()));
        let mu = nu;
        let ih = HComplex::from_f64(bits, 0.0, 0.5);
        let mut p = mu.clone();
        p.push(ih.clone());
        let direct = det_logscaled(&sinh_cauchy_matrix(&lam, &p)?, &ctx)?;
        worst_small = worst_small.max(logdet_rel_diff(&direct, &small_cauchy_det(&lam, &mu)?));
        let mut q = lam.clone();
        q.push(ih);
        let mut all = mu.clone();
        all.extend([h1.clone(), h2.clone()]);
        let direct = det_logscaled(&sinh_cauchy_matrix(&all, &q)?, &ctx)?;
        worst_big = worst_big.max(logdet_rel_diff(&direct, &big_cauchy_det(&lam, &mu, &[h1, h2])?));
    }
    Ok([("general", worst_gen), ("ground factor", worst_small), ("excited factor", worst_big)]
        .into_iter()
        .map(|(name, w)| CheckRow::new("cauchy", name, w < tol, format!("max rel {w:e} over 20 sets"), bits))
        .collect())
}

fn barnes_suite(bits: u32) -> Result<Vec<CheckRow>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let ctx = PrecisionContext::new(bits);
    let (mut rec, mut routes) = (0f64, 0f64);
    for _ in 0..20 {
        let z = HComplex::from_f64(bits, rng.gen_range(0.1..4.0), rng.gen_range(-3.0..3.0));
        let lhs = barnes_g(&z.add_f64(1.0, 0.0), &ctx)?;
        let rhs = &log_gamma(&z, &ctx)?.exp() * &barnes_g(&z, &ctx)?;
        rec = rec.max(((&lhs - &rhs).abs() / lhs.abs()).to_f64());
        routes = routes.max(barnes_g_routes(&z, &ctx)?.rel_diff);
    }
    let mut rows = vec![
        CheckRow::new("barnes", "recurrence", rec < 1e-20, format!("max rel {rec:e}"), bits),
        CheckRow::new("barnes", "product vs integral", routes < 1e-20, format!("max rel {routes:e}"), bits),
    ];
    let mut worst = 0f64;
    for d in [0.1, 0.25, 0.5, 1.0, 2.0, 5.0] {
        worst = worst.max(tdl_form_factor(&HolePair::symmetric(d)?, &ctx)?.rel_diff);
    }
    rows.push(CheckRow::new("barnes", "closed form vs integral", worst < 1e-8, format!("max rel {worst:e}"), bits));
    let mut ok = true;
    let mut detail = Vec::new();
    for d in [0.3, 1.7, 4.0] {
        let lim = omega_product_limit(d, &ctx)?;
        let e1 = (omega_partial_product(d, 100)? / lim - 1.0).abs();
        let e2 = (omega_partial_product(d, 1000)? / lim - 1.0).abs();
        ok &= e2 < e1 / 5.0;
        detail.push(format!("{d}: {e1:.2e} -> {e2:.2e}"));
    }
    rows.push(CheckRow::new("barnes", "partial products", ok, detail.join("; "), bits));
    Ok(rows)
}

pub fn validate(a: ValidateArgs) -> Result<(), CliError> {
    chain(a.m, a.bits)?;
    let mut rows = ed_suite(&a)?;
    let bits = a.bits.unwrap_or(128);
    rows.extend(cauchy_suite(bits)?);
    rows.extend(barnes_suite(bits)?);
    emit_rows(&a.output, Format::Csv, &rows)?;
    let failed: Vec<String> =
        rows.iter().filter(|r| !r.passed).map(|r| format!("{}: {} ({})", r.suite, r.check, r.detail)).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(failed))
    }
}
