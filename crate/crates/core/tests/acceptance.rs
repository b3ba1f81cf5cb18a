//! Acceptance criteria 1-9, one PASS/FAIL line each.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinon_core::bethe::{
    ground_density, hole_density, solve_ground, solve_two_spinon_triplet, BetheState, ChainSpec, QuantumNumbers,
};
use spinon_core::ed::{completeness, ff_ed_for_state, EdSpectrum};
use spinon_core::ff_finite::{
    big_cauchy_det, det_p_report, ff_determinant, first_det, first_det_matrix, logdet_rel_diff, sinh_cauchy_det,
    sinh_cauchy_matrix, small_cauchy_det,
};
use spinon_core::ff_tdl::{
    chi, ff_closed_form, ff_integral_rep, omega_partial_product, omega_product_limit, phi, scaled_ff_prediction,
    tdl_form_factor, HolePair,
};
use spinon_core::numeric::{adaptive_quad, det_logscaled, HComplex, PrecisionContext};
use spinon_core::special::{barnes_g_routes, log_barnes_g_product, log_gamma};
use spinon_core::Result;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Chains shared by the large-M criteria, solved once at the default precision.
struct Chains {
    states: BTreeMap<usize, (BetheState, BetheState)>,
}

fn symmetric_slots(m: usize) -> (usize, usize) {
    let a = m / 8 + 1;
    (a, m / 2 + 2 - a)
}

impl Chains {
    fn solve(ms: &[usize]) -> Result<Self> {
        let solved: Vec<Result<(usize, (BetheState, BetheState))>> = std::thread::scope(|s| {
            let handles: Vec<_> = ms
                .iter()
                .map(|&m| {
                    s.spawn(move || {
                        let c = ChainSpec::with_default_precision(m)?;
                        Ok((m, (solve_ground(&c)?, solve_two_spinon_triplet(&c, symmetric_slots(m))?)))
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("solver thread panicked")).collect()
        });
        Ok(Chains { states: solved.into_iter().collect::<Result<_>>()? })
    }

    fn pair(&self, m: usize) -> &(BetheState, BetheState) {
        &self.states[&m]
    }
}

fn c1_ed_oracle() -> Result<Outcome> {
    let mut worst = 0f64;
    let mut spread = 0f64;
    let mut count = 0;
    for m in [8, 10, 12] {
        let spec = EdSpectrum::compute(m, 0)?;
        let c = ChainSpec::with_default_precision(m)?;
        let g = solve_ground(&c)?;
        let k = QuantumNumbers::triplet_vacancies(m).len();
        for a in 1..=k {
            for b in a + 1..=k {
                let e = solve_two_spinon_triplet(&c, (a, b))?;
                let det = ff_determinant(&g, &e, &c.ctx)?;
                let ed = ff_ed_for_state(&spec, &e)?;
                worst = worst.max((det.value - ed.value).abs() / ed.value);
                spread = spread.max(ed.spread);
                count += 1;
            }
        }
    }
    Ok(outcome(
        worst <= 1e-10 && spread < 1e-12,
        format!("{count} triplets at M = 8, 10, 12: max rel err {worst:.2e}, max site spread {spread:.2e}"),
    ))
}

fn c2_representations() -> Result<Outcome> {
    let ctx = PrecisionContext::new(128);
    let mut worst = 0f64;
    for d in [0.1, 0.25, 0.5, 1.0, 2.0, 5.0] {
        let h = HolePair::symmetric(d)?;
        let (a, b) = (ff_closed_form(&h, &ctx)?, ff_integral_rep(&h)?);
        worst = worst.max((a - b).abs() / a);
    }
    let zero = tdl_form_factor(&HolePair::new(0.3, 0.3)?, &ctx)?;
    let zero_ok = zero.closed_form == 0.0 && zero.integral_rep == 0.0 && zero.zero_by_convention;
    Ok(outcome(
        worst < 1e-8 && zero_ok,
        format!("max rel diff {worst:.2e} on the grid; dmu = 0 gives {} and {}", zero.closed_form, zero.integral_rep),
    ))
}

fn c3_convergence(chains: &Chains) -> Result<Outcome> {
    let t = Instant::now();
    let ms = [32, 64, 128, 256];
    let mut devs = Vec::new();
    let mut rows = Vec::new();
    let results: Vec<Result<(f64, f64, u32)>> = std::thread::scope(|s| {
        let handles: Vec<_> = ms
            .iter()
            .map(|&m| {
                s.spawn(move || {
                    let (g, e) = chains.pair(m);
                    let f = ff_determinant(g, e, &PrecisionContext::for_chain(m))?;
                    Ok((f.scaled(), scaled_ff_prediction(e)?, f.bits_used))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("form factor thread panicked")).collect()
    });
    for (&m, r) in ms.iter().zip(results) {
        let (scaled, tdl, bits) = r?;
        let dev = (scaled - tdl).abs() / tdl;
        devs.push(dev);
        rows.push(format!("M={m}: {scaled:.6}/{tdl:.6} dev {dev:.4} ({bits} bits)"));
    }
    let drops = devs.windows(2).filter(|w| w[1] >= w[0]).count();
    let ratios: Vec<f64> = devs.windows(2).map(|w| w[1] / w[0]).collect();
    let ratios_ok = ratios.iter().all(|r| (0.25..=0.75).contains(r));
    let pass = drops <= 1 && devs[3] < 0.02 && ratios_ok;
    let ratio_text: Vec<String> = ratios.iter().map(|r| format!("{r:.3}")).collect();
    Ok(outcome(
        pass,
        format!(
            "{}; doubling ratios {}; {:.0} s",
            rows.join(", "),
            ratio_text.join(", "),
            t.elapsed().as_secs_f64()
        ),
    ))
}

/// 2n + 1 increasing points with random gaps, split alternately.
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

fn c4_cauchy() -> Result<Outcome> {
    let bits = 128;
    let ctx = PrecisionContext::new(bits);
    let tol = 2f64.powi(-(bits as i32) / 2);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut grounds: BTreeMap<usize, BetheState> = BTreeMap::new();
    let mut worst = [0f64; 4];
    for _ in 0..100 {
        let n = rng.gen_range(2..=20);
        let (x, mut y) = interlaced(&mut rng, n, bits, 0.3);
        y.pop();
        let direct = det_logscaled(&sinh_cauchy_matrix(&x, &y)?, &ctx)?;
        worst[0] = worst[0].max(logdet_rel_diff(&direct, &sinh_cauchy_det(&x, &y)?));

        let (lam, mut nu) = interlaced(&mut rng, n, bits, 0.0);
        let h1 = nu.remove(rng.gen_range(0..nu.len()));
        let h2 = nu.remove(rng.gen_range(0..nu.len()));
        let ih = HComplex::from_f64(bits, 0.0, 0.5);
        let mut p = nu.clone();
        p.push(ih.clone());
        let direct = det_logscaled(&sinh_cauchy_matrix(&lam, &p)?, &ctx)?;
        worst[1] = worst[1].max(logdet_rel_diff(&direct, &small_cauchy_det(&lam, &nu)?));
        let mut q = lam.clone();
        q.push(ih);
        let mut all = nu.clone();
        all.extend([h1.clone(), h2.clone()]);
        let direct = det_logscaled(&sinh_cauchy_matrix(&all, &q)?, &ctx)?;
        worst[2] = worst[2].max(logdet_rel_diff(&direct, &big_cauchy_det(&lam, &nu, &[h1, h2])?));

        // Ground roots of a 2n-site chain with one random point between each neighbouring pair.
        if !grounds.contains_key(&n) {
            grounds.insert(n, solve_ground(&ChainSpec::new(2 * n, ctx)?)?);
        }
        let g = &grounds[&n];
        let roots = g.roots_f64();
        let mus: Vec<HComplex> =
            roots.windows(2).map(|w| HComplex::from_f64(bits, w[0] + rng.gen_range(0.2..0.8) * (w[1] - w[0]), 0.0)).collect();
        let direct = det_logscaled(&first_det_matrix(g, &mus)?, &ctx)?;
        worst[3] = worst[3].max(logdet_rel_diff(&direct, &first_det(g, &mus)?));
    }
    let pass = worst.iter().all(|&w| w < tol);
    Ok(outcome(
        pass,
        format!(
            "100 sets, sizes 2-20 at 128 bits: general {:.1e}, ground factor {:.1e}, excited factor {:.1e}, ground-state matrix {:.1e} (tol {tol:.1e})",
            worst[0], worst[1], worst[2], worst[3]
        ),
    ))
}

fn c5_block_reduction(chains: &Chains) -> Result<Outcome> {
    let mut discs = Vec::new();
    let mut rows = Vec::new();
    for m in [64, 128] {
        let (g, e) = chains.pair(m);
        let r = det_p_report(g, e)?;
        let d = r.rel_discrepancy();
        discs.push(d);
        rows.push(format!("M={m}: full {:.6e} predicted {:.6e} rel {d:.4}", r.full.re.to_f64(), r.prediction.re.to_f64()));
    }
    Ok(outcome(discs[1] < discs[0], rows.join(", ")))
}

fn c6_densities() -> Result<Outcome> {
    let mut resid = 0f64;
    for k in 0..=60 {
        let l = -3.0 + 0.1 * k as f64;
        let conv = adaptive_quad(
            |m| ground_density(m) / (std::f64::consts::PI * (1.0 + (l - m) * (l - m))),
            f64::NEG_INFINITY,
            f64::INFINITY,
            1e-14,
        )?;
        let rhs = 1.0 / (2.0 * std::f64::consts::PI * (l * l + 0.25));
        resid = resid.max((ground_density(l) + conv - rhs).abs());
    }
    let mass = adaptive_quad(hole_density, f64::NEG_INFINITY, f64::INFINITY, 1e-13)?;
    let mut odd = 0f64;
    for k in 0..=30 {
        let l = 0.1 * k as f64;
        odd = odd.max((hole_density(l) - hole_density(-l)).abs());
    }
    Ok(outcome(
        resid < 1e-10 && (mass - 0.5).abs() < 1e-10 && odd == 0.0,
        format!("integral-equation residual {resid:.1e} on [-3, 3]; hole mass {mass:.12}; max |rho_h(l) - rho_h(-l)| {odd:.1e}"),
    ))
}

fn c7_ratio_limits(chains: &Chains) -> Result<Outcome> {
    let mut dq = Vec::new();
    let mut dt = Vec::new();
    let ctx = PrecisionContext::new(128);
    for m in [32, 64, 128, 256] {
        let (g, e) = chains.pair(m);
        let h = HolePair::from_state(e)?;
        let z = HComplex::from_f64(g.bits, 0.3, 0.7);
        let ratio = &e.baxter_q(&z) / &g.baxter_q(&z);
        let limit = phi(&z, &h, &ctx)?;
        dq.push(((&ratio - &limit).abs() / limit.abs()).to_f64());
        let x = HComplex::from_f64(g.bits, 0.4, 0.0);
        let tr = &e.transfer_eigenvalue_tau(&x)? / &g.transfer_eigenvalue_tau(&x)?;
        let c = chi(0.4, &h);
        dt.push(((&tr.add_f64(-c, 0.0)).abs().to_f64()) / c.abs());
    }
    let dec = |v: &[f64]| v.windows(2).all(|w| w[1] < w[0]);
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.2e}")).collect::<Vec<_>>().join(", ");
    Ok(outcome(
        dec(&dq) && dec(&dt),
        format!("M = 32..256: Baxter ratio dev {}; eigenvalue ratio dev {}", fmt(&dq), fmt(&dt)),
    ))
}

fn c8_barnes() -> Result<Outcome> {
    let ctx = PrecisionContext::new(128);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut rec, mut routes) = (0f64, 0f64);
    for _ in 0..200 {
        let z = HComplex::from_f64(128, rng.gen_range(0.05..5.0), rng.gen_range(-4.0..4.0));
        let lhs = log_barnes_g_product(&z.add_f64(1.0, 0.0), &ctx)?.exp();
        let rhs = (&log_gamma(&z, &ctx)? + &log_barnes_g_product(&z, &ctx)?).exp();
        rec = rec.max(((&lhs - &rhs).abs() / lhs.abs()).to_f64());
        routes = routes.max(barnes_g_routes(&z, &ctx)?.rel_diff);
    }
    let mut prod_ok = true;
    let mut last = 0f64;
    for _ in 0..20 {
        let d = rng.gen_range(0.05..6.0);
        let lim = omega_product_limit(d, &ctx)?;
        let errs: Vec<f64> =
            [100, 1000, 10000].iter().map(|&n| Ok((omega_partial_product(d, n)? / lim - 1.0).abs())).collect::<Result<_>>()?;
        prod_ok &= errs[1] < errs[0] && errs[2] < errs[1] && errs[2] < 1e-3;
        last = last.max(errs[2]);
    }
    Ok(outcome(
        rec < 1e-20 && routes < 1e-20 && prod_ok,
        format!("200 points: recurrence {rec:.1e}, product vs integral {routes:.1e}; partial products (20 dmu) max err at N = 10^4 {last:.1e}"),
    ))
}

fn c9_sum_rule() -> Result<Outcome> {
    let mut worst = 0f64;
    let mut shares = Vec::new();
    for m in [4, 6, 8, 10, 12] {
        let spec = EdSpectrum::compute(m, 0)?;
        let c = ChainSpec::with_default_precision(m)?;
        let k = QuantumNumbers::triplet_vacancies(m).len();
        let mut idx = Vec::new();
        for a in 1..=k {
            for b in a + 1..=k {
                idx.push(ff_ed_for_state(&spec, &solve_two_spinon_triplet(&c, (a, b))?)?.index);
            }
        }
        let cm = completeness(&spec, &idx)?;
        worst = worst.max((cm.total - 1.0).abs());
        shares.push(format!("M={m} {:.5}", cm.selected_share));
    }
    Ok(outcome(worst < 1e-12, format!("max |sum - 1| {worst:.1e}; two-spinon share {}", shares.join(", "))))
}

fn report(n: usize, name: &str, r: Result<Outcome>) -> bool {
    match r {
        Ok(o) => {
            println!("criterion {n} {}: {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
            o.pass
        }
        Err(e) => {
            println!("criterion {n} FAIL: {name}: error {e}");
            false
        }
    }
}

fn main() -> ExitCode {
    let t = Instant::now();
    let mut ok = true;
    ok &= report(1, "exact-diagonalization equivalence", c1_ed_oracle());
    ok &= report(2, "closed form vs integral representation", c2_representations());
    let chains = Chains::solve(&[32, 64, 128, 256]);
    match &chains {
        Ok(ch) => {
            ok &= report(3, "thermodynamic convergence", c3_convergence(ch));
        }
        Err(e) => {
            println!("criterion 3 FAIL: thermodynamic convergence: error {e}");
            ok = false;
        }
    }
    ok &= report(4, "Cauchy determinant identities", c4_cauchy());
    match &chains {
        Ok(ch) => {
            ok &= report(5, "block reduction", c5_block_reduction(ch));
        }
        Err(e) => {
            println!("criterion 5 FAIL: block reduction: error {e}");
            ok = false;
        }
    }
    ok &= report(6, "densities", c6_densities());
    match &chains {
        Ok(ch) => {
            ok &= report(7, "ratio limits", c7_ratio_limits(ch));
        }
        Err(e) => {
            println!("criterion 7 FAIL: ratio limits: error {e}");
            ok = false;
        }
    }
    ok &= report(8, "Barnes G suite", c8_barnes());
    ok &= report(9, "completeness sum rule", c9_sum_rule());
    println!("acceptance finished in {:.0} s", t.elapsed().as_secs_f64());
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
