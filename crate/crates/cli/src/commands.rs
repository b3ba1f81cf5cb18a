use rayon::prelude::*;
use serde::Serialize;
use spinon_core::bethe::{solve_ground, solve_two_spinon_triplet, BetheState, ChainSpec, StateRecord};
use spinon_core::ff_finite::ff_route;
use spinon_core::ff_finite::Route;
use spinon_core::ff_tdl::{scaled_ff_prediction, tdl_form_factor, HolePair, TdlFormFactor};
use spinon_core::numeric::PrecisionContext;

use crate::args::{ConvergeArgs, ExciteArgs, FfArgs, Format, StateArgs, TdlArgs};
use crate::output::{emit_object, emit_rows};
use crate::CliError;

pub fn chain(m: usize, bits: Option<u32>) -> Result<ChainSpec, CliError> {
    let ctx = bits.map(PrecisionContext::new).unwrap_or_else(|| PrecisionContext::for_chain(m));
    Ok(ChainSpec::new(m, ctx)?)
}

#[derive(Serialize)]
struct StateRow<'a> {
    #[serde(rename = "M")]
    m: usize,
    kind: &'a str,
    item: &'a str,
    index: usize,
    value: f64,
    bits_used: u32,
}

fn emit_state(state: &BetheState, out: &crate::args::OutputArgs) -> Result<(), CliError> {
    let rec: StateRecord = state.record();
    eprintln!(
        "M = {}: {} roots, max residual {:e} (2^{:.1}), {} bits",
        rec.m,
        rec.roots.len(),
        rec.residual,
        rec.residual_log2,
        rec.bits_used
    );
    let kind = match state.kind {
        spinon_core::bethe::StateKind::Ground => "ground",
        spinon_core::bethe::StateKind::TwoSpinonTriplet => "triplet",
    };
    let mut rows = Vec::new();
    for (item, vals) in [("root", &rec.roots), ("hole", &rec.holes), ("qnum", &rec.qnums)] {
        rows.extend(vals.iter().enumerate().map(|(index, &value)| StateRow {
            m: rec.m,
            kind,
            item,
            index,
            value,
            bits_used: rec.bits_used,
        }));
    }
    for (item, value) in [("energy", rec.energy), ("momentum", rec.momentum), ("residual", rec.residual)] {
        rows.push(StateRow { m: rec.m, kind, item, index: 0, value, bits_used: rec.bits_used });
    }
    emit_object(out, Format::Json, &rec, &rows)
}

pub fn ground(a: StateArgs) -> Result<(), CliError> {
    let c = chain(a.m, a.bits)?;
    let g = solve_ground(&c)?;
    emit_state(&g, &a.output)
}

pub fn excite(a: ExciteArgs) -> Result<(), CliError> {
    let c = chain(a.m, a.bits)?;
    let e = solve_two_spinon_triplet(&c, a.slots)?;
    emit_state(&e, &a.output)
}

#[derive(Serialize)]
struct FfRow {
    #[serde(rename = "M")]
    m: usize,
    slot_a: usize,
    slot_b: usize,
    mu_h1: f64,
    mu_h2: f64,
    route: Route,
    value: f64,
    scaled: f64,
    rel_diff: f64,
    bits_used: u32,
}

pub fn ff(a: FfArgs) -> Result<(), CliError> {
    let c = chain(a.m, a.bits)?;
    let e = solve_two_spinon_triplet(&c, a.slots)?;
    let g = solve_ground(&c)?;
    let r = ff_route(a.route, &g, &e, &c.ctx)?;
    let row = FfRow {
        m: r.m,
        slot_a: r.hole_slots.0,
        slot_b: r.hole_slots.1,
        mu_h1: r.hole_rapidities[0],
        mu_h2: r.hole_rapidities[1],
        route: r.route,
        value: r.value,
        scaled: r.scaled(),
        rel_diff: r.rel_diff,
        bits_used: r.bits_used,
    };
    emit_rows(&a.output, Format::Csv, &[row])
}

pub fn tdl(a: TdlArgs) -> Result<(), CliError> {
    let holes = match (a.dmu, a.m, a.slots) {
        (Some(d), None, None) => HolePair::symmetric(d)?,
        (None, Some(m), Some(slots)) => {
            let e = solve_two_spinon_triplet(&chain(m, None)?, slots)?;
            HolePair::from_state(&e)?
        }
        _ => return Err(CliError::Usage("give either --dmu or both --M and --slots".into())),
    };
    let ctx = PrecisionContext::new(a.bits.unwrap_or(128));
    let t: TdlFormFactor = tdl_form_factor(&holes, &ctx)?;
    emit_rows(&a.output, Format::Csv, &[t])
}

#[derive(Serialize)]
pub struct ConvergeRow {
    #[serde(rename = "M")]
    pub m: usize,
    pub mu_h1: f64,
    pub mu_h2: f64,
    pub ff_det_scaled: f64,
    pub ff_tdl: f64,
    pub rel_dev: f64,
    pub bits_used: u32,
}

/// Symmetric hole slots at a fixed fraction of the vacancy range.
pub fn symmetric_slots(m: usize) -> (usize, usize) {
    let a = m / 8 + 1;
    (a, m / 2 + 2 - a)
}

fn converge_row(m: usize, slots: Option<(usize, usize)>, bits: Option<u32>) -> Result<ConvergeRow, CliError> {
    let c = chain(m, bits)?;
    let e = solve_two_spinon_triplet(&c, slots.unwrap_or_else(|| symmetric_slots(m)))?;
    let g = solve_ground(&c)?;
    let f = ff_route(Route::Determinant, &g, &e, &c.ctx)?;
    let tdl = scaled_ff_prediction(&e)?;
    let scaled = f.scaled();
    Ok(ConvergeRow {
        m,
        mu_h1: f.hole_rapidities[0],
        mu_h2: f.hole_rapidities[1],
        ff_det_scaled: scaled,
        ff_tdl: tdl,
        rel_dev: (scaled - tdl).abs() / tdl,
        bits_used: f.bits_used,
    })
}

pub fn converge(a: ConvergeArgs) -> Result<(), CliError> {
    if a.m_list.is_empty() {
        return Err(CliError::Usage("--M-list is empty".into()));
    }
    if a.jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    for &m in &a.m_list {
        chain(m, a.bits)?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let rows: Vec<Result<ConvergeRow, CliError>> =
        pool.install(|| a.m_list.par_iter().map(|&m| converge_row(m, a.slots, a.bits)).collect());
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    emit_rows(&a.output, Format::Csv, &rows)
}
