//! Exact diagonalization of short periodic chains, used as ground truth.
//!
//! Each S^z sector is diagonalized densely; degenerate levels are split by
//! diagonalizing the translation operator inside the degenerate subspace, so
//! every stored eigenvector carries a momentum label.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use faer::{Mat, Side};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bethe::BetheState;
use crate::error::{Error, Result};

pub const MIN_SITES: usize = 4;
pub const MAX_SITES: usize = 14;

/// Energies closer than this are treated as one level.
pub const DEGENERACY_TOL: f64 = 1e-8;
/// Largest sector written to the on-disk cache (M = 12, S^z = 0).
pub const CACHE_MAX_DIM: usize = 924;

fn check_size(m: usize) -> Result<()> {
    if !(MIN_SITES..=MAX_SITES).contains(&m) || m % 2 != 0 {
        return Err(Error::SizeLimit { m, min: MIN_SITES, max: MAX_SITES });
    }
    Ok(())
}

/// Basis states with a fixed number of up spins; bit j set means site j is up.
#[derive(Clone, Debug)]
pub struct SectorBasis {
    pub m: usize,
    pub sz: i32,
    pub states: Vec<u32>,
}

impl SectorBasis {
    pub fn new(m: usize, sz: i32) -> Result<Self> {
        check_size(m)?;
        let half = (m / 2) as i32;
        if sz.abs() > half {
            return Err(Error::InvalidInput(format!("S^z = {sz} impossible on {m} sites")));
        }
        let ups = (half + sz) as u32;
        let states = (0u32..1 << m).filter(|s| s.count_ones() == ups).collect();
        Ok(SectorBasis { m, sz, states })
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn index(&self, s: u32) -> Option<usize> {
        self.states.binary_search(&s).ok()
    }

    /// Cyclic shift moving site j to site j + 1.
    fn rotate(&self, s: u32) -> u32 {
        let mask = (1u32 << self.m) - 1;
        ((s << 1) | (s >> (self.m - 1))) & mask
    }

    fn translate(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        for (i, &s) in self.states.iter().enumerate() {
            out[self.index(self.rotate(s)).expect("translation stays in the sector")] = v[i];
        }
        out
    }
}

/// Dense H = sum_m [sx sx + sy sy + (sz sz - 1)] on one S^z sector.
pub fn build_hamiltonian(m: usize, sz: i32) -> Result<(SectorBasis, Mat<f64>)> {
    let basis = SectorBasis::new(m, sz)?;
    let dim = basis.dim();
    let mut h = Mat::<f64>::zeros(dim, dim);
    for (i, &s) in basis.states.iter().enumerate() {
        for site in 0..m {
            let next = (site + 1) % m;
            let (a, b) = ((s >> site) & 1, (s >> next) & 1);
            if a != b {
                h[(i, i)] -= 2.0;
                let flipped = s ^ (1 << site) ^ (1 << next);
                let j = basis.index(flipped).expect("flip conserves S^z");
                h[(j, i)] += 2.0;
            }
        }
    }
    Ok((basis, h))
}

/// Full spectrum of one sector in a momentum-resolved eigenbasis.
#[derive(Clone, Debug)]
pub struct EdSpectrum {
    pub m: usize,
    pub sz: i32,
    pub basis: SectorBasis,
    /// Ascending.
    pub energies: Vec<f64>,
    /// Translation eigenvalue e^{ik}, k in [0, 2 pi).
    pub momenta: Vec<f64>,
    /// Orthonormal eigenvectors as columns.
    pub vectors: Mat<Complex64>,
}

fn wrap_angle(x: f64) -> f64 {
    let r = x.rem_euclid(2.0 * PI);
    if (2.0 * PI - r) < 1e-12 {
        0.0
    } else {
        r
    }
}

/// Distance between two momenta on the circle.
pub fn momentum_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

fn column(v: &Mat<Complex64>, j: usize) -> Vec<Complex64> {
    (0..v.nrows()).map(|i| v[(i, j)]).collect()
}

fn eigen_failure() -> Error {
    Error::NoConvergence { what: "dense Hermitian eigensolver".into(), iterations: 0 }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Rotate a degenerate block of eigenvectors onto momentum eigenstates.
fn split_by_momentum(basis: &SectorBasis, block: &Mat<Complex64>) -> Result<Mat<Complex64>> {
    let d = block.ncols();
    let cols: Vec<Vec<Complex64>> = (0..d).map(|j| column(block, j)).collect();
    let shifted: Vec<Vec<Complex64>> = cols.iter().map(|c| basis.translate(c)).collect();
    let t = Mat::from_fn(d, d, |i, j| dot(&cols[i], &shifted[j]));
    // cos k + alpha sin k separates every momentum for an irrational alpha.
    let alpha = 1.0 / PI;
    let x = Mat::from_fn(d, d, |i, j| {
        let (a, b) = (t[(i, j)], t[(j, i)].conj());
        (a + b) * 0.5 + (a - b) / Complex64::new(0.0, 2.0) * alpha
    });
    let eig = x.self_adjoint_eigen(Side::Lower).map_err(|_| eigen_failure())?;
    Ok(block * eig.U())
}

impl EdSpectrum {
    pub fn compute(m: usize, sz: i32) -> Result<Self> {
        let (basis, h) = build_hamiltonian(m, sz)?;
        let dim = basis.dim();
        let eig = h.self_adjoint_eigen(Side::Lower).map_err(|_| eigen_failure())?;
        let (vals, u) = (eig.S(), eig.U());
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        let energies: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
        let mut vectors = Mat::from_fn(dim, dim, |r, c| Complex64::new(u[(r, order[c])], 0.0));

        let mut start = 0;
        while start < dim {
            let mut end = start + 1;
            while end < dim && energies[end] - energies[start] < DEGENERACY_TOL {
                end += 1;
            }
            if end - start > 1 {
                let block = vectors.subcols(start, end - start).to_owned();
                let rotated = split_by_momentum(&basis, &block)?;
                vectors.subcols_mut(start, end - start).copy_from(&rotated);
            }
            start = end;
        }

        let momenta = (0..dim)
            .map(|j| {
                let c = column(&vectors, j);
                wrap_angle(dot(&c, &basis.translate(&c)).arg())
            })
            .collect();
        Ok(EdSpectrum { m, sz, basis, energies, momenta, vectors })
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn vector(&self, j: usize) -> Vec<Complex64> {
        column(&self.vectors, j)
    }

    /// max |H v - E v| over all eigenpairs.
    pub fn max_residual(&self) -> Result<f64> {
        let (_, h) = build_hamiltonian(self.m, self.sz)?;
        let n = self.dim();
        let hv = Mat::from_fn(n, n, |i, j| Complex64::new(h[(i, j)], 0.0)) * &self.vectors;
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for i in 0..n {
                worst = worst.max((hv[(i, j)] - self.vectors[(i, j)] * self.energies[j]).norm());
            }
        }
        Ok(worst)
    }

    /// max |V^dagger V - 1|.
    pub fn orthonormality_defect(&self) -> f64 {
        let g = self.vectors.adjoint() * &self.vectors;
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for i in 0..n {
                let id = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g[(i, j)] - id).norm());
            }
        }
        worst
    }

    /// Indices of all states at `energy` and, when given, at `momentum`.
    pub fn states_at(&self, energy: f64, momentum: Option<f64>) -> Vec<usize> {
        (0..self.dim())
            .filter(|&j| (self.energies[j] - energy).abs() < DEGENERACY_TOL)
            .filter(|&j| momentum.map_or(true, |p| momentum_distance(self.momenta[j], p) < DEGENERACY_TOL))
            .collect()
    }
}

/// Index of the eigenstate with the energy and momentum of a Bethe state.
pub fn match_state(spec: &EdSpectrum, state: &BetheState) -> Result<usize> {
    let e = state.energy().to_f64();
    let p = state.momentum().to_f64();
    let hits = spec.states_at(e, Some(p));
    match hits.as_slice() {
        [j] => Ok(*j),
        [] => Err(Error::NoMatch(format!("E = {e}, P = {p} on {} sites, S^z = {}", spec.m, spec.sz))),
        _ => Err(Error::DegenerateAmbiguity(format!("{} states at E = {e}, P = {p}", hits.len()))),
    }
}

/// Number of sectors among `spectra` containing a level at (energy, momentum).
pub fn multiplicity(spectra: &[&EdSpectrum], energy: f64, momentum: f64) -> usize {
    spectra.iter().map(|s| s.states_at(energy, Some(momentum)).len()).sum()
}

fn ground_vector(spec: &EdSpectrum) -> Result<Vec<Complex64>> {
    if spec.sz != 0 {
        return Err(Error::InvalidInput("form factors need the S^z = 0 sector".into()));
    }
    if spec.dim() > 1 && spec.energies[1] - spec.energies[0] < DEGENERACY_TOL {
        return Err(Error::DegenerateAmbiguity("ground state is degenerate".into()));
    }
    Ok(spec.vector(0))
}

/// sigma^z_site applied to `v`.
fn apply_sz(basis: &SectorBasis, site: usize, v: &[Complex64]) -> Vec<Complex64> {
    basis
        .states
        .iter()
        .zip(v)
        .map(|(&s, &x)| if (s >> site) & 1 == 1 { x } else { -x })
        .collect()
}

/// |<e| sigma^z_m |g>|^2 averaged over sites, with its site-to-site spread.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdFormFactor {
    pub index: usize,
    pub energy: f64,
    pub momentum: f64,
    pub value: f64,
    pub spread: f64,
}

fn site_weights(spec: &EdSpectrum, g: &[Complex64], e: &[Complex64]) -> Vec<f64> {
    (0..spec.m).map(|site| dot(e, &apply_sz(&spec.basis, site, g)).norm_sqr()).collect()
}

/// Form factor against the S^z = 0 level at `energy` (and `momentum`, if the
/// energy alone is degenerate).
pub fn ff_ed(spec: &EdSpectrum, energy: f64, momentum: Option<f64>) -> Result<EdFormFactor> {
    let g = ground_vector(spec)?;
    let hits = spec.states_at(energy, momentum);
    let index = match hits.as_slice() {
        [j] => *j,
        [] => return Err(Error::NoMatch(format!("no level at E = {energy}"))),
        _ => return Err(Error::DegenerateAmbiguity(format!("{} levels at E = {energy}", hits.len()))),
    };
    let w = site_weights(spec, &g, &spec.vector(index));
    let value = w.iter().sum::<f64>() / w.len() as f64;
    let spread = w.iter().cloned().fold(f64::MIN, f64::max) - w.iter().cloned().fold(f64::MAX, f64::min);
    Ok(EdFormFactor { index, energy: spec.energies[index], momentum: spec.momenta[index], value, spread })
}

/// ED form factor for the level of a Bethe state.
pub fn ff_ed_for_state(spec: &EdSpectrum, state: &BetheState) -> Result<EdFormFactor> {
    ff_ed(spec, state.energy().to_f64(), Some(state.momentum().to_f64()))
}

/// Sum rule sum_e |<e| sigma^z_0 |g>|^2 and the share carried by `selected`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Completeness {
    pub total: f64,
    pub selected_share: f64,
}

pub fn completeness(spec: &EdSpectrum, selected: &[usize]) -> Result<Completeness> {
    let g = ground_vector(spec)?;
    let s = apply_sz(&spec.basis, 0, &g);
    let weights: Vec<f64> = (0..spec.dim()).map(|j| dot(&spec.vector(j), &s).norm_sqr()).collect();
    let total = weights.iter().sum();
    let selected_share = selected.iter().map(|&j| weights[j]).sum::<f64>() / total;
    Ok(Completeness { total, selected_share })
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    #[serde(rename = "M")]
    m: usize,
    sz: i32,
    energies: Vec<f64>,
    momenta: Vec<f64>,
    /// Column-major real and imaginary parts.
    re: Vec<f64>,
    im: Vec<f64>,
}

pub fn cache_path(dir: &Path, m: usize, sz: i32) -> PathBuf {
    dir.join(format!("ed_M{m}_sz{sz}.json"))
}

fn read_cache(path: &Path, m: usize, sz: i32) -> Result<EdSpectrum> {
    let file: CacheFile = serde_json::from_slice(&fs::read(path)?)?;
    let basis = SectorBasis::new(m, sz)?;
    let dim = basis.dim();
    let ok = file.m == m
        && file.sz == sz
        && file.energies.len() == dim
        && file.momenta.len() == dim
        && file.re.len() == dim * dim
        && file.im.len() == dim * dim;
    if !ok {
        return Err(Error::InvalidInput(format!("cache {} does not match the sector", path.display())));
    }
    let vectors = Mat::from_fn(dim, dim, |r, c| Complex64::new(file.re[c * dim + r], file.im[c * dim + r]));
    Ok(EdSpectrum { m, sz, basis, energies: file.energies, momenta: file.momenta, vectors })
}

fn column_major(v: &Mat<Complex64>) -> impl Iterator<Item = Complex64> + '_ {
    (0..v.ncols()).flat_map(move |c| (0..v.nrows()).map(move |r| v[(r, c)]))
}

fn write_cache(path: &Path, spec: &EdSpectrum) -> Result<()> {
    let file = CacheFile {
        m: spec.m,
        sz: spec.sz,
        energies: spec.energies.clone(),
        momenta: spec.momenta.clone(),
        re: column_major(&spec.vectors).map(|c| c.re).collect(),
        im: column_major(&spec.vectors).map(|c| c.im).collect(),
    };
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, serde_json::to_vec(&file)?)?;
    Ok(())
}

/// Spectrum from `dir` if a valid cache exists, otherwise computed and, for
/// sectors up to `CACHE_MAX_DIM`, written back. Unreadable caches are replaced.
pub fn load_or_compute(dir: &Path, m: usize, sz: i32) -> Result<EdSpectrum> {
    let path = cache_path(dir, m, sz);
    if path.exists() {
        if let Ok(spec) = read_cache(&path, m, sz) {
            return Ok(spec);
        }
    }
    let spec = EdSpectrum::compute(m, sz)?;
    if spec.dim() <= CACHE_MAX_DIM {
        write_cache(&path, &spec)?;
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bethe::{solve_ground, solve_two_spinon_triplet, ChainSpec, QuantumNumbers};
    use crate::numeric::PrecisionContext;

    fn chain(m: usize) -> ChainSpec {
        ChainSpec::new(m, PrecisionContext::new(128)).unwrap()
    }

    #[test]
    fn sector_sizes_and_limits() {
        assert_eq!(SectorBasis::new(4, 0).unwrap().dim(), 6);
        assert_eq!(SectorBasis::new(14, 0).unwrap().dim(), 3432);
        for m in [2, 7, 16] {
            assert!(matches!(build_hamiltonian(m, 0), Err(Error::SizeLimit { .. })));
        }
        assert!(SectorBasis::new(8, 5).is_err());
    }

    #[test]
    fn ferromagnet_and_small_chain() {
        let up = EdSpectrum::compute(6, 3).unwrap();
        assert_eq!(up.dim(), 1);
        assert_eq!(up.energies[0], 0.0);
        let s = EdSpectrum::compute(4, 0).unwrap();
        assert!((s.energies[0] + 12.0).abs() < 1e-12);
    }

    #[test]
    fn spectrum_invariants() {
        let s = EdSpectrum::compute(8, 0).unwrap();
        assert!(s.orthonormality_defect() < 1e-12);
        let r = s.max_residual().unwrap();
        assert!(r < 1e-10, "{r}");
        // Every level is a momentum eigenstate with k a multiple of 2 pi/M.
        for &k in &s.momenta {
            let n = k * 8.0 / (2.0 * PI);
            assert!((n - n.round()).abs() < 1e-9, "{k}");
        }
    }

    #[test]
    fn ground_state_matches_bethe() {
        let s = EdSpectrum::compute(8, 0).unwrap();
        let g = solve_ground(&chain(8)).unwrap();
        assert!((s.energies[0] - g.energy().to_f64()).abs() < 1e-12);
        assert_eq!(match_state(&s, &g).unwrap(), 0);
        let f = ff_ed(&s, s.energies[0], None).unwrap();
        assert!(f.value < 1e-24);
    }

    #[test]
    fn triplets_match_injectively() {
        let spectra: Vec<EdSpectrum> = (-1..=1).map(|sz| EdSpectrum::compute(8, sz).unwrap()).collect();
        let s0 = &spectra[1];
        let refs: Vec<&EdSpectrum> = spectra.iter().collect();
        let slots = QuantumNumbers::triplet_vacancies(8).len();
        let mut seen = Vec::new();
        for a in 1..=slots {
            for b in a + 1..=slots {
                let e = solve_two_spinon_triplet(&chain(8), (a, b)).unwrap();
                let j = match_state(s0, &e).unwrap();
                let (en, p) = (e.energy().to_f64(), e.momentum().to_f64());
                assert_eq!(multiplicity(&refs, en, p), 3);
                let f = ff_ed_for_state(s0, &e).unwrap();
                assert!(f.spread < 1e-12);
                seen.push(j);
            }
        }
        assert_eq!(seen.len(), 10);
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 10);
    }

    #[test]
    fn sum_rule() {
        let s = EdSpectrum::compute(10, 0).unwrap();
        let c = completeness(&s, &[]).unwrap();
        assert!((c.total - 1.0).abs() < 1e-12);
        assert_eq!(c.selected_share, 0.0);
    }

    #[test]
    fn cache_round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let a = load_or_compute(dir.path(), 6, 0).unwrap();
        let path = cache_path(dir.path(), 6, 0);
        assert!(path.exists());
        let b = load_or_compute(dir.path(), 6, 0).unwrap();
        assert_eq!(a.energies, b.energies);
        fs::write(&path, b"{ not json").unwrap();
        let c = load_or_compute(dir.path(), 6, 0).unwrap();
        assert_eq!(a.energies, c.energies);
        assert!(read_cache(&path, 6, 0).is_ok());
    }
}
