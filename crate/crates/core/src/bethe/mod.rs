//! Finite-chain Bethe states of the periodic XXX chain: the ground state and
//! two-spinon triplets, with counting function, Baxter polynomial, transfer
//! eigenvalue and the thermodynamic densities.

mod densities;
mod functions;

pub use densities::{
    epsilon, g_at_i_half, ground_density, hole_density, hole_density_hp, momentum_p, rho_g_kernel,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{newton_solve, Matrix, PrecisionContext, Real};

/// Chain length and the precision policy used for states on it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainSpec {
    pub m: usize,
    pub ctx: PrecisionContext,
}

impl ChainSpec {
    pub fn new(m: usize, ctx: PrecisionContext) -> Result<Self> {
        if m < 4 || m % 2 != 0 {
            return Err(Error::InvalidInput(format!("chain length must be even and >= 4, got {m}")));
        }
        ctx.validate()?;
        Ok(ChainSpec { m, ctx })
    }

    /// Chain with the default finite-size precision.
    pub fn with_default_precision(m: usize) -> Result<Self> {
        Self::new(m, PrecisionContext::for_chain(m))
    }
}

/// Strictly increasing Bethe quantum numbers, stored doubled so that
/// half-integers are exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantumNumbers {
    doubled: Vec<i64>,
}

impl QuantumNumbers {
    pub fn from_doubled(doubled: Vec<i64>) -> Result<Self> {
        if doubled.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput("quantum numbers must be strictly increasing".into()));
        }
        Ok(QuantumNumbers { doubled })
    }

    /// I_j = j - (N+1)/2 for j = 1..N.
    pub fn ground(n: usize) -> Self {
        let n = n as i64;
        QuantumNumbers { doubled: (1..=n).map(|j| 2 * j - (n + 1)).collect() }
    }

    /// The M/2+1 vacancies of the triplet sector, doubled: -M/4 + (a-1), a = 1..M/2+1.
    pub fn triplet_vacancies(m: usize) -> Vec<i64> {
        let m = m as i64;
        (0..=m / 2).map(|k| 2 * k - m / 2).collect()
    }

    /// Quantum numbers with vacancy slots `a < b` (1-based) left empty, and
    /// the doubled quantum numbers of the two holes.
    pub fn triplet(m: usize, slots: (usize, usize)) -> Result<(Self, [i64; 2])> {
        let (a, b) = slots;
        let top = m / 2 + 1;
        if !(1 <= a && a < b && b <= top) {
            return Err(Error::InvalidInput(format!("hole slots ({a}, {b}) must satisfy 1 <= a < b <= {top}")));
        }
        let vac = Self::triplet_vacancies(m);
        let doubled = vac.iter().enumerate().filter(|(k, _)| *k + 1 != a && *k + 1 != b).map(|(_, v)| *v).collect();
        Ok((QuantumNumbers { doubled }, [vac[a - 1], vac[b - 1]]))
    }

    pub fn doubled(&self) -> &[i64] {
        &self.doubled
    }

    pub fn values(&self) -> Vec<f64> {
        self.doubled.iter().map(|&d| d as f64 / 2.0).collect()
    }

    pub fn len(&self) -> usize {
        self.doubled.len()
    }

    pub fn is_empty(&self) -> bool {
        self.doubled.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StateKind {
    Ground,
    TwoSpinonTriplet,
}

/// A solved Bethe eigenstate with real roots.
#[derive(Clone, Debug)]
pub struct BetheState {
    pub m: usize,
    pub kind: StateKind,
    pub roots: Vec<Real>,
    pub qnums: QuantumNumbers,
    /// Hole rapidities in slot order (empty for the ground state).
    pub holes: Vec<Real>,
    pub hole_qnums: Vec<i64>,
    pub hole_slots: Option<(usize, usize)>,
    pub bits: u32,
    /// log2 of max_j |1 + a(lambda_j)|.
    pub residual_log2: f64,
}

/// JSON form of a state.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateRecord {
    #[serde(rename = "M")]
    pub m: usize,
    pub kind: StateKind,
    pub qnums: Vec<f64>,
    pub roots: Vec<f64>,
    pub holes: Vec<f64>,
    pub hole_slots: Option<(usize, usize)>,
    pub residual: f64,
    pub residual_log2: f64,
    pub energy: f64,
    pub momentum: f64,
    pub bits_used: u32,
}

pub fn solve_ground(chain: &ChainSpec) -> Result<BetheState> {
    let qn = QuantumNumbers::ground(chain.m / 2);
    let roots = solve_roots(chain.m, qn.doubled(), chain.ctx.bits, None)?;
    finish(chain.m, StateKind::Ground, roots, qn, vec![], None, chain.ctx.bits)
}

/// Triplet with the vacancies `hole_slots = (a, b)` (1-based, a < b) left empty.
pub fn solve_two_spinon_triplet(chain: &ChainSpec, hole_slots: (usize, usize)) -> Result<BetheState> {
    let (qn, hq) = QuantumNumbers::triplet(chain.m, hole_slots)?;
    let roots = solve_roots(chain.m, qn.doubled(), chain.ctx.bits, None)?;
    finish(chain.m, StateKind::TwoSpinonTriplet, roots, qn, hq.to_vec(), Some(hole_slots), chain.ctx.bits)
}

impl BetheState {
    /// The same state re-polished at `bits`.
    pub fn at_precision(&self, bits: u32) -> Result<BetheState> {
        let bits = bits.max(PrecisionContext::MIN_BITS);
        if bits == self.bits {
            return Ok(self.clone());
        }
        let start = self.roots.iter().map(|r| r.with_prec(bits)).collect();
        let roots = solve_roots(self.m, self.qnums.doubled(), bits, Some(start))?;
        finish(self.m, self.kind, roots, self.qnums.clone(), self.hole_qnums.clone(), self.hole_slots, bits)
    }

    pub fn n(&self) -> usize {
        self.roots.len()
    }

    pub fn residual(&self) -> f64 {
        self.residual_log2.exp2()
    }

    pub fn roots_f64(&self) -> Vec<f64> {
        self.roots.iter().map(Real::to_f64).collect()
    }

    pub fn holes_f64(&self) -> Vec<f64> {
        self.holes.iter().map(Real::to_f64).collect()
    }

    pub fn record(&self) -> StateRecord {
        StateRecord {
            m: self.m,
            kind: self.kind,
            qnums: self.qnums.values(),
            roots: self.roots_f64(),
            holes: self.holes_f64(),
            hole_slots: self.hole_slots,
            residual: self.residual(),
            residual_log2: self.residual_log2,
            energy: self.energy().to_f64(),
            momentum: self.momentum().to_f64(),
            bits_used: self.bits,
        }
    }
}

fn finish(
    m: usize,
    kind: StateKind,
    roots: Vec<Real>,
    qnums: QuantumNumbers,
    hole_qnums: Vec<i64>,
    hole_slots: Option<(usize, usize)>,
    bits: u32,
) -> Result<BetheState> {
    let holes = hole_qnums.iter().map(|&h| find_hole(m, &roots, qnums.doubled(), h, bits)).collect::<Result<Vec<_>>>()?;
    let mut st = BetheState { m, kind, roots, qnums, holes, hole_qnums, hole_slots, bits, residual_log2: 0.0 };
    st.residual_log2 = st.max_residual_log2()?;
    if st.residual_log2 > -(bits as f64) / 2.0 {
        return Err(Error::NoConvergence {
            what: format!("Bethe roots at M={m}: residual 2^{:.1}", st.residual_log2),
            iterations: 0,
        });
    }
    Ok(st)
}

/// M 2 atan(2 x_j) - 2 pi I_j - sum_k 2 atan(x_j - x_k).
fn log_bethe_residual(m: usize, qn2: &[i64], x: &[Real]) -> Vec<Real> {
    let prec = x[0].prec();
    let pi = Real::pi(prec);
    let mut out: Vec<Real> =
        x.iter().zip(qn2).map(|(l, &q)| l.mul_i64(2).atan().mul_i64(2 * m as i64) - pi.mul_i64(q)).collect();
    for j in 0..x.len() {
        for k in (j + 1)..x.len() {
            let a = (&x[j] - &x[k]).atan().mul_i64(2);
            out[j] -= &a;
            out[k] += &a;
        }
    }
    out
}

fn log_bethe_jacobian(m: usize, x: &[Real]) -> Matrix<Real> {
    let n = x.len();
    let prec = x[0].prec();
    let mut g = vec![vec![Real::zero(prec); n]; n];
    let mut diag: Vec<Real> =
        x.iter().map(|l| Real::from_i64(prec, 4 * m as i64) / (l.square().mul_i64(4).add_f64(1.0))).collect();
    for j in 0..n {
        for k in (j + 1)..n {
            let v = Real::from_i64(prec, 2) / (&x[j] - &x[k]).square().add_f64(1.0);
            diag[j] -= &v;
            diag[k] -= &v;
            g[j][k] = v.clone();
            g[k][j] = v;
        }
    }
    Matrix::from_fn(n, n, |j, k| if j == k { diag[j].clone() } else { g[j][k].clone() })
}

/// Newton on the logarithmic Bethe equations, doubling the precision from
/// 64 bits (or from the precision of `start`) up to `bits`.
fn solve_roots(m: usize, qn2: &[i64], bits: u32, start: Option<Vec<Real>>) -> Result<Vec<Real>> {
    let mut x = match start {
        Some(s) => s,
        None => qn2
            .iter()
            .map(|&q| {
                let seed = (std::f64::consts::PI * q as f64 / (2.0 * m as f64)).tan() / 2.0;
                Real::new(64, seed)
            })
            .collect(),
    };
    let mut stages = Vec::new();
    let mut b = x[0].prec().min(bits);
    while b < bits {
        stages.push(b);
        b *= 2;
    }
    stages.push(bits);
    for (i, &b) in stages.iter().enumerate() {
        let xs: Vec<Real> = x.iter().map(|v| v.with_prec(b)).collect();
        let tol = if b <= 64 { Real::pow2(b, -40) } else { Real::pow2(b, -((3 * b / 4) as i32)) };
        let out = newton_solve(
            |v| Ok(log_bethe_residual(m, qn2, v)),
            |v| Ok(log_bethe_jacobian(m, v)),
            xs,
            &tol,
            if i == 0 { 200 } else { 40 },
        )?;
        x = out.x;
    }
    if x.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::NoConvergence { what: "Bethe roots not strictly ordered".into(), iterations: 0 });
    }
    Ok(x)
}

/// Z(x) = M 2 atan(2x) - sum_k 2 atan(x - mu_k); the holes sit at Z = 2 pi I_h.
fn counting_phase(m: usize, roots: &[Real], x: &Real) -> Real {
    let mut z = x.mul_i64(2).atan().mul_i64(2 * m as i64);
    for r in roots {
        z -= &(x - r).atan().mul_i64(2);
    }
    z
}

fn counting_phase_prime(m: usize, roots: &[Real], x: &Real) -> Real {
    let prec = x.prec();
    let mut z = Real::from_i64(prec, 4 * m as i64) / x.square().mul_i64(4).add_f64(1.0);
    for r in roots {
        z -= &(Real::from_i64(prec, 2) / (x - r).square().add_f64(1.0));
    }
    z
}

fn find_hole(m: usize, roots: &[Real], qn2: &[i64], hole_q2: i64, bits: u32) -> Result<Real> {
    let fail = || Error::HoleBracketFailure { qnum: hole_q2 as f64 / 2.0 };
    let target = Real::pi(bits).mul_i64(hole_q2);
    let f = |x: &Real| counting_phase(m, roots, x) - &target;
    let below = qn2.iter().rposition(|&q| q < hole_q2);
    let above = qn2.iter().position(|&q| q > hole_q2);
    let mut lo = match below {
        Some(j) => roots[j].with_prec(bits),
        None => {
            let mut step = Real::one(bits);
            let base = roots.first().map_or(Real::zero(bits), |r| r.with_prec(bits));
            let mut x = &base - &step;
            let mut tries = 0;
            while !f(&x).is_sign_negative() {
                step = step.mul_i64(2);
                x = &base - &step;
                tries += 1;
                if tries > 200 {
                    return Err(fail());
                }
            }
            x
        }
    };
    let mut hi = match above {
        Some(j) => roots[j].with_prec(bits),
        None => {
            let mut step = Real::one(bits);
            let base = roots.last().map_or(Real::zero(bits), |r| r.with_prec(bits));
            let mut x = &base + &step;
            let mut tries = 0;
            while f(&x).is_sign_negative() {
                step = step.mul_i64(2);
                x = &base + &step;
                tries += 1;
                if tries > 200 {
                    return Err(fail());
                }
            }
            x
        }
    };
    if !(f(&lo).is_sign_negative() && !f(&hi).is_sign_negative()) {
        return Err(fail());
    }
    for _ in 0..60 {
        let mid = (&lo + &hi).div_i64(2);
        if f(&mid).is_sign_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = (&lo + &hi).div_i64(2);
    let stop = Real::pow2(bits, -(bits as i32 - 12));
    for _ in 0..100 {
        let step = f(&x) / counting_phase_prime(m, roots, &x);
        let next = &x - &step;
        if next < lo || next > hi {
            return Err(fail());
        }
        x = next;
        if step.abs() <= &stop * &x.abs().add_f64(1.0) {
            return Ok(x);
        }
    }
    Err(fail())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(m: usize) -> ChainSpec {
        ChainSpec::new(m, PrecisionContext::new(128)).unwrap()
    }

    #[test]
    fn quantum_number_sets() {
        assert_eq!(QuantumNumbers::ground(4).values(), vec![-1.5, -0.5, 0.5, 1.5]);
        assert_eq!(QuantumNumbers::triplet_vacancies(8), vec![-4, -2, 0, 2, 4]);
        let (qn, h) = QuantumNumbers::triplet(8, (1, 5)).unwrap();
        assert_eq!(qn.values(), vec![-1.0, 0.0, 1.0]);
        assert_eq!(h, [-4, 4]);
        assert!(QuantumNumbers::triplet(8, (3, 3)).is_err());
        assert!(QuantumNumbers::triplet(8, (0, 2)).is_err());
        assert!(QuantumNumbers::from_doubled(vec![1, 1]).is_err());
    }

    #[test]
    fn rejects_bad_chains() {
        assert!(ChainSpec::new(7, PrecisionContext::new(128)).is_err());
        assert!(ChainSpec::new(2, PrecisionContext::new(128)).is_err());
    }

    #[test]
    fn ground_state_m4() {
        let g = solve_ground(&chain(4)).unwrap();
        assert_eq!(g.n(), 2);
        assert!(g.residual_log2 < -64.0);
        let r = g.roots_f64();
        assert!((r[0] + r[1]).abs() < 1e-30);
        // The 4-site singlet has E = -12 in this normalization.
        assert!((g.energy().to_f64() + 12.0).abs() < 1e-12, "{}", g.energy().to_f64());
    }

    #[test]
    fn ground_state_m8_energy() {
        let g = solve_ground(&chain(8)).unwrap();
        assert!((g.energy().to_f64() + 22.6043736357487).abs() < 1e-12);
        assert!(g.residual_log2 < -100.0, "{}", g.residual_log2);
    }

    #[test]
    fn symmetric_triplet_has_opposite_holes() {
        let e = solve_two_spinon_triplet(&chain(8), (1, 5)).unwrap();
        let h = e.holes_f64();
        assert!((h[0] + 0.8694212802813154).abs() < 1e-13 && (h[1] - 0.8694212802813154).abs() < 1e-13);
        let e = solve_two_spinon_triplet(&chain(8), (2, 4)).unwrap();
        let h = e.holes_f64();
        assert!((h[0] + 0.24955075271952748).abs() < 1e-13 && (h[0] + h[1]).abs() < 1e-30);
    }

    #[test]
    fn repolish_keeps_the_state() {
        let e = solve_two_spinon_triplet(&chain(12), (2, 5)).unwrap();
        let f = e.at_precision(512).unwrap();
        assert_eq!(f.bits, 512);
        assert!(f.residual_log2 < -256.0);
        for (a, b) in e.roots.iter().zip(&f.roots) {
            assert!((a.to_f64() - b.to_f64()).abs() < 1e-30);
        }
    }

    #[test]
    fn small_triplet_m4() {
        let e = solve_two_spinon_triplet(&chain(4), (1, 2)).unwrap();
        assert_eq!(e.n(), 1);
        assert_eq!(e.holes.len(), 2);
    }
}
