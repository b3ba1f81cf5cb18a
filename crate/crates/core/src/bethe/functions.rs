use num_complex::Complex64;

use super::BetheState;
use crate::error::{Error, Result};
use crate::numeric::{HComplex, Real};

fn is_tiny(z: &HComplex, bits: u32) -> bool {
    z.is_zero() || z.log2_abs() < -(bits as f64) + 16.0
}

impl BetheState {
    fn lift(&self, z: &HComplex) -> HComplex {
        z.with_prec(self.bits.max(z.prec()))
    }

    /// q(x) = prod_k (x - lambda_k).
    pub fn baxter_q(&self, x: &HComplex) -> HComplex {
        let x = self.lift(x);
        let mut p = HComplex::one(x.prec());
        for r in &self.roots {
            p *= &x.add_real(&-r);
        }
        p
    }

    /// sum_k log(x - lambda_k) with principal logs; the imaginary part is not wrapped.
    pub fn log_baxter_q(&self, x: &HComplex) -> HComplex {
        let x = self.lift(x);
        let mut s = HComplex::zero(x.prec());
        for r in &self.roots {
            s += &x.add_real(&-r).ln();
        }
        s
    }

    /// q(x) with the factor of root `skip` left out.
    fn baxter_q_without(&self, x: &HComplex, skip: usize) -> HComplex {
        let mut p = HComplex::one(x.prec());
        for (k, r) in self.roots.iter().enumerate() {
            if k != skip {
                p *= &x.add_real(&-r);
            }
        }
        p
    }

    /// sum_k 1/(y - lambda_k).
    fn log_derivative_q(&self, y: &HComplex) -> HComplex {
        let mut s = HComplex::zero(y.prec());
        for r in &self.roots {
            s += &y.add_real(&-r).recip();
        }
        s
    }

    fn check_poles(&self, x: &HComplex) -> Result<()> {
        if is_tiny(&x.add_f64(0.0, 0.5), self.bits) {
            return Err(Error::PoleArgument("counting function at -i/2".into()));
        }
        for r in &self.roots {
            if is_tiny(&x.add_real(&-r).add_f64(0.0, -1.0), self.bits) {
                return Err(Error::PoleArgument(format!("counting function at root + i ({})", r.to_f64())));
            }
        }
        Ok(())
    }

    /// ((x - i/2)/(x + i/2))^M.
    fn vacuum_ratio(&self, x: &HComplex) -> HComplex {
        (x.add_f64(0.0, -0.5) / x.add_f64(0.0, 0.5)).powi(self.m as i64)
    }

    /// a(x) = ((x - i/2)/(x + i/2))^M q(x + i)/q(x - i).
    pub fn counting_a(&self, x: &HComplex) -> Result<HComplex> {
        let x = self.lift(x);
        self.check_poles(&x)?;
        let mut v = self.vacuum_ratio(&x);
        for r in &self.roots {
            let d = x.add_real(&-r);
            v = &v * &(d.add_f64(0.0, 1.0) / d.add_f64(0.0, -1.0));
        }
        Ok(v)
    }

    /// a'(x) from the logarithmic derivative.
    pub fn counting_a_prime(&self, x: &HComplex) -> Result<HComplex> {
        let a = self.counting_a(x)?;
        let x = self.lift(x);
        Ok(&a * &self.counting_log_derivative(&x))
    }

    /// iM/(x^2 + 1/4) + sum_k [1/(x + i - lambda_k) - 1/(x - i - lambda_k)].
    fn counting_log_derivative(&self, x: &HComplex) -> HComplex {
        let vac = (x * x).add_f64(0.25, 0.0).recip().mul_i().scale_f64(self.m as f64);
        vac + self.log_derivative_q(&x.add_f64(0.0, 1.0)) - self.log_derivative_q(&x.add_f64(0.0, -1.0))
    }

    /// Transfer-matrix eigenvalue tau(x) = (1 + a(x)) q(x - i)/q(x).
    ///
    /// At (or within 2^(-bits/2) of) a root the removable singularity is
    /// resolved by differentiating numerator and denominator.
    pub fn transfer_eigenvalue_tau(&self, x: &HComplex) -> Result<HComplex> {
        let x = self.lift(x);
        if is_tiny(&x.add_f64(0.0, 0.5), self.bits) {
            return Err(Error::PoleArgument("transfer eigenvalue at -i/2".into()));
        }
        let near = self.roots.iter().position(|r| {
            let d = x.add_real(&-r);
            d.is_zero() || d.log2_abs() < -(self.bits as f64) / 2.0
        });
        let qm = self.baxter_q(&x.add_f64(0.0, -1.0));
        match near {
            None => {
                let num = &qm + &(&self.vacuum_ratio(&x) * &self.baxter_q(&x.add_f64(0.0, 1.0)));
                Ok(num / self.baxter_q(&x))
            }
            Some(j) => {
                let xj = HComplex::from_real(self.roots[j].with_prec(x.prec()));
                let one_plus_a = self.counting_a(&xj)?.add_f64(1.0, 0.0);
                let ap = self.counting_a_prime(&xj)?;
                let qm = self.baxter_q(&xj.add_f64(0.0, -1.0));
                let dq = self.log_derivative_q(&xj.add_f64(0.0, -1.0));
                let num = &qm * &(&(&one_plus_a * &dq) + &ap);
                Ok(num / self.baxter_q_without(&xj, j))
            }
        }
    }

    /// tau at the state's own root `j`.
    pub fn tau_at_root(&self, j: usize) -> Result<HComplex> {
        self.transfer_eigenvalue_tau(&HComplex::from_real(self.roots[j].clone()))
    }

    /// E = -sum_j 2/(lambda_j^2 + 1/4).
    pub fn energy(&self) -> Real {
        let mut e = Real::zero(self.bits);
        for r in &self.roots {
            e -= &(Real::from_i64(self.bits, 2) / r.square().add_f64(0.25));
        }
        e
    }

    /// Lattice momentum sum_j (pi - 2 atan 2 lambda_j), reduced to [0, 2 pi).
    pub fn momentum(&self) -> Real {
        let pi = Real::pi(self.bits);
        let mut p = Real::zero(self.bits);
        for r in &self.roots {
            p += &(&pi - &r.mul_i64(2).atan().mul_i64(2));
        }
        let two_pi = pi.mul_i64(2);
        let k = (&p / &two_pi).floor();
        p - &k * &two_pi
    }

    pub(super) fn max_residual_log2(&self) -> Result<f64> {
        let mut worst = f64::NEG_INFINITY;
        for r in &self.roots {
            let a = self.counting_a(&HComplex::from_real(r.clone()))?;
            let v = a.add_f64(1.0, 0.0);
            let l = if v.is_zero() { -(self.bits as f64) * 2.0 } else { v.log2_abs() };
            worst = worst.max(l);
        }
        Ok(worst)
    }

    /// Number of real zeros of 1 + a found by a sign-change scan of Im a
    /// (with Re a < 0) on a uniform grid of `per_unit` points per unit length.
    pub fn real_zero_count(&self, per_unit: usize) -> usize {
        let roots = self.roots_f64();
        let holes = self.holes_f64();
        let lo = roots.iter().chain(&holes).cloned().fold(0.0, f64::min) - 2.0;
        let hi = roots.iter().chain(&holes).cloned().fold(0.0, f64::max) + 2.0;
        let steps = ((hi - lo) * per_unit as f64).ceil() as usize;
        let a = |x: f64| {
            let z = Complex64::new(x, 0.0);
            let mut v = ((z - Complex64::new(0.0, 0.5)) / (z + Complex64::new(0.0, 0.5))).powi(self.m as i32);
            for r in &roots {
                v *= (z - r + Complex64::i()) / (z - r - Complex64::i());
            }
            v
        };
        let mut count = 0;
        let mut prev = a(lo);
        for s in 1..=steps {
            let cur = a(lo + (hi - lo) * s as f64 / steps as f64);
            if prev.im.signum() != cur.im.signum() && (prev.re + cur.re) < 0.0 {
                count += 1;
            }
            prev = cur;
        }
        count
    }
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use crate::numeric::{HComplex, PrecisionContext};

    fn chain(m: usize) -> ChainSpec {
        ChainSpec::new(m, PrecisionContext::new(128)).unwrap()
    }

    #[test]
    fn counting_function_special_values() {
        let g = solve_ground(&chain(8)).unwrap();
        let a = g.counting_a(&HComplex::from_f64(128, 0.0, 0.5)).unwrap();
        assert!(a.is_zero() || a.log2_abs() < -120.0);
        for r in &g.roots {
            let a = g.counting_a(&HComplex::from_real(r.clone())).unwrap();
            assert!(a.add_f64(1.0, 0.0).log2_abs() < -64.0);
        }
        assert!(g.counting_a(&HComplex::from_f64(128, 0.0, -0.5)).is_err());
        let e = solve_two_spinon_triplet(&chain(8), (2, 3)).unwrap();
        for h in &e.holes {
            let a = e.counting_a(&HComplex::from_real(h.clone())).unwrap();
            assert!(a.add_f64(1.0, 0.0).log2_abs() < -100.0);
        }
    }

    #[test]
    fn derivative_is_analytic() {
        let e = solve_two_spinon_triplet(&chain(10), (1, 4)).unwrap();
        let x = HComplex::from_f64(128, 0.37, 0.21);
        let h = 1e-12;
        let fd = (e.counting_a(&x.add_f64(h, 0.0)).unwrap() - e.counting_a(&x.add_f64(-h, 0.0)).unwrap())
            .scale_f64(0.5 / h);
        let an = e.counting_a_prime(&x).unwrap();
        assert!((&fd - &an).abs().to_f64() < 1e-10 * an.abs().to_f64());
    }

    #[test]
    fn baxter_polynomial_basics() {
        let g = solve_ground(&chain(8)).unwrap();
        assert!(g.baxter_q(&HComplex::from_real(g.roots[2].clone())).is_zero());
        let x = HComplex::from_f64(128, 0.3, 0.7);
        let d = (g.log_baxter_q(&x).exp() - g.baxter_q(&x)).abs();
        assert!(d.to_f64() < 1e-30);
    }

    #[test]
    fn tau_is_continuous_at_roots() {
        let e = solve_two_spinon_triplet(&chain(12), (2, 6)).unwrap();
        for j in 0..e.n() {
            let at = e.tau_at_root(j).unwrap();
            for s in [-1e-8, 1e-8] {
                let x = HComplex::from_real(e.roots[j].add_f64(s));
                let near = e.transfer_eigenvalue_tau(&x).unwrap();
                assert!((&near - &at).abs().to_f64() < 1e-6 * at.abs().to_f64());
            }
        }
    }

    #[test]
    fn occupancy_of_triplets() {
        for slots in [(1, 2), (2, 4), (1, 5), (3, 5)] {
            let e = solve_two_spinon_triplet(&chain(8), slots).unwrap();
            assert_eq!(e.real_zero_count(400), 5, "{slots:?}");
        }
        let g = solve_ground(&chain(8)).unwrap();
        assert_eq!(g.real_zero_count(400), 4);
    }
}
