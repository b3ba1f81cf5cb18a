use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numeric::{HComplex, PrecisionContext, Real};
use crate::special::digamma;

/// Spinon energy pi/(2 cosh pi mu).
pub fn epsilon(mu: f64) -> f64 {
    PI / (2.0 * (PI * mu).cosh())
}

/// Spinon momentum pi/2 - atan(sinh pi mu), running from pi to 0.
pub fn momentum_p(mu: f64) -> f64 {
    PI / 2.0 - (PI * mu).sinh().atan()
}

/// Ground-state root density 1/(2 cosh pi lambda).
pub fn ground_density(lambda: f64) -> f64 {
    0.5 / (PI * lambda).cosh()
}

/// Hole density (1/2pi) Re[psi(1 + i lambda/2) - psi(1/2 + i lambda/2)],
/// the Fourier transform of 1/(1 + e^|w|).
pub fn hole_density_hp(lambda: &Real) -> Result<Real> {
    let prec = lambda.prec();
    let ctx = PrecisionContext::new(prec);
    let half = lambda.div_i64(2);
    let a = digamma(&HComplex::new(Real::one(prec), half.clone()), &ctx)?;
    let b = digamma(&HComplex::new(Real::ratio(prec, 1, 2), half), &ctx)?;
    Ok((a.re - b.re) / Real::pi(prec).mul_i64(2))
}

pub fn hole_density(lambda: f64) -> f64 {
    hole_density_hp(&Real::new(64, lambda)).map(|v| v.to_f64()).unwrap_or(f64::NAN)
}

/// Density kernel pi/sinh(pi (mu - lambda)).
pub fn rho_g_kernel(lambda: &HComplex, mu: &HComplex) -> Result<HComplex> {
    let d = mu - lambda;
    let prec = d.prec();
    // sinh vanishes on i Z.
    let near_int = (&d.im - &d.im.round()).abs();
    if d.re.is_zero() || d.re.log2_abs() < -(prec as f64) + 8.0 {
        if near_int.is_zero() || near_int.log2_abs() < -(prec as f64) + 8.0 {
            return Err(Error::PoleArgument(format!("mu - lambda = {:?} i", d.im.round().to_f64())));
        }
    }
    let pi = Real::pi(prec);
    Ok(HComplex::from_real(pi.clone()) / d.scale(&pi).sinh())
}

/// The kernel at mu = i/2: -i pi / cosh(pi lambda).
pub fn g_at_i_half(lambda: &HComplex) -> HComplex {
    let prec = lambda.prec();
    let pi = Real::pi(prec);
    HComplex::new(Real::zero(prec), -pi.clone()) / lambda.scale(&pi).cosh()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::adaptive_quad;

    #[test]
    fn dispersion_values() {
        assert!((epsilon(0.0) - PI / 2.0).abs() < 1e-15);
        assert!((momentum_p(0.0) - PI / 2.0).abs() < 1e-15);
        assert!(momentum_p(30.0).abs() < 1e-12);
        assert!((momentum_p(-30.0) - PI).abs() < 1e-12);
        // d eps / d p = (pi/2) tanh(pi mu).
        let h = 1e-5;
        let v = (epsilon(h) - epsilon(-h)) / (momentum_p(h) - momentum_p(-h));
        assert!(v.abs() < 1e-8);
        let v = (epsilon(0.5 + h) - epsilon(0.5 - h)) / (momentum_p(0.5 + h) - momentum_p(0.5 - h));
        assert!((v - PI / 2.0 * (PI / 2.0).tanh()).abs() < 1e-8);
    }

    #[test]
    fn hole_density_values() {
        assert!((hole_density(0.0) - 2f64.ln() / PI).abs() < 1e-15);
        assert!((hole_density(1.3) - hole_density(-1.3)).abs() < 1e-16);
        let mass = adaptive_quad(hole_density, f64::NEG_INFINITY, f64::INFINITY, 1e-12).unwrap();
        assert!((mass - 0.5).abs() < 1e-10, "{mass}");
    }

    #[test]
    fn kernel_values() {
        let k = rho_g_kernel(&HComplex::from_f64(128, 0.0, 0.0), &HComplex::from_f64(128, 0.5, 0.0)).unwrap();
        assert!((k.re.to_f64() - PI / (PI / 2.0).sinh()).abs() < 1e-15);
        let a = HComplex::from_f64(128, 0.3, 0.1);
        let b = HComplex::from_f64(128, -0.4, 0.2);
        let s = rho_g_kernel(&a, &b).unwrap() + rho_g_kernel(&b, &a).unwrap();
        assert!(s.abs().to_f64() < 1e-35);
        assert!(rho_g_kernel(&HComplex::from_f64(128, 0.2, 0.0), &HComplex::from_f64(128, 0.2, 1.0)).is_err());
        let g = g_at_i_half(&HComplex::from_f64(128, 0.7, 0.0));
        let direct = rho_g_kernel(&HComplex::from_f64(128, 0.7, 0.0), &HComplex::from_f64(128, 0.0, 0.5)).unwrap();
        assert!((&g - &direct).abs().to_f64() < 1e-30);
    }
}
