use crate::bethe::BetheState;
use crate::error::{Error, Result};
use crate::numeric::{HComplex, LogDet, Matrix, Real};

/// log sinh(pi z), principal branch.
fn ln_sinh_pi(z: &HComplex) -> Result<HComplex> {
    let s = z.scale(&Real::pi(z.prec())).sinh();
    if s.is_zero() || s.log2_abs() < -(z.prec() as f64) + 16.0 {
        return Err(Error::PoleArgument("coincident Cauchy nodes".into()));
    }
    Ok(s.ln())
}

fn i_half(prec: u32) -> HComplex {
    HComplex::from_f64(prec, 0.0, 0.5)
}

fn prec_of(xs: &[HComplex]) -> u32 {
    xs.iter().map(HComplex::prec).max().unwrap_or(64)
}

/// Matrix pi / sinh pi(y_k - x_j), rows indexed by `x`.
pub fn sinh_cauchy_matrix(x: &[HComplex], y: &[HComplex]) -> Result<Matrix<HComplex>> {
    let prec = prec_of(x).max(prec_of(y));
    let pi = HComplex::from_real(Real::pi(prec));
    Matrix::try_from_fn(x.len(), y.len(), |j, k| {
        let s = (&y[k] - &x[j]).scale(&Real::pi(prec)).sinh();
        if s.is_zero() || s.log2_abs() < -(prec as f64) + 16.0 {
            return Err(Error::PoleArgument("coincident Cauchy nodes".into()));
        }
        Ok(&pi / &s)
    })
}

/// Closed form of det[pi / sinh pi(y_k - x_j)]:
/// pi^n prod_{i<j} sinh pi(x_j - x_i) sinh pi(y_i - y_j) / prod_{i,j} sinh pi(y_j - x_i).
pub fn sinh_cauchy_det(x: &[HComplex], y: &[HComplex]) -> Result<LogDet> {
    let n = x.len();
    if y.len() != n || n == 0 {
        return Err(Error::InvalidInput("Cauchy determinant needs equal, nonzero node counts".into()));
    }
    let prec = prec_of(x).max(prec_of(y));
    let mut acc = HComplex::from_real(Real::pi(prec).ln().mul_i64(n as i64));
    for i in 0..n {
        for j in (i + 1)..n {
            acc += &ln_sinh_pi(&(&x[j] - &x[i]))?;
            acc += &ln_sinh_pi(&(&y[i] - &y[j]))?;
        }
        for yj in y {
            acc -= &ln_sinh_pi(&(yj - &x[i]))?;
        }
    }
    Ok(LogDet::from_log(&acc))
}

/// Product form of det R_g, R_g[j,k] = pi/sinh pi(p_k - lambda_j) with
/// p = (mu_1, ..., mu_{n-1}, i/2) and n = |lambdas| = |mus| + 1.
pub fn small_cauchy_det(lambdas: &[HComplex], mus: &[HComplex]) -> Result<LogDet> {
    let n = lambdas.len();
    if mus.len() + 1 != n {
        return Err(Error::InvalidInput("small Cauchy determinant needs |mu| = |lambda| - 1".into()));
    }
    let prec = prec_of(lambdas).max(prec_of(mus));
    let ih = i_half(prec);
    let mut acc = HComplex::from_real(Real::pi(prec).ln().mul_i64(n as i64));
    for j in 0..mus.len() {
        for k in 0..j {
            acc += &ln_sinh_pi(&(&mus[j] - &mus[k]))?;
        }
        for l in lambdas {
            acc -= &ln_sinh_pi(&(&mus[j] - l))?;
        }
        acc += &ln_sinh_pi(&(&ih - &mus[j]))?;
    }
    for j in 0..n {
        for k in 0..j {
            acc += &ln_sinh_pi(&(&lambdas[k] - &lambdas[j]))?;
        }
        acc -= &ln_sinh_pi(&(&ih - &lambdas[j]))?;
    }
    Ok(LogDet::from_log(&acc))
}

/// Product form of det C, C[j,k] = pi/sinh pi(q_k - nu_j) with
/// nu = (mu_1, ..., mu_{n-1}, h_1, h_2) and q = (lambda_1, ..., lambda_n, i/2).
pub fn big_cauchy_det(lambdas: &[HComplex], mus: &[HComplex], holes: &[HComplex; 2]) -> Result<LogDet> {
    let n = lambdas.len();
    if mus.len() + 1 != n {
        return Err(Error::InvalidInput("big Cauchy determinant needs |mu| = |lambda| - 1".into()));
    }
    let prec = prec_of(lambdas).max(prec_of(mus)).max(prec_of(holes));
    let pi = Real::pi(prec);
    let ih = i_half(prec);
    let mut acc = HComplex::from_real(pi.ln().mul_i64(n as i64 + 1));
    acc += &ln_sinh_pi(&(&holes[1] - &holes[0]))?;
    for h in holes {
        acc -= &h.scale(&pi).cosh().ln();
    }
    for j in 0..n {
        for k in 0..j {
            acc += &ln_sinh_pi(&(&lambdas[j] - &lambdas[k]))?;
        }
        for m in mus {
            acc -= &ln_sinh_pi(&(&lambdas[j] - m))?;
        }
        acc += &ln_sinh_pi(&(&ih - &lambdas[j]))?;
    }
    for j in 0..mus.len() {
        for k in 0..j {
            acc += &ln_sinh_pi(&(&mus[k] - &mus[j]))?;
        }
        acc -= &ln_sinh_pi(&(&ih - &mus[j]))?;
    }
    for h in holes {
        for m in mus {
            acc += &ln_sinh_pi(&(h - m))?;
        }
        for l in lambdas {
            acc -= &ln_sinh_pi(&(h - l))?;
        }
    }
    Ok(LogDet::from_log(&acc))
}

fn with_i_half(xs: &[HComplex], prec: u32) -> Vec<HComplex> {
    let mut v: Vec<HComplex> = xs.iter().map(|x| x.with_prec(prec)).collect();
    v.push(i_half(prec));
    v
}

/// Thermodynamic-limit form of the ground-state factor matrix,
/// (1 + a_g(p_k))/a_g'(lambda_j) * pi/sinh pi(p_k - lambda_j), p = (mus, i/2).
pub fn first_det_matrix(g: &BetheState, mus: &[HComplex]) -> Result<Matrix<HComplex>> {
    let prec = g.bits;
    let lam: Vec<HComplex> = g.roots.iter().map(|r| HComplex::from_real(r.clone())).collect();
    let p = with_i_half(mus, prec);
    let cauchy = sinh_cauchy_matrix(&lam, &p)?;
    let one_a: Vec<HComplex> = p.iter().map(|x| Ok(g.counting_a(x)?.add_f64(1.0, 0.0))).collect::<Result<_>>()?;
    let ap: Vec<HComplex> = lam.iter().map(|x| g.counting_a_prime(x)).collect::<Result<_>>()?;
    Ok(Matrix::from_fn(lam.len(), p.len(), |j, k| &(&one_a[k] / &ap[j]) * &cauchy[(j, k)]))
}

/// Closed form of det `first_det_matrix`.
pub fn first_det(g: &BetheState, mus: &[HComplex]) -> Result<LogDet> {
    let prec = g.bits;
    let lam: Vec<HComplex> = g.roots.iter().map(|r| HComplex::from_real(r.clone())).collect();
    let mut acc = small_cauchy_det(&lam, mus)?.as_log();
    for m in mus {
        acc += &g.counting_a(&m.with_prec(prec))?.add_f64(1.0, 0.0).ln();
    }
    for l in &lam {
        acc -= &g.counting_a_prime(l)?.ln();
    }
    Ok(LogDet::from_log(&acc))
}

/// Relative distance between two determinants given in log form.
pub fn logdet_rel_diff(a: &LogDet, b: &LogDet) -> f64 {
    let r = a.div(b).value().add_f64(-1.0, 0.0);
    r.abs().to_f64()
}
