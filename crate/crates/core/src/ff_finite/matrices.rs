use crate::bethe::BetheState;
use crate::error::{Error, Result};
use crate::numeric::{HComplex, Matrix};

fn guard_pole(z: &HComplex, bits: u32, what: &str) -> Result<()> {
    if z.is_zero() || z.log2_abs() < -(bits as f64) + 16.0 {
        return Err(Error::PoleArgument(what.into()));
    }
    Ok(())
}

/// t(x) = i/(x(x + i)).
pub fn t_fn(x: &HComplex, bits: u32) -> Result<HComplex> {
    let xi = x.add_f64(0.0, 1.0);
    guard_pole(x, bits, "t at 0")?;
    guard_pole(&xi, bits, "t at -i")?;
    Ok((x * &xi).recip().mul_i())
}

/// K(x) = 2i/((x - i)(x + i)) = t(x) + t(-x).
pub fn k_fn(x: &HComplex, bits: u32) -> Result<HComplex> {
    let d = (x * x).add_f64(1.0, 0.0);
    guard_pole(&d, bits, "K at +-i")?;
    Ok(d.recip().mul_i().scale_f64(2.0))
}

fn root_c(state: &BetheState, j: usize) -> HComplex {
    HComplex::from_real(state.roots[j].clone())
}

fn slavnov_entry(state: &BetheState, j: usize, p: &HComplex, a_p: &HComplex) -> Result<HComplex> {
    let lj = root_c(state, j);
    let b = state.bits;
    Ok(&(a_p * &t_fn(&(p - &lj), b)?) - &t_fn(&(&lj - p), b)?)
}

/// Slavnov matrix a(p_k) t(p_k - lambda_j) - t(lambda_j - p_k) for the on-shell
/// roots of `state_on` and the free parameters `params`.
pub fn slavnov_matrix(state_on: &BetheState, params: &[HComplex]) -> Result<Matrix<HComplex>> {
    let n = state_on.n();
    if params.len() != n {
        return Err(Error::InvalidInput(format!("Slavnov matrix needs {n} parameters, got {}", params.len())));
    }
    let a: Vec<HComplex> = params.iter().map(|p| state_on.counting_a(p)).collect::<Result<_>>()?;
    Matrix::try_from_fn(n, n, |j, k| slavnov_entry(state_on, j, &params[k], &a[k]))
}

/// Gaudin matrix a'(lambda_j) delta_jk - K(lambda_j - lambda_k).
pub fn gaudin_matrix(state: &BetheState) -> Result<Matrix<HComplex>> {
    let n = state.n();
    let ap: Vec<HComplex> = (0..n).map(|j| state.counting_a_prime(&root_c(state, j))).collect::<Result<_>>()?;
    Matrix::try_from_fn(n, n, |j, k| {
        let kk = k_fn(&(&root_c(state, j) - &root_c(state, k)), state.bits)?;
        Ok(if j == k { &ap[j] - &kk } else { -kk })
    })
}

/// Slavnov rows for the roots of `state` plus two rows
/// a(p_k)(p_k + i)^r - p_k^r, r = 0, 1, for `params` of length N + 2.
pub fn bordered_slavnov_matrix(state: &BetheState, params: &[HComplex]) -> Result<Matrix<HComplex>> {
    let n = state.n();
    if params.len() != n + 2 {
        return Err(Error::InvalidInput(format!("Bordered Slavnov matrix needs {} parameters, got {}", n + 2, params.len())));
    }
    let a: Vec<HComplex> = params.iter().map(|p| state.counting_a(p)).collect::<Result<_>>()?;
    Matrix::try_from_fn(n + 2, n + 2, |j, k| {
        let p = &params[k];
        match j.checked_sub(n) {
            None => slavnov_entry(state, j, p, &a[k]),
            Some(0) => Ok(a[k].add_f64(-1.0, 0.0)),
            Some(_) => Ok(&(&a[k] * &p.add_f64(0.0, 1.0)) - p),
        }
    })
}
