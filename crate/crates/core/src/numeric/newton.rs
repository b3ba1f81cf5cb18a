use super::linalg::{lu_decompose, Matrix};
use super::real::Real;
use crate::error::{Error, Result};

/// Outcome of a Newton solve.
#[derive(Clone, Debug)]
pub struct NewtonOutcome {
    pub x: Vec<Real>,
    pub residual: Real,
    pub iterations: usize,
}

fn inf_norm(v: &[Real]) -> Real {
    v.iter().fold(Real::zero(v.first().map_or(64, |x| x.prec())), |m, x| m.max(&x.abs()))
}

/// Damped Newton iteration until `||F(x)||_inf <= tol`.
///
/// A full step that increases the residual is halved up to 40 times.
pub fn newton_solve(
    f: impl Fn(&[Real]) -> Result<Vec<Real>>,
    jac: impl Fn(&[Real]) -> Result<Matrix<Real>>,
    x0: Vec<Real>,
    tol: &Real,
    max_iter: usize,
) -> Result<NewtonOutcome> {
    if x0.is_empty() {
        return Err(Error::InvalidInput("empty Newton start vector".into()));
    }
    let bits = x0.iter().map(|x| x.prec()).max().unwrap_or(64);
    let mut x = x0;
    let mut fx = f(&x)?;
    let mut res = inf_norm(&fx);
    for it in 0..max_iter {
        if res <= *tol {
            return Ok(NewtonOutcome { x, residual: res, iterations: it });
        }
        let j = jac(&x)?;
        let lu = match lu_decompose(&j, bits) {
            Ok(lu) => lu,
            Err(Error::SingularMatrix { .. }) => return Err(Error::SingularJacobian { iteration: it }),
            Err(e) => return Err(e),
        };
        let rhs: Vec<Real> = fx.iter().map(|v| -v).collect();
        let step = lu.solve(&rhs)?;
        let mut scale = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let trial: Vec<Real> = x.iter().zip(&step).map(|(a, s)| a + &s.mul_f64(scale)).collect();
            let ft = f(&trial)?;
            let rt = inf_norm(&ft);
            if rt < res || rt <= *tol {
                x = trial;
                fx = ft;
                res = rt;
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if res <= *tol {
        let iterations = max_iter;
        return Ok(NewtonOutcome { x, residual: res, iterations });
    }
    Err(Error::NoConvergence { what: format!("Newton (residual {:e})", res.to_f64()), iterations: max_iter })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_square_root() {
        let tol = Real::pow2(128, -120);
        let out = newton_solve(
            |x| Ok(vec![x[0].square().add_f64(-4.0)]),
            |x| Ok(Matrix::from_fn(1, 1, |_, _| x[0].mul_f64(2.0))),
            vec![Real::new(128, 3.0)],
            &tol,
            50,
        )
        .unwrap();
        assert!((out.x[0].to_f64() - 2.0).abs() < 1e-30);
    }

    #[test]
    fn linear_system() {
        let tol = Real::pow2(128, -120);
        let out = newton_solve(
            |x| Ok(vec![(&x[0] + &x[1]).add_f64(-1.0), &x[0] - &x[1]]),
            |_| Ok(Matrix::from_rows(vec![
                vec![Real::new(128, 1.0), Real::new(128, 1.0)],
                vec![Real::new(128, 1.0), Real::new(128, -1.0)],
            ])?),
            vec![Real::new(128, 0.0), Real::new(128, 0.0)],
            &tol,
            10,
        )
        .unwrap();
        assert_eq!(out.x[0].to_f64(), 0.5);
        assert_eq!(out.x[1].to_f64(), 0.5);
    }

    #[test]
    fn singular_jacobian() {
        let tol = Real::pow2(128, -120);
        let r = newton_solve(
            |x| Ok(vec![x[0].square().add_f64(1.0)]),
            |_| Ok(Matrix::from_fn(1, 1, |_, _| Real::zero(128))),
            vec![Real::new(128, 0.0)],
            &tol,
            10,
        );
        assert!(matches!(r, Err(Error::SingularJacobian { .. })));
    }

    #[test]
    fn no_real_root() {
        let tol = Real::pow2(128, -120);
        let r = newton_solve(
            |x| Ok(vec![x[0].square().add_f64(1.0)]),
            |x| Ok(Matrix::from_fn(1, 1, |_, _| x[0].mul_f64(2.0))),
            vec![Real::new(128, 0.5)],
            &tol,
            30,
        );
        assert!(matches!(r, Err(Error::NoConvergence { .. })));
    }
}
