use std::ops::{Index, IndexMut};

use super::complex::HComplex;
use super::precision::PrecisionContext;
use super::real::Real;
use crate::error::{Error, Result};

/// Field operations needed by the dense LU kernels.
pub trait Scalar: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn sub_mul_assign(&mut self, a: &Self, b: &Self);
    fn magnitude_sqr(&self) -> Real;
    fn to_complex(&self) -> HComplex;
    fn precision(&self) -> u32;
}

impl Scalar for Real {
    fn zero_like(&self) -> Self {
        Real::zero(self.prec())
    }
    fn one_like(&self) -> Self {
        Real::one(self.prec())
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        *self -= &(a * b);
    }
    fn magnitude_sqr(&self) -> Real {
        self.square()
    }
    fn to_complex(&self) -> HComplex {
        HComplex::from_real(self.clone())
    }
    fn precision(&self) -> u32 {
        self.prec()
    }
}

impl Scalar for HComplex {
    fn zero_like(&self) -> Self {
        HComplex::zero(self.prec())
    }
    fn one_like(&self) -> Self {
        HComplex::one(self.prec())
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        self.re -= &(&a.re * &b.re - &a.im * &b.im);
        self.im -= &(&a.re * &b.im + &a.im * &b.re);
    }
    fn magnitude_sqr(&self) -> Real {
        self.norm_sqr()
    }
    fn to_complex(&self) -> HComplex {
        self.clone()
    }
    fn precision(&self) -> u32 {
        self.prec()
    }
}

/// Dense row-major matrix.
#[derive(Clone, Debug)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn try_from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Result<T>,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c)?);
            }
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidInput("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let c0 = cols.start;
        let r0 = rows.start;
        Matrix::from_fn(rows.len(), cols.len(), |r, c| self[(r0 + r, c0 + c)].clone())
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn matmul(&self, o: &Matrix<T>) -> Result<Matrix<T>> {
        if self.cols != o.rows || self.cols == 0 {
            return Err(Error::InvalidInput("matmul shape mismatch".into()));
        }
        Ok(Matrix::from_fn(self.rows, o.cols, |r, c| {
            let mut acc = self[(r, 0)].mul(&o[(0, c)]);
            for k in 1..self.cols {
                acc = acc.add(&self[(r, k)].mul(&o[(k, c)]));
            }
            acc
        }))
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        &mut self.data[r * self.cols + c]
    }
}

/// Determinant stored as log-modulus and phase.
#[derive(Clone, Debug)]
pub struct LogDet {
    pub log_modulus: Real,
    /// In (-pi, pi].
    pub phase: Real,
}

impl LogDet {
    pub fn from_log(z: &HComplex) -> Self {
        LogDet { log_modulus: z.re.clone(), phase: wrap_phase(&z.im) }
    }

    pub fn as_log(&self) -> HComplex {
        HComplex::new(self.log_modulus.clone(), self.phase.clone())
    }

    /// exp(log_modulus) * exp(i phase).
    pub fn value(&self) -> HComplex {
        self.as_log().exp()
    }

    pub fn mul(&self, o: &LogDet) -> LogDet {
        LogDet::from_log(&(self.as_log() + o.as_log()))
    }

    pub fn div(&self, o: &LogDet) -> LogDet {
        LogDet::from_log(&(self.as_log() - o.as_log()))
    }
}

/// Reduce an angle into (-pi, pi].
pub fn wrap_phase(x: &Real) -> Real {
    let prec = x.prec();
    let two_pi = Real::pi(prec).mul_f64(2.0);
    let k = (x / &two_pi).round();
    let mut r = x - &(&k * &two_pi);
    let pi = Real::pi(prec);
    if r <= -&pi {
        r += &two_pi;
    } else if r > pi {
        r -= &two_pi;
    }
    r
}

/// LU factorisation with partial pivoting, `P A = L U` packed in one matrix.
#[derive(Clone, Debug)]
pub struct Lu<T> {
    lu: Matrix<T>,
    perm: Vec<usize>,
    swaps: usize,
}

/// Factor `a`; a pivot below `max|a| * 2^(-bits+8)` is reported as singular.
pub fn lu_decompose<T: Scalar>(a: &Matrix<T>, bits: u32) -> Result<Lu<T>> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::InvalidInput(format!("expected a nonempty square matrix, got {}x{}", a.rows(), a.cols())));
    }
    let n = a.rows();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut swaps = 0;

    let mut scale = lu[(0, 0)].magnitude_sqr();
    for v in &lu.data {
        let m = v.magnitude_sqr();
        if m > scale {
            scale = m;
        }
    }
    if !scale.is_finite() {
        return Err(Error::InvalidInput("non-finite matrix entry".into()));
    }
    let floor = &scale * &Real::pow2(scale.prec(), -2 * (bits as i32 - 8));

    for k in 0..n {
        let mut p = k;
        let mut best = lu[(k, k)].magnitude_sqr();
        for r in k + 1..n {
            let m = lu[(r, k)].magnitude_sqr();
            if m > best {
                best = m;
                p = r;
            }
        }
        if best <= floor || best.is_zero() {
            return Err(Error::SingularMatrix { pivot: k, size: n });
        }
        if p != k {
            for c in 0..n {
                lu.data.swap(k * n + c, p * n + c);
            }
            perm.swap(k, p);
            swaps += 1;
        }
        let pivot = lu[(k, k)].clone();
        for r in k + 1..n {
            let l = lu[(r, k)].div(&pivot);
            for c in k + 1..n {
                let u = lu[(k, c)].clone();
                lu[(r, c)].sub_mul_assign(&l, &u);
            }
            lu[(r, k)] = l;
        }
    }
    Ok(Lu { lu, perm, swaps })
}

impl<T: Scalar> Lu<T> {
    pub fn size(&self) -> usize {
        self.perm.len()
    }

    pub fn log_det(&self) -> LogDet {
        let n = self.size();
        let prec = self.lu[(0, 0)].precision();
        let mut log = HComplex::zero(prec);
        for k in 0..n {
            let d = self.lu[(k, k)].to_complex();
            log += &d.ln();
        }
        if self.swaps % 2 == 1 {
            log.im += &Real::pi(prec);
        }
        LogDet::from_log(&log)
    }

    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        let n = self.size();
        if b.len() != n {
            return Err(Error::InvalidInput("rhs length mismatch".into()));
        }
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p].clone()).collect();
        for r in 0..n {
            for c in 0..r {
                let xc = x[c].clone();
                x[r].sub_mul_assign(&self.lu[(r, c)], &xc);
            }
        }
        for r in (0..n).rev() {
            for c in r + 1..n {
                let xc = x[c].clone();
                x[r].sub_mul_assign(&self.lu[(r, c)], &xc);
            }
            x[r] = x[r].div(&self.lu[(r, r)]);
        }
        Ok(x)
    }

    /// Solve for every column of `b`.
    pub fn solve_matrix(&self, b: &Matrix<T>) -> Result<Matrix<T>> {
        let n = self.size();
        if b.rows() != n {
            return Err(Error::InvalidInput("rhs rows mismatch".into()));
        }
        let mut cols = Vec::with_capacity(b.cols());
        for c in 0..b.cols() {
            let col: Vec<T> = (0..n).map(|r| b[(r, c)].clone()).collect();
            cols.push(self.solve(&col)?);
        }
        Ok(Matrix::from_fn(n, b.cols(), |r, c| cols[c][r].clone()))
    }
}

/// Log-scaled determinant by partial-pivoting LU at the context precision.
pub fn det_logscaled(a: &Matrix<HComplex>, ctx: &PrecisionContext) -> Result<LogDet> {
    let a = a.map(|z| z.with_prec(ctx.bits));
    Ok(lu_decompose(&a, ctx.bits)?.log_det())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(128)
    }

    fn c(v: f64) -> HComplex {
        HComplex::from_f64(128, v, 0.0)
    }

    #[test]
    fn identity_and_diagonal() {
        let id = Matrix::from_fn(3, 3, |r, k| c(if r == k { 1.0 } else { 0.0 }));
        let d = det_logscaled(&id, &ctx()).unwrap();
        assert!(d.log_modulus.is_zero() && d.phase.is_zero());
        let diag = Matrix::from_fn(2, 2, |r, k| c(if r != k { 0.0 } else if r == 0 { 2.0 } else { 3.0 }));
        let d = det_logscaled(&diag, &ctx()).unwrap();
        assert!((d.log_modulus.to_f64() - 6f64.ln()).abs() < 1e-15);
        assert!(d.phase.is_zero());
    }

    #[test]
    fn negative_and_complex_determinants() {
        let a = Matrix::from_rows(vec![vec![c(0.0), c(1.0)], vec![c(1.0), c(0.0)]]).unwrap();
        let d = det_logscaled(&a, &ctx()).unwrap();
        assert!((d.phase.to_f64() - std::f64::consts::PI).abs() < 1e-15);
        let z = HComplex::from_f64(128, 0.0, 2.0);
        let b = Matrix::from_rows(vec![vec![z.clone(), c(0.0)], vec![c(5.0), z]]).unwrap();
        let v = det_logscaled(&b, &ctx()).unwrap().value();
        assert!((v.re.to_f64() + 4.0).abs() < 1e-30 && v.im.to_f64().abs() < 1e-30);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let a = Matrix::from_rows(vec![vec![c(1.0), c(2.0)], vec![c(2.0), c(4.0)]]).unwrap();
        assert!(matches!(det_logscaled(&a, &ctx()), Err(Error::SingularMatrix { .. })));
    }

    #[test]
    fn solve_recovers_rhs() {
        let a = Matrix::from_fn(4, 4, |r, k| Real::new(128, 1.0 / (r + k + 1) as f64 + if r == k { 2.0 } else { 0.0 }));
        let x: Vec<Real> = (0..4).map(|i| Real::new(128, i as f64 - 1.5)).collect();
        let b: Vec<Real> = (0..4)
            .map(|r| (0..4).fold(Real::zero(128), |acc, k| acc + &a[(r, k)] * &x[k]))
            .collect();
        let lu = lu_decompose(&a, 128).unwrap();
        let y = lu.solve(&b).unwrap();
        for (u, v) in x.iter().zip(&y) {
            assert!((u - v).abs().to_f64() < 1e-35);
        }
    }

    #[test]
    fn phase_wrap() {
        let w = wrap_phase(&Real::new(128, 7.0));
        assert!((w.to_f64() - (7.0 - 2.0 * std::f64::consts::PI)).abs() < 1e-15);
        let pi = Real::pi(128);
        assert_eq!(wrap_phase(&pi), pi);
        assert_eq!(wrap_phase(&-&pi), pi);
    }
}
