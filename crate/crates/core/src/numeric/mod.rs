//! Multiprecision arithmetic, dense linear algebra, quadrature and Newton.

pub mod complex;
pub mod linalg;
pub mod newton;
pub mod precision;
pub mod quad;
pub mod real;

pub use complex::HComplex;
pub use linalg::{det_logscaled, lu_decompose, LogDet, Lu, Matrix, Scalar};
pub use newton::{newton_solve, NewtonOutcome};
pub use precision::{escalate, Escalated, PrecisionContext};
pub use quad::{adaptive_quad, cos_integral, exp_sinh_half_line, oscillatory_tail_quad};
pub use real::Real;
