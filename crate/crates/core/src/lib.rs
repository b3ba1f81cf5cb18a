//! Two-spinon sigma^z form factors of the periodic spin-1/2 XXX chain.
//!
//! Finite chains are handled exactly through Bethe roots and determinant
//! formulas; the thermodynamic limit through Barnes G closed forms; an
//! exact-diagonalization oracle provides ground truth for short chains.

pub mod bethe;
pub mod ed;
pub mod error;
pub mod ff_finite;
pub mod ff_tdl;
pub mod numeric;
pub mod special;

pub use error::{Error, Result};
