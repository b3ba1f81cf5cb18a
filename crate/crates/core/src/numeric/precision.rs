use serde::{Deserialize, Serialize};

use super::real::Real;
use crate::error::{Error, Result};

/// Working precision and acceptance policy for multiprecision evaluations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrecisionContext {
    pub bits: u32,
    pub rel_tol: f64,
    pub max_escalations: u32,
}

impl PrecisionContext {
    pub const MIN_BITS: u32 = 64;

    pub fn new(bits: u32) -> Self {
        PrecisionContext { bits: bits.max(Self::MIN_BITS), rel_tol: 1e-20, max_escalations: 2 }
    }

    /// Default for finite-size determinant work on a chain of `m` sites.
    pub fn for_chain(m: usize) -> Self {
        Self::new((12 * m as u32).max(128))
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_bits(mut self, bits: u32) -> Self {
        self.bits = bits.max(Self::MIN_BITS);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.bits < Self::MIN_BITS || !(self.rel_tol > 0.0) {
            return Err(Error::InvalidInput(format!("bad precision context {self:?}")));
        }
        Ok(())
    }

    /// 2^(-bits * num / den), the usual "fraction of the working precision" tolerance.
    pub fn eps_fraction(&self, num: u32, den: u32) -> Real {
        Real::pow2(self.bits, -((self.bits * num / den) as i32))
    }
}

/// A value accepted after comparing two precisions.
#[derive(Clone, Debug)]
pub struct Escalated<T> {
    pub value: T,
    pub bits_used: u32,
    pub rel_diff: f64,
}

/// Evaluate at `bits`, `2 bits`, ... until two successive headline values agree to `rel_tol`.
pub fn escalate<T>(
    ctx: &PrecisionContext,
    mut eval: impl FnMut(u32) -> Result<(T, Real)>,
) -> Result<Escalated<T>> {
    ctx.validate()?;
    let mut bits = ctx.bits;
    let (_, mut prev) = eval(bits)?;
    let mut rel = f64::INFINITY;
    for _ in 0..=ctx.max_escalations {
        bits *= 2;
        let (value, head) = eval(bits)?;
        let scale = head.abs().max(&prev.abs());
        rel = if scale.is_zero() { 0.0 } else { ((&head - &prev).abs() / scale).to_f64() };
        if rel < ctx.rel_tol {
            return Ok(Escalated { value, bits_used: bits, rel_diff: rel });
        }
        prev = head;
    }
    Err(Error::PrecisionExhausted { bits, rel_diff: rel })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_default_bits() {
        assert_eq!(PrecisionContext::for_chain(8).bits, 128);
        assert_eq!(PrecisionContext::for_chain(64).bits, 768);
        assert_eq!(PrecisionContext::new(10).bits, 64);
    }

    #[test]
    fn escalation_accepts_a_stable_value() {
        let ctx = PrecisionContext::new(128);
        let r = escalate(&ctx, |b| {
            let v = Real::pi(b).sqrt();
            Ok((v.to_f64(), v))
        })
        .unwrap();
        assert_eq!(r.bits_used, 256);
        assert!(r.rel_diff < 1e-35);
    }

    #[test]
    fn escalation_gives_up() {
        let ctx = PrecisionContext::new(64);
        let mut calls = 0u32;
        let r = escalate(&ctx, |b| {
            calls += 1;
            Ok(((), Real::new(b, calls as f64)))
        });
        assert!(matches!(r, Err(Error::PrecisionExhausted { .. })));
        assert_eq!(calls, ctx.max_escalations + 2);
    }
}
