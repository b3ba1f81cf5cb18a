//! Finite-chain sigma^z form factors between the ground state and a
//! two-spinon triplet: the exact determinant formula and two large-M forms
//! (Cauchy determinants and sinh double products).

mod cauchy;
mod matrices;
mod routes;

pub use cauchy::{
    big_cauchy_det, first_det, first_det_matrix, logdet_rel_diff, sinh_cauchy_det, sinh_cauchy_matrix,
    small_cauchy_det,
};
pub use matrices::{bordered_slavnov_matrix, gaudin_matrix, k_fn, slavnov_matrix, t_fn};
pub use routes::{det_p_report, ff_cauchy, ff_determinant, ff_route, ff_sinh_product, hole_corrected_matrix, DetPReport};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Route {
    #[serde(rename = "det")]
    Determinant,
    #[serde(rename = "cauchy")]
    Cauchy,
    #[serde(rename = "sinh")]
    SinhProduct,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Determinant => "det",
            Route::Cauchy => "cauchy",
            Route::SinhProduct => "sinh",
        })
    }
}

impl FromStr for Route {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "det" => Ok(Route::Determinant),
            "cauchy" => Ok(Route::Cauchy),
            "sinh" => Ok(Route::SinhProduct),
            other => Err(Error::InvalidInput(format!("unknown route '{other}' (expected det, cauchy or sinh)"))),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Diagnostics {
    /// log|.| of each assembled factor.
    pub components: BTreeMap<String, f64>,
    /// Phase of the assembled product, in (-pi, pi].
    pub phase: f64,
    /// |sin(phase)|: the discarded imaginary part relative to the modulus.
    pub imag_fraction: f64,
}

/// |F_z|^2 for one hole pair by one route.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FormFactorResult {
    #[serde(rename = "M")]
    pub m: usize,
    pub hole_slots: (usize, usize),
    pub hole_rapidities: [f64; 2],
    pub value: f64,
    pub log_value: f64,
    pub route: Route,
    pub bits_used: u32,
    /// Relative change of the value between the last two precisions.
    pub rel_diff: f64,
    pub diagnostics: Diagnostics,
}

/// Flat record {M, slots, mu_h, value, route, bits_used}.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FormFactorRecord {
    #[serde(rename = "M")]
    pub m: usize,
    pub slots: (usize, usize),
    pub mu_h: [f64; 2],
    pub value: f64,
    pub route: Route,
    pub bits_used: u32,
}

impl FormFactorResult {
    pub fn record(&self) -> FormFactorRecord {
        FormFactorRecord {
            m: self.m,
            slots: self.hole_slots,
            mu_h: self.hole_rapidities,
            value: self.value,
            route: self.route,
            bits_used: self.bits_used,
        }
    }

    /// M^2 |F_z|^2.
    pub fn scaled(&self) -> f64 {
        (self.m * self.m) as f64 * self.value
    }
}
