//! Log Gamma, polygamma and Barnes G for complex arguments.

mod barnes;
mod gamma;

pub use barnes::{barnes_g, barnes_g_routes, log_barnes_g_integral, log_barnes_g_product, BarnesRoutes};
pub use gamma::{digamma, hurwitz_zeta_int, log_gamma, trigamma};
