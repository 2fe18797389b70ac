//! Numerical toolkit for the bi-starlike classes on the unit disc.
//!
//! The crate builds class members from Schwarz functions, measures the
//! hyperbolically weighted pre-Schwarzian norm
//! `||f|| = sup (1 - |z|^2) |f''/f'|`, and audits measured norms against the
//! norm-bound formulas for those classes, including two published bounds
//! that the measurements refute.
//!
//! Everything is generic over the real scalar through [`Real`] (`f32` or
//! `f64`); the `*64` aliases at the crate root pin the double-precision
//! instantiations used by the CLI and the acceptance suite.
//!
//! Series truncation is silent throughout: operations at order `N` return
//! order-`N` results and drop the tail without error.

pub mod bounds;
pub mod catalog;
pub mod error;
pub mod grid;
pub mod membership;
pub mod norms;
pub mod quad;
pub mod scalar;
pub mod schwarz;
pub mod search;
pub mod series;

pub use error::{Error, Result};
pub use scalar::Real;

/// Default truncation order for series work.
pub const DEFAULT_SERIES_ORDER: usize = 32;

pub type Series64 = series::TruncatedSeries<f64>;
pub type Function64 = catalog::AnalyticFunction<f64>;
pub type Schwarz64 = schwarz::SchwarzFunction<f64>;
pub type Grid64 = grid::GridSpec<f64>;
pub type NormEstimate64 = norms::NormEstimate<f64>;
pub type MembershipReport64 = membership::MembershipReport<f64>;
pub type BoundProfile64 = bounds::BoundProfile<f64>;
pub type AuditRow64 = bounds::AuditRow<f64>;
pub type GeneratorConfig64 = schwarz::GeneratorConfig<f64>;
pub type AuditConfig64 = bounds::AuditConfig<f64>;
