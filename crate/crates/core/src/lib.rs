//! Primary-user performance of an underlay cognitive-radio network.
//!
//! The primary link sees noise plus capped secondary interference,
//! `Y = σ² + min(p Σ αᵢ, q)`, and a Rayleigh-faded desired signal. This crate
//! provides the laws of `Y`, the SINR and capacity densities, closed-form
//! mean SINR, outage and mean capacity, and two independent checks for all
//! of them: adaptive quadrature ([`oracle`]) and a deterministic parallel
//! simulator ([`montecarlo`]).
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix `f64`.

// Quadrature nodes and reference values keep all their published digits.
#![allow(clippy::excessive_precision)]
// `!(x >= 0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod mixed;
pub mod montecarlo;
pub mod oracle;
pub mod scalar;
pub mod special;

pub use scalar::Scalar;

pub type Params = analytic::ScenarioParams<f64>;
pub type Curve = analytic::DensityCurve<f64>;
pub type Law = mixed::MixedDistribution<f64>;
pub type Pdf = mixed::Density<f64>;
pub type Empirical = montecarlo::EmpiricalDistribution<f64>;
pub type Table = oracle::CdfTable<f64>;
