//! Closed-form primary-user metrics of the underlay model.

mod laws;
mod metrics;
mod params;
mod sinr;

use thiserror::Error;

pub use laws::{ni_law_multi, ni_law_single};
pub use metrics::{
    mean_capacity, mean_capacity_numeric, mean_sinr, mean_sinr_numeric, outage_probability,
    outage_probability_numeric,
};
pub use params::{linspace, su_transmit_power, DensityCurve, ScenarioParams};
pub use sinr::{
    capacity_density_of, capacity_pdf, sinr_cdf, sinr_pdf_multi, sinr_pdf_single_general,
    sinr_pdf_single_unit, SinrCdf, SINR_TABLE_INTERVALS,
};

use crate::mixed::MixedDistError;
use crate::oracle::QuadratureError;
use crate::special::SpecialError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error("parameter {field} = {value} must be positive and finite")]
    InvalidParameter { field: &'static str, value: f64 },
    #[error("{operation} is only derived for lambda1 = lambda2 = sigma2 = 1; use the numeric functional")]
    RequiresUnitRate { operation: &'static str },
    #[error("{operation} is only derived for a single SU; use the numeric functional")]
    RequiresSingleSu { operation: &'static str },
    #[error("outage threshold must be >= 0, got {0}")]
    NegativeThreshold(f64),
    #[error("invalid curve: {0}")]
    Curve(String),
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Law(#[from] MixedDistError),
}
