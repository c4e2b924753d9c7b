//! The set of closed forms under test, swappable so that validation can be
//! run against a deliberately broken provider.

use cri_core::analytic::{self, AnalyticError};
use cri_core::{Law, Params, Pdf};

/// Quadrature tolerance used wherever no closed form applies.
pub const NUMERIC_TOL: f64 = 1e-10;

#[derive(Clone, Copy)]
pub struct Formulas {
    pub mean_sinr: fn(&Params) -> Result<f64, AnalyticError>,
    pub outage: fn(&Params, f64) -> Result<f64, AnalyticError>,
    pub mean_capacity: fn(&Params) -> Result<f64, AnalyticError>,
    /// Single-SU SINR density, arbitrary rates.
    pub sinr_pdf_single: fn(&Params) -> Result<Pdf, AnalyticError>,
    pub sinr_pdf_multi: fn(&Params) -> Result<Pdf, AnalyticError>,
    pub ni_law: fn(&Params) -> Result<Law, AnalyticError>,
}

impl Default for Formulas {
    fn default() -> Self {
        Self::shipped()
    }
}

fn closed_applies(params: &Params) -> bool {
    params.is_unit_rate() && params.n_su() == 1
}

impl Formulas {
    pub fn shipped() -> Self {
        Self {
            mean_sinr: analytic::mean_sinr,
            outage: analytic::outage_probability,
            mean_capacity: analytic::mean_capacity,
            sinr_pdf_single: analytic::sinr_pdf_single_general,
            sinr_pdf_multi: analytic::sinr_pdf_multi,
            ni_law: analytic::ni_law_multi,
        }
    }

    pub fn sinr_pdf(&self, params: &Params) -> Result<Pdf, AnalyticError> {
        if params.n_su() == 1 {
            (self.sinr_pdf_single)(params)
        } else {
            (self.sinr_pdf_multi)(params)
        }
    }

    pub fn capacity_pdf(&self, params: &Params) -> Result<Pdf, AnalyticError> {
        analytic::capacity_density_of(self.sinr_pdf(params)?, params)
    }

    /// Closed form when derived for `params`, quadrature otherwise.
    pub fn mean_sinr_any(&self, params: &Params) -> Result<f64, AnalyticError> {
        if closed_applies(params) {
            (self.mean_sinr)(params)
        } else {
            analytic::mean_sinr_numeric(params, NUMERIC_TOL)
        }
    }

    pub fn outage_any(&self, params: &Params, psi: f64) -> Result<f64, AnalyticError> {
        if closed_applies(params) {
            (self.outage)(params, psi)
        } else {
            analytic::outage_probability_numeric(params, psi, NUMERIC_TOL)
        }
    }

    pub fn mean_capacity_any(&self, params: &Params) -> Result<f64, AnalyticError> {
        if closed_applies(params) {
            (self.mean_capacity)(params)
        } else {
            analytic::mean_capacity_numeric(params, NUMERIC_TOL)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn falls_back_to_quadrature() {
        let f = Formulas::shipped();
        let single = Params::unit_rate(4.0, 2.0, 1).unwrap();
        let via_numeric = analytic::mean_sinr_numeric(&single, 1e-12).unwrap();
        assert!((f.mean_sinr_any(&single).unwrap() - via_numeric).abs() < 1e-9);
        let multi = Params::unit_rate(4.0, 2.0, 2).unwrap();
        assert!(f.mean_sinr_any(&multi).unwrap() < f.mean_sinr_any(&single).unwrap());
        assert!(f.outage_any(&multi, 1.0).unwrap() > f.outage_any(&single, 1.0).unwrap());
    }
}
