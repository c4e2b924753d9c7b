//! Mean SINR, outage probability and mean capacity.
//!
//! The closed forms hold only for `λ₁ = λ₂ = σ² = 1` and a single SU.
//! Every other scenario goes through the quadrature functionals at the
//! bottom of this file, computed from the multi-SU SINR density.

use crate::analytic::{sinr_pdf_multi, AnalyticError, ScenarioParams};
use crate::oracle::{self, Weight};
use crate::scalar::Scalar;
use crate::special::exp_integral_gamma0;

fn require_single_unit<T: Scalar>(params: &ScenarioParams<T>, op: &'static str) -> Result<(), AnalyticError> {
    params.require_unit_rate(op)?;
    if params.n_su() != 1 {
        return Err(AnalyticError::RequiresSingleSu { operation: op });
    }
    Ok(())
}

/// `μ = e^{1/p}{Γ(0, 1/p) − Γ(0, (1+q)/p)} + p e^{−q/p}/(1+q)`.
pub fn mean_sinr<T: Scalar>(params: &ScenarioParams<T>) -> Result<T, AnalyticError> {
    require_single_unit(params, "mean_sinr")?;
    let (p, q) = (params.p(), params.q());
    let one = T::one();
    let e1_diff = exp_integral_gamma0(one / p)? - exp_integral_gamma0((one + q) / p)?;
    Ok((one / p).exp() * e1_diff + p * (-q / p).exp() / (one + q))
}

/// `P(SINR ≤ ψ) = 1 − e^{−ψ/p}/(ψ+1) · (1 + ψ e^{−q(ψ+1)/p})`.
pub fn outage_probability<T: Scalar>(params: &ScenarioParams<T>, psi: T) -> Result<T, AnalyticError> {
    require_single_unit(params, "outage_probability")?;
    if !(psi >= T::zero()) {
        return Err(AnalyticError::NegativeThreshold(psi.to_f64().unwrap_or(f64::NAN)));
    }
    if psi.is_infinite() {
        return Ok(T::one());
    }
    let (p, q) = (params.p(), params.q());
    let one = T::one();
    let survival = (-psi / p).exp() / (psi + one) * (one + psi * (-q * (psi + one) / p).exp());
    Ok((one - survival).max(T::zero()).min(one))
}

/// `C̄ = 1 − e^{−q/p} + e^{1/p}/p [(p+q+1) Γ(0, (q+1)/p) − Γ(0, 1/p)]` nats.
pub fn mean_capacity<T: Scalar>(params: &ScenarioParams<T>) -> Result<T, AnalyticError> {
    require_single_unit(params, "mean_capacity")?;
    let (p, q) = (params.p(), params.q());
    let one = T::one();
    let bracket = (p + q + one) * exp_integral_gamma0((q + one) / p)? - exp_integral_gamma0(one / p)?;
    Ok(-(-q / p).exp_m1() + (one / p).exp() / p * bracket)
}

/// `∫ z f_z(z) dz` of the multi-SU SINR density, any rates.
pub fn mean_sinr_numeric<T: Scalar>(params: &ScenarioParams<T>, tol: T) -> Result<T, AnalyticError> {
    let d = sinr_pdf_multi(params)?;
    Ok(oracle::functional_mean(&d, Weight::Identity, tol)?.value)
}

/// `∫₀^ψ f_z(z) dz` of the multi-SU SINR density, any rates.
pub fn outage_probability_numeric<T: Scalar>(
    params: &ScenarioParams<T>,
    psi: T,
    tol: T,
) -> Result<T, AnalyticError> {
    if !(psi >= T::zero()) {
        return Err(AnalyticError::NegativeThreshold(psi.to_f64().unwrap_or(f64::NAN)));
    }
    if psi == T::zero() {
        return Ok(T::zero());
    }
    let d = sinr_pdf_multi(params)?;
    Ok(oracle::integrate_density(&d, T::zero(), psi.min(d.cutoff()), tol)?.value)
}

/// `∫ ln(1+z) f_z(z) dz` of the multi-SU SINR density, any rates.
pub fn mean_capacity_numeric<T: Scalar>(params: &ScenarioParams<T>, tol: T) -> Result<T, AnalyticError> {
    let d = sinr_pdf_multi(params)?;
    Ok(oracle::functional_mean(&d, Weight::Log1p, tol)?.value)
}
