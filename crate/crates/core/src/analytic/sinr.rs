//! SINR and instantaneous-capacity densities.
//!
//! `SINR = γ p / Y` with `γ ~ Exp(λ₁)` and `Y` the noise-plus-interference
//! law. Every density carries the envelope
//! `f_z(z) ≤ (λ₁/p)(σ²+q) e^{−(λ₁/p) σ² z}`, which follows from
//! `f_z(z) = E[(λ₁/p) Y e^{−λ₁ Y z / p}]` and `σ² ≤ Y ≤ σ²+q`.

use std::sync::Arc;

use crate::analytic::{AnalyticError, ScenarioParams};
use crate::mixed::{Cdf, Density};
use crate::oracle::{self, CdfTable, ExpTail};
use crate::scalar::Scalar;
use crate::special::regularized_upper_gamma;

/// Panels used when an SINR CDF has to be tabulated.
pub const SINR_TABLE_INTERVALS: usize = 8192;

fn sinr_tail<T: Scalar>(params: &ScenarioParams<T>) -> Result<ExpTail<T>, AnalyticError> {
    let k = params.lambda1_bar();
    Ok(ExpTail::new(k * params.cap_location(), k * params.sigma2())?)
}

/// Single-SU SINR density for arbitrary rates:
///
/// `f(z) = λ₁λ₂/(Λp) { e^{−σ²λ₁z/p}(σ² + p/Λ) + e^{−(σ²λ₁z + qΛ)/p}((σ²+q)λ₁z/λ₂ − p/Λ) }`
/// with `Λ = λ₂ + λ₁ z`.
pub fn sinr_pdf_single_general<T: Scalar>(params: &ScenarioParams<T>) -> Result<Density<T>, AnalyticError> {
    let (p, q, s2) = (params.p(), params.q(), params.sigma2());
    let (l1, l2) = (params.lambda1(), params.lambda2());
    let f = Arc::new(move |z: T| {
        let big_lambda = l2 + l1 * z;
        let a = (-s2 * l1 * z / p).exp() * (s2 + p / big_lambda);
        let b = (-(s2 * l1 * z + q * big_lambda) / p).exp() * ((s2 + q) * l1 * z / l2 - p / big_lambda);
        l1 * l2 / (big_lambda * p) * (a + b)
    });
    Ok(Density::new("SINR pdf, single SU", T::zero(), sinr_tail(params)?, vec![], f))
}

/// Unit-rate (`λ₁ = λ₂ = σ² = 1`) single-SU SINR density:
///
/// `f(z) = 1/(p(z+1)) { e^{−z/p}(1 + p/(z+1)) + e^{−(z + q(z+1))/p}((1+q)z − p/(z+1)) }`.
pub fn sinr_pdf_single_unit<T: Scalar>(params: &ScenarioParams<T>) -> Result<Density<T>, AnalyticError> {
    params.require_unit_rate("sinr_pdf_single_unit")?;
    let (p, q) = (params.p(), params.q());
    let f = Arc::new(move |z: T| {
        let z1 = z + T::one();
        let a = (-z / p).exp() * (T::one() + p / z1);
        let b = (-(z + q * z1) / p).exp() * ((T::one() + q) * z - p / z1);
        (a + b) / (p * z1)
    });
    Ok(Density::new("SINR pdf, single SU, unit rates", T::zero(), sinr_tail(params)?, vec![], f))
}

/// Multi-SU SINR density with `Θ = λ̄ + λ̄₁ z`:
///
/// `f(z) = λ̄₁ λ̄ⁿ e^{−σ²λ̄₁z} Θ^{−1−n} [ n + σ²Θ(1 − Q(n, qΘ)) − n Q(n+1, qΘ) ]
///        + λ̄₁ (σ²+q) Q(n, qλ̄) e^{−λ̄₁(σ²+q)z}`
///
/// where `n Q(n+1, x) = Γ(n+1, x)/Γ(n, 0)`.
pub fn sinr_pdf_multi<T: Scalar>(params: &ScenarioParams<T>) -> Result<Density<T>, AnalyticError> {
    let n = params.n_su();
    let nf = T::lit(f64::from(n));
    let (q, s2) = (params.q(), params.sigma2());
    let (lb, lb1) = (params.lambda_bar(), params.lambda1_bar());
    let atom_mass = regularized_upper_gamma(n, q * lb)?;
    let f = Arc::new(move |z: T| {
        let theta = lb + lb1 * z;
        let qt = q * theta;
        let qn = regularized_upper_gamma(n, qt).expect("n >= 1, qΘ >= 0");
        let qn1 = regularized_upper_gamma(n + 1, qt).expect("n >= 1, qΘ >= 0");
        let bracket = nf * (T::one() - qn1) + s2 * theta * (T::one() - qn);
        // λ̄ⁿ Θ^{−1−n} = (λ̄/Θ)ⁿ / Θ stays bounded since Θ ≥ λ̄
        let continuous = lb1 * (lb / theta).powi(n as i32) / theta * (-s2 * lb1 * z).exp() * bracket;
        let atom = lb1 * (s2 + q) * atom_mass * (-lb1 * (s2 + q) * z).exp();
        continuous + atom
    });
    Ok(Density::new(format!("SINR pdf, {n} SU"), T::zero(), sinr_tail(params)?, vec![], f))
}

/// Density of `C = ln(1 + SINR)` in nats: `f_C(x) = f_z(eˣ − 1) eˣ`.
///
/// Envelope in `x`: with `c = λ̄₁σ²` and `S = λ̄₁(σ²+q)`,
/// `f_C(x) e^{x} ≤ S · max_{u ≥ 1} u² e^{−c(u−1)}`.
pub fn capacity_density_of<T: Scalar>(
    sinr: Density<T>,
    params: &ScenarioParams<T>,
) -> Result<Density<T>, AnalyticError> {
    let c = params.lambda1_bar() * params.sigma2();
    let s = params.lambda1_bar() * params.cap_location();
    let u = (T::lit(2.0) / c).max(T::one());
    let scale = s * u * u * (-c * (u - T::one())).exp();
    let tail = ExpTail::new(scale, T::one())?;
    let label = format!("capacity pdf (nats) of {}", sinr.label());
    let f = Arc::new(move |x: T| {
        let z = x.exp_m1();
        sinr.eval(z) * x.exp()
    });
    Ok(Density::new(label, T::zero(), tail, vec![], f))
}

/// Capacity density built on the unit-rate single-SU SINR density.
pub fn capacity_pdf<T: Scalar>(params: &ScenarioParams<T>) -> Result<Density<T>, AnalyticError> {
    params.require_unit_rate("capacity_pdf")?;
    capacity_density_of(sinr_pdf_single_unit(params)?, params)
}

/// SINR CDF for Monte Carlo comparison: the closed-form outage expression
/// for a single unit-rate SU, otherwise a Hermite table of the integrated
/// multi-SU density.
#[derive(Debug, Clone)]
pub enum SinrCdf<T> {
    Closed(ScenarioParams<T>),
    Tabulated(CdfTable<T>),
}

impl<T: Scalar> Cdf<T> for SinrCdf<T> {
    fn cdf(&self, z: T) -> T {
        match self {
            SinrCdf::Closed(params) => {
                if z.is_nan() || z <= T::zero() {
                    T::zero()
                } else {
                    super::outage_probability(params, z).expect("unit-rate params, z > 0")
                }
            }
            SinrCdf::Tabulated(table) => table.cdf(z),
        }
    }
}

pub fn sinr_cdf<T: Scalar>(params: &ScenarioParams<T>) -> Result<SinrCdf<T>, AnalyticError> {
    if params.is_unit_rate() && params.n_su() == 1 {
        return Ok(SinrCdf::Closed(*params));
    }
    let density = sinr_pdf_multi(params)?;
    let table = oracle::cumulative_table(&density, SINR_TABLE_INTERVALS, T::lit(1e-11))?;
    Ok(SinrCdf::Tabulated(table))
}
