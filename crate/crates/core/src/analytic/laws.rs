//! Noise-plus-interference laws `Y = σ² + min{p Σ αᵢ, q}`.

use std::sync::Arc;

use crate::analytic::{AnalyticError, ScenarioParams};
use crate::mixed::MixedDistribution;
use crate::scalar::Scalar;
use crate::special::{ln_gamma, regularized_upper_gamma};

/// Single SU: shifted exponential of rate `λ₂/p` on `[σ², σ²+q)` plus an
/// atom of mass `e^{−λ₂ q / p}` at `σ²+q`.
pub fn ni_law_single<T: Scalar>(params: &ScenarioParams<T>) -> Result<MixedDistribution<T>, AnalyticError> {
    let rate = params.lambda_bar();
    let lo = params.sigma2();
    let cap = params.cap_location();
    let density = Arc::new(move |x: T| rate * (-rate * (x - lo)).exp());
    let cdf = Arc::new(move |x: T| -(-rate * (x - lo)).exp_m1());
    Ok(MixedDistribution::builder("noise+interference, single SU", lo, density)
        .continuous_upper(cap)
        .continuous_cdf(cdf)
        .atom(cap, (-rate * params.q()).exp())
        .build()?)
}

/// Gamma(n, rate) density at `u ≥ 0`.
pub(crate) fn gamma_pdf<T: Scalar>(n: u32, rate: T, u: T) -> T {
    if u < T::zero() {
        return T::zero();
    }
    if n == 1 {
        return rate * (-rate * u).exp();
    }
    if u == T::zero() {
        return T::zero();
    }
    let nf = T::lit(f64::from(n));
    if n <= 30 {
        let fact = (2..n).fold(T::one(), |acc, j| acc * T::lit(f64::from(j)));
        let ru = rate * u;
        rate * ru.powi(n as i32 - 1) / fact * (-ru).exp()
    } else {
        (nf * rate.ln() + (nf - T::one()) * u.ln() - rate * u - ln_gamma(nf)).exp()
    }
}

/// `n` SUs with aggregate cap: the sum `p Σ αᵢ` is Gamma(n, λ₂/p); the
/// continuous part lives on `[σ², σ²+q)` and the atom at `σ²+q` carries
/// `Q(n, λ₂ q / p)`.
pub fn ni_law_multi<T: Scalar>(params: &ScenarioParams<T>) -> Result<MixedDistribution<T>, AnalyticError> {
    let n = params.n_su();
    let rate = params.lambda_bar();
    let lo = params.sigma2();
    let cap = params.cap_location();
    let density = Arc::new(move |x: T| gamma_pdf(n, rate, x - lo));
    let cdf = Arc::new(move |x: T| {
        let u = (x - lo).max(T::zero());
        T::one() - regularized_upper_gamma(n, rate * u).expect("n >= 1, u >= 0")
    });
    let mass = regularized_upper_gamma(n, rate * params.q())?;
    Ok(MixedDistribution::builder(format!("noise+interference, {n} SU"), lo, density)
        .continuous_upper(cap)
        .continuous_cdf(cdf)
        .atom(cap, mass)
        .build()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mixed::Cdf;

    fn fig2(n: u32) -> ScenarioParams<f64> {
        ScenarioParams::<f64>::unit_rate(4.0, 2.0, n).unwrap()
    }

    #[test]
    fn single_law_shape() {
        let law = ni_law_single(&fig2(1)).unwrap();
        assert_eq!(law.support_lo(), 1.0);
        assert_eq!(law.cdf(1.0), 0.0);
        assert_eq!(law.cdf(0.2), 0.0);
        let want_jump = (-0.5f64).exp();
        assert!((law.atom_mass_at(3.0) - want_jump).abs() < 1e-15);
        assert!((law.cdf(3.0) - law.cdf_left(3.0) - want_jump).abs() < 1e-15);
        assert!((law.continuous_pdf_at(2.0) - 0.25 * (-0.25f64).exp()).abs() < 1e-15);
        assert!((law.continuous_pdf_at(2.0) - 0.194_700_195_6).abs() < 1e-9);
        assert_eq!(law.continuous_pdf_at(5.0), 0.0);
        assert_eq!(law.continuous_pdf_at(0.5), 0.0);
        assert!((law.cdf(1e9) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn multi_atom_mass() {
        let law = ni_law_multi(&fig2(2)).unwrap();
        let want = (-0.5f64).exp() * 1.5;
        assert!((law.atom_mass_at(3.0) - want).abs() < 1e-15);
        assert!((want - 0.909_80).abs() < 1e-5);
    }

    #[test]
    fn multi_with_one_su_is_single() {
        for &(p, q) in &[(4.0, 2.0), (2.0, 4.0), (0.5, 1.0)] {
            let s = ScenarioParams::<f64>::new(p, q, 1.3, 0.7, 2.1, 1).unwrap();
            let a = ni_law_single(&s).unwrap();
            let b = ni_law_multi(&s).unwrap();
            for i in 0..=400 {
                let x = 0.5 + f64::from(i) * 0.02;
                assert!((a.cdf(x) - b.cdf(x)).abs() <= 1e-12, "x={x}");
                assert!((a.continuous_pdf_at(x) - b.continuous_pdf_at(x)).abs() <= 1e-12);
            }
            assert!((a.atom_mass_at(s.cap_location()) - b.atom_mass_at(s.cap_location())).abs() <= 1e-15);
        }
    }

    #[test]
    fn huge_cap_never_binds() {
        let s = ScenarioParams::<f64>::unit_rate(4.0, 1e6, 1).unwrap();
        let law = ni_law_single(&s).unwrap();
        assert!(law.total_atom_mass() < 1e-10);
        let shifted_exp = |x: f64| if x < 1.0 { 0.0 } else { 1.0 - (-(x - 1.0) / 4.0).exp() };
        for i in 0..1000 {
            let x = f64::from(i) * 0.1;
            assert!((law.cdf(x) - shifted_exp(x)).abs() <= 1e-9);
        }
    }

    #[test]
    fn normalization_by_quadrature() {
        for n in 1..=3 {
            for &(p, q) in &[(4.0, 2.0), (2.0, 4.0), (0.5, 0.5)] {
                let s = ScenarioParams::<f64>::unit_rate(p, q, n).unwrap();
                let law = ni_law_multi(&s).unwrap();
                let m = law.total_mass(1e-13).unwrap();
                assert!((m - 1.0).abs() < 1e-10, "n={n} p={p} q={q} mass={m}");
            }
        }
    }

    #[test]
    fn closed_cdf_agrees_with_integrated_density() {
        let s = ScenarioParams::<f64>::new(2.0, 4.0, 1.0, 1.0, 1.5, 3).unwrap();
        let law = ni_law_multi(&s).unwrap();
        for &x in &[1.2, 2.0, 3.5, 4.9] {
            let q = crate::oracle::integrate(|y| law.continuous_pdf_at(y), 1.0, x, 1e-13).unwrap().value;
            assert!((q - law.cdf(x)).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn gamma_pdf_large_shape_branch_continuous() {
        // shape 30 through the product form vs 31 through logs: ratio check
        let (r, u) = (0.7f64, 40.0);
        let a = gamma_pdf(30, r, u);
        let b = gamma_pdf(31, r, u);
        assert!(((b / a) - r * u / 30.0).abs() < 1e-12);
    }
}
