//! The integrated SINR density against an independent CDF:
//! `P(γp/Y ≤ z) = 1 − E[e^{−λ̄₁ z Y}]`, with the Laplace transform of the
//! capped gamma law evaluated through regularized incomplete gammas.

use cri_core::analytic::{outage_probability_numeric, sinr_cdf, ScenarioParams};
use cri_core::mixed::Cdf;
use cri_core::special::regularized_upper_gamma;

fn laplace_cdf(s: &ScenarioParams<f64>, z: f64) -> f64 {
    let n = s.n_su();
    let (lb, lb1, q, s2) = (s.lambda_bar(), s.lambda1_bar(), s.q(), s.sigma2());
    let theta = lb + lb1 * z;
    let below_cap = (lb / theta).powi(n as i32) * (1.0 - regularized_upper_gamma(n, q * theta).unwrap());
    let at_cap = (-lb1 * q * z).exp() * regularized_upper_gamma(n, lb * q).unwrap();
    1.0 - (-s2 * lb1 * z).exp() * (below_cap + at_cap)
}

fn scenarios() -> Vec<ScenarioParams<f64>> {
    let mut v = Vec::new();
    for n in 1..=3 {
        for &(p, q) in &[(4.0, 2.0), (2.0, 4.0), (0.5, 1.0)] {
            v.push(ScenarioParams::unit_rate(p, q, n).unwrap());
        }
        v.push(ScenarioParams::new(3.0, 1.5, 0.8, 1.7, 0.6, n).unwrap());
    }
    v
}

const GRID: [f64; 9] = [0.01, 0.1, 0.5, 1.0, 2.0, 4.0, 10.0, 25.0, 50.0];

#[test]
fn outage_quadrature_matches_laplace_form() {
    for s in scenarios() {
        for &z in &GRID {
            let quad = outage_probability_numeric(&s, z, 1e-12).unwrap();
            let want = laplace_cdf(&s, z);
            assert!((quad - want).abs() < 1e-9, "{s:?} z={z}: {quad} vs {want}");
        }
    }
}

#[test]
fn tabulated_and_closed_cdfs_match_laplace_form() {
    for s in scenarios() {
        let cdf = sinr_cdf(&s).unwrap();
        for &z in &GRID {
            assert!((cdf.cdf(z) - laplace_cdf(&s, z)).abs() < 1e-9, "{s:?} z={z}");
        }
    }
}
