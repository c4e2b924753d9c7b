//! Simulator against the analytic laws at 10⁶ samples.

use cri_core::analytic::{
    mean_capacity, mean_sinr, ni_law_multi, outage_probability, sinr_cdf, ScenarioParams,
};
use cri_core::mixed::Cdf;
use cri_core::montecarlo::{
    capacity_transform, ks_statistic, mean_estimate, outage_estimate, simulate_ni, simulate_sinr, SimConfig,
};

const N: usize = 1_000_000;

fn cfg(seed: u64) -> SimConfig {
    SimConfig::with_defaults(N, seed, 8).unwrap()
}

fn unit(p: f64, q: f64, n: u32) -> ScenarioParams<f64> {
    ScenarioParams::unit_rate(p, q, n).unwrap()
}

#[test]
fn ni_ks_and_atom_frequency() {
    for n in 1..=3 {
        for &(p, q) in &[(4.0, 2.0), (2.0, 4.0)] {
            let s = unit(p, q, n);
            let law = ni_law_multi(&s).unwrap();
            let emp = simulate_ni(&s, &cfg(17 + u64::from(n))).unwrap();
            let d = ks_statistic(&emp, &law);
            assert!(d <= 0.005, "n={n} p={p} q={q} KS={d}");
            let cap = s.cap_location();
            let mass = law.atom_mass_at(cap);
            let freq = emp.atom_frequency(cap).unwrap();
            let sigma = (mass * (1.0 - mass) / N as f64).sqrt();
            assert!((freq - mass).abs() <= 3.0 * sigma, "n={n} freq={freq} mass={mass}");
        }
    }
}

#[test]
fn single_su_atom_fraction() {
    let emp = simulate_ni(&unit(4.0, 2.0, 1), &cfg(3)).unwrap();
    let f = emp.atom_frequency(3.0).unwrap();
    assert!((f - (-0.5f64).exp()).abs() <= 0.002, "freq={f}");
    assert!(emp.sorted_samples().iter().all(|&y| (1.0..=3.0).contains(&y)));
}

#[test]
fn sinr_ks_mean_and_outage() {
    for &(p, q) in &[(4.0, 2.0), (2.0, 4.0)] {
        let s = unit(p, q, 1);
        let emp = simulate_sinr(&s, &cfg(41)).unwrap();
        let d = ks_statistic(&emp, &sinr_cdf(&s).unwrap());
        assert!(d <= 0.005, "p={p} q={q} KS={d}");
        let m = mean_estimate(&emp).unwrap();
        let mu = mean_sinr(&s).unwrap();
        assert!((m.mean - mu).abs() <= 3.0 * m.standard_error, "mean {} vs {mu}", m.mean);
        for &psi in &[0.5, 1.0, 2.0, 4.0] {
            let sim = outage_estimate(&emp, psi).unwrap();
            let theory = outage_probability(&s, psi).unwrap();
            assert!((sim - theory).abs() <= 0.003, "psi={psi}");
        }
    }
}

#[test]
fn multi_su_sinr_ks_general_rates() {
    let s = ScenarioParams::new(3.0, 1.5, 0.8, 1.7, 0.6, 3).unwrap();
    let emp = simulate_sinr(&s, &cfg(5)).unwrap();
    let d = ks_statistic(&emp, &sinr_cdf(&s).unwrap());
    assert!(d <= 0.005, "KS={d}");
}

#[test]
fn capacity_sample_mean() {
    let s = unit(4.0, 2.0, 1);
    let emp = simulate_sinr(&s, &cfg(77)).unwrap();
    let cap = capacity_transform(&emp).unwrap();
    let m = mean_estimate(&cap).unwrap();
    let want = mean_capacity(&s).unwrap();
    assert!((m.mean - want).abs() <= 3.0 * m.standard_error, "{} vs {want}", m.mean);
    let closed = sinr_cdf(&s).unwrap();
    let ln_cdf = |x: f64| closed.cdf(x.exp_m1());
    assert!(ks_statistic(&cap, &ln_cdf) <= 0.005);
}
