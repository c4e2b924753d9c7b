//! Seedable parallel simulation of the channel model.
//!
//! Samples are generated in fixed-size chunks, each with its own stream
//! (see [`rng`]), and concatenated in chunk order. The resulting sample
//! vector is a pure function of `(params, seed, samples)`.

mod empirical;
mod ks;
pub mod rng;

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::analytic::{su_transmit_power, ScenarioParams};
use crate::scalar::Scalar;

pub use empirical::{
    capacity_transform, mean_estimate, outage_estimate, AtomCount, EmpiricalDistribution, Histogram,
    MeanEstimate,
};
pub use ks::ks_statistic;
pub use rng::{draw_channel_gain, exp_from_uniform, CHUNK_SIZE};

pub const DEFAULT_BINS: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("simulation setting {field} must be >= 1, got {value}")]
    InvalidConfig { field: &'static str, value: usize },
    #[error("empirical statistic requested on an empty sample")]
    Empty,
    #[error("{0} requires exactly one SU")]
    RequiresSingleSu(&'static str),
    #[error("thread pool construction failed: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    samples: usize,
    seed: u64,
    workers: usize,
    bins: usize,
}

impl SimConfig {
    pub fn new(samples: usize, seed: u64, workers: usize, bins: usize) -> Result<Self, SimError> {
        for (field, value) in [("samples", samples), ("workers", workers), ("bins", bins)] {
            if value == 0 {
                return Err(SimError::InvalidConfig { field, value });
            }
        }
        Ok(Self { samples, seed, workers, bins })
    }

    /// Config with [`DEFAULT_BINS`] histogram bins.
    pub fn with_defaults(samples: usize, seed: u64, workers: usize) -> Result<Self, SimError> {
        Self::new(samples, seed, workers, DEFAULT_BINS)
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn with_workers(self, workers: usize) -> Result<Self, SimError> {
        Self::new(self.samples, self.seed, workers, self.bins)
    }
}

/// Runs `draw` once per sample, chunk-parallel on `cfg.workers` threads.
pub fn generate<T, F>(cfg: &SimConfig, draw: F) -> Result<Vec<T>, SimError>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> T + Sync,
{
    let chunks = cfg.samples.div_ceil(CHUNK_SIZE);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| SimError::ThreadPool(e.to_string()))?;
    let parts: Vec<Vec<T>> = pool.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|k| {
                let len = CHUNK_SIZE.min(cfg.samples - k * CHUNK_SIZE);
                let mut rng = rng::chunk_rng(cfg.seed, k as u64);
                (0..len).map(|_| draw(&mut rng)).collect()
            })
            .collect()
    });
    Ok(parts.into_iter().flatten().collect())
}

/// Aggregate interference `min(p Σ αᵢ, q)`.
pub fn aggregate_interference<T: Scalar>(gain_sum: T, params: &ScenarioParams<T>) -> T {
    (params.p() * gain_sum).min(params.q())
}

/// Interference of one SU under the peak power rule: `α · min(p, q/α)`.
pub fn power_rule_interference<T: Scalar>(gain: T, params: &ScenarioParams<T>) -> T {
    gain * su_transmit_power(gain, params)
}

fn draw_gain_sum<T: Scalar>(params: &ScenarioParams<T>, rng: &mut ChaCha8Rng) -> T {
    (0..params.n_su()).fold(T::zero(), |acc, _| acc + draw_channel_gain(params.lambda2(), rng))
}

/// Raw noise-plus-interference samples `σ² + min(p Σ αᵢ, q)` in stream order.
pub fn ni_samples<T: Scalar>(params: &ScenarioParams<T>, cfg: &SimConfig) -> Result<Vec<T>, SimError> {
    generate(cfg, |rng| params.sigma2() + aggregate_interference(draw_gain_sum(params, rng), params))
}

/// Single-SU samples through the per-SU power rule instead of the
/// aggregate cap; consumes the same uniform stream as [`ni_samples`].
pub fn ni_samples_power_rule<T: Scalar>(
    params: &ScenarioParams<T>,
    cfg: &SimConfig,
) -> Result<Vec<T>, SimError> {
    if params.n_su() != 1 {
        return Err(SimError::RequiresSingleSu("ni_samples_power_rule"));
    }
    generate(cfg, |rng| {
        let alpha = draw_channel_gain(params.lambda2(), rng);
        params.sigma2() + power_rule_interference(alpha, params)
    })
}

/// Raw SINR samples `γ p / (σ² + I)` in stream order. Each sample draws the
/// SU gains first, then `γ`.
pub fn sinr_samples<T: Scalar>(params: &ScenarioParams<T>, cfg: &SimConfig) -> Result<Vec<T>, SimError> {
    generate(cfg, |rng| {
        let interference = aggregate_interference(draw_gain_sum(params, rng), params);
        let gamma = draw_channel_gain(params.lambda1(), rng);
        gamma * params.p() / (params.sigma2() + interference)
    })
}

/// Empirical noise-plus-interference law with the cap atom tracked.
pub fn simulate_ni<T: Scalar>(
    params: &ScenarioParams<T>,
    cfg: &SimConfig,
) -> Result<EmpiricalDistribution<T>, SimError> {
    let samples = ni_samples(params, cfg)?;
    EmpiricalDistribution::new(samples, params.sigma2(), &[params.cap_location()], cfg.bins)
}

pub fn simulate_sinr<T: Scalar>(
    params: &ScenarioParams<T>,
    cfg: &SimConfig,
) -> Result<EmpiricalDistribution<T>, SimError> {
    let samples = sinr_samples(params, cfg)?;
    EmpiricalDistribution::new(samples, T::zero(), &[], cfg.bins)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: f64, q: f64, n: u32) -> ScenarioParams<f64> {
        ScenarioParams::unit_rate(p, q, n).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(SimConfig::new(0, 1, 1, 10).is_err());
        assert!(SimConfig::new(10, 1, 0, 10).is_err());
        assert!(SimConfig::new(10, 1, 1, 0).is_err());
        assert_eq!(SimConfig::with_defaults(10, 1, 1).unwrap().bins(), DEFAULT_BINS);
    }

    #[test]
    fn sample_stream_independent_of_workers() {
        let s = params(4.0, 2.0, 2);
        let n = 3 * CHUNK_SIZE + 123;
        let base = sinr_samples(&s, &SimConfig::with_defaults(n, 99, 1).unwrap()).unwrap();
        assert_eq!(base.len(), n);
        for w in [2, 4, 16] {
            let other = sinr_samples(&s, &SimConfig::with_defaults(n, 99, w).unwrap()).unwrap();
            assert!(base.iter().zip(&other).all(|(a, b)| a.to_bits() == b.to_bits()), "workers={w}");
        }
        let reseeded = sinr_samples(&s, &SimConfig::with_defaults(n, 100, 4).unwrap()).unwrap();
        assert_ne!(base, reseeded);
    }

    #[test]
    fn ni_samples_inside_support() {
        let s = params(4.0, 2.0, 3);
        let v = ni_samples(&s, &SimConfig::with_defaults(50_000, 5, 4).unwrap()).unwrap();
        assert!(v.iter().all(|&y| (1.0..=3.0).contains(&y)));
        assert!(v.contains(&3.0));
    }

    #[test]
    fn power_rule_matches_aggregate_for_one_su() {
        let s = ScenarioParams::<f64>::new(4.0, 2.0, 1.3, 0.8, 1.7, 1).unwrap();
        let cfg = SimConfig::with_defaults(200_000, 11, 4).unwrap();
        let a = ni_samples(&s, &cfg).unwrap();
        let b = ni_samples_power_rule(&s, &cfg).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() <= 1e-10);
        }
        let multi = params(4.0, 2.0, 2);
        assert!(matches!(ni_samples_power_rule(&multi, &cfg), Err(SimError::RequiresSingleSu(_))));
    }

    #[test]
    fn sinr_positive() {
        let s = params(2.0, 4.0, 1);
        let v = sinr_samples(&s, &SimConfig::with_defaults(20_000, 3, 2).unwrap()).unwrap();
        assert!(v.iter().all(|&z| z > 0.0 && z.is_finite()));
    }
}
