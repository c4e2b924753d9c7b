//! One-parameter sweeps of the scalar metrics.

use cri_core::analytic::linspace;
use cri_core::Params;

use crate::config::ConfigError;
use crate::error::CliError;
use crate::formulas::Formulas;
use crate::output::{CsvBuilder, CsvFile};

/// Inclusive grid from `from` to `to`; empty or reversed ranges are
/// configuration errors.
pub fn sweep_grid(from: f64, to: f64, steps: usize) -> Result<Vec<f64>, ConfigError> {
    let bad = |message: String| ConfigError::Field { field: "sweep".into(), message };
    if steps == 0 {
        return Err(bad("--steps must be >= 1".into()));
    }
    if !(from.is_finite() && to.is_finite()) || from > to || (from == to && steps > 1) {
        return Err(bad(format!("empty sweep range [{from}, {to}] with {steps} steps")));
    }
    if from <= 0.0 {
        return Err(bad(format!("q must be > 0, sweep starts at {from}")));
    }
    Ok(linspace(from, to, steps))
}

/// Mean SINR, outage at `psi` and mean capacity over a `q` sweep.
pub fn sweep_q(f: &Formulas, base: &Params, grid: &[f64], psi: f64) -> Result<CsvFile, CliError> {
    let mut b = CsvBuilder::new("sweep_q.csv", &["x", "mean_sinr", "outage", "mean_capacity"]);
    for &q in grid {
        let p = base.with_q(q)?;
        b.numbers(&[q, f.mean_sinr_any(&p)?, f.outage_any(&p, psi)?, f.mean_capacity_any(&p)?]);
    }
    Ok(b.finish())
}
