//! Monte Carlo counterparts of the analytic curves.

use cri_core::analytic::sinr_cdf;
use cri_core::mixed::Cdf;
use cri_core::montecarlo::{
    capacity_transform, ks_statistic, mean_estimate, outage_estimate, simulate_ni, simulate_sinr, SimConfig,
};
use cri_core::{Empirical, Params};

use crate::analyze::{capacity_grid, ni_grid, sinr_grid, sweep_bases};
use crate::config::{sweep_id, Config, Scenario};
use crate::error::CliError;
use crate::output::{num, CsvBuilder, CsvFile};

const SUMMARY_HEADER: [&str; 10] = [
    "scenario",
    "law",
    "samples",
    "atom_location",
    "atom_count",
    "atom_frequency",
    "atom_mass",
    "ks",
    "mean",
    "standard_error",
];

struct Wanted {
    ni: bool,
    sinr: bool,
    outage: bool,
    capacity: bool,
    mean_sinr_sweep: bool,
    mean_capacity_sweep: bool,
}

impl Wanted {
    fn for_figure(figure: Option<u8>) -> Self {
        let all = figure.is_none();
        let is = |f: u8| figure == Some(f);
        Self {
            ni: all || is(2) || is(3),
            sinr: all || is(4) || is(6),
            outage: all || is(6),
            capacity: all || is(7),
            mean_sinr_sweep: all || is(5),
            mean_capacity_sweep: all || is(8),
        }
    }
}

fn histogram_csv(name: String, emp: &Empirical) -> CsvFile {
    let h = emp.histogram();
    let mut b = CsvBuilder::new(name, &["bin_lo", "bin_hi", "count", "density"]);
    for ((w, &c), d) in h.edges().windows(2).zip(h.counts()).zip(h.density(emp.n())) {
        b.record([num(w[0]), num(w[1]), c.to_string(), num(d)]);
    }
    b.finish()
}

fn ecdf_csv(name: String, emp: &Empirical, grid: &[f64]) -> CsvFile {
    let mut b = CsvBuilder::new(name, &["x", "value"]);
    for &x in grid {
        b.numbers(&[x, emp.ecdf(x)]);
    }
    b.finish()
}

fn summary_row<C: Cdf<f64> + ?Sized>(
    out: &mut CsvBuilder,
    id: &str,
    law: &str,
    emp: &Empirical,
    theory: &C,
    atom_mass: Option<f64>,
) -> Result<(), CliError> {
    let m = mean_estimate(emp)?;
    let ks = ks_statistic(emp, theory);
    let (loc, count, freq, mass) = match (emp.atoms().first(), atom_mass) {
        (Some(a), Some(mass)) => {
            (num(a.location), a.count.to_string(), num(a.count as f64 / emp.n() as f64), num(mass))
        }
        _ => Default::default(),
    };
    out.record([
        id.to_string(),
        law.to_string(),
        emp.n().to_string(),
        loc,
        count,
        freq,
        mass,
        num(ks),
        num(m.mean),
        num(m.standard_error),
    ]);
    Ok(())
}

fn scenario_files(
    s: &Scenario,
    cfg: &Config,
    sim: &SimConfig,
    want: &Wanted,
    summary: &mut CsvBuilder,
    files: &mut Vec<CsvFile>,
) -> Result<(), CliError> {
    let p = &s.params;
    if want.ni {
        let law = cri_core::analytic::ni_law_multi(p)?;
        let emp = simulate_ni(p, sim)?;
        files.push(histogram_csv(format!("ni_hist_{}.csv", s.id), &emp));
        files.push(ecdf_csv(format!("ni_ecdf_{}.csv", s.id), &emp, &ni_grid(p)));
        summary_row(
            summary,
            &s.id,
            "noise+interference",
            &emp,
            &law,
            Some(law.atom_mass_at(p.cap_location())),
        )?;
    }
    if want.sinr || want.capacity {
        let theory = sinr_cdf(p)?;
        let emp = simulate_sinr(p, sim)?;
        if want.sinr {
            files.push(histogram_csv(format!("sinr_hist_{}.csv", s.id), &emp));
            files.push(ecdf_csv(format!("sinr_ecdf_{}.csv", s.id), &emp, &sinr_grid()));
            summary_row(summary, &s.id, "sinr", &emp, &theory, None)?;
        }
        if want.outage {
            let mut b = CsvBuilder::new(format!("outage_mc_{}.csv", s.id), &["x", "value", "standard_error"]);
            let n = emp.n() as f64;
            for psi in cfg.psi_grid() {
                let v = outage_estimate(&emp, psi)?;
                b.numbers(&[psi, v, (v * (1.0 - v) / n).sqrt()]);
            }
            files.push(b.finish());
        }
        if want.capacity {
            let cap = capacity_transform(&emp)?;
            files.push(histogram_csv(format!("capacity_hist_{}.csv", s.id), &cap));
            files.push(ecdf_csv(format!("capacity_ecdf_{}.csv", s.id), &cap, &capacity_grid()));
            let cap_cdf = |x: f64| theory.cdf(x.exp_m1());
            summary_row(summary, &s.id, "capacity", &cap, &cap_cdf, None)?;
        }
    }
    Ok(())
}

fn sweep_file(base: &Params, cfg: &Config, sim: &SimConfig, capacity: bool) -> Result<CsvFile, CliError> {
    let stem = if capacity { "mean_capacity_vs_q_mc" } else { "mean_sinr_vs_q_mc" };
    let mut b = CsvBuilder::new(format!("{stem}_{}.csv", sweep_id(base)), &["x", "value", "standard_error"]);
    for q in cfg.q_grid() {
        let emp = simulate_sinr(&base.with_q(q)?, sim)?;
        let m = if capacity { mean_estimate(&capacity_transform(&emp)?)? } else { mean_estimate(&emp)? };
        b.numbers(&[q, m.mean, m.standard_error]);
    }
    Ok(b.finish())
}

/// All simulation outputs for `cfg`, ending with `summary.csv`.
pub fn simulate(cfg: &Config) -> Result<Vec<CsvFile>, CliError> {
    let sim = cfg.sim_config();
    let want = Wanted::for_figure(cfg.figure);
    let mut summary = CsvBuilder::new("summary.csv", &SUMMARY_HEADER);
    let mut files = Vec::new();
    for s in cfg.scenarios() {
        log::info!("simulating {} ({} samples)", s.id, sim.samples());
        scenario_files(&s, cfg, &sim, &want, &mut summary, &mut files)?;
    }
    for base in sweep_bases(cfg) {
        if want.mean_sinr_sweep {
            files.push(sweep_file(&base, cfg, &sim, false)?);
        }
        if want.mean_capacity_sweep {
            files.push(sweep_file(&base, cfg, &sim, true)?);
        }
    }
    files.push(summary.finish());
    Ok(files)
}
