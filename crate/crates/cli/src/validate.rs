//! The validation grid: every closed form against quadrature and against
//! the simulator, plus the qualitative figure properties.

use std::fmt::Write as _;

use cri_core::analytic::{self, linspace, sinr_cdf, AnalyticError};
use cri_core::mixed::Cdf;
use cri_core::montecarlo::{
    self, capacity_transform, ks_statistic, mean_estimate, outage_estimate, rng::uniform_open0, simulate_ni,
    simulate_sinr, SimConfig,
};
use cri_core::oracle::{self, functional_mean, Weight};
use cri_core::special::{exp_integral_gamma0, upper_incomplete_gamma};
use cri_core::Params;
use serde::Serialize;

use crate::config::{scenario_id, Config};
use crate::error::CliError;
use crate::formulas::Formulas;

/// Asymptotic 99.9% quantile of the Kolmogorov distribution.
pub const KOLMOGOROV_999: f64 = 1.9495;
pub const ANALYTIC_TOL: f64 = 1e-8;
pub const REDUCTION_TOL: f64 = 1e-10;
const ORACLE_QUAD_TOL: f64 = 1e-12;

/// KS gate: 0.005, widened to the 99.9% Kolmogorov bound below 10⁶ samples.
pub fn ks_tolerance(n: usize) -> f64 {
    0.005f64.max(KOLMOGOROV_999 / (n as f64).sqrt())
}

/// Outage gate: ±0.003, widened to three binomial standard errors if larger.
pub fn outage_tolerance(prob: f64, n: usize) -> f64 {
    0.003f64.max(3.0 * (prob * (1.0 - prob) / n as f64).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub criterion: u8,
    pub metric: String,
    pub scenario: String,
    pub theory: Option<f64>,
    pub oracle: Option<f64>,
    pub simulation: Option<f64>,
    pub simulation_se: Option<f64>,
    pub tolerance: f64,
    pub discrepancy: f64,
    pub pass: bool,
    pub note: Option<String>,
}

impl Row {
    fn new(criterion: u8, metric: &str, scenario: &str, tolerance: f64, discrepancy: f64) -> Self {
        Self {
            criterion,
            metric: metric.to_string(),
            scenario: scenario.to_string(),
            theory: None,
            oracle: None,
            simulation: None,
            simulation_se: None,
            tolerance,
            discrepancy,
            pass: discrepancy.is_finite() && discrepancy <= tolerance,
            note: None,
        }
    }

    fn vs_oracle(
        criterion: u8,
        metric: &str,
        scenario: &str,
        theory: f64,
        oracle: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            theory: Some(theory),
            oracle: Some(oracle),
            ..Self::new(criterion, metric, scenario, tolerance, (theory - oracle).abs())
        }
    }

    fn vs_simulation(
        criterion: u8,
        metric: &str,
        scenario: &str,
        theory: f64,
        sim: f64,
        se: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            theory: Some(theory),
            simulation: Some(sim),
            simulation_se: Some(se),
            ..Self::new(criterion, metric, scenario, tolerance, (theory - sim).abs())
        }
    }

    fn failed(
        criterion: u8,
        metric: &str,
        scenario: &str,
        tolerance: f64,
        err: &dyn std::fmt::Display,
    ) -> Self {
        Self { note: Some(err.to_string()), ..Self::new(criterion, metric, scenario, tolerance, f64::NAN) }
    }

    fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.to_string());
        self
    }
}

/// Turns a computation into a row, recording errors as failed rows.
fn guarded(
    criterion: u8,
    metric: &str,
    scenario: &str,
    tolerance: f64,
    f: impl FnOnce() -> Result<Row, CliError>,
) -> Row {
    f().unwrap_or_else(|e| Row::failed(criterion, metric, scenario, tolerance, &e))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub total: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub rows: Vec<Row>,
    pub summary: Summary,
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.6e}"))
}

impl ValidationReport {
    fn from_rows(mut rows: Vec<Row>) -> Self {
        rows.sort_by_key(|r| r.criterion);
        let passed = rows.iter().filter(|r| r.pass).count();
        let summary = Summary { passed, total: rows.len() };
        Self { rows, summary }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.passed == self.summary.total
    }

    pub fn rows_for(&self, criterion: u8) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(move |r| r.criterion == criterion)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is plain data")
    }

    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:>2}  {:<34} {:<22} {:>13} {:>13} {:>27} {:>9} {:>10}  status",
            "#", "metric", "scenario", "theory", "oracle", "simulation ± se", "tol", "discrep"
        );
        for r in &self.rows {
            let sim = match (r.simulation, r.simulation_se) {
                (Some(v), Some(se)) => format!("{v:.6e} ± {se:.1e}"),
                _ => "-".to_string(),
            };
            let _ = writeln!(
                s,
                "{:>2}  {:<34} {:<22} {:>13} {:>13} {:>27} {:>9.1e} {:>10.3e}  {}",
                r.criterion,
                r.metric,
                r.scenario,
                opt(r.theory),
                opt(r.oracle),
                sim,
                r.tolerance,
                r.discrepancy,
                if r.pass { "PASS" } else { "FAIL" }
            );
            if let (false, Some(note)) = (r.pass, &r.note) {
                let _ = writeln!(s, "    note: {note}");
            }
        }
        let _ = writeln!(s, "{} / {} rows passed", self.summary.passed, self.summary.total);
        s
    }
}

/// What to check. Rates apply to every scenario built from `pairs`.
#[derive(Debug, Clone)]
pub struct Grid {
    pub sigma2: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    /// `(p, q)` pairs for normalization, ratio and reduction checks.
    pub pairs: Vec<(f64, f64)>,
    pub ns: Vec<u32>,
    /// Pairs for the closed-form metric checks (unit rates only).
    pub metric_pairs: Vec<(f64, f64)>,
    pub psi_checks: Vec<f64>,
    /// Pairs for the KS and atom-frequency checks.
    pub mc_pairs: Vec<(f64, f64)>,
    /// Extra scenarios with non-unit rates for the ratio and reduction checks.
    pub general: Vec<Params>,
    pub z_grid: Vec<f64>,
    pub psi_grid: Vec<f64>,
    pub q_sweep: Vec<f64>,
    pub sim: SimConfig,
    pub determinism_samples: usize,
    pub determinism_workers: Vec<usize>,
    pub bound_draws: usize,
}

const QUICK_SAMPLES: usize = 100_000;

impl Grid {
    pub fn acceptance(quick: bool) -> Self {
        let values = [0.5, 1.0, 2.0, 4.0];
        let pairs = values.iter().flat_map(|&p| values.iter().map(move |&q| (p, q))).collect();
        let samples = if quick { QUICK_SAMPLES } else { 1_000_000 };
        Self {
            sigma2: 1.0,
            lambda1: 1.0,
            lambda2: 1.0,
            pairs,
            ns: vec![1, 2, 3],
            metric_pairs: vec![(2.0, 4.0), (4.0, 2.0), (2.0, 2.0), (4.0, 4.0)],
            psi_checks: vec![0.5, 1.0, 2.0, 4.0],
            mc_pairs: vec![(4.0, 2.0), (2.0, 4.0)],
            general: vec![Params::new(3.0, 1.5, 0.8, 1.7, 0.6, 1).expect("valid literal")],
            z_grid: linspace(0.0, 50.0, if quick { 51 } else { 201 }),
            psi_grid: linspace(0.0, 10.0, 101),
            q_sweep: linspace(0.2, 10.0, 50),
            sim: SimConfig::with_defaults(samples, 1, 4).expect("valid literal"),
            determinism_samples: if quick { 1 << 17 } else { 3 * (1 << 16) + 1 },
            determinism_workers: vec![1, 4, 16],
            bound_draws: 1000,
        }
    }

    /// Grid over the scenarios of a config file.
    pub fn from_config(cfg: &Config, quick: bool) -> Self {
        let mut grid = Self::acceptance(quick);
        let pairs: Vec<(f64, f64)> =
            cfg.p.values().iter().flat_map(|&p| cfg.q.values().into_iter().map(move |q| (p, q))).collect();
        grid.sigma2 = cfg.sigma2;
        grid.lambda1 = cfg.lambda1;
        grid.lambda2 = cfg.lambda2;
        grid.pairs = pairs.clone();
        grid.metric_pairs = pairs.clone();
        grid.mc_pairs = pairs;
        grid.ns = cfg.n_su.values();
        grid.general = Vec::new();
        grid.psi_grid = cfg.psi_grid();
        grid.q_sweep = cfg.q_grid();
        let samples = if quick { cfg.samples.min(QUICK_SAMPLES) } else { cfg.samples };
        grid.sim = SimConfig::new(samples, cfg.seed, cfg.workers, cfg.bins).expect("validated at load");
        grid
    }

    fn is_unit_rate(&self) -> bool {
        self.sigma2 == 1.0 && self.lambda1 == 1.0 && self.lambda2 == 1.0
    }

    fn params(&self, (p, q): (f64, f64), n: u32) -> Result<Params, AnalyticError> {
        Params::new(p, q, self.sigma2, self.lambda1, self.lambda2, n)
    }

    fn ratio_bases(&self) -> Result<Vec<Params>, AnalyticError> {
        let mut v: Vec<Params> = self.pairs.iter().map(|&pq| self.params(pq, 1)).collect::<Result<_, _>>()?;
        v.extend(self.general.iter().copied());
        Ok(v)
    }

    /// Number of rows a report over this grid contains.
    pub fn expected_rows(&self) -> usize {
        let (pairs, ns) = (self.pairs.len(), self.ns.len());
        let bases = pairs + self.general.len();
        let metric = if self.is_unit_rate() { self.metric_pairs.len() } else { 0 };
        let unit_bases = if self.is_unit_rate() { pairs } else { 0 }
            + self.general.iter().filter(|p| p.is_unit_rate()).count();
        let c1 = pairs * ns * 2;
        let c2 = bases * (1 + ns);
        let c3 = 2 * metric + 1;
        let c4 = 2 * metric * self.psi_checks.len() + 1;
        let c5 = 2 * metric + 1;
        let c6 = self.mc_pairs.len() * ns * 3;
        let c7 = 3 * bases + unit_bases;
        c1 + c2 + c3 + c4 + c5 + c6 + c7 + 1 + 2
    }
}

fn criterion1(f: &Formulas, g: &Grid, rows: &mut Vec<Row>) {
    for &pq in &g.pairs {
        for &n in &g.ns {
            let id = format!("p{}_q{}_n{n}", pq.0, pq.1);
            rows.push(guarded(1, "normalization: noise+interference", &id, ANALYTIC_TOL, || {
                let law = (f.ni_law)(&g.params(pq, n)?)?;
                Ok(Row::vs_oracle(
                    1,
                    "normalization: noise+interference",
                    &id,
                    1.0,
                    law.total_mass(ORACLE_QUAD_TOL)?,
                    ANALYTIC_TOL,
                ))
            }));
            rows.push(guarded(1, "normalization: sinr density", &id, ANALYTIC_TOL, || {
                let d = f.sinr_pdf(&g.params(pq, n)?)?;
                let mass = functional_mean(&d, Weight::Unit, ORACLE_QUAD_TOL)?.value;
                Ok(Row::vs_oracle(1, "normalization: sinr density", &id, 1.0, mass, ANALYTIC_TOL))
            }));
        }
    }
}

fn sup_ratio_error(pdf: &cri_core::Pdf, params: &Params, z_grid: &[f64]) -> Result<f64, CliError> {
    let law = analytic::ni_law_multi(params)?;
    let mut sup = 0.0f64;
    for &z in z_grid {
        let r = oracle::ratio_density(params.lambda1(), params.p(), &law, z)?;
        sup = sup.max((pdf.eval(z) - r).abs());
    }
    Ok(sup)
}

fn criterion2(f: &Formulas, g: &Grid, rows: &mut Vec<Row>) {
    let bases = match g.ratio_bases() {
        Ok(b) => b,
        Err(e) => {
            rows.push(Row::failed(2, "ratio oracle", "grid", ANALYTIC_TOL, &e));
            return;
        }
    };
    for base in bases {
        let id = scenario_id(&base);
        rows.push(guarded(2, "sup |single-SU pdf − ratio|", &id, ANALYTIC_TOL, || {
            let sup = sup_ratio_error(&(f.sinr_pdf_single)(&base)?, &base, &g.z_grid)?;
            Ok(Row::new(2, "sup |single-SU pdf − ratio|", &id, ANALYTIC_TOL, sup))
        }));
        for &n in &g.ns {
            let params = match base.with_n_su(n) {
                Ok(p) => p,
                Err(e) => {
                    rows.push(Row::failed(2, "sup |multi-SU pdf − ratio|", &id, ANALYTIC_TOL, &e));
                    continue;
                }
            };
            let id = scenario_id(&params);
            rows.push(guarded(2, "sup |multi-SU pdf − ratio|", &id, ANALYTIC_TOL, || {
                let sup = sup_ratio_error(&(f.sinr_pdf_multi)(&params)?, &params, &g.z_grid)?;
                Ok(Row::new(2, "sup |multi-SU pdf − ratio|", &id, ANALYTIC_TOL, sup))
            }));
        }
    }
}

/// Closed-form metrics against quadrature and simulation (criteria 3–5).
fn metric_rows(f: &Formulas, g: &Grid, rows: &mut Vec<Row>) {
    if !g.is_unit_rate() {
        return;
    }
    for &pq in &g.metric_pairs {
        let id = format!("p{}_q{}_n1", pq.0, pq.1);
        let params = match g.params(pq, 1) {
            Ok(p) => p,
            Err(e) => {
                rows.push(Row::failed(3, "metrics", &id, ANALYTIC_TOL, &e));
                continue;
            }
        };
        let density = f.sinr_pdf(&params);
        rows.push(guarded(3, "mean sinr: closed vs quadrature", &id, ANALYTIC_TOL, || {
            let d = density.clone()?;
            let q = functional_mean(&d, Weight::Identity, ORACLE_QUAD_TOL)?.value;
            Ok(Row::vs_oracle(
                3,
                "mean sinr: closed vs quadrature",
                &id,
                (f.mean_sinr)(&params)?,
                q,
                ANALYTIC_TOL,
            ))
        }));
        for &psi in &g.psi_checks {
            let metric = format!("outage ψ={psi}: closed vs quadrature");
            rows.push(guarded(4, &metric, &id, ANALYTIC_TOL, || {
                let d = density.clone()?;
                let q = oracle::integrate_density(&d, 0.0, psi.min(d.cutoff()), ORACLE_QUAD_TOL)?.value;
                Ok(Row::vs_oracle(4, &metric, &id, (f.outage)(&params, psi)?, q, ANALYTIC_TOL))
            }));
        }
        rows.push(guarded(5, "mean capacity: closed vs quadrature", &id, ANALYTIC_TOL, || {
            let d = density.clone()?;
            let q = functional_mean(&d, Weight::Log1p, ORACLE_QUAD_TOL)?.value;
            let row = Row::vs_oracle(
                5,
                "mean capacity: closed vs quadrature",
                &id,
                (f.mean_capacity)(&params)?,
                q,
                ANALYTIC_TOL,
            );
            Ok(if row.pass {
                row
            } else {
                row.with_note("closed form disagrees; the quadrature value is authoritative")
            })
        }));

        match simulate_sinr(&params, &g.sim) {
            Ok(emp) => {
                let n = emp.n();
                rows.push(guarded(3, "mean sinr: closed vs simulation", &id, f64::NAN, || {
                    let m = mean_estimate(&emp)?;
                    let tol = 3.0 * m.standard_error;
                    Ok(Row::vs_simulation(
                        3,
                        "mean sinr: closed vs simulation",
                        &id,
                        (f.mean_sinr)(&params)?,
                        m.mean,
                        m.standard_error,
                        tol,
                    ))
                }));
                for &psi in &g.psi_checks {
                    let metric = format!("outage ψ={psi}: closed vs simulation");
                    rows.push(guarded(4, &metric, &id, 0.003, || {
                        let theory = (f.outage)(&params, psi)?;
                        let sim = outage_estimate(&emp, psi)?;
                        let se = (sim * (1.0 - sim) / n as f64).sqrt();
                        Ok(Row::vs_simulation(4, &metric, &id, theory, sim, se, outage_tolerance(theory, n)))
                    }));
                }
                rows.push(guarded(5, "mean capacity: closed vs simulation", &id, f64::NAN, || {
                    let m = mean_estimate(&capacity_transform(&emp)?)?;
                    let tol = 3.0 * m.standard_error;
                    Ok(Row::vs_simulation(
                        5,
                        "mean capacity: closed vs simulation",
                        &id,
                        (f.mean_capacity)(&params)?,
                        m.mean,
                        m.standard_error,
                        tol,
                    ))
                }));
            }
            Err(e) => {
                rows.push(Row::failed(3, "mean sinr: closed vs simulation", &id, f64::NAN, &e));
                for &psi in &g.psi_checks {
                    rows.push(Row::failed(
                        4,
                        &format!("outage ψ={psi}: closed vs simulation"),
                        &id,
                        0.003,
                        &e,
                    ));
                }
                rows.push(Row::failed(5, "mean capacity: closed vs simulation", &id, f64::NAN, &e));
            }
        }
    }
}

fn unit(p: f64, q: f64) -> Result<Params, CliError> {
    Ok(Params::unit_rate(p, q, 1)?)
}

/// Qualitative properties of the mean-SINR, outage and capacity figures.
fn figure_rows(f: &Formulas, g: &Grid, rows: &mut Vec<Row>) {
    rows.push(guarded(3, "μ(p=4,q) > μ(p=2,q) on q sweep", "unit rates", 0.0, || {
        let mut violations = 0usize;
        for &q in &g.q_sweep {
            if (f.mean_sinr)(&unit(4.0, q)?)? <= (f.mean_sinr)(&unit(2.0, q)?)? {
                violations += 1;
            }
        }
        Ok(Row::new(3, "μ(p=4,q) > μ(p=2,q) on q sweep", "unit rates", 0.0, violations as f64))
    }));
    rows.push(guarded(4, "outage(2,4) ≥ outage(4,2) on ψ grid", "unit rates", 0.0, || {
        let (a, b) = (unit(2.0, 4.0)?, unit(4.0, 2.0)?);
        let mut violations = 0usize;
        for &psi in &g.psi_grid {
            if (f.outage)(&a, psi)? < (f.outage)(&b, psi)? {
                violations += 1;
            }
        }
        Ok(Row::new(4, "outage(2,4) ≥ outage(4,2) on ψ grid", "unit rates", 0.0, violations as f64))
    }));
    rows.push(guarded(5, "capacity pdf (2,4)−(4,2) sign change", "unit rates", 0.0, || {
        let (a, b) = (f.capacity_pdf(&unit(2.0, 4.0)?)?, f.capacity_pdf(&unit(4.0, 2.0)?)?);
        let diffs: Vec<f64> = linspace(0.01, 3.99, 400).iter().map(|&x| a.eval(x) - b.eval(x)).collect();
        let changes = diffs.windows(2).filter(|w| w[0] * w[1] < 0.0).count();
        let mut row = Row::new(
            5,
            "capacity pdf (2,4)−(4,2) sign change",
            "unit rates",
            0.0,
            if changes > 0 { 0.0 } else { 1.0 },
        );
        row.theory = Some(changes as f64);
        Ok(row)
    }));
}

fn criterion6(f: &Formulas, g: &Grid, rows: &mut Vec<Row>) {
    for &pq in &g.mc_pairs {
        for &n in &g.ns {
            let id = format!("p{}_q{}_n{n}", pq.0, pq.1);
            let tol = ks_tolerance(g.sim.samples());
            let ni = (|| -> Result<_, CliError> {
                let params = g.params(pq, n)?;
                Ok((params, (f.ni_law)(&params)?, simulate_ni(&params, &g.sim)?))
            })();
            match ni {
                Ok((params, law, emp)) => {
                    let d = ks_statistic(&emp, &law);
                    rows.push(Row {
                        simulation: Some(d),
                        ..Row::new(6, "KS noise+interference", &id, tol, d)
                    });
                    let cap = params.cap_location();
                    let mass = law.atom_mass_at(cap);
                    let freq = emp.atom_frequency(cap).unwrap_or(f64::NAN);
                    let se = (mass * (1.0 - mass) / emp.n() as f64).sqrt();
                    rows.push(Row::vs_simulation(6, "atom frequency at σ²+q", &id, mass, freq, se, 3.0 * se));
                }
                Err(e) => {
                    rows.push(Row::failed(6, "KS noise+interference", &id, tol, &e));
                    rows.push(Row::failed(6, "atom frequency at σ²+q", &id, f64::NAN, &e));
                }
            }
            rows.push(guarded(6, "KS sinr", &id, tol, || {
                let params = g.params(pq, n)?;
                let emp = simulate_sinr(&params, &g.sim)?;
                let d = ks_statistic(&emp, &sinr_cdf(&params)?);
                Ok(Row { simulation: Some(d), ..Row::new(6, "KS sinr", &id, tol, d) })
            }));
        }
    }
}

fn criterion7(f: &Formulas, g: &Grid, rows: &mut Vec<Row>) {
    let bases = match g.ratio_bases() {
        Ok(b) => b,
        Err(e) => {
            rows.push(Row::failed(7, "reduction", "grid", REDUCTION_TOL, &e));
            return;
        }
    };
    for base in bases {
        let id = scenario_id(&base);
        rows.push(guarded(7, "n=1 law vs single-SU law", &id, REDUCTION_TOL, || {
            let (a, b) = (analytic::ni_law_single(&base)?, (f.ni_law)(&base)?);
            let cap = base.cap_location();
            let mut sup = (a.atom_mass_at(cap) - b.atom_mass_at(cap)).abs();
            for x in linspace(0.0, cap + 1.0, 1001) {
                sup = sup
                    .max((a.cdf(x) - b.cdf(x)).abs())
                    .max((a.continuous_pdf_at(x) - b.continuous_pdf_at(x)).abs());
            }
            Ok(Row::new(7, "n=1 law vs single-SU law", &id, REDUCTION_TOL, sup))
        }));
        rows.push(guarded(7, "n=1 sinr pdf vs single-SU pdf", &id, REDUCTION_TOL, || {
            let (a, b) = ((f.sinr_pdf_single)(&base)?, (f.sinr_pdf_multi)(&base)?);
            let sup = g.z_grid.iter().fold(0.0f64, |m, &z| m.max((a.eval(z) - b.eval(z)).abs()));
            Ok(Row::new(7, "n=1 sinr pdf vs single-SU pdf", &id, REDUCTION_TOL, sup))
        }));
        if base.is_unit_rate() {
            rows.push(guarded(7, "unit-rate pdf vs general pdf", &id, REDUCTION_TOL, || {
                let (a, b) = (analytic::sinr_pdf_single_unit(&base)?, (f.sinr_pdf_single)(&base)?);
                let sup = g.z_grid.iter().fold(0.0f64, |m, &z| m.max((a.eval(z) - b.eval(z)).abs()));
                Ok(Row::new(7, "unit-rate pdf vs general pdf", &id, REDUCTION_TOL, sup))
            }));
        }
        rows.push(guarded(7, "aggregate cap vs power-rule samples", &id, REDUCTION_TOL, || {
            let a = montecarlo::ni_samples(&base, &g.sim)?;
            let b = montecarlo::ni_samples_power_rule(&base, &g.sim)?;
            let sup = a.iter().zip(&b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
            Ok(Row::new(7, "aggregate cap vs power-rule samples", &id, REDUCTION_TOL, sup))
        }));
    }
}

fn criterion8(g: &Grid, rows: &mut Vec<Row>) {
    let id = "p2_q4_n1..3";
    rows.push(guarded(8, "simulate output identical across workers", id, 0.0, || {
        let mut outputs = Vec::new();
        for &w in &g.determinism_workers {
            let text = format!(
                r#"{{"p": 2, "q": 4, "n_su": [1, 2, 3], "samples": {}, "seed": {}, "workers": {w}, "figure": 3}}"#,
                g.determinism_samples,
                g.sim.seed()
            );
            outputs.push(crate::simulate::simulate(&Config::from_json(&text, "determinism grid")?)?);
        }
        let mismatches = outputs.iter().skip(1).filter(|o| **o != outputs[0]).count();
        Ok(Row::new(8, "simulate output identical across workers", id, 0.0, mismatches as f64))
    }));
}

fn criterion9(g: &Grid, rows: &mut Vec<Row>) {
    rows.push(guarded(
        9,
        "Γ(a+1,x) = aΓ(a,x) + xᵃe⁻ˣ (max rel)",
        "a∈1..10, x∈[0.01,50]",
        1e-10,
        || {
            let xs = [0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 35.0, 50.0];
            let mut worst = 0.0f64;
            for a in 1..=10 {
                let a = f64::from(a);
                for &x in &xs {
                    let lhs = upper_incomplete_gamma(a + 1.0, x).map_err(AnalyticError::from)?;
                    let rhs = a * upper_incomplete_gamma(a, x).map_err(AnalyticError::from)?
                        + x.powf(a) * (-x).exp();
                    worst = worst.max(((lhs - rhs) / rhs).abs());
                }
            }
            Ok(Row::new(9, "Γ(a+1,x) = aΓ(a,x) + xᵃe⁻ˣ (max rel)", "a∈1..10, x∈[0.01,50]", 1e-10, worst))
        },
    ));
    let scenario = format!("{} log-uniform x ∈ [1e-6, 1e3]", g.bound_draws);
    rows.push(guarded(9, "E₁ two-sided bound violations", &scenario, 0.0, || {
        let cfg = SimConfig::new(g.bound_draws, g.sim.seed(), 1, 1)?;
        let xs = montecarlo::generate(&cfg, |rng| 10f64.powf(-6.0 + 9.0 * uniform_open0(rng)))?;
        let mut violations = 0usize;
        for x in xs {
            let e1 = exp_integral_gamma0(x).map_err(AnalyticError::from)?;
            let upper = (-x).exp() * (1.0 + 1.0 / x).ln();
            let lower = 0.5 * (-x).exp() * (1.0 + 2.0 / x).ln();
            if e1 > upper * (1.0 + 1e-12) || e1 < lower * (1.0 - 1e-12) {
                violations += 1;
            }
        }
        Ok(Row::new(9, "E₁ two-sided bound violations", &scenario, 0.0, violations as f64))
    }));
}

/// Which criteria to evaluate; all by default.
pub fn run_selected(f: &Formulas, g: &Grid, criteria: &[u8]) -> ValidationReport {
    let mut rows = Vec::new();
    let want = |c: u8| criteria.contains(&c);
    if want(1) {
        criterion1(f, g, &mut rows);
    }
    if want(2) {
        criterion2(f, g, &mut rows);
    }
    if want(3) || want(4) || want(5) {
        metric_rows(f, g, &mut rows);
        figure_rows(f, g, &mut rows);
        rows.retain(|r| !matches!(r.criterion, 3..=5) || want(r.criterion));
    }
    if want(6) {
        criterion6(f, g, &mut rows);
    }
    if want(7) {
        criterion7(f, g, &mut rows);
    }
    if want(8) {
        criterion8(g, &mut rows);
    }
    if want(9) {
        criterion9(g, &mut rows);
    }
    ValidationReport::from_rows(rows)
}

pub const ALL_CRITERIA: [u8; 9] = [1, 2, 3, 4, 5, 6, 7, 8, 9];

pub fn run(f: &Formulas, g: &Grid) -> ValidationReport {
    run_selected(f, g, &ALL_CRITERIA)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_grid() -> Grid {
        let mut g = Grid::acceptance(true);
        g.pairs = vec![(4.0, 2.0), (0.5, 1.0)];
        g.z_grid = linspace(0.0, 50.0, 11);
        g.q_sweep = linspace(0.2, 10.0, 10);
        g.sim = SimConfig::with_defaults(40_000, 3, 2).unwrap();
        g.determinism_samples = 70_000;
        g
    }

    #[test]
    fn row_count_matches_grid() {
        let g = small_grid();
        let report = run(&Formulas::shipped(), &g);
        assert_eq!(report.rows.len(), g.expected_rows());
        assert_eq!(report.summary.total, g.expected_rows());
        // 3σ gates at 4·10⁴ samples are left to the full-size acceptance run
        let failed: Vec<&Row> = report.rows.iter().filter(|r| !r.pass && r.simulation.is_none()).collect();
        assert!(failed.is_empty(), "{}", report.table());
    }

    #[test]
    fn row_count_matches_config_grid() {
        let cfg = Config::from_json(
            r#"{"p": 3, "q": [1, 2], "n_su": [1, 2], "lambda1": 2, "samples": 20000}"#,
            "inline",
        )
        .unwrap();
        let mut g = Grid::from_config(&cfg, true);
        g.z_grid = linspace(0.0, 50.0, 11);
        g.determinism_samples = 20_000;
        let report = run(&Formulas::shipped(), &g);
        assert_eq!(report.rows.len(), g.expected_rows());
        assert!(report.all_passed(), "{}", report.table());
    }

    fn skewed_mean_sinr(p: &Params) -> Result<f64, AnalyticError> {
        Ok(analytic::mean_sinr(p)? * 1.001)
    }

    fn transposed_lambda_pdf(params: &Params) -> Result<cri_core::Pdf, AnalyticError> {
        // single-SU density with Λ = λ₁ + λ₂z in place of λ₂ + λ₁z
        let (p, q, s2) = (params.p(), params.q(), params.sigma2());
        let (l1, l2) = (params.lambda1(), params.lambda2());
        let k = l1 / p;
        let tail = oracle::ExpTail::new(k * (s2 + q), k * s2)?;
        let f = std::sync::Arc::new(move |z: f64| {
            let big_lambda = l1 + l2 * z;
            let a = (-s2 * l1 * z / p).exp() * (s2 + p / big_lambda);
            let b = (-(s2 * l1 * z + q * big_lambda) / p).exp() * ((s2 + q) * l1 * z / l2 - p / big_lambda);
            l1 * l2 / (big_lambda * p) * (a + b)
        });
        Ok(cri_core::Pdf::new("transposed", 0.0, tail, vec![], f))
    }

    #[test]
    fn perturbed_formulas_fail() {
        let mut g = small_grid();
        g.general = vec![Params::new(3.0, 1.5, 0.8, 1.7, 0.6, 1).unwrap()];
        let broken = Formulas {
            mean_sinr: skewed_mean_sinr,
            sinr_pdf_single: transposed_lambda_pdf,
            ..Formulas::shipped()
        };
        let report = run_selected(&broken, &g, &[2, 3]);
        let failing: Vec<&str> = report.rows.iter().filter(|r| !r.pass).map(|r| r.metric.as_str()).collect();
        assert!(failing.contains(&"mean sinr: closed vs quadrature"));
        assert!(failing.contains(&"sup |single-SU pdf − ratio|"));
        assert!(!report.all_passed());
        let shipped = run_selected(&Formulas::shipped(), &g, &[2, 3]);
        assert!(shipped.all_passed(), "{}", shipped.table());
    }

    #[test]
    fn tolerances() {
        assert_eq!(ks_tolerance(1_000_000), 0.005);
        assert!(ks_tolerance(100_000) > 0.006);
        assert_eq!(outage_tolerance(0.5, 1_000_000), 0.003);
    }

    #[test]
    fn report_serializes() {
        let report = ValidationReport::from_rows(vec![
            Row::new(9, "m", "s", 1.0, 0.5),
            Row::new(1, "m", "s", 1.0, 2.0),
        ]);
        assert_eq!(report.rows[0].criterion, 1);
        assert_eq!(report.summary, Summary { passed: 1, total: 2 });
        let v: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(v["summary"]["total"], 2);
        assert!(report.table().contains("FAIL"));
    }
}
