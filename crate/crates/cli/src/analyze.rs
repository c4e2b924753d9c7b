//! Theoretical curves for each figure.

use cri_core::analytic::{linspace, DensityCurve};
use cri_core::mixed::Cdf;
use cri_core::Params;

use crate::config::{sweep_id, Config, Scenario};
use crate::error::CliError;
use crate::formulas::Formulas;
use crate::output::{CsvBuilder, CsvFile};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    NiPdf,
    NiCdf,
    SinrPdf,
    CapacityPdf,
    Outage,
    MeanSinrVsQ,
    MeanCapacityVsQ,
}

impl CurveKind {
    pub const ALL: [CurveKind; 7] = [
        CurveKind::NiPdf,
        CurveKind::NiCdf,
        CurveKind::SinrPdf,
        CurveKind::CapacityPdf,
        CurveKind::Outage,
        CurveKind::MeanSinrVsQ,
        CurveKind::MeanCapacityVsQ,
    ];

    pub fn stem(self) -> &'static str {
        match self {
            CurveKind::NiPdf => "ni_pdf",
            CurveKind::NiCdf => "ni_cdf",
            CurveKind::SinrPdf => "sinr_pdf",
            CurveKind::CapacityPdf => "capacity_pdf",
            CurveKind::Outage => "outage",
            CurveKind::MeanSinrVsQ => "mean_sinr_vs_q",
            CurveKind::MeanCapacityVsQ => "mean_capacity_vs_q",
        }
    }

    fn is_sweep(self) -> bool {
        matches!(self, CurveKind::MeanSinrVsQ | CurveKind::MeanCapacityVsQ)
    }
}

/// Curves making up each figure; everything when no figure is selected.
pub fn curves_for(figure: Option<u8>) -> Vec<CurveKind> {
    match figure {
        Some(2) | Some(3) => vec![CurveKind::NiPdf, CurveKind::NiCdf],
        Some(4) => vec![CurveKind::SinrPdf],
        Some(5) => vec![CurveKind::MeanSinrVsQ],
        Some(6) => vec![CurveKind::Outage],
        Some(7) => vec![CurveKind::CapacityPdf],
        Some(8) => vec![CurveKind::MeanCapacityVsQ],
        _ => CurveKind::ALL.to_vec(),
    }
}

pub fn ni_grid(params: &Params) -> Vec<f64> {
    linspace(0.0, params.cap_location() + 1.0, 401)
}

pub fn sinr_grid() -> Vec<f64> {
    linspace(0.0, 10.0, 501)
}

pub fn capacity_grid() -> Vec<f64> {
    linspace(0.0, 4.0, 401)
}

fn curve_csv(name: String, curve: &DensityCurve<f64>) -> CsvFile {
    let mut b = CsvBuilder::new(name, &["x", "value"]);
    for (x, v) in curve.points() {
        b.numbers(&[x, v]);
    }
    b.finish()
}

fn ni_csv(name: String, curve: &DensityCurve<f64>, atom_location: f64, atom_mass: f64) -> CsvFile {
    let mut b = CsvBuilder::new(name, &["x", "value", "atom_location", "atom_mass"]);
    for (x, v) in curve.points() {
        b.numbers(&[x, v, atom_location, atom_mass]);
    }
    b.finish()
}

fn scenario_curve(f: &Formulas, kind: CurveKind, s: &Scenario, cfg: &Config) -> Result<CsvFile, CliError> {
    let p = &s.params;
    let name = format!("{}_{}.csv", kind.stem(), s.id);
    Ok(match kind {
        CurveKind::NiPdf | CurveKind::NiCdf => {
            let law = (f.ni_law)(p)?;
            let cap = p.cap_location();
            let curve = if kind == CurveKind::NiPdf {
                DensityCurve::tabulate(kind.stem(), ni_grid(p), |x| law.continuous_pdf_at(x))?
            } else {
                DensityCurve::tabulate(kind.stem(), ni_grid(p), |x| law.cdf(x))?
            };
            ni_csv(name, &curve, cap, law.atom_mass_at(cap))
        }
        CurveKind::SinrPdf => {
            let d = f.sinr_pdf(p)?;
            curve_csv(name, &DensityCurve::tabulate(kind.stem(), sinr_grid(), |z| d.eval(z))?)
        }
        CurveKind::CapacityPdf => {
            let d = f.capacity_pdf(p)?;
            curve_csv(name, &DensityCurve::tabulate(kind.stem(), capacity_grid(), |x| d.eval(x))?)
        }
        CurveKind::Outage => {
            let curve = DensityCurve::try_tabulate(kind.stem(), cfg.psi_grid(), |psi| f.outage_any(p, psi))?;
            curve_csv(name, &curve)
        }
        CurveKind::MeanSinrVsQ | CurveKind::MeanCapacityVsQ => unreachable!("sweeps handled per (p, n)"),
    })
}

/// One representative scenario per distinct sweep id, in config order.
pub fn sweep_bases(cfg: &Config) -> Vec<Params> {
    let mut seen: Vec<String> = Vec::new();
    let mut out = Vec::new();
    for s in cfg.scenarios() {
        let id = sweep_id(&s.params);
        if !seen.contains(&id) {
            seen.push(id);
            out.push(s.params);
        }
    }
    out
}

fn sweep_curve(f: &Formulas, kind: CurveKind, base: &Params, q_grid: &[f64]) -> Result<CsvFile, CliError> {
    let name = format!("{}_{}.csv", kind.stem(), sweep_id(base));
    let curve = DensityCurve::try_tabulate(kind.stem(), q_grid.to_vec(), |q| {
        let p = base.with_q(q)?;
        if kind == CurveKind::MeanSinrVsQ {
            f.mean_sinr_any(&p)
        } else {
            f.mean_capacity_any(&p)
        }
    })?;
    Ok(curve_csv(name, &curve))
}

pub fn analyze_with(f: &Formulas, cfg: &Config) -> Result<Vec<CsvFile>, CliError> {
    let mut files = Vec::new();
    for kind in curves_for(cfg.figure) {
        if kind.is_sweep() {
            for base in sweep_bases(cfg) {
                files.push(sweep_curve(f, kind, &base, &cfg.q_grid())?);
            }
        } else {
            for s in cfg.scenarios() {
                files.push(scenario_curve(f, kind, &s, cfg)?);
            }
        }
    }
    log::debug!("analyze produced {} curves", files.len());
    Ok(files)
}

pub fn analyze(cfg: &Config) -> Result<Vec<CsvFile>, CliError> {
    analyze_with(&Formulas::shipped(), cfg)
}
