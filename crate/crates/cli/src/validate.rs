//! Cross-method comparison report.

use std::f64::consts::PI;

use lmg_core::analysis::{linspace, oscillation_period, sup_distance};
use lmg_core::anti_jc::{purity_broken_hp_from_amplitudes, purity_symmetric_hp_with, HpTimeConvention};
use lmg_core::oracle::{sector_closure_residual, DickeOracle, FullSpinOracle};
use lmg_core::{purity_trace, CouplingCase, Method, ModelParams, QubitState};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{RunConfig, ORACLE_MAX_N};
use crate::error::{CliError, CliResult};

pub const TOL_CLOSED_FORM: f64 = 1e-12;
pub const TOL_ORACLE: f64 = 1e-10;
pub const TOL_SECTOR: f64 = 1e-12;
pub const TOL_HP_BROKEN: f64 = 0.02;
pub const TOL_HP_SYMMETRIC: f64 = 0.01;
pub const TOL_FREQUENCY: f64 = 0.02;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationRow {
    pub comparison: String,
    pub n: usize,
    pub lambda: f64,
    pub case: String,
    pub deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ValidationRow {
    fn new(comparison: &str, p: &ModelParams, deviation: f64, tolerance: f64) -> Self {
        Self {
            comparison: comparison.to_string(),
            n: p.n(),
            lambda: p.lambda(),
            case: p.case().to_string(),
            deviation,
            tolerance,
            pass: deviation <= tolerance,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub rows: Vec<ValidationRow>,
}

impl ValidationReport {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.pass).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn rows_for(&self, comparison: &str) -> impl Iterator<Item = &ValidationRow> {
        let c = comparison.to_string();
        self.rows.iter().filter(move |r| r.comparison == c)
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> CliResult<()> {
        let mut wtr = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(w);
        let fail = |e: csv::Error| CliError::Format(e.to_string());
        wtr.write_record(["comparison", "n", "lambda", "case", "deviation", "tolerance", "pass"])
            .map_err(fail)?;
        for r in &self.rows {
            wtr.write_record([
                r.comparison.clone(),
                r.n.to_string(),
                format!("{:?}", r.lambda),
                r.case.clone(),
                format!("{:?}", r.deviation),
                format!("{:?}", r.tolerance),
                r.pass.to_string(),
            ])
            .map_err(fail)?;
        }
        wtr.flush().map_err(|e| CliError::Format(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy)]
enum Check {
    ClosedForm(ModelParams),
    Oracle(ModelParams),
    FullSpin(ModelParams),
    SectorClosure(ModelParams),
    HpBroken(ModelParams),
    HpAmplitudes(ModelParams),
    HpSymmetric(ModelParams),
    HpConvention(ModelParams),
    BrokenFrequency(ModelParams),
}

fn params(n: usize, lambda: f64, case: CouplingCase) -> ModelParams {
    ModelParams::new(n, lambda, case).expect("suite parameters are valid")
}

const CASES: [CouplingCase; 2] = [CouplingCase::CaseI, CouplingCase::CaseII];
const HP_BROKEN_NS: [usize; 4] = [200, 400, 800, 1600];
const HP_BROKEN_LAMBDA: f64 = 0.999;

fn default_suite() -> Vec<Check> {
    let mut checks = Vec::new();
    for n in [2, 3, 5, 8, 16, 33, 64] {
        for lambda in [0.3, 0.7, 1.5, 2.0, 5.0] {
            for case in CASES {
                checks.push(Check::ClosedForm(params(n, lambda, case)));
            }
        }
    }
    for n in [2, 3, 4, 6, 8, 12, 16, 24, 32] {
        for lambda in [0.3, 0.9, 1.1, 2.0, 5.0] {
            for case in CASES {
                checks.push(Check::Oracle(params(n, lambda, case)));
            }
        }
    }
    for n in [2, 3, 4] {
        for lambda in [0.3, 2.0] {
            for case in CASES {
                checks.push(Check::FullSpin(params(n, lambda, case)));
            }
        }
    }
    for n in [2, 4, 6] {
        checks.push(Check::SectorClosure(params(n, 2.0, CouplingCase::CaseI)));
    }
    for n in HP_BROKEN_NS {
        checks.push(Check::HpBroken(params(n, HP_BROKEN_LAMBDA, CouplingCase::CaseII)));
    }
    for lambda in [0.5, HP_BROKEN_LAMBDA] {
        checks.push(Check::HpAmplitudes(params(1600, lambda, CouplingCase::CaseII)));
    }
    for lambda in [1.5, 2.0, 5.0] {
        checks.push(Check::HpSymmetric(params(5000, lambda, CouplingCase::CaseI)));
    }
    checks.push(Check::HpConvention(params(5000, 2.0, CouplingCase::CaseI)));
    checks.push(Check::BrokenFrequency(params(1600, HP_BROKEN_LAMBDA, CouplingCase::CaseII)));
    checks
}

fn trace(p: &ModelParams, times: &[f64], method: Method) -> CliResult<Vec<f64>> {
    Ok(purity_trace(p, &QubitState::plus(), times, method)?.values)
}

fn sup(a: &[f64], b: &[f64]) -> f64 {
    sup_distance(a, b).unwrap_or(f64::INFINITY)
}

fn window(count: usize) -> Vec<f64> {
    linspace(0.0, 10.0, count)
}

fn run_check(check: Check) -> CliResult<ValidationRow> {
    let q0 = QubitState::plus();
    Ok(match check {
        Check::ClosedForm(p) => {
            let t = linspace(0.0, 20.0, 21);
            let d = sup(&trace(&p, &t, Method::Exact)?, &trace(&p, &t, Method::ClosedForm)?);
            ValidationRow::new("exact-vs-closed-form", &p, d, TOL_CLOSED_FORM)
        }
        Check::Oracle(p) => {
            let t = window(21);
            let d = sup(&trace(&p, &t, Method::Exact)?, &trace(&p, &t, Method::Oracle)?);
            ValidationRow::new("exact-vs-oracle", &p, d, TOL_ORACLE)
        }
        Check::FullSpin(p) => {
            let full = FullSpinOracle::new(&p)?;
            let dicke = DickeOracle::new(&p)?;
            let mut d: f64 = 0.0;
            for t in window(21) {
                d = d.max((full.purity(&q0, t)? - dicke.purity(&q0, t)?).abs());
            }
            ValidationRow::new("full-spin-vs-oracle", &p, d, TOL_ORACLE)
        }
        Check::SectorClosure(p) => {
            ValidationRow::new("sector-closure", &p, sector_closure_residual(&p)?, TOL_SECTOR)
        }
        Check::HpBroken(p) => {
            let t = window(2001);
            let d = sup(&trace(&p, &t, Method::Exact)?, &trace(&p, &t, Method::HpLimit)?);
            ValidationRow::new("exact-vs-hp-limit", &p, d, TOL_HP_BROKEN)
        }
        Check::HpAmplitudes(p) => {
            let t = window(2001);
            let amps: Vec<f64> = t
                .iter()
                .map(|&x| purity_broken_hp_from_amplitudes(&p, x))
                .collect::<lmg_core::Result<_>>()?;
            let d = sup(&amps, &trace(&p, &t, Method::HpLimit)?);
            ValidationRow::new("hp-amplitudes-vs-hp-limit", &p, d, TOL_CLOSED_FORM)
        }
        Check::HpSymmetric(p) => {
            let t = window(2001);
            let d = sup(&trace(&p, &t, Method::Exact)?, &trace(&p, &t, Method::HpLimit)?);
            ValidationRow::new("exact-vs-hp-limit", &p, d, TOL_HP_SYMMETRIC)
        }
        Check::HpConvention(p) => {
            let t = window(2001);
            let exact = trace(&p, &t, Method::Exact)?;
            let with = |c| -> CliResult<Vec<f64>> {
                Ok(t.iter()
                    .map(|&x| purity_symmetric_hp_with(&p, x, c))
                    .collect::<lmg_core::Result<_>>()?)
            };
            let full = sup(&exact, &with(HpTimeConvention::Full)?);
            let half = sup(&exact, &with(HpTimeConvention::Half)?);
            let mut row = ValidationRow::new("hp-time-convention-full-vs-half", &p, full, half);
            row.pass = full < half;
            row
        }
        Check::BrokenFrequency(p) => {
            let t = window(2001);
            let values = trace(&p, &t, Method::Exact)?;
            let omega0 = 5f64.sqrt() * p.lambda();
            let d = match oscillation_period(&t, &values) {
                Some(period) => ((PI / period) / omega0 - 1.0).abs(),
                None => f64::INFINITY,
            };
            ValidationRow::new("broken-rabi-frequency", &p, d, TOL_FREQUENCY)
        }
    })
}

/// Monotone decrease of the broken-phase H-P deviation with N; the deviation
/// column holds the largest increase between consecutive sizes.
fn convergence_row(rows: &[ValidationRow]) -> Option<ValidationRow> {
    let devs: Vec<&ValidationRow> = rows
        .iter()
        .filter(|r| r.comparison == "exact-vs-hp-limit" && r.lambda == HP_BROKEN_LAMBDA)
        .collect();
    let last = devs.last()?;
    let worst_increase = devs
        .windows(2)
        .map(|w| (w[1].deviation - w[0].deviation).max(0.0))
        .fold(0.0, f64::max);
    Some(ValidationRow {
        comparison: "hp-limit-convergence".into(),
        n: last.n,
        lambda: last.lambda,
        case: last.case.clone(),
        deviation: worst_increase,
        tolerance: 0.0,
        pass: worst_increase <= 0.0,
    })
}

/// The default suite, plus closed-form and oracle rows for the configured
/// model point when `user` is given.
pub fn run_validate(user: Option<&RunConfig>, jobs: usize) -> CliResult<ValidationReport> {
    let checks = default_suite();
    let mut extra = Vec::new();
    if let Some(cfg) = user {
        for lambda in cfg.lambdas() {
            extra.push((cfg.params(lambda)?, cfg.times()));
        }
    }
    let mut rows: Vec<ValidationRow> = crate::run::pool(jobs)?.install(|| {
        checks
            .into_par_iter()
            .map(run_check)
            .collect::<CliResult<Vec<_>>>()
    })?;
    if let Some(row) = convergence_row(&rows) {
        let at = rows
            .iter()
            .rposition(|r| r.comparison == "exact-vs-hp-limit" && r.lambda == HP_BROKEN_LAMBDA)
            .map_or(rows.len(), |i| i + 1);
        rows.insert(at, row);
    }
    for (p, times) in extra {
        let exact = trace(&p, &times, Method::Exact)?;
        let closed = trace(&p, &times, Method::ClosedForm)?;
        rows.push(ValidationRow::new("exact-vs-closed-form", &p, sup(&exact, &closed), TOL_CLOSED_FORM));
        if p.n() <= ORACLE_MAX_N {
            let oracle = trace(&p, &times, Method::Oracle)?;
            rows.push(ValidationRow::new("exact-vs-oracle", &p, sup(&exact, &oracle), TOL_ORACLE));
        }
    }
    Ok(ValidationReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convergence_row_flags_increases() {
        let mk = |n, d| ValidationRow {
            comparison: "exact-vs-hp-limit".into(),
            n,
            lambda: HP_BROKEN_LAMBDA,
            case: "case-ii".into(),
            deviation: d,
            tolerance: TOL_HP_BROKEN,
            pass: true,
        };
        let ok = convergence_row(&[mk(200, 0.004), mk(400, 0.002), mk(800, 0.001)]).unwrap();
        assert!(ok.pass);
        let bad = convergence_row(&[mk(200, 0.004), mk(400, 0.005)]).unwrap();
        assert!(!bad.pass);
        assert!((bad.deviation - 0.001).abs() < 1e-15);
    }

    #[test]
    fn suite_covers_every_comparison() {
        let kinds: std::collections::BTreeSet<&str> = default_suite()
            .iter()
            .map(|c| match c {
                Check::ClosedForm(_) => "cf",
                Check::Oracle(_) => "or",
                Check::FullSpin(_) => "fs",
                Check::SectorClosure(_) => "sc",
                Check::HpBroken(_) => "hb",
                Check::HpAmplitudes(_) => "ha",
                Check::HpSymmetric(_) => "hs",
                Check::HpConvention(_) => "hc",
                Check::BrokenFrequency(_) => "bf",
            })
            .collect();
        assert_eq!(kinds.len(), 9);
    }
}
