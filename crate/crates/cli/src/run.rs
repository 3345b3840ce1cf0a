//! Traces, lambda x t sweeps and figure data.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use lmg_core::analysis::{linspace, oscillation_period};
use lmg_core::{purity_trace, CouplingCase, Method, PurityTrace, QubitState};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ConfigFile, Format, Grid, RunConfig};
use crate::error::{CliError, CliResult};
use crate::io::{emit, purity_column, write_json_file, Table};

/// Worker pool with `jobs` threads; 0 means one per available core.
pub fn pool(jobs: usize) -> CliResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::config(format!("cannot start worker pool: {e}")))
}

/// One trace per requested method at a single lambda.
pub fn compute_traces(cfg: &RunConfig, lambda: f64) -> CliResult<Vec<PurityTrace>> {
    let params = cfg.params(lambda)?;
    let times = cfg.times();
    cfg.methods
        .iter()
        .map(|&m| Ok(purity_trace(&params, &cfg.qubit, &times, m)?))
        .collect()
}

pub fn run_trace(cfg: &RunConfig) -> CliResult<Table> {
    if cfg.lambda.count != 1 {
        return Err(CliError::config(format!(
            "trace takes a single lambda, got a grid of {}",
            cfg.lambda.count
        )));
    }
    Ok(Table::from_traces(&compute_traces(cfg, cfg.lambda.start)?))
}

/// Long format `lambda, t, purity_<method>...`, lambda-major. A one-point
/// lambda grid gives the same table as [`run_trace`].
pub fn run_sweep(cfg: &RunConfig, jobs: usize) -> CliResult<Table> {
    if cfg.lambda.count == 1 {
        return run_trace(cfg);
    }
    let lambdas = cfg.lambdas();
    let blocks: Vec<Vec<PurityTrace>> = pool(jobs)?.install(|| {
        lambdas
            .par_iter()
            .map(|&l| compute_traces(cfg, l))
            .collect::<CliResult<_>>()
    })?;
    let mut headers = vec!["lambda".to_string(), "t".to_string()];
    headers.extend(cfg.methods.iter().map(|&m| purity_column(m)));
    let mut table = Table::new(headers);
    for (lambda, traces) in lambdas.iter().zip(&blocks) {
        for (k, &t) in traces[0].times.iter().enumerate() {
            let mut row = vec![*lambda, t];
            row.extend(traces.iter().map(|tr| tr.values[k]));
            table.push(row);
        }
    }
    Ok(table)
}

/// Write a trace or sweep table with the canonical config as metadata.
pub fn write_table(cfg: &RunConfig, table: &Table) -> CliResult<()> {
    emit(table, &cfg.to_file(), cfg.format, cfg.output.as_deref())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
}

impl Figure {
    pub const ALL: [Figure; 4] = [Figure::Fig1, Figure::Fig2, Figure::Fig3, Figure::Fig4];

    pub fn name(&self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
        }
    }

    pub fn case(&self) -> CouplingCase {
        match self {
            Figure::Fig1 | Figure::Fig2 => CouplingCase::CaseI,
            Figure::Fig3 | Figure::Fig4 => CouplingCase::CaseII,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Figure::Fig1 | Figure::Fig2 => 5000,
            Figure::Fig3 | Figure::Fig4 => 1000,
        }
    }

    pub fn lambdas(&self) -> Vec<f64> {
        match self {
            Figure::Fig1 | Figure::Fig3 => linspace(0.2, 2.0, 181),
            Figure::Fig2 => vec![1.01, 1.1, 1.3, 2.0, 5.0],
            Figure::Fig4 => vec![1.0001, 1.0003, 1.002, 1.02],
        }
    }

    pub fn time_grid(&self) -> Grid {
        Grid {
            start: 0.0,
            stop: 10.0,
            count: 2001,
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| CliError::config(format!("unknown figure `{s}` (fig1..fig4)")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveSummary {
    pub lambda: f64,
    pub min_purity: f64,
    pub max_purity: f64,
    pub period: Option<f64>,
}

/// Parameters and per-curve summary written next to the figure data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureSidecar {
    pub figure: Figure,
    pub case: CouplingCase,
    pub n: usize,
    pub method: Method,
    pub qubit_init: [[f64; 2]; 2],
    pub lambda: Vec<f64>,
    pub t: Grid,
    pub columns: Vec<String>,
    pub curves: Vec<CurveSummary>,
}

#[derive(Debug, Clone)]
pub struct FigureData {
    pub table: Table,
    pub sidecar: FigureSidecar,
}

impl FigureData {
    pub fn curve(&self, lambda: f64) -> Option<(Vec<f64>, Vec<f64>)> {
        let t = self.table.column_index("t")?;
        let l = self.table.column_index("lambda")?;
        let p = self.table.column_index("purity_exact")?;
        let rows: Vec<&Vec<f64>> = self.table.rows.iter().filter(|r| r[l] == lambda).collect();
        (!rows.is_empty()).then(|| (rows.iter().map(|r| r[t]).collect(), rows.iter().map(|r| r[p]).collect()))
    }
}

pub fn run_figure(fig: Figure, jobs: usize) -> CliResult<FigureData> {
    let t = fig.time_grid();
    let cfg = RunConfig {
        n: fig.n(),
        lambda: Grid::single(1.0),
        case: fig.case(),
        qubit: QubitState::plus(),
        t,
        methods: vec![Method::Exact],
        output: None,
        format: Format::Csv,
        tie_break: Default::default(),
    };
    let lambdas = fig.lambdas();
    let traces: Vec<PurityTrace> = pool(jobs)?.install(|| {
        lambdas
            .par_iter()
            .map(|&l| Ok(compute_traces(&cfg, l)?.remove(0)))
            .collect::<CliResult<_>>()
    })?;
    let columns = vec!["lambda".to_string(), "t".to_string(), purity_column(Method::Exact)];
    let mut table = Table::new(columns.clone());
    let mut curves = Vec::with_capacity(traces.len());
    for (lambda, tr) in lambdas.iter().zip(&traces) {
        for (&time, &p) in tr.times.iter().zip(&tr.values) {
            table.push(vec![*lambda, time, p]);
        }
        curves.push(CurveSummary {
            lambda: *lambda,
            min_purity: tr.min(),
            max_purity: tr.max(),
            period: oscillation_period(&tr.times, &tr.values),
        });
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Ok(FigureData {
        table,
        sidecar: FigureSidecar {
            figure: fig,
            case: fig.case(),
            n: fig.n(),
            method: Method::Exact,
            qubit_init: [[h, 0.0], [h, 0.0]],
            lambda: lambdas,
            t,
            columns,
            curves,
        },
    })
}

/// Writes `<dir>/<fig>.<csv|json>` and `<dir>/<fig>.params.json`; returns
/// the data paths.
pub fn write_figure(data: &FigureData, dir: &Path, format: Format) -> CliResult<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let name = data.sidecar.figure.name();
    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let path = dir.join(format!("{name}.{ext}"));
    emit(&data.table, &data.sidecar, format, Some(&path))?;
    let sidecar = serde_json::to_value(&data.sidecar).map_err(|e| CliError::Format(e.to_string()))?;
    write_json_file(&dir.join(format!("{name}.params.json")), &sidecar)?;
    Ok(path)
}

/// Overlay command-line values on an optional config file and validate.
pub fn resolve_config(file: Option<&Path>, overrides: ConfigFile) -> CliResult<(RunConfig, bool)> {
    let base = match file {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let merged = base.overlay(overrides);
    let names_point = merged.names_a_point();
    Ok((RunConfig::from_file(&merged)?, names_point))
}
