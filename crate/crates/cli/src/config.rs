//! Run configuration: a JSON file mirroring [`RunConfig`] in lower snake case,
//! overlaid by command-line flags, then validated.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use lmg_core::analysis::linspace;
use lmg_core::{CouplingCase, Method, ModelParams, QubitState, TieBreak};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const ORACLE_MAX_N: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn single(x: f64) -> Self {
        Self {
            start: x,
            stop: x,
            count: 1,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.count)
    }

    fn check(&self, name: &str) -> CliResult<()> {
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(CliError::config(format!("{name}: bounds must be finite")));
        }
        if self.count < 1 {
            return Err(CliError::config(format!("{name}: count must be at least 1")));
        }
        if self.stop < self.start {
            return Err(CliError::config(format!(
                "{name}: stop ({}) is below start ({})",
                self.stop, self.start
            )));
        }
        if self.count == 1 && self.stop != self.start {
            return Err(CliError::config(format!(
                "{name}: a single-point grid needs start == stop"
            )));
        }
        Ok(())
    }
}

/// `2.0` or `start:stop:count`.
impl FromStr for Grid {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let bad = || CliError::config(format!("cannot parse grid `{s}` (use x or start:stop:count)"));
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [x] => x.trim().parse().map(Grid::single).map_err(|_| bad()),
            [a, b, c] => Ok(Grid {
                start: a.trim().parse().map_err(|_| bad())?,
                stop: b.trim().parse().map_err(|_| bad())?,
                count: c.trim().parse().map_err(|_| bad())?,
            }),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LambdaSpec {
    Value(f64),
    Grid(Grid),
}

impl LambdaSpec {
    pub fn grid(&self) -> Grid {
        match *self {
            LambdaSpec::Value(x) => Grid::single(x),
            LambdaSpec::Grid(g) => g,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::config(format!("unknown format `{other}` (csv or json)"))),
        }
    }
}

/// The JSON config file; every field optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(alias = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<LambdaSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_prime: Option<f64>,
    /// [[re, im], [re, im]] for (c_up, c_down).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qubit_init: Option<[[f64; 2]; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<Grid>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub methods: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tie_break: Option<String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::config(e.to_string()))
    }

    /// Fields set in `other` replace those in `self`.
    pub fn overlay(mut self, other: ConfigFile) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(n, lambda, case, lambda_prime, qubit_init, t, methods, output, format, tie_break);
        self
    }

    /// True if the model point (N or lambda) was given.
    pub fn names_a_point(&self) -> bool {
        self.n.is_some() || self.lambda.is_some()
    }
}

/// A validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n: usize,
    pub lambda: Grid,
    pub case: CouplingCase,
    pub qubit: QubitState,
    pub t: Grid,
    pub methods: Vec<Method>,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub tie_break: TieBreak,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n: 1000,
            lambda: Grid::single(2.0),
            case: CouplingCase::CaseI,
            qubit: QubitState::plus(),
            t: Grid {
                start: 0.0,
                stop: 10.0,
                count: 2001,
            },
            methods: vec![Method::Exact],
            output: None,
            format: Format::Csv,
            tie_break: TieBreak::Lower,
        }
    }
}

fn parse_case(case: &str, lambda_prime: Option<f64>) -> CliResult<CouplingCase> {
    match (case, lambda_prime) {
        ("case-i", None) => Ok(CouplingCase::CaseI),
        ("case-ii", None) => Ok(CouplingCase::CaseII),
        ("explicit", Some(lp)) if lp.is_finite() => Ok(CouplingCase::Explicit(lp)),
        ("explicit", Some(lp)) => Err(CliError::config(format!("lambda_prime must be finite, got {lp}"))),
        ("explicit", None) => Err(CliError::config("case `explicit` requires lambda_prime")),
        ("case-i" | "case-ii", Some(_)) => Err(CliError::config(format!(
            "lambda_prime is only used with case `explicit`, not `{case}`"
        ))),
        (other, _) => Err(CliError::config(format!(
            "unknown case `{other}` (case-i, case-ii or explicit)"
        ))),
    }
}

pub fn parse_methods(names: &[String]) -> CliResult<Vec<Method>> {
    if names.is_empty() {
        return Err(CliError::config("methods must not be empty"));
    }
    let mut out = Vec::with_capacity(names.len());
    for name in names {
        let m = Method::from_str(name.trim()).map_err(CliError::config)?;
        if out.contains(&m) {
            return Err(CliError::config(format!("method `{m}` listed twice")));
        }
        out.push(m);
    }
    Ok(out)
}

fn parse_tie_break(s: &str) -> CliResult<TieBreak> {
    match s {
        "lower" => Ok(TieBreak::Lower),
        "upper" => Ok(TieBreak::Upper),
        other => Err(CliError::config(format!("unknown tie_break `{other}` (lower or upper)"))),
    }
}

impl RunConfig {
    pub fn from_file(file: &ConfigFile) -> CliResult<Self> {
        let d = RunConfig::default();
        let n = file.n.unwrap_or(d.n);
        let lambda = file.lambda.map(|l| l.grid()).unwrap_or(d.lambda);
        lambda.check("lambda")?;
        if lambda.start <= 0.0 {
            return Err(CliError::config(format!("lambda must be positive, got {}", lambda.start)));
        }
        let case = parse_case(file.case.as_deref().unwrap_or("case-i"), file.lambda_prime)?;
        let qubit = match file.qubit_init {
            Some([[ur, ui], [dr, di]]) => {
                QubitState::new(Complex64::new(ur, ui), Complex64::new(dr, di))?
            }
            None => d.qubit,
        };
        let t = file.t.unwrap_or(d.t);
        t.check("t")?;
        let methods = match &file.methods {
            Some(names) => parse_methods(names)?,
            None => d.methods,
        };
        let format = match &file.format {
            Some(f) => f.parse()?,
            None => d.format,
        };
        let tie_break = match &file.tie_break {
            Some(s) => parse_tie_break(s)?,
            None => d.tie_break,
        };
        let cfg = RunConfig {
            n,
            lambda,
            case,
            qubit,
            t,
            methods,
            output: file.output.clone(),
            format,
            tie_break,
        };
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> CliResult<()> {
        ModelParams::new(self.n, self.lambda.start, self.case)?;
        if self.methods.contains(&Method::Oracle) && self.n > ORACLE_MAX_N {
            return Err(CliError::config(format!(
                "method `oracle` requires N <= {ORACLE_MAX_N}, got {}",
                self.n
            )));
        }
        Ok(())
    }

    pub fn params(&self, lambda: f64) -> CliResult<ModelParams> {
        Ok(ModelParams::new(self.n, lambda, self.case)?.with_tie_break(self.tie_break))
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.lambda.points()
    }

    pub fn times(&self) -> Vec<f64> {
        self.t.points()
    }

    /// Canonical file form, used as output metadata.
    pub fn to_file(&self) -> ConfigFile {
        let (case, lambda_prime) = match self.case {
            CouplingCase::CaseI => ("case-i", None),
            CouplingCase::CaseII => ("case-ii", None),
            CouplingCase::Explicit(lp) => ("explicit", Some(lp)),
        };
        let (u, d) = (self.qubit.c_up(), self.qubit.c_down());
        ConfigFile {
            n: Some(self.n),
            lambda: Some(if self.lambda.count == 1 {
                LambdaSpec::Value(self.lambda.start)
            } else {
                LambdaSpec::Grid(self.lambda)
            }),
            case: Some(case.to_string()),
            lambda_prime,
            qubit_init: Some([[u.re, u.im], [d.re, d.im]]),
            t: Some(self.t),
            methods: Some(self.methods.iter().map(|m| m.as_str().to_string()).collect()),
            output: None,
            format: Some(match self.format {
                Format::Csv => "csv".into(),
                Format::Json => "json".into(),
            }),
            tie_break: Some(match self.tie_break {
                TieBreak::Lower => "lower".into(),
                TieBreak::Upper => "upper".into(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> CliResult<RunConfig> {
        RunConfig::from_file(&ConfigFile::parse(text)?)
    }

    #[test]
    fn defaults() {
        let c = cfg("{}").unwrap();
        assert_eq!(c, RunConfig::default());
        assert_eq!(c.times().len(), 2001);
    }

    #[test]
    fn full_file() {
        let c = cfg(r#"{
            "n": 12, "lambda": {"start": 0.5, "stop": 2.0, "count": 4},
            "case": "explicit", "lambda_prime": 0.3,
            "qubit_init": [[1.0, 0.0], [0.0, 0.0]],
            "t": {"start": 0.0, "stop": 1.0, "count": 11},
            "methods": ["exact", "oracle"], "output": "out.csv", "format": "json",
            "tie_break": "upper"
        }"#)
        .unwrap();
        assert_eq!(c.n, 12);
        assert_eq!(c.lambdas(), vec![0.5, 1.0, 1.5, 2.0]);
        assert_eq!(c.case, CouplingCase::Explicit(0.3));
        assert_eq!(c.qubit, QubitState::up());
        assert_eq!(c.methods, vec![Method::Exact, Method::Oracle]);
        assert_eq!(c.format, Format::Json);
        assert_eq!(c.tie_break, TieBreak::Upper);
        assert_eq!(RunConfig::from_file(&c.to_file()).unwrap().output, None);
        let again = RunConfig::from_file(&c.to_file()).unwrap();
        assert_eq!(again.lambda, c.lambda);
        assert_eq!(again.case, c.case);
    }

    #[test]
    fn upper_case_n_alias() {
        assert_eq!(cfg(r#"{"N": 40}"#).unwrap().n, 40);
    }

    #[test]
    fn rejects_bad_configs() {
        for bad in [
            r#"{"t": {"start": 1.0, "stop": 0.0, "count": 5}}"#,
            r#"{"t": {"start": 0.0, "stop": 1.0, "count": 0}}"#,
            r#"{"lambda": {"start": 2.0, "stop": 1.0, "count": 3}}"#,
            r#"{"lambda": -1.0}"#,
            r#"{"case": "explicit"}"#,
            r#"{"case": "case-i", "lambda_prime": 0.1}"#,
            r#"{"case": "case-iii"}"#,
            r#"{"n": 40, "methods": ["oracle"]}"#,
            r#"{"methods": []}"#,
            r#"{"methods": ["exact", "exact"]}"#,
            r#"{"methods": ["magic"]}"#,
            r#"{"qubit_init": [[1.0, 0.0], [1.0, 0.0]]}"#,
            r#"{"n": 1}"#,
            r#"{"format": "xml"}"#,
            r#"{"unknown_field": 1}"#,
        ] {
            let err = cfg(bad).unwrap_err();
            assert_eq!(err.exit_code(), 1, "{bad}: {err}");
        }
    }

    #[test]
    fn grid_strings() {
        assert_eq!("2".parse::<Grid>().unwrap(), Grid::single(2.0));
        assert_eq!(
            "0.2:2:181".parse::<Grid>().unwrap(),
            Grid {
                start: 0.2,
                stop: 2.0,
                count: 181
            }
        );
        assert!("1:2".parse::<Grid>().is_err());
    }

    #[test]
    fn overlay_prefers_later_values() {
        let base = ConfigFile::parse(r#"{"n": 10, "case": "case-ii"}"#).unwrap();
        let top = ConfigFile {
            n: Some(20),
            ..Default::default()
        };
        let merged = base.overlay(top);
        assert_eq!(merged.n, Some(20));
        assert_eq!(merged.case.as_deref(), Some("case-ii"));
    }
}
