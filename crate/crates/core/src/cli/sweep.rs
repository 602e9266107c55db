//! Parameter sweeps over a one-parameter family, emitted as CSV or JSON.

use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::{build_family, fmt17, Family, FamilyParams};
use crate::error::{Error, Result};
use crate::fef::{
    fef_lower_estimate, hoelder_sum_bound, lm_bound, paper_example3_form, spectral_bound,
    theorem1_bound, OptimizerOptions,
};
use crate::linalg::frobenius_norm;

/// CSV header; `paper_example3_form` appears only for the horodecki family.
pub const CSV_COLUMNS: [&str; 8] = [
    "param",
    "frobenius_norm",
    "theorem1_bound",
    "paper_example3_form",
    "hoelder_sum_bound",
    "lm_bound",
    "spectral_bound",
    "fef_lower",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    P,
    A,
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p" => Ok(SweepParam::P),
            "a" => Ok(SweepParam::A),
            _ => Err(Error::Usage(format!("unknown sweep parameter {s:?}, expected p or a"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::Usage(format!("unknown format {s:?}, expected csv or json"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub family: Family,
    /// Subsystem dimension for the isotropic family; ignored for horodecki.
    pub d: Option<usize>,
    pub parameter: SweepParam,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub optimizer: OptimizerOptions,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        match (self.family, self.parameter) {
            (Family::Isotropic, SweepParam::P) | (Family::Horodecki, SweepParam::A) => {}
            (f, _) => {
                return Err(Error::Usage(format!(
                    "family {f} cannot be swept over that parameter (isotropic: p, horodecki: a)"
                )))
            }
        }
        if self.steps < 2 {
            return Err(Error::Usage(format!("--steps must be >= 2, got {}", self.steps)));
        }
        if !(self.from <= self.to) {
            return Err(Error::Usage(format!(
                "--from {} must not exceed --to {}",
                self.from, self.to
            )));
        }
        Ok(())
    }

    /// Linear grid including both endpoints.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.steps - 1;
        (0..self.steps)
            .map(|k| {
                if k == n {
                    self.to
                } else {
                    self.from + (self.to - self.from) * k as f64 / n as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub param: f64,
    pub frobenius_norm: f64,
    pub theorem1_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub paper_example3_form: Option<f64>,
    pub hoelder_sum_bound: f64,
    pub lm_bound: f64,
    pub spectral_bound: f64,
    pub fef_lower: f64,
}

/// Evaluates every grid point; rows come back in grid order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    spec.grid()
        .into_par_iter()
        .map(|x| {
            let mut params = FamilyParams {
                d: spec.d,
                seed: spec.optimizer.seed,
                ..Default::default()
            };
            match spec.parameter {
                SweepParam::P => params.p = Some(x),
                SweepParam::A => params.a = Some(x),
            }
            if spec.family == Family::Horodecki {
                params.d = None;
            }
            let rho = build_family(spec.family, &params)?.state;
            Ok(SweepRow {
                param: x,
                frobenius_norm: frobenius_norm(rho.matrix()),
                theorem1_bound: theorem1_bound(&rho),
                paper_example3_form: (spec.family == Family::Horodecki).then(|| paper_example3_form(x)),
                hoelder_sum_bound: hoelder_sum_bound(&rho),
                lm_bound: lm_bound(&rho)?,
                spectral_bound: spectral_bound(&rho)?,
                fef_lower: fef_lower_estimate(&rho, &spec.optimizer)?.value,
            })
        })
        .collect()
}

pub fn write_sweep(rows: &[SweepRow], with_example3: bool, format: OutputFormat, out: &mut dyn Write) -> Result<()> {
    let io = |source: std::io::Error| Error::Io {
        path: "<sweep output>".into(),
        source,
    };
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let header: Vec<&str> = CSV_COLUMNS
                .iter()
                .copied()
                .filter(|&c| with_example3 || c != "paper_example3_form")
                .collect();
            w.write_record(&header).map_err(|e| io(e.into()))?;
            for r in rows {
                let mut rec = vec![fmt17(r.param), fmt17(r.frobenius_norm), fmt17(r.theorem1_bound)];
                if with_example3 {
                    rec.push(r.paper_example3_form.map(fmt17).unwrap_or_default());
                }
                rec.extend([
                    fmt17(r.hoelder_sum_bound),
                    fmt17(r.lm_bound),
                    fmt17(r.spectral_bound),
                    fmt17(r.fef_lower),
                ]);
                w.write_record(&rec).map_err(|e| io(e.into()))?;
            }
            w.flush().map_err(io)?;
        }
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, rows).map_err(|e| io(e.into()))?;
            writeln!(out).map_err(io)?;
        }
    }
    Ok(())
}

/// Runs the sweep and writes it to `path`.
pub fn cmd_sweep(spec: &SweepSpec, path: &Path, format: OutputFormat) -> Result<Vec<SweepRow>> {
    let rows = run_sweep(spec)?;
    let mut buf = Vec::new();
    write_sweep(&rows, spec.family == Family::Horodecki, format, &mut buf)?;
    std::fs::write(path, buf).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(rows)
}
