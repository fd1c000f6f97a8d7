//! File formats: operator specs (JSON), spectra and samples (CSV), and
//! recovered operators (JSON).

use std::collections::BTreeMap;
use std::io::{Read, Write};

use log::warn;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::charfun::OperatorSpec;
use crate::error::{Error, Result};
use crate::inverse::RecoveredOperator;
use crate::potential::{BoundaryParams, Coefficients, Potential, Repr};
use crate::spectrum::{Spectrum, SpectrumClass, SpectrumEntry};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoeffJson {
    pub k: i64,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum PotentialJson {
    Fourier { coeffs: Vec<CoeffJson> },
    Grid { n: usize, v1: Vec<[f64; 2]>, v2: Vec<[f64; 2]> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpecJson {
    pub mu: f64,
    pub alpha: f64,
    pub beta: f64,
    pub potential: PotentialJson,
}

impl SpecJson {
    pub fn into_spec(self) -> Result<OperatorSpec> {
        let bp = BoundaryParams::new(self.alpha, self.beta)?;
        let potential = match self.potential {
            PotentialJson::Fourier { coeffs } => {
                let mut map = Coefficients::new();
                for c in coeffs {
                    if map.insert(c.k, Complex64::new(c.re, c.im)).is_some() {
                        return Err(Error::Parse(format!("duplicate coefficient index {}", c.k)));
                    }
                }
                Potential::from_coefficients(map, bp)?
            }
            PotentialJson::Grid { n, v1, v2 } => {
                if v1.len() != n + 1 || v2.len() != n + 1 {
                    return Err(Error::Parse(format!(
                        "grid with n = {n} needs {} samples per component, got {} and {}",
                        n + 1,
                        v1.len(),
                        v2.len()
                    )));
                }
                let conv = |v: Vec<[f64; 2]>| v.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
                Potential::from_grid(conv(v1), conv(v2), bp)?
            }
        };
        let spec = OperatorSpec::new(self.mu, potential)?;
        if (spec.input_norm() - 1.0).abs() > 1e-10 {
            warn!(
                "potential has norm {}; normalized to 1 and mu rescaled to {}",
                spec.input_norm(),
                spec.mu()
            );
        }
        Ok(spec)
    }

    pub fn from_spec(spec: &OperatorSpec) -> Self {
        let bp = spec.boundary();
        let potential = match spec.potential().repr() {
            Repr::Coefficients(c) => PotentialJson::Fourier {
                coeffs: c.iter().map(|(&k, v)| CoeffJson { k, re: v.re, im: v.im }).collect(),
            },
            Repr::Grid { v1, v2 } => {
                let conv = |v: &[Complex64]| v.iter().map(|z| [z.re, z.im]).collect();
                PotentialJson::Grid {
                    n: v1.len() - 1,
                    v1: conv(v1),
                    v2: conv(v2),
                }
            }
        };
        Self {
            mu: spec.mu(),
            alpha: bp.alpha(),
            beta: bp.beta(),
            potential,
        }
    }
}

pub fn read_spec<R: Read>(reader: R) -> Result<OperatorSpec> {
    let json: SpecJson = serde_json::from_reader(reader).map_err(|e| Error::Parse(e.to_string()))?;
    json.into_spec()
}

pub fn write_spec<W: Write>(writer: W, spec: &OperatorSpec) -> Result<()> {
    serde_json::to_writer_pretty(writer, &SpecJson::from_spec(spec))?;
    Ok(())
}

pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_spectrum<W: Write>(writer: W, spectrum: &Spectrum) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["k_hint", "lambda", "multiplicity", "class"]).map_err(csv_err)?;
    for e in spectrum.entries() {
        w.write_record([e.k_hint.to_string(), fmt_num(e.lambda), e.multiplicity.to_string(), e.class.to_string()])
            .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Deserialize)]
struct SpectrumRow {
    k_hint: i64,
    lambda: f64,
    multiplicity: u8,
    class: String,
}

pub fn read_spectrum<R: Read>(reader: R) -> Result<Spectrum> {
    let mut r = csv::Reader::from_reader(reader);
    let mut entries = Vec::new();
    for row in r.deserialize() {
        let row: SpectrumRow = row.map_err(|e| Error::Parse(e.to_string()))?;
        let class = SpectrumClass::parse(&row.class)
            .ok_or_else(|| Error::Parse(format!("unknown spectrum class '{}'", row.class)))?;
        if !(1..=2).contains(&row.multiplicity) || !row.lambda.is_finite() {
            return Err(Error::Parse(format!("bad row for lambda = {}", row.lambda)));
        }
        entries.push(SpectrumEntry {
            lambda: row.lambda,
            multiplicity: row.multiplicity,
            class,
            k_hint: row.k_hint,
            at_edge: false,
        });
    }
    let s = Spectrum::new(entries);
    if s.entries().windows(2).any(|w| w[0].lambda == w[1].lambda) {
        return Err(Error::Parse("repeated eigenvalue; use the multiplicity column".into()));
    }
    Ok(s)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecoveredCoeff {
    pub k: i64,
    pub v: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecoveredJson {
    pub mu: f64,
    pub coeffs: Vec<RecoveredCoeff>,
    pub phase_ambiguous: bool,
    pub residuals: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl From<&RecoveredOperator> for RecoveredJson {
    fn from(r: &RecoveredOperator) -> Self {
        Self {
            mu: r.mu,
            coeffs: r.coefficients.iter().map(|(&k, &v)| RecoveredCoeff { k, v }).collect(),
            phase_ambiguous: r.phase_ambiguous,
            residuals: r.residuals.clone(),
            warnings: r.warnings.clone(),
        }
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// Writes a header and rows of numbers as CSV.
pub fn write_table<W: Write>(writer: W, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(row.iter().map(|x| fmt_num(*x))).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a numeric CSV with a header; returns the header and the rows.
pub fn read_table<R: Read>(reader: R) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut r = csv::Reader::from_reader(reader);
    let header = r
        .headers()
        .map_err(|e| Error::Parse(e.to_string()))?
        .iter()
        .map(|s| s.trim().to_string())
        .collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        let row = rec
            .iter()
            .map(|s| s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("'{s}': {e}"))))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok((header, rows))
}
