//! CSV and JSON formats for coefficients, field samples, trajectories and
//! solution records.
//!
//! Every CSV starts with `# key = value` provenance lines, then a header
//! row. Floats are written in shortest round-trip form.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::sync::Arc;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::h_fourier::SpectralCoefficients;
use crate::harness::{EstimateReport, SolutionRecord, StudyRow};
use crate::quadrature::QuadratureGrid;
use crate::scalar::{fmt_real, Cplx, Real};
use crate::spectral_basis::{enumerate_modes, Family, FieldStrength, ModeIndex, ModeTable};

/// Resolved run configuration embedded in every output.
pub type Provenance = BTreeMap<String, String>;

fn write_provenance<W: Write>(w: &mut W, provenance: &Provenance) -> Result<()> {
    for (k, v) in provenance {
        writeln!(w, "# {k} = {v}")?;
    }
    Ok(())
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().has_headers(false).from_writer(w)
}

fn csv_reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .has_headers(true)
        .from_reader(r)
}

fn parse_field<T: Real>(record: &csv::StringRecord, i: usize, name: &str, line: u64) -> Result<T> {
    let raw = record
        .get(i)
        .ok_or_else(|| Error::Parse(format!("line {line}: missing column `{name}`")))?;
    raw.parse::<f64>()
        .map(T::lit)
        .map_err(|_| Error::Parse(format!("line {line}: column `{name}`: `{raw}` is not a number")))
}

fn parse_count(record: &csv::StringRecord, i: usize, name: &str, line: u64) -> Result<usize> {
    let raw = record
        .get(i)
        .ok_or_else(|| Error::Parse(format!("line {line}: missing column `{name}`")))?;
    raw.parse::<usize>()
        .map_err(|_| Error::Parse(format!("line {line}: column `{name}`: `{raw}` is not a count")))
}

pub(crate) fn parse_family(raw: &str) -> Result<Family> {
    match raw.trim() {
        "1" | "F1" | "f1" => Ok(Family::F1),
        "2" | "F2" | "f2" => Ok(Family::F2),
        other => Err(Error::Parse(format!("family must be 1 or 2, got `{other}`"))),
    }
}

/// Rows `family, xi1, xi2, re, im`.
pub fn write_coefficients_csv<T: Real, W: Write>(
    mut w: W,
    coeffs: &SpectralCoefficients<T>,
    provenance: &Provenance,
) -> Result<()> {
    write_provenance(&mut w, provenance)?;
    let mut out = csv_writer(w);
    out.write_record(["family", "xi1", "xi2", "re", "im"])?;
    for (m, v) in coeffs.table().modes().iter().zip(coeffs.values()) {
        let idx = m.index;
        out.write_record([
            idx.family.to_string(),
            idx.xi1.to_string(),
            idx.xi2.to_string(),
            fmt_real(v.re),
            fmt_real(v.im),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Reads coefficient rows onto an existing table; absent modes are zero.
pub fn read_coefficients_csv<T: Real, R: Read>(r: R, table: Arc<ModeTable<T>>) -> Result<SpectralCoefficients<T>> {
    let mut entries = Vec::new();
    for rec in csv_reader(r).records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let family = parse_family(rec.get(0).unwrap_or("")).map_err(|e| Error::Parse(format!("line {line}: {e}")))?;
        let idx = ModeIndex::new(
            family,
            parse_count(&rec, 1, "xi1", line)?,
            parse_count(&rec, 2, "xi2", line)?,
        )?;
        let v = Complex::new(parse_field(&rec, 3, "re", line)?, parse_field(&rec, 4, "im", line)?);
        entries.push((idx, v));
    }
    SpectralCoefficients::from_entries(table, &entries)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoefficientEntry<T> {
    pub family: Family,
    pub xi1: usize,
    pub xi2: usize,
    pub re: T,
    pub im: T,
}

/// JSON form of a coefficient set with its table metadata.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoefficientDocument<T> {
    pub field_strength: T,
    pub level_cap: usize,
    pub angular_cap: usize,
    #[serde(default)]
    pub config: Provenance,
    pub coefficients: Vec<CoefficientEntry<T>>,
}

impl<T: Real> CoefficientDocument<T> {
    pub fn from_coefficients(coeffs: &SpectralCoefficients<T>, provenance: &Provenance) -> Self {
        let table = coeffs.table();
        Self {
            field_strength: table.field().value(),
            level_cap: table.level_cap(),
            angular_cap: table.angular_cap(),
            config: provenance.clone(),
            coefficients: table
                .modes()
                .iter()
                .zip(coeffs.values())
                .map(|(m, v)| CoefficientEntry {
                    family: m.index.family,
                    xi1: m.index.xi1,
                    xi2: m.index.xi2,
                    re: v.re,
                    im: v.im,
                })
                .collect(),
        }
    }

    /// Rebuilds the table from the embedded metadata.
    pub fn to_coefficients(&self) -> Result<SpectralCoefficients<T>> {
        let field = FieldStrength::new(self.field_strength)?;
        let table = Arc::new(enumerate_modes(self.level_cap, self.angular_cap, field)?);
        let entries = self
            .coefficients
            .iter()
            .map(|e| Ok((ModeIndex::new(e.family, e.xi1, e.xi2)?, Complex::new(e.re, e.im))))
            .collect::<Result<Vec<_>>>()?;
        SpectralCoefficients::from_entries(table, &entries)
    }
}

/// Reads `(x, y, re, im)` field sample rows.
pub fn read_field_samples_csv<T: Real, R: Read>(r: R) -> Result<Vec<[T; 4]>> {
    let mut rows = Vec::new();
    for rec in csv_reader(r).records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        rows.push([
            parse_field(&rec, 0, "x", line)?,
            parse_field(&rec, 1, "y", line)?,
            parse_field(&rec, 2, "re", line)?,
            parse_field(&rec, 3, "im", line)?,
        ]);
    }
    Ok(rows)
}

/// Rows `x, y, re, im`.
pub fn write_field_csv<T: Real, W: Write>(
    mut w: W,
    points: &[(T, T)],
    values: &[Cplx<T>],
    provenance: &Provenance,
) -> Result<()> {
    write_provenance(&mut w, provenance)?;
    let mut out = csv_writer(w);
    out.write_record(["x", "y", "re", "im"])?;
    for (&(x, y), v) in points.iter().zip(values) {
        out.write_record([fmt_real(x), fmt_real(y), fmt_real(v.re), fmt_real(v.im)])?;
    }
    out.flush()?;
    Ok(())
}

/// Grid points with their plane weights: rows `x, y, weight`.
pub fn write_grid_csv<T: Real, W: Write>(mut w: W, grid: &QuadratureGrid<T>, provenance: &Provenance) -> Result<()> {
    write_provenance(&mut w, provenance)?;
    let mut out = csv_writer(w);
    out.write_record(["x", "y", "weight"])?;
    for (&(x, y), &wt) in grid.points().iter().zip(grid.weights()) {
        out.write_record([fmt_real(x), fmt_real(y), fmt_real(wt)])?;
    }
    out.flush()?;
    Ok(())
}

/// Per-mode trajectory rows
/// `t, family, xi1, xi2, re_v, im_v, re_dv, im_dv, energy, bound`.
pub fn write_trajectories_csv<T: Real, W: Write>(
    mut w: W,
    record: &SolutionRecord<T>,
    provenance: &Provenance,
) -> Result<()> {
    write_provenance(&mut w, provenance)?;
    let mut out = csv_writer(w);
    out.write_record([
        "t", "family", "xi1", "xi2", "re_v", "im_v", "re_dv", "im_dv", "energy", "bound",
    ])?;
    for snap in &record.snapshots {
        for (i, m) in record.table.modes().iter().enumerate() {
            let v = snap.u.values()[i];
            let dv = snap.du.values()[i];
            out.write_record([
                fmt_real(snap.t),
                m.index.family.to_string(),
                m.index.xi1.to_string(),
                m.index.xi2.to_string(),
                fmt_real(v.re),
                fmt_real(v.im),
                fmt_real(dv.re),
                fmt_real(dv.im),
                fmt_real(snap.mode_energy[i]),
                fmt_real(snap.mode_bound[i]),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Rows `t, norm_u_h1s, norm_du_hs, total_energy, ratio, certificate`.
pub fn write_solution_csv<T: Real, W: Write>(
    mut w: W,
    record: &SolutionRecord<T>,
    provenance: &Provenance,
) -> Result<()> {
    write_provenance(&mut w, provenance)?;
    let mut out = csv_writer(w);
    out.write_record(["t", "norm_u_h1s", "norm_du_hs", "total_energy", "ratio", "certificate"])?;
    for snap in &record.snapshots {
        out.write_record([
            fmt_real(snap.t),
            fmt_real(snap.norm_u),
            fmt_real(snap.norm_du),
            fmt_real(snap.total_energy),
            fmt_real(snap.ratio),
            fmt_real(record.certificate),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// JSON summary of a solve.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolutionSummary<T> {
    pub sup_ratio: T,
    pub certificate: T,
    pub passed: bool,
    pub sobolev_index: T,
    pub modes: usize,
    pub step: T,
    pub stability_warning: bool,
    pub gronwall_step_violations: usize,
    pub max_mode_ratio: T,
    pub config: Provenance,
}

impl<T: Real> SolutionSummary<T> {
    pub fn new(record: &SolutionRecord<T>, report: &EstimateReport<T>, provenance: &Provenance) -> Self {
        Self {
            sup_ratio: report.sup_ratio,
            certificate: report.certificate,
            passed: report.passed,
            sobolev_index: record.s,
            modes: record.table.len(),
            step: record.step,
            stability_warning: record.stability_warning,
            gronwall_step_violations: record.gronwall_step_violations,
            max_mode_ratio: record.max_mode_ratio,
            config: provenance.clone(),
        }
    }
}

/// Rows `level_cap, modes, sup_ratio, certificate, passed`.
pub fn write_study_csv<T: Real, W: Write>(mut w: W, rows: &[StudyRow<T>], provenance: &Provenance) -> Result<()> {
    write_provenance(&mut w, provenance)?;
    let mut out = csv_writer(w);
    out.write_record(["level_cap", "modes", "sup_ratio", "certificate", "passed"])?;
    for r in rows {
        out.write_record([
            r.level_cap.to_string(),
            r.modes.to_string(),
            fmt_real(r.sup_ratio),
            fmt_real(r.certificate),
            r.passed.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}
