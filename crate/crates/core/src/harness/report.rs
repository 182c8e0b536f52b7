use std::io::{self, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::{CampaignConfig, Format};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseStatus {
    Pass,
    Violation,
    Indeterminate,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CaseParams {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    /// Exponent of `(x - 1)` in the boundary family.
    pub n: Option<usize>,
    /// Exponent of `(x + 1)` in the boundary family.
    pub m: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub index: usize,
    pub parameters: CaseParams,
    /// Human-readable description of the input.
    pub input: String,
    /// Zeros of random inputs, when there are any.
    pub input_roots: Option<Vec<f64>>,
    /// Root classification or scan verdict.
    pub classification: String,
    pub min_boundary_distance: Option<f64>,
    pub status: CaseStatus,
    /// Outside the parameter range where a positive result is expected.
    pub exploratory: bool,
    /// The quantity that decided the status: a deviation, determinant ratio
    /// or boundary distance.
    pub evidence: Option<f64>,
    pub detail: String,
    pub wall_time: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub cases: usize,
    pub passes: usize,
    pub violations: usize,
    pub indeterminates: usize,
    /// Violations among cases not flagged exploratory.
    pub expected_violations: usize,
}

impl Summary {
    pub fn tally(records: &[CaseRecord]) -> Self {
        let mut s = Summary {
            cases: records.len(),
            ..Default::default()
        };
        for r in records {
            match r.status {
                CaseStatus::Pass => s.passes += 1,
                CaseStatus::Violation => {
                    s.violations += 1;
                    if !r.exploratory {
                        s.expected_violations += 1;
                    }
                }
                CaseStatus::Indeterminate => s.indeterminates += 1,
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub artifact_version: String,
    pub timestamp: String,
    pub config: CampaignConfig,
    pub records: Vec<CaseRecord>,
    pub summary: Summary,
}

impl CampaignReport {
    pub fn new(config: CampaignConfig, records: Vec<CaseRecord>) -> Self {
        CampaignReport {
            artifact_version: env!("CARGO_PKG_VERSION").into(),
            timestamp: config.timestamp.clone(),
            summary: Summary::tally(&records),
            config,
            records,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.passes == self.summary.cases
    }
}

/// Writes every float with 17 significant digits, which round-trips any
/// `f64` exactly.
struct ExactFloats;

impl serde_json::ser::Formatter for ExactFloats {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        write!(w, "{}", fmt_f64(v))
    }
}

pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn to_json(report: &CampaignReport) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, ExactFloats);
    report
        .serialize(&mut ser)
        .map_err(|e| Error::Serialize(e.to_string()))?;
    out.push(b'\n');
    String::from_utf8(out).map_err(|e| Error::Serialize(e.to_string()))
}

pub fn from_json(text: &str) -> Result<CampaignReport> {
    serde_json::from_str(text).map_err(|e| Error::Serialize(e.to_string()))
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn opt_f64(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// One row per case.
pub fn to_csv(report: &CampaignReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let ser = |e: csv::Error| Error::Serialize(e.to_string());
    w.write_record([
        "index",
        "campaign",
        "alpha",
        "beta",
        "n",
        "m",
        "input",
        "input_roots",
        "classification",
        "min_boundary_distance",
        "status",
        "exploratory",
        "evidence",
        "detail",
        "wall_time",
    ])
    .map_err(ser)?;
    for r in &report.records {
        let p = &r.parameters;
        let roots = r
            .input_roots
            .as_ref()
            .map(|v| v.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(";"))
            .unwrap_or_default();
        let status = match r.status {
            super::CaseStatus::Pass => "pass",
            super::CaseStatus::Violation => "violation",
            super::CaseStatus::Indeterminate => "indeterminate",
        };
        w.write_record([
            r.index.to_string(),
            report.config.campaign.to_string(),
            opt_f64(p.alpha),
            opt_f64(p.beta),
            opt(p.n),
            opt(p.m),
            r.input.clone(),
            roots,
            r.classification.clone(),
            opt_f64(r.min_boundary_distance),
            status.into(),
            r.exploratory.to_string(),
            opt_f64(r.evidence),
            r.detail.clone(),
            fmt_f64(r.wall_time),
        ])
        .map_err(ser)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Serialize(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Serialize(e.to_string()))
}

pub fn render(report: &CampaignReport, format: Format) -> Result<String> {
    match format {
        Format::Json => to_json(report),
        Format::Csv => to_csv(report),
    }
}

/// Writes the report to `path`, or to stdout when `path` is `None`.
pub fn emit_report(report: &CampaignReport, format: Format, path: Option<&Path>) -> Result<()> {
    let text = render(report, format)?;
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::Campaign;

    fn record() -> CaseRecord {
        CaseRecord {
            index: 0,
            parameters: CaseParams {
                alpha: Some(0.1),
                ..Default::default()
            },
            input: "random degree 2".into(),
            input_roots: Some(vec![-1.0 / 3.0, 0.7]),
            classification: "all_strictly_inside".into(),
            min_boundary_distance: Some(0.3),
            status: CaseStatus::Pass,
            exploratory: false,
            evidence: None,
            detail: String::new(),
            wall_time: 0.0,
        }
    }

    #[test]
    fn empty_report_has_zero_cases() {
        let r = CampaignReport::new(CampaignConfig::for_campaign(Campaign::Theorem12), vec![]);
        let j = to_json(&r).unwrap();
        assert!(j.contains("\"cases\":0"));
    }

    #[test]
    fn json_round_trips_byte_for_byte() {
        let r = CampaignReport::new(CampaignConfig::for_campaign(Campaign::Theorem12), vec![record()]);
        let a = to_json(&r).unwrap();
        let back = from_json(&a).unwrap();
        assert_eq!(back, r);
        assert_eq!(to_json(&back).unwrap(), a);
        assert!(a.contains("-3.3333333333333331e-1"));
    }

    #[test]
    fn csv_has_header_and_one_row_per_case() {
        let r = CampaignReport::new(
            CampaignConfig::for_campaign(Campaign::Theorem12),
            vec![record(), record()],
        );
        let c = to_csv(&r).unwrap();
        assert_eq!(c.lines().count(), 3);
        assert!(c.starts_with("index,campaign,alpha"));
    }

    #[test]
    fn tally_separates_exploratory_violations() {
        let mut a = record();
        a.status = CaseStatus::Violation;
        let mut b = a.clone();
        b.exploratory = true;
        let s = Summary::tally(&[a, b, record()]);
        assert_eq!((s.cases, s.passes, s.violations, s.expected_violations), (3, 1, 2, 1));
    }
}
