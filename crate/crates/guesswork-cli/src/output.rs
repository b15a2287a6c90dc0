//! Output rows and writers. CSV is long/tidy (one row per computed
//! quantity) with a fixed header and column order; numbers print with the
//! shortest decimal that round-trips, locale-independent. JSON documents
//! embed the resolved run configuration and tool version.

use std::io::Write;

use serde::Serialize;

use guesswork::moments::{MomentRecord, SlopeReport};
use guesswork::verify::VerificationReport;

pub const CSV_HEADER: [&str; 12] = [
    "scheme",
    "channel_kind",
    "channel_param",
    "m",
    "alpha",
    "n",
    "value",
    "method",
    "lambda_star",
    "ci_low",
    "ci_high",
    "seed",
];

/// One computed quantity: an exponent (no `n`) or a finite-`n` moment.
#[derive(Debug, Clone, Serialize)]
pub struct ResultRow {
    pub scheme: String,
    pub channel_kind: String,
    pub channel_param: f64,
    pub m: u32,
    pub alpha: f64,
    pub n: Option<u32>,
    pub value: f64,
    pub method: String,
    pub lambda_star: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub seed: Option<u64>,
}

impl ResultRow {
    pub fn from_moment(record: &MomentRecord) -> Self {
        ResultRow {
            scheme: record.scheme.mode_name().to_string(),
            channel_kind: record.channel.kind_name().to_string(),
            channel_param: record.channel.param(),
            m: record.scheme.agents().get(),
            alpha: record.alpha,
            n: Some(record.n),
            value: record.value,
            method: record.method.name().to_string(),
            lambda_star: None,
            ci_low: record.ci.map(|c| c.0),
            ci_high: record.ci.map(|c| c.1),
            seed: record.seed,
        }
    }

    fn csv_record(&self) -> [String; 12] {
        [
            self.scheme.clone(),
            self.channel_kind.clone(),
            fmt_f64(self.channel_param),
            self.m.to_string(),
            fmt_f64(self.alpha),
            self.n.map(|n| n.to_string()).unwrap_or_default(),
            fmt_f64(self.value),
            self.method.clone(),
            self.lambda_star.map(fmt_f64).unwrap_or_default(),
            self.ci_low.map(fmt_f64).unwrap_or_default(),
            self.ci_high.map(fmt_f64).unwrap_or_default(),
            self.seed.map(|s| s.to_string()).unwrap_or_default(),
        ]
    }
}

/// Shortest decimal representation that parses back to the same value.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

pub fn write_csv<W: Write>(mut out: W, rows: &[ResultRow]) -> std::io::Result<()> {
    let mut writer = csv::Writer::from_writer(&mut out);
    writer.write_record(CSV_HEADER)?;
    for row in rows {
        writer.write_record(row.csv_record())?;
    }
    writer.flush()?;
    Ok(())
}

/// The resolved run configuration, embedded in JSON output.
#[derive(Debug, Clone, Serialize, Default)]
pub struct ResolvedConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scheme: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub channel: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub param: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub format: String,
}

#[derive(Debug, Serialize)]
struct SlopePointJson {
    n: u32,
    log2_value: f64,
    slope: Option<f64>,
    gap_to_target: Option<f64>,
}

#[derive(Debug, Serialize)]
struct SlopeReportJson {
    target: f64,
    non_monotone: bool,
    points: Vec<SlopePointJson>,
}

#[derive(Debug, Serialize)]
struct ResultDocument<'a> {
    version: &'static str,
    config: &'a ResolvedConfig,
    rows: &'a [ResultRow],
    #[serde(skip_serializing_if = "Option::is_none")]
    slope_report: Option<SlopeReportJson>,
}

pub fn write_json<W: Write>(
    mut out: W,
    config: &ResolvedConfig,
    rows: &[ResultRow],
    slopes: Option<&SlopeReport>,
) -> std::io::Result<()> {
    let document = ResultDocument {
        version: env!("CARGO_PKG_VERSION"),
        config,
        rows,
        slope_report: slopes.map(|report| SlopeReportJson {
            target: report.target,
            non_monotone: report.non_monotone,
            points: report
                .points
                .iter()
                .map(|p| SlopePointJson {
                    n: p.n,
                    log2_value: p.log2_value,
                    slope: p.slope,
                    gap_to_target: p.gap_to_target,
                })
                .collect(),
        }),
    };
    let text = serde_json::to_string_pretty(&document).expect("serializable document");
    writeln!(out, "{text}")
}

#[derive(Debug, Serialize)]
struct CheckJson<'a> {
    name: &'a str,
    passed: bool,
    detail: &'a str,
}

#[derive(Debug, Serialize)]
struct VerifyDocument<'a> {
    version: &'static str,
    config: &'a ResolvedConfig,
    passed: bool,
    checks: Vec<CheckJson<'a>>,
}

pub fn write_verify_json<W: Write>(
    mut out: W,
    config: &ResolvedConfig,
    report: &VerificationReport,
) -> std::io::Result<()> {
    let document = VerifyDocument {
        version: env!("CARGO_PKG_VERSION"),
        config,
        passed: report.passed(),
        checks: report
            .checks
            .iter()
            .map(|c| CheckJson {
                name: c.name,
                passed: c.passed,
                detail: &c.detail,
            })
            .collect(),
    };
    let text = serde_json::to_string_pretty(&document).expect("serializable document");
    writeln!(out, "{text}")
}

pub fn write_verify_text<W: Write>(mut out: W, report: &VerificationReport) -> std::io::Result<()> {
    for check in &report.checks {
        let status = if check.passed { "ok  " } else { "FAIL" };
        writeln!(out, "{status} {:<36} {}", check.name, check.detail)?;
    }
    let (passed, total) = (
        report.checks.iter().filter(|c| c.passed).count(),
        report.checks.len(),
    );
    writeln!(out, "{passed}/{total} checks passed")
}
