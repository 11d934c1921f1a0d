//! Report envelope, CSV rendering, and reproducible output naming.
//!
//! Data files are written as `<out>/<command>-<timestamp>.{csv,json}`.
//! The timestamp honors `SOURCE_DATE_EPOCH` when set, so a pinned epoch
//! plus a pinned seed reruns to byte-identical files; the JSON `wallTime`
//! field is the single intentional exception and sits on its own line.

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::config::{ConfigEcho, Settings};
use crate::CliError;

pub const SCHEMA: &str = "nclab-report/1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Report envelope shared by every command.
#[derive(Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    #[serde(rename = "toolVersion")]
    pub tool_version: &'static str,
    pub config: ConfigEcho,
    pub pass: bool,
    #[serde(rename = "wallTime")]
    pub wall_time: f64,
    pub results: Value,
}

/// Shortest round-trip decimal rendering; used for every float written to
/// CSV so reruns are byte-identical.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// One CSV table: a `#`-prefixed units/notes comment, a header row, and
/// data rows (already rendered to strings).
#[derive(Debug)]
pub struct Csv {
    pub comment: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in self.comment.lines() {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// UTC timestamp `YYYYMMDDTHHMMSSZ` from `SOURCE_DATE_EPOCH` when set
/// (reproducible builds convention), otherwise from the system clock.
pub fn timestamp() -> String {
    let epoch = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.parse::<i64>().ok())
        .unwrap_or_else(|| {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs() as i64)
                .unwrap_or(0)
        });
    let days = epoch.div_euclid(86_400);
    let secs = epoch.rem_euclid(86_400);
    let (y, m, d) = civil_from_days(days);
    format!(
        "{y:04}{m:02}{d:02}T{:02}{:02}{:02}Z",
        secs / 3600,
        (secs % 3600) / 60,
        secs % 60
    )
}

/// Proleptic Gregorian date from days since 1970-01-01 (Euclidean-affine
/// era decomposition).
fn civil_from_days(z: i64) -> (i64, u32, u32) {
    let z = z + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z.rem_euclid(146_097);
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let y = yoe + era * 400;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let d = (doy - (153 * mp + 2) / 5 + 1) as u32;
    let m = (if mp < 10 { mp + 3 } else { mp - 9 }) as u32;
    (if m <= 2 { y + 1 } else { y }, m, d)
}

/// Which data files a command writes.
#[derive(clap::ValueEnum, Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    #[default]
    Both,
}

impl Format {
    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }
    pub fn json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }
}

/// Everything a command produced; `write` persists it under the output
/// directory and reports the paths.
#[derive(Debug)]
pub struct Output {
    pub command: &'static str,
    pub pass: bool,
    pub results: Value,
    pub csv: Option<Csv>,
    /// `(suffix, svg body)` pairs; written as
    /// `<command>-<timestamp>-<suffix>.svg`.
    pub plots: Vec<(String, String)>,
    /// Human summary lines printed to stdout.
    pub summary: Vec<String>,
}

pub fn write_output(
    settings: &Settings,
    stamp: &str,
    format: Format,
    svg: bool,
    wall_time: f64,
    out: &Output,
) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(&settings.out_dir).map_err(|e| {
        CliError::Config(format!(
            "cannot create output dir {}: {e}",
            settings.out_dir.display()
        ))
    })?;
    let mut written = Vec::new();
    let base = settings.out_dir.join(format!("{}-{}", out.command, stamp));

    if format.json() {
        let report = Report {
            schema: SCHEMA,
            command: out.command.to_string(),
            tool_version: TOOL_VERSION,
            config: settings.echo(),
            pass: out.pass,
            wall_time,
            results: out.results.clone(),
        };
        let body = serde_json::to_string_pretty(&report)
            .map_err(|e| CliError::Config(format!("report serialization failed: {e}")))?;
        let path = base.with_extension("json");
        write_file(&path, &body)?;
        written.push(path);
    }
    if format.csv() {
        if let Some(csv) = &out.csv {
            let path = base.with_extension("csv");
            write_file(&path, &csv.render())?;
            written.push(path);
        }
    }
    if svg {
        for (suffix, body) in &out.plots {
            let path = settings
                .out_dir
                .join(format!("{}-{}-{}.svg", out.command, stamp, suffix));
            write_file(&path, body)?;
            written.push(path);
        }
    }
    Ok(written)
}

fn write_file(path: &Path, body: &str) -> Result<(), CliError> {
    std::fs::write(path, body)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}
