//! Canonical report serialization: a versioned JSON document per analysis
//! plus flat CSV tables for external plotting.
//!
//! Every report embeds the full resolved configuration (command, flags,
//! circuit digest, stream identifier, tool version), and contains no
//! timestamps or machine state, so identical invocations produce identical
//! bytes.

use serde::Serialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::bench::DistanceStats;
use crate::error::Result;
use crate::haar::OverlapReport;
use crate::rng::GENERATOR_ID;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct ReportHeader {
    pub schema_version: u32,
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub generator: &'static str,
    /// The subcommand that produced this report.
    pub command: String,
    /// Fully resolved flag set, alphabetical.
    pub flags: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub circuit_digest: Option<String>,
}

impl ReportHeader {
    pub fn new(
        command: impl Into<String>,
        flags: BTreeMap<String, String>,
        circuit_digest: Option<String>,
    ) -> Self {
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            tool: "photonhash",
            tool_version: env!("CARGO_PKG_VERSION"),
            generator: GENERATOR_ID,
            command: command.into(),
            flags,
            circuit_digest,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report<T: Serialize> {
    #[serde(flatten)]
    pub header: ReportHeader,
    pub data: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(header: ReportHeader, data: T) -> Self {
        Self { header, data }
    }

    pub fn to_canonical_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }
}

/// Writes `<base>.json` plus one `<base>_<suffix>.csv` per table; returns
/// the written paths.
pub fn write_report_files(
    dir: &Path,
    base: &str,
    json: &str,
    csv_tables: &[(&str, String)],
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let json_path = dir.join(format!("{base}.json"));
    std::fs::write(&json_path, json)?;
    written.push(json_path);
    for (suffix, content) in csv_tables {
        let path = dir.join(format!("{base}_{suffix}.csv"));
        std::fs::write(&path, content)?;
        written.push(path);
    }
    Ok(written)
}

fn fmt_f64(v: f64) -> String {
    // shortest round-trip formatting, same as the JSON encoding
    let mut buf = ryu_like(v);
    if !buf.contains('.') && !buf.contains('e') && !buf.contains("inf") && !buf.contains("NaN") {
        buf.push_str(".0");
    }
    buf
}

fn ryu_like(v: f64) -> String {
    let s = format!("{v}");
    s
}

/// `distance,count` rows of the Hamming histogram.
pub fn csv_hamming_histogram(stats: &DistanceStats) -> String {
    let mut out = String::from("distance,count\n");
    for (d, c) in stats.hamming_histogram.iter().enumerate() {
        out.push_str(&format!("{d},{c}\n"));
    }
    out
}

/// `position,flips,probability` rows of the per-bit flip counts.
pub fn csv_flip_counts(stats: &DistanceStats) -> String {
    let mut out = String::from("position,flips,probability\n");
    for (j, (&l, &p)) in stats
        .flip_counts
        .iter()
        .zip(&stats.flip_distribution)
        .enumerate()
    {
        out.push_str(&format!("{j},{l},{}\n", fmt_f64(p)));
    }
    out
}

/// `value,count` rows of the hash-value occurrence histogram, values as
/// fixed-width binary strings.
pub fn csv_occurrences(histogram: &[(u64, u64)], n_modes: usize) -> String {
    let mut out = String::from("value,count\n");
    for &(v, c) in histogram {
        out.push_str(&format!("{v:0width$b},{c}\n", width = n_modes));
    }
    out
}

/// `x,mu_th,k_recommended` rows.
pub fn csv_percentiles(entries: &[crate::bench::PercentileEntry]) -> String {
    let mut out = String::from("x,mu_th,k_recommended\n");
    for e in entries {
        let k = e
            .k_recommended
            .map(|k| k.to_string())
            .unwrap_or_default();
        out.push_str(&format!("{},{},{k}\n", fmt_f64(e.x), fmt_f64(e.mu_th)));
    }
    out
}

/// One row per bin: normalized amplitude and phase frequencies for the
/// circuit ensemble and the Haar ensemble.
pub fn csv_haar_histograms(report: &OverlapReport) -> String {
    let mut out = String::from(
        "bin,circuit_amplitude,haar_amplitude,circuit_phase,haar_phase\n",
    );
    for b in 0..report.bins {
        out.push_str(&format!(
            "{b},{},{},{},{}\n",
            fmt_f64(report.circuit_amplitude_freq[b]),
            fmt_f64(report.haar_amplitude_freq[b]),
            fmt_f64(report.circuit_phase_freq[b]),
            fmt_f64(report.haar_phase_freq[b]),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_headers_serialize_identically() {
        let mut flags = BTreeMap::new();
        flags.insert("k".to_string(), "1".to_string());
        flags.insert("circuit".to_string(), "c.json".to_string());
        let a = Report::new(
            ReportHeader::new("bench confusion", flags.clone(), Some("ab".into())),
            42u32,
        );
        let b = Report::new(
            ReportHeader::new("bench confusion", flags, Some("ab".into())),
            42u32,
        );
        assert_eq!(a.to_canonical_json(), b.to_canonical_json());
        assert!(a.to_canonical_json().contains("\"schema_version\": 1"));
    }

    #[test]
    fn csv_tables_have_headers() {
        let stats = DistanceStats {
            mean_distance: 1.0,
            distance_std: 0.0,
            hamming_histogram: vec![1, 2, 1],
            flip_counts: vec![2, 2],
            flip_distribution: vec![0.5, 0.5],
            shannon_entropy: 1.0,
        };
        let h = csv_hamming_histogram(&stats);
        assert!(h.starts_with("distance,count\n"));
        assert_eq!(h.lines().count(), 4);
        let f = csv_flip_counts(&stats);
        assert!(f.contains("0,2,0.5"));
        let o = csv_occurrences(&[(5, 3)], 4);
        assert!(o.contains("0101,3"));
    }
}
