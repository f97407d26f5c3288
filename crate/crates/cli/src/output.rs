//! CSV and report serialisation.
//!
//! Numbers are written in plain decimal notation with 15 significant digits
//! so that outputs are byte-stable and diff-able.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use qwalk_core::{PositionDistribution, SummarySeries};

use crate::CliError;

pub const SUMMARY_HEADER: &str = "t,mean_x,sigma,p0";
pub const SNAPSHOT_HEADER: &str = "x,p";
pub const REPORT_SCHEMA: &str = "qwalk-report/1";

/// Decimal rendering with 15 significant digits. Zero (of either sign) is `0`.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    // The exponent after rounding to 15 significant digits decides how many
    // decimals remain.
    let sci = format!("{v:.14e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    let decimals = (14 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

pub fn summary_csv(series: &SummarySeries) -> String {
    let mut out = String::with_capacity(64 * series.len());
    out.push_str(SUMMARY_HEADER);
    out.push('\n');
    for i in 0..series.len() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            series.steps[i],
            fmt_num(series.mean_x[i]),
            fmt_num(series.sigma[i]),
            fmt_num(series.p0[i])
        );
    }
    out
}

pub fn snapshot_csv(d: &PositionDistribution) -> String {
    let mut out = String::with_capacity(32 * d.probs().len());
    out.push_str(SNAPSHOT_HEADER);
    out.push('\n');
    for (x, p) in d.iter() {
        let _ = writeln!(out, "{x},{}", fmt_num(p));
    }
    out
}

/// Column-oriented table: a leading integer key column followed by one
/// float column per series. Missing entries are written as empty fields.
pub fn wide_csv(key: &str, keys: &[i64], columns: &[(String, Vec<f64>)]) -> String {
    let mut out = String::new();
    out.push_str(key);
    for (name, _) in columns {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for (row, k) in keys.iter().enumerate() {
        let _ = write!(out, "{k}");
        for (_, values) in columns {
            out.push(',');
            if let Some(v) = values.get(row) {
                out.push_str(&fmt_num(*v));
            }
        }
        out.push('\n');
    }
    out
}

/// Plain `key = value` report grouped in `[sections]`, TOML-compatible.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Report {
    sections: Vec<(String, Vec<(String, String)>)>,
}

impl Report {
    pub fn new() -> Self {
        let mut r = Self::default();
        r.section("");
        r.text("schema", REPORT_SCHEMA);
        r
    }

    pub fn section(&mut self, name: &str) -> &mut Self {
        self.sections.push((name.to_string(), Vec::new()));
        self
    }

    fn push(&mut self, key: &str, value: String) -> &mut Self {
        self.sections
            .last_mut()
            .expect("report always has a section")
            .1
            .push((key.to_string(), value));
        self
    }

    pub fn text(&mut self, key: &str, value: &str) -> &mut Self {
        let escaped = value.replace('\\', "\\\\").replace('"', "\\\"");
        self.push(key, format!("\"{escaped}\""))
    }

    pub fn num(&mut self, key: &str, value: f64) -> &mut Self {
        self.push(key, fmt_num(value))
    }

    pub fn int(&mut self, key: &str, value: usize) -> &mut Self {
        self.push(key, value.to_string())
    }

    pub fn flag(&mut self, key: &str, value: bool) -> &mut Self {
        self.push(key, value.to_string())
    }

    /// Value stored under `section.key`, as written.
    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.sections
            .iter()
            .filter(|(s, _)| s == section)
            .flat_map(|(_, kv)| kv.iter())
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (name, entries) in &self.sections {
            if !name.is_empty() {
                let _ = writeln!(out, "\n[{name}]");
            }
            for (k, v) in entries {
                let _ = writeln!(out, "{k} = {v}");
            }
        }
        out
    }
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

pub fn ensure_dir(path: &Path) -> Result<(), CliError> {
    fs::create_dir_all(path).map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_significant_digits() {
        assert_eq!(fmt_num(0.5), "0.500000000000000");
        assert_eq!(fmt_num(1.0), "1.00000000000000");
        assert_eq!(fmt_num(216.479618800257), "216.479618800257");
        assert_eq!(fmt_num(-3.0), "-3.00000000000000");
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(-0.0), "0");
        assert_eq!(fmt_num(1.5e-5), "0.0000150000000000000");
        assert_eq!(fmt_num(1e20), "100000000000000000000");
        // Rounding that carries into a new digit keeps 15 significant digits.
        assert_eq!(fmt_num(9.9999999999999999), "10.0000000000000");
        assert_eq!(fmt_num(0.99999999999999999), "1.00000000000000");
    }

    #[test]
    fn csv_layouts() {
        let d = PositionDistribution::from_points(&[(-1, 0.5), (1, 0.5)]);
        assert_eq!(
            snapshot_csv(&d),
            "x,p\n-1,0.500000000000000\n0,0\n1,0.500000000000000\n"
        );
        let wide = wide_csv(
            "t",
            &[0, 1],
            &[("a".into(), vec![1.0, 2.0]), ("b".into(), vec![0.5])],
        );
        assert_eq!(
            wide,
            "t,a,b\n0,1.00000000000000,0.500000000000000\n1,2.00000000000000,\n"
        );
    }

    #[test]
    fn report_rendering() {
        let mut r = Report::new();
        r.text("geometry", "IB \"N\"=7").int("steps", 400);
        r.section("localization")
            .num("ratio", 2.0)
            .flag("localized", false);
        let text = r.render();
        assert!(text.starts_with("schema = \"qwalk-report/1\"\n"));
        assert!(text.contains("geometry = \"IB \\\"N\\\"=7\"\n"));
        assert!(text.contains("\n[localization]\nratio = 2.00000000000000\nlocalized = false\n"));
        assert_eq!(r.get("localization", "localized"), Some("false"));
        assert_eq!(r.get("", "steps"), Some("400"));
        assert_eq!(r.get("slope", "steps"), None);
    }
}
