//! CSV/JSON formats written and read by the `qwalk` commands.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::analysis::MomentSeries;
use crate::config::WalkConfig;
use crate::error::{Error, Result};
use crate::state::InitialState;
use crate::stochastic::DistributionSeries;

pub const DISTRIBUTIONS_FILE: &str = "distributions.csv";
pub const MOMENTS_FILE: &str = "moments.csv";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const REPORT_FILE: &str = "report.json";
pub const VERIFY_FILE: &str = "verify.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CsvFormat {
    /// One `t,x,p` row per site and time.
    #[default]
    Long,
    /// One row per time, one column per site.
    Wide,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub config: WalkConfig,
    pub init: InitialState,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alpha: Option<f64>,
    pub format: CsvFormat,
    pub max_norm_error: f64,
    pub duration_seconds: f64,
    pub outputs: Vec<String>,
}

/// Shortest text that parses back to the same `f64`.
pub fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn distributions_csv(series: &DistributionSeries, format: CsvFormat) -> String {
    let d = series.d();
    let mut out = String::with_capacity(series.values().len() * 24);
    match format {
        CsvFormat::Long => {
            out.push_str("t,x,p\n");
            for (t, row) in series.rows().enumerate() {
                for (x, p) in row.iter().enumerate() {
                    let _ = writeln!(out, "{t},{x},{}", fmt_f64(*p));
                }
            }
        }
        CsvFormat::Wide => {
            out.push('t');
            for x in 0..d {
                let _ = write!(out, ",{x}");
            }
            out.push('\n');
            for (t, row) in series.rows().enumerate() {
                let _ = write!(out, "{t}");
                for p in row {
                    let _ = write!(out, ",{}", fmt_f64(*p));
                }
                out.push('\n');
            }
        }
    }
    out
}

pub fn moments_csv(moments: &MomentSeries) -> String {
    let mut out = String::from("t,mean_displacement,variance\n");
    for i in 0..moments.len() {
        let _ = writeln!(
            out,
            "{},{},{}",
            moments.t[i],
            fmt_f64(moments.mean_displacement[i]),
            fmt_f64(moments.variance[i])
        );
    }
    out
}

fn parse_field<T: std::str::FromStr>(s: &str, line: usize, what: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("line {line}: bad {what} `{s}`")))
}

/// Reads either CSV layout back; rows must be complete and ordered by `(t, x)`.
pub fn parse_distributions(text: &str) -> Result<DistributionSeries> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header.first().map(String::as_str) != Some("t") {
        return Err(Error::Parse(format!("unexpected header {header:?}")));
    }
    let mut values = Vec::new();
    let d;
    if header == ["t", "x", "p"] {
        let mut rows = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let line = i + 2;
            if rec.len() != 3 {
                return Err(Error::Parse(format!("line {line}: expected 3 fields")));
            }
            let t: usize = parse_field(&rec[0], line, "t")?;
            let x: usize = parse_field(&rec[1], line, "x")?;
            rows.push((t, x, parse_field::<f64>(&rec[2], line, "p")?));
        }
        d = rows.iter().take_while(|r| r.0 == 0).count();
        for (i, &(t, x, p)) in rows.iter().enumerate() {
            if t != i / d.max(1) || x != i % d.max(1) {
                return Err(Error::Parse(format!(
                    "line {}: rows must be sorted by (t, x) and complete",
                    i + 2
                )));
            }
            values.push(p);
        }
        if d > 0 && values.len() % d != 0 {
            return Err(Error::Parse("incomplete final time slice".into()));
        }
    } else {
        d = header.len() - 1;
        for (x, h) in header[1..].iter().enumerate() {
            if h.parse::<usize>().ok() != Some(x) {
                return Err(Error::Parse(format!(
                    "wide header column {} is `{h}`, expected {x}",
                    x + 1
                )));
            }
        }
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let line = i + 2;
            if rec.len() != d + 1 {
                return Err(Error::Parse(format!(
                    "line {line}: expected {} fields",
                    d + 1
                )));
            }
            if parse_field::<usize>(&rec[0], line, "t")? != i {
                return Err(Error::Parse(format!(
                    "line {line}: rows must be sorted by t"
                )));
            }
            for v in rec.iter().skip(1) {
                values.push(parse_field(v, line, "p")?);
            }
        }
    }
    if values.is_empty() {
        return Err(Error::Parse("no data rows".into()));
    }
    DistributionSeries::new(d, values)
}

pub fn read_distributions(path: &Path) -> Result<DistributionSeries> {
    parse_distributions(&fs::read_to_string(path)?)
}

pub fn read_manifest(path: &Path) -> Result<RunManifest> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn series() -> DistributionSeries {
        DistributionSeries::new(
            3,
            vec![
                1.0,
                0.0,
                0.0,
                0.25,
                0.5,
                0.25,
                0.1,
                0.2 + 1e-17,
                0.7 - 1e-17,
            ],
        )
        .unwrap()
    }

    #[test]
    fn long_layout() {
        let s = distributions_csv(&series(), CsvFormat::Long);
        let mut lines = s.lines();
        assert_eq!(lines.next(), Some("t,x,p"));
        assert_eq!(lines.next(), Some("0,0,1"));
        assert_eq!(s.lines().count(), 10);
        assert_eq!(parse_distributions(&s).unwrap(), series());
    }

    #[test]
    fn wide_layout() {
        let s = distributions_csv(&series(), CsvFormat::Wide);
        assert!(s.starts_with("t,0,1,2\n0,1,0,0\n"));
        assert_eq!(parse_distributions(&s).unwrap(), series());
    }

    #[test]
    fn single_time_slice() {
        let one = DistributionSeries::new(2, vec![0.5, 0.5]).unwrap();
        for f in [CsvFormat::Long, CsvFormat::Wide] {
            assert_eq!(
                parse_distributions(&distributions_csv(&one, f)).unwrap(),
                one
            );
        }
    }

    #[test]
    fn malformed_input() {
        assert!(parse_distributions("a,b\n1,2\n").is_err());
        assert!(parse_distributions("t,x,p\n0,0,0.5\n0,2,0.5\n").is_err());
        assert!(parse_distributions("t,x,p\n0,0,0.5\n0,1,0.5\n1,0,1\n").is_err());
        assert!(parse_distributions("t,x,p\n0,0,abc\n").is_err());
        assert!(parse_distributions("t,0,1\n0,0.5\n").is_err());
        assert!(parse_distributions("t,x,p\n").is_err());
    }

    #[test]
    fn number_format() {
        assert_eq!(fmt_f64(0.0), "0");
        assert_eq!(fmt_f64(0.25), "0.25");
        assert_eq!(fmt_f64(1e-20), "1e-20");
        assert_eq!(fmt_f64(-3.5e-7), "-3.5e-7");
    }

    proptest! {
        #[test]
        fn floats_round_trip(v in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            prop_assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
    }
}
