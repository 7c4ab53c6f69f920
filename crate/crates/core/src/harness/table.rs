//! Result rows, CSV output and plot data.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};

/// Tag written into every row's parameters.
pub const CODE_VERSION: &str = concat!("graphdim-", env!("CARGO_PKG_VERSION"));

pub const CSV_COLUMNS: [&str; 8] = ["experiment", "param_json", "value", "reference", "pass", "seed", "ci_low", "ci_high"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub experiment: String,
    pub param_json: String,
    pub value: f64,
    pub reference: Option<f64>,
    pub pass: bool,
    pub seed: u64,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
}

impl ResultRow {
    /// A row whose parameters are the given JSON object plus the version tag.
    pub fn new(experiment: &str, params: Value, value: f64, seed: u64) -> Self {
        let mut map = match params {
            Value::Object(m) => m,
            Value::Null => Map::new(),
            other => {
                let mut m = Map::new();
                m.insert("value".into(), other);
                m
            }
        };
        map.insert("version".into(), Value::from(CODE_VERSION));
        ResultRow {
            experiment: experiment.to_string(),
            param_json: Value::Object(map).to_string(),
            value,
            reference: None,
            pass: true,
            seed,
            ci_low: None,
            ci_high: None,
        }
    }

    pub fn reference(mut self, reference: f64, pass: bool) -> Self {
        self.reference = Some(reference);
        self.pass = pass;
        self
    }

    pub fn check(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }

    pub fn ci(mut self, (lo, hi): (f64, f64)) -> Self {
        self.ci_low = Some(lo);
        self.ci_high = Some(hi);
        self
    }
}

/// A scale series for plotting: x = n ln b, y = ln count.
#[derive(Clone, Debug, PartialEq)]
pub struct PlotSeries {
    pub label: String,
    pub base: u32,
    pub points: Vec<(u32, u64)>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
    pub series: Vec<PlotSeries>,
}

impl ResultTable {
    pub fn push(&mut self, row: ResultRow) {
        self.rows.push(row);
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn extend(&mut self, other: ResultTable) {
        self.rows.extend(other.rows);
        self.series.extend(other.series);
    }
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes the table as CSV; an empty table gives a header-only file.
pub fn write_csv<W: Write>(table: &ResultTable, out: W) -> std::result::Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for r in &table.rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(table: &ResultTable, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    write_csv(table, file).map_err(csv_err(path))
}

pub fn read_csv(path: &Path) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    r.deserialize().collect::<std::result::Result<Vec<ResultRow>, _>>().map_err(csv_err(path))
}

/// Two-column plot data, one block per series separated by a blank line.
pub fn emit_plotdata(table: &ResultTable, path: &Path, header: &[String]) -> Result<()> {
    if table.series.is_empty() {
        return Err(Error::InvalidInput("this experiment has no scale series to plot".into()));
    }
    let mut text = String::new();
    for line in header {
        text.push_str(&format!("# {line}\n"));
    }
    for (k, s) in table.series.iter().enumerate() {
        if k > 0 {
            text.push('\n');
        }
        text.push_str(&format!("# series {} (base {})\n# n*ln(base) ln(count)\n", s.label, s.base));
        for &(n, count) in &s.points {
            let x = n as f64 * (s.base as f64).ln();
            text.push_str(&format!("{x} {}\n", (count as f64).ln()));
        }
    }
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn header_only_and_single_row() {
        let mut buf = Vec::new();
        write_csv(&ResultTable::default(), &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "experiment,param_json,value,reference,pass,seed,ci_low,ci_high\n");
        let mut t = ResultTable::default();
        t.push(ResultRow::new("x", json!({"n": 3}), 1.5, 7).reference(1.5, true));
        let mut buf = Vec::new();
        write_csv(&t, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(text.lines().nth(1).unwrap().starts_with("x,\"{\"\"n\"\":3,\"\"version\"\""));
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.csv");
        let mut t = ResultTable::default();
        t.push(ResultRow::new("a", json!({}), 0.1, 1).ci((0.0, 0.2)).check(false));
        emit_csv(&t, &p).unwrap();
        assert_eq!(read_csv(&p).unwrap(), t.rows);
    }

    #[test]
    fn plot_needs_series() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("p.dat");
        assert!(emit_plotdata(&ResultTable::default(), &p, &[]).is_err());
        let t = ResultTable {
            rows: vec![],
            series: vec![PlotSeries { label: "i".into(), base: 2, points: vec![(1, 2), (2, 4)] }],
        };
        emit_plotdata(&t, &p, &["seed 1".into()]).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert!(text.starts_with("# seed 1\n"));
        assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 2);
    }
}
