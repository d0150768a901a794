//! Report assembly: every command's output is a list of named tables
//! rendered to CSV or to a versioned JSON envelope, written atomically.
//!
//! Rendering is fully deterministic: cells carry typed values with a single
//! textual form each (rationals as "p/q", floats in shortest round-trip
//! form, arbitrary-precision counts in decimal), and assembly order is the
//! caller's insertion order.

use std::fmt;
use std::fs;
use std::path::Path;

use num_bigint::BigUint;

use crate::density::{DensityReport, FrequencyTable, Rat};
use crate::chaos::DistributionProfile;
use crate::shiftspace::EntropyEstimate;
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Result<Format> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!(
                "unknown format {other:?}; expected csv or json"
            ))),
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Nat(u64),
    /// Decimal-rendered arbitrary-precision count; a string in JSON so the
    /// column type is horizon-independent.
    Count(BigUint),
    Float(f64),
    Rat(Rat),
    Bool(bool),
    Text(String),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Nat(v) => write!(f, "{v}"),
            Cell::Count(v) => write!(f, "{v}"),
            Cell::Float(v) => write!(f, "{v}"),
            Cell::Rat(v) => write!(f, "{}/{}", v.numer(), v.denom()),
            Cell::Bool(v) => write!(f, "{v}"),
            Cell::Text(v) => write!(f, "{v}"),
        }
    }
}

impl Cell {
    fn to_json(&self) -> serde_json::Value {
        match self {
            Cell::Int(v) => (*v).into(),
            Cell::Nat(v) => (*v).into(),
            Cell::Count(_) | Cell::Rat(_) => self.to_string().into(),
            Cell::Float(v) => {
                serde_json::Number::from_f64(*v).map_or(serde_json::Value::Null, Into::into)
            }
            Cell::Bool(v) => (*v).into(),
            Cell::Text(v) => v.clone().into(),
        }
    }

    /// Rationals that may be absent render as an empty text cell.
    pub fn opt_rat(r: Option<Rat>) -> Cell {
        r.map_or_else(|| Cell::Text(String::new()), Cell::Rat)
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub name: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: Vec<&'static str>) -> Table {
        Table {
            name: name.into(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row arity mismatch in {}", self.name);
        self.rows.push(row);
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    /// Config echo in insertion order; rendered as a JSON object.
    pub meta: Vec<(String, String)>,
    pub tables: Vec<Table>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Report {
        Report {
            command: command.into(),
            meta: Vec::new(),
            tables: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: impl Into<String>, value: impl fmt::Display) {
        self.meta.push((key.into(), value.to_string()));
    }

    pub fn push(&mut self, table: Table) {
        self.tables.push(table);
    }

    /// CSV form: tables in order, each as header plus rows. With several
    /// tables each is introduced by a single-field "table:NAME" record and
    /// separated by a blank line; a lone table is a plain flat file.
    pub fn to_csv_bytes(&self) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        let many = self.tables.len() > 1;
        for (i, t) in self.tables.iter().enumerate() {
            if i > 0 {
                out.push(b'\n');
            }
            let mut w = csv::WriterBuilder::new()
                .flexible(true)
                .from_writer(Vec::new());
            if many {
                w.write_record([format!("table:{}", t.name)])
                    .map_err(csv_err)?;
            }
            w.write_record(&t.columns).map_err(csv_err)?;
            for row in &t.rows {
                w.write_record(row.iter().map(Cell::to_string)).map_err(csv_err)?;
            }
            out.extend(w.into_inner().map_err(|e| csv_err(e.into_error().into()))?);
        }
        Ok(out)
    }

    pub fn to_json_bytes(&self) -> Result<Vec<u8>> {
        let mut meta = serde_json::Map::new();
        for (k, v) in &self.meta {
            meta.insert(k.clone(), v.clone().into());
        }
        let tables: Vec<serde_json::Value> = self
            .tables
            .iter()
            .map(|t| {
                serde_json::json!({
                    "name": t.name,
                    "columns": t.columns,
                    "rows": t.rows.iter()
                        .map(|row| row.iter().map(Cell::to_json).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                })
            })
            .collect();
        let envelope = serde_json::json!({
            "schema": SCHEMA_VERSION,
            "command": self.command,
            "meta": meta,
            "tables": tables,
        });
        let mut bytes = serde_json::to_vec_pretty(&envelope)
            .map_err(|e| Error::Config(format!("json rendering failed: {e}")))?;
        bytes.push(b'\n');
        Ok(bytes)
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>> {
        match format {
            Format::Csv => self.to_csv_bytes(),
            Format::Json => self.to_json_bytes(),
        }
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Config(format!("csv rendering failed: {e}"))
}

/// Writes via a sibling temp file and rename, so a failed run never leaves a
/// partial report at the target path.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty());
    let name = path
        .file_name()
        .ok_or_else(|| Error::Config(format!("not a writable path: {}", path.display())))?;
    let tmp = dir
        .unwrap_or_else(|| Path::new("."))
        .join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    fs::write(&tmp, bytes)?;
    if let Err(e) = fs::rename(&tmp, path) {
        let _ = fs::remove_file(&tmp);
        return Err(e.into());
    }
    Ok(())
}

pub fn write_report(path: &Path, format: Format, report: &Report) -> Result<()> {
    write_atomic(path, &report.render(format)?)
}

pub fn entropy_table(est: &EntropyEstimate) -> Table {
    let mut t = Table::new("entropy", vec!["n", "count", "estimate", "running_inf"]);
    for r in &est.rows {
        t.push_row(vec![
            Cell::Nat(r.n.into()),
            Cell::Count(r.count.clone()),
            Cell::Float(r.estimate),
            Cell::Float(r.running_inf),
        ]);
    }
    t
}

pub fn frequency_table(tbl: &FrequencyTable) -> Table {
    let mut t = Table::new(
        format!("frequency_{}", tbl.a),
        vec!["k", "count", "ratio"],
    );
    for r in &tbl.rows {
        t.push_row(vec![
            Cell::Nat(r.k.into()),
            Cell::Nat(r.count),
            Cell::Rat(r.ratio),
        ]);
    }
    t
}

pub fn density_table(rep: &DensityReport) -> Table {
    let mut t = Table::new(
        "density",
        vec!["horizon", "shnirelman", "exact", "lower", "upper", "asymptotic"],
    );
    t.push_row(vec![
        Cell::Nat(rep.horizon),
        Cell::Rat(rep.shnirelman),
        Cell::Bool(rep.exact),
        Cell::Rat(rep.lower),
        Cell::Rat(rep.upper),
        Cell::opt_rat(rep.asymptotic),
    ]);
    t
}

pub fn profile_table(name: impl Into<String>, p: &DistributionProfile) -> Table {
    let mut t = Table::new(name, vec!["k", "lower", "upper"]);
    for r in &p.rows {
        t.push_row(vec![
            Cell::Nat(r.k.into()),
            Cell::Rat(r.lower),
            Cell::Rat(r.upper),
        ]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shiftspace::{entropy_estimate, golden_mean};
    use crate::Config;

    fn sample() -> Report {
        let mut r = Report::new("entropy");
        r.meta("spec", "golden-mean");
        r.meta("nmax", 3);
        let mut t = Table::new("entropy", vec!["n", "ratio", "ok"]);
        t.push_row(vec![Cell::Nat(1), Cell::Rat(Rat::new(1, 2)), Cell::Bool(true)]);
        t.push_row(vec![Cell::Nat(2), Cell::Rat(Rat::new(5, 1)), Cell::Bool(false)]);
        r.push(t);
        r
    }

    #[test]
    fn csv_single_table_is_flat() {
        let bytes = sample().to_csv_bytes().unwrap();
        assert_eq!(
            String::from_utf8(bytes).unwrap(),
            "n,ratio,ok\n1,1/2,true\n2,5/1,false\n"
        );
    }

    #[test]
    fn csv_multi_table_marks_sections() {
        let mut r = sample();
        let mut extra = Table::new("verdicts", vec!["suite", "pass"]);
        extra.push_row(vec![Cell::Text("nesting".into()), Cell::Bool(true)]);
        r.push(extra);
        let text = String::from_utf8(r.to_csv_bytes().unwrap()).unwrap();
        assert_eq!(
            text,
            "table:entropy\nn,ratio,ok\n1,1/2,true\n2,5/1,false\n\n\
             table:verdicts\nsuite,pass\nnesting,true\n"
        );
    }

    #[test]
    fn json_envelope_shape() {
        let bytes = sample().to_json_bytes().unwrap();
        let v: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["command"], "entropy");
        assert_eq!(v["meta"]["spec"], "golden-mean");
        assert_eq!(v["meta"]["nmax"], "3");
        assert_eq!(v["tables"][0]["rows"][0][1], "1/2");
        assert_eq!(v["tables"][0]["rows"][0][2], true);
        assert_eq!(v["tables"][0]["rows"][1][0], 2);
    }

    #[test]
    fn cell_text_forms() {
        assert_eq!(Cell::Rat(Rat::new(2, 4)).to_string(), "1/2");
        assert_eq!(Cell::Float(0.6942419136306174).to_string(), "0.6942419136306174");
        assert_eq!(Cell::Count(BigUint::from(1u8) << 80).to_string(), "1208925819614629174706176");
        assert_eq!(Cell::opt_rat(None).to_string(), "");
    }

    #[test]
    fn entropy_conversion_keeps_rows() {
        let est = entropy_estimate(&golden_mean(), 6, &Config::default()).unwrap();
        let t = entropy_table(&est);
        assert_eq!(t.rows.len(), 6);
        assert_eq!(t.rows[5][1], Cell::Count(21u32.into()));
    }

    #[test]
    fn atomic_write_replaces_whole_file() {
        let dir = std::env::temp_dir().join(format!("report-test-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("out.csv");
        write_atomic(&path, b"first\n").unwrap();
        write_atomic(&path, b"second\n").unwrap();
        assert_eq!(fs::read(&path).unwrap(), b"second\n");
        let leftovers: Vec<_> = fs::read_dir(&dir)
            .unwrap()
            .filter_map(|e| e.ok())
            .filter(|e| e.file_name().to_string_lossy().contains("tmp"))
            .collect();
        assert!(leftovers.is_empty(), "temp files must not survive");
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    #[should_panic(expected = "row arity mismatch")]
    fn arity_is_enforced() {
        let mut t = Table::new("t", vec!["a", "b"]);
        t.push_row(vec![Cell::Nat(1)]);
    }
}
