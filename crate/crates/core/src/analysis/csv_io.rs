use std::fs::File;
use std::io::Write;
use std::path::Path;

use crate::dynamics::Trajectory;
use crate::error::{Error, Result};

/// Formats with 15 significant digits.
pub(crate) fn fmt_num(v: f64) -> String {
    format!("{v:.14e}")
}

fn writer(path: &Path) -> Result<csv::Writer<File>> {
    let file = File::create(path).map_err(|e| Error::from(e).in_file(path))?;
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(file))
}

pub(crate) fn write_records<I, R>(path: &Path, header: &[&str], records: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = writer(path)?;
    w.write_record(header)?;
    for record in records {
        w.write_record(record)?;
    }
    w.flush()?;
    Ok(())
}

/// Per-node file: header `t,<label1>,<label2>,...`.
pub fn write_trajectory_csv(path: &Path, trajectory: &Trajectory, labels: &[String]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(std::iter::once("t").chain(labels.iter().map(String::as_str)))?;
    for (t, row) in trajectory.times.iter().zip(&trajectory.values) {
        w.write_record(std::iter::once(fmt_num(*t)).chain(row.iter().map(|&v| fmt_num(v))))?;
    }
    w.flush()?;
    Ok(())
}

/// Single-series file: header `t,<column>`.
pub fn write_curve_csv(path: &Path, times: &[f64], values: &[f64], column: &str) -> Result<()> {
    write_records(
        path,
        &["t", column],
        times
            .iter()
            .zip(values)
            .map(|(t, v)| [fmt_num(*t), fmt_num(*v)]),
    )
}

/// Numeric CSV table read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.headers.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }
}

pub fn read_csv_columns(path: &Path) -> Result<CsvTable> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| Error::from(e).in_file(path))?;
    let headers = reader.headers()?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let record = record?;
        let row = record
            .iter()
            .map(|field| {
                field
                    .parse::<f64>()
                    .map_err(|e| Error::load(k + 2, format!("`{field}`: {e}")).in_file(path))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(CsvTable { headers, rows })
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut file = File::create(path).map_err(|e| Error::from(e).in_file(path))?;
    file.write_all(text.as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_significant_digits() {
        assert_eq!(fmt_num(1.0), "1.00000000000000e0");
        assert_eq!(fmt_num(-0.00012345678901234567), "-1.23456789012346e-4");
        let back: f64 = fmt_num(std::f64::consts::PI).parse().unwrap();
        assert!((back - std::f64::consts::PI).abs() < 1e-14);
    }
}
