//! File ingestion and emission: numeric CSV matrices and 0/1 label files.

use sigclust::{DataMatrix, Error, Partition, Result};
use std::path::Path;

/// Reads a comma-separated numeric matrix, one observation per row.
/// `has_header` skips the first line.
pub fn read_data_csv(path: &Path, has_header: bool) -> Result<DataMatrix> {
    let text = std::fs::read_to_string(path)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width: Option<usize> = None;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if idx == 0 && has_header {
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for field in line.split(',') {
            let value: f64 = field.trim().parse().map_err(|_| Error::CsvParse {
                line: line_no,
                message: format!("cannot parse '{}' as a number", field.trim()),
            })?;
            row.push(value);
        }
        if let Some(w) = width {
            if row.len() != w {
                return Err(Error::CsvParse {
                    line: line_no,
                    message: format!("expected {w} fields, found {}", row.len()),
                });
            }
        } else {
            width = Some(row.len());
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::CsvParse { line: 1, message: "no data rows".into() });
    }
    DataMatrix::from_rows(&rows)
}

/// Reads one integer label (0/1) per line; must match `n` lines.
pub fn read_labels(path: &Path, n: usize) -> Result<Partition> {
    let text = std::fs::read_to_string(path)?;
    let mut labels = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let label: u8 = trimmed.parse().map_err(|_| Error::CsvParse {
            line: idx + 1,
            message: format!("cannot parse label '{trimmed}'"),
        })?;
        labels.push(label);
    }
    if labels.len() != n {
        return Err(Error::invalid(format!(
            "label file has {} labels but the data has {n} observations",
            labels.len()
        )));
    }
    Partition::from_labels(labels)
}

pub fn write_data_csv(path: &Path, data: &DataMatrix) -> Result<()> {
    let mut out = String::new();
    for i in 0..data.n() {
        let row: Vec<String> = data.row(i).iter().map(|v| format!("{v}")).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn write_labels(path: &Path, part: &Partition) -> Result<()> {
    let mut out = String::new();
    for &l in part.labels() {
        out.push_str(&format!("{l}\n"));
    }
    std::fs::write(path, out)?;
    Ok(())
}
