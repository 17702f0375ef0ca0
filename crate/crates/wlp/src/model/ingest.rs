//! File-format ingestion: CSV tables of joint lifetime draws and JSON
//! breakpoint tables for joint cdf values at the characteristic points.

use std::io::Read;
use std::path::Path;

use serde::Deserialize;

use crate::bits;
use crate::error::{Error, Result};
use crate::model::SampleMatrix;

/// Read a sample matrix from CSV: one row per joint draw, n numeric columns,
/// optional header row. Parse failures report the 1-based row and column.
pub fn read_sample_csv<R: Read>(reader: R) -> Result<SampleMatrix> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut expected_cols: Option<usize> = None;
    for (idx, record) in rdr.records().enumerate() {
        let row_no = idx + 1;
        let record = record.map_err(|e| Error::SampleCsv {
            row: row_no,
            column: 0,
            message: e.to_string(),
        })?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let mut row = Vec::with_capacity(record.len());
        let mut failed_at: Option<(usize, String)> = None;
        for (col, field) in record.iter().enumerate() {
            match field.parse::<f64>() {
                Ok(v) if v.is_finite() => row.push(v),
                Ok(v) => {
                    failed_at = Some((col + 1, format!("non-finite value {v}")));
                    break;
                }
                Err(e) => {
                    failed_at = Some((col + 1, format!("{e} (got {field:?})")));
                    break;
                }
            }
        }
        if let Some((col, message)) = failed_at {
            // A non-numeric first row is an optional header; skip it.
            if idx == 0 && rows.is_empty() {
                continue;
            }
            return Err(Error::SampleCsv {
                row: row_no,
                column: col,
                message,
            });
        }
        if let Some(cols) = expected_cols {
            if row.len() != cols {
                return Err(Error::SampleCsv {
                    row: row_no,
                    column: row.len().min(cols) + 1,
                    message: format!("expected {cols} columns, found {}", row.len()),
                });
            }
        } else {
            expected_cols = Some(row.len());
        }
        rows.push(row);
    }
    SampleMatrix::from_rows(rows)
}

pub fn read_sample_csv_path<P: AsRef<Path>>(path: P) -> Result<SampleMatrix> {
    read_sample_csv(std::fs::File::open(path)?)
}

/// Joint cdf values F at every characteristic point: for each subset S a
/// piecewise-linear curve in y of Pr(X_i <= y for all i outside S).
///
/// Curves are linearly interpolated between breakpoints, held constant
/// outside them, and clamped to [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct JointCdfTable {
    arity: usize,
    // indexed by subset mask; each curve sorted ascending in y.
    curves: Vec<Vec<(f64, f64)>>,
}

#[derive(Debug, Deserialize)]
struct JointCdfTableFile {
    arity: usize,
    subsets: Vec<SubsetCurve>,
}

#[derive(Debug, Deserialize)]
struct SubsetCurve {
    indices: Vec<usize>,
    points: Vec<(f64, f64)>,
}

impl JointCdfTable {
    /// Build from per-mask breakpoint curves. All 2^arity curves must be
    /// present, each with ascending thresholds and nondecreasing cdf values;
    /// the full-set curve must be identically 1.
    pub fn new(arity: usize, curves: Vec<Vec<(f64, f64)>>) -> Result<Self> {
        if arity == 0 || arity > crate::lattice::MAX_ARITY {
            return Err(Error::JointCdfTable(format!(
                "arity {arity} outside 1..={}",
                crate::lattice::MAX_ARITY
            )));
        }
        if curves.len() != bits::table_len(arity) {
            return Err(Error::JointCdfTable(format!(
                "expected {} subset curves, got {}",
                bits::table_len(arity),
                curves.len()
            )));
        }
        let mut cleaned = Vec::with_capacity(curves.len());
        for (mask, curve) in curves.into_iter().enumerate() {
            let name = bits::format_subset(mask as u64);
            if curve.is_empty() {
                return Err(Error::JointCdfTable(format!(
                    "subset {name} has no breakpoints"
                )));
            }
            let mut fixed = Vec::with_capacity(curve.len());
            let mut prev_y = f64::NEG_INFINITY;
            let mut prev_f = -1.0;
            for (y, f) in curve {
                if !y.is_finite() {
                    return Err(Error::JointCdfTable(format!(
                        "subset {name}: breakpoint threshold {y} is not finite"
                    )));
                }
                if y <= prev_y {
                    return Err(Error::JointCdfTable(format!(
                        "subset {name}: thresholds must be strictly ascending at {y}"
                    )));
                }
                if !f.is_finite() || f < -JOINT_CDF_VALUE_SLACK || f > 1.0 + JOINT_CDF_VALUE_SLACK {
                    return Err(Error::JointCdfTable(format!(
                        "subset {name}: cdf value {f} outside [0, 1]"
                    )));
                }
                let f = f.clamp(0.0, 1.0);
                if f < prev_f {
                    return Err(Error::JointCdfTable(format!(
                        "subset {name}: cdf values must be nondecreasing at y = {y}"
                    )));
                }
                prev_y = y;
                prev_f = f;
                fixed.push((y, f));
            }
            cleaned.push(fixed);
        }
        let full = &cleaned[bits::table_len(arity) - 1];
        if full.iter().any(|&(_, f)| (f - 1.0).abs() > 1e-9) {
            return Err(Error::JointCdfTable(
                "the full-set curve must be identically 1 (no constrained components)".into(),
            ));
        }
        Ok(Self {
            arity,
            curves: cleaned,
        })
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: JointCdfTableFile = serde_json::from_str(text)?;
        Self::from_file(file)
    }

    pub fn from_json_reader<R: Read>(reader: R) -> Result<Self> {
        let file: JointCdfTableFile = serde_json::from_reader(reader)?;
        Self::from_file(file)
    }

    fn from_file(file: JointCdfTableFile) -> Result<Self> {
        if file.arity == 0 || file.arity > crate::lattice::MAX_ARITY {
            return Err(Error::JointCdfTable(format!(
                "arity {} outside 1..={}",
                file.arity,
                crate::lattice::MAX_ARITY
            )));
        }
        let len = bits::table_len(file.arity);
        let mut curves: Vec<Option<Vec<(f64, f64)>>> = vec![None; len];
        for subset in file.subsets {
            let mut mask = 0u64;
            let mut prev = 0usize;
            for &i in &subset.indices {
                if i == 0 || i > file.arity {
                    return Err(Error::JointCdfTable(format!(
                        "subset index {i} outside 1..={}",
                        file.arity
                    )));
                }
                if i <= prev {
                    return Err(Error::JointCdfTable(format!(
                        "subset indices must be strictly ascending, got {:?}",
                        subset.indices
                    )));
                }
                prev = i;
                mask |= 1 << (i - 1);
            }
            if curves[mask as usize].is_some() {
                return Err(Error::JointCdfTable(format!(
                    "subset {} listed twice",
                    bits::format_subset(mask)
                )));
            }
            curves[mask as usize] = Some(subset.points);
        }
        let mut complete = Vec::with_capacity(len);
        for (mask, curve) in curves.into_iter().enumerate() {
            match curve {
                Some(c) => complete.push(c),
                None => {
                    return Err(Error::JointCdfTable(format!(
                        "subset {} is missing",
                        bits::format_subset(mask as u64)
                    )))
                }
            }
        }
        Self::new(file.arity, complete)
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Interpolated F(characteristic point of `mask`) at threshold y.
    pub fn evaluate(&self, mask: u64, y: f64) -> f64 {
        let curve = &self.curves[mask as usize];
        let first = curve[0];
        let last = curve[curve.len() - 1];
        if y <= first.0 {
            return first.1;
        }
        if y >= last.0 {
            return last.1;
        }
        let hi = curve.partition_point(|&(py, _)| py < y);
        let (y0, f0) = curve[hi - 1];
        let (y1, f1) = curve[hi];
        let t = (y - y0) / (y1 - y0);
        (f0 + t * (f1 - f0)).clamp(0.0, 1.0)
    }
}

const JOINT_CDF_VALUE_SLACK: f64 = 1e-9;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn csv_basic_and_header() {
        let text = "x1,x2\n1.0,2.0\n3.5,4.5\n";
        let m = read_sample_csv(text.as_bytes()).unwrap();
        assert_eq!(m.rows(), 2);
        assert_eq!(m.row(1), &[3.5, 4.5]);

        let headerless = "1.0,2.0\n3.5,4.5\n";
        let m2 = read_sample_csv(headerless.as_bytes()).unwrap();
        assert_eq!(m2.rows(), 2);
    }

    #[test]
    fn csv_error_reports_row_and_column() {
        let text = "1.0,2.0\n3.5,oops\n";
        match read_sample_csv(text.as_bytes()) {
            Err(Error::SampleCsv { row, column, .. }) => {
                assert_eq!((row, column), (2, 2));
            }
            other => panic!("expected csv error, got {other:?}"),
        }
    }

    #[test]
    fn csv_ragged_rows_rejected() {
        let text = "1.0,2.0\n3.5\n";
        assert!(matches!(
            read_sample_csv(text.as_bytes()),
            Err(Error::SampleCsv { row: 2, .. })
        ));
    }

    fn demo_table_json() -> &'static str {
        r#"{
            "arity": 2,
            "subsets": [
                {"indices": [], "points": [[0.0, 0.0], [1.0, 0.5], [2.0, 1.0]]},
                {"indices": [1], "points": [[0.0, 0.0], [2.0, 1.0]]},
                {"indices": [2], "points": [[0.0, 0.0], [2.0, 1.0]]},
                {"indices": [1, 2], "points": [[0.0, 1.0]]}
            ]
        }"#
    }

    #[test]
    fn table_json_round_trip_and_interpolation() {
        let t = JointCdfTable::from_json_str(demo_table_json()).unwrap();
        assert_eq!(t.arity(), 2);
        assert_eq!(t.evaluate(0b00, -1.0), 0.0);
        assert!((t.evaluate(0b00, 0.5) - 0.25).abs() < 1e-12);
        assert_eq!(t.evaluate(0b00, 5.0), 1.0);
        assert_eq!(t.evaluate(0b11, 1.0), 1.0);
    }

    #[test]
    fn table_json_missing_subset_rejected() {
        let text = r#"{
            "arity": 2,
            "subsets": [
                {"indices": [], "points": [[0.0, 0.0]]},
                {"indices": [1], "points": [[0.0, 0.0]]},
                {"indices": [1, 2], "points": [[0.0, 1.0]]}
            ]
        }"#;
        assert!(matches!(
            JointCdfTable::from_json_str(text),
            Err(Error::JointCdfTable(msg)) if msg.contains("{2}")
        ));
    }

    #[test]
    fn table_rejects_decreasing_cdf() {
        let curves = vec![
            vec![(0.0, 0.5), (1.0, 0.2)],
            vec![(0.0, 0.0)],
            vec![(0.0, 0.0)],
            vec![(0.0, 1.0)],
        ];
        assert!(JointCdfTable::new(2, curves).is_err());
    }
}
