//! CSV ingestion and export.
//!
//! Format: comma-separated, mandatory header row, '.' decimal point, UTF-8.
//! Every non-label column must be numeric. For classification tasks the
//! label column is mapped to the declared label encoding by sorted
//! distinct-value order (numeric order when every distinct value parses as
//! a number, lexicographic otherwise): binary maps the two values to -1/+1,
//! multiclass maps K values to class indices 0..K-1.

use std::path::Path;

use crate::data::{Dataset, Example, Task};
use crate::error::{Error, Result};

/// Read a dataset from `path`, taking `label_column` as the target.
pub fn load_csv(path: &Path, label_column: &str, task: Task) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Csv(format!("{}: {e}", path.display())))?;

    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Csv(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    if headers.is_empty() {
        return Err(Error::Csv(format!("{}: empty file", path.display())));
    }
    let label_idx = headers
        .iter()
        .position(|h| h == label_column)
        .ok_or_else(|| Error::LabelColumnNotFound(label_column.to_string()))?;
    let feature_columns: Vec<usize> = (0..headers.len()).filter(|&c| c != label_idx).collect();
    if feature_columns.is_empty() {
        return Err(Error::Csv("no feature columns besides the label".into()));
    }

    let mut xs: Vec<Vec<f64>> = Vec::new();
    let mut raw_labels: Vec<String> = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let row = row_idx + 1; // 1-based data-row number
        let record = record.map_err(|e| Error::Csv(format!("row {row}: {e}")))?;
        if record.len() != headers.len() {
            return Err(Error::Csv(format!(
                "row {row}: expected {} fields, got {}",
                headers.len(),
                record.len()
            )));
        }
        let mut x = Vec::with_capacity(feature_columns.len());
        for &c in &feature_columns {
            let cell = &record[c];
            let v: f64 = cell.parse().map_err(|_| Error::CsvCell {
                row,
                column: headers[c].clone(),
                reason: format!("non-numeric value '{cell}'"),
            })?;
            if !v.is_finite() {
                return Err(Error::CsvCell {
                    row,
                    column: headers[c].clone(),
                    reason: format!("non-finite value '{cell}'"),
                });
            }
            x.push(v);
        }
        xs.push(x);
        raw_labels.push(record[label_idx].to_string());
    }
    if xs.is_empty() {
        return Err(Error::EmptyDataset(format!(
            "{}: no data rows after the header",
            path.display()
        )));
    }

    let ys = encode_labels(&raw_labels, label_column, task, label_idx, &headers)?;
    let examples = xs
        .into_iter()
        .zip(ys)
        .map(|(x, y)| Example::new(x, y))
        .collect();
    Dataset::new(examples, task)
}

fn encode_labels(
    raw: &[String],
    label_column: &str,
    task: Task,
    label_idx: usize,
    headers: &[String],
) -> Result<Vec<f64>> {
    match task {
        Task::Regression => raw
            .iter()
            .enumerate()
            .map(|(i, s)| {
                s.parse::<f64>().map_err(|_| Error::CsvCell {
                    row: i + 1,
                    column: headers[label_idx].clone(),
                    reason: format!("non-numeric regression label '{s}'"),
                })
            })
            .collect(),
        Task::Binary | Task::Multiclass => {
            let mut distinct: Vec<String> = Vec::new();
            for s in raw {
                if !distinct.contains(s) {
                    distinct.push(s.clone());
                }
            }
            sort_distinct_values(&mut distinct);
            if task == Task::Binary && distinct.len() != 2 {
                return Err(Error::BinaryLabelCount {
                    column: label_column.to_string(),
                    found: distinct.len(),
                });
            }
            let encode = |pos: usize| -> f64 {
                match task {
                    Task::Binary => {
                        if pos == 0 {
                            -1.0
                        } else {
                            1.0
                        }
                    }
                    _ => pos as f64,
                }
            };
            Ok(raw
                .iter()
                .map(|s| encode(distinct.iter().position(|d| d == s).unwrap()))
                .collect())
        }
    }
}

/// Numeric order when every value parses as a number, else lexicographic.
fn sort_distinct_values(values: &mut [String]) {
    let numeric: Option<Vec<f64>> = values.iter().map(|s| s.parse::<f64>().ok()).collect();
    match numeric {
        Some(nums) => {
            let mut paired: Vec<(f64, String)> =
                nums.into_iter().zip(values.iter().cloned()).collect();
            paired.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            for (slot, (_, s)) in values.iter_mut().zip(paired) {
                *slot = s;
            }
        }
        None => values.sort(),
    }
}

/// Write `data` as CSV with feature headers `f1..fd` and a `label` column.
/// Values use Rust's shortest round-trip float formatting, so output is
/// byte-deterministic.
pub fn save_csv(data: &Dataset, path: &Path) -> Result<()> {
    let mut writer =
        csv::Writer::from_path(path).map_err(|e| Error::Csv(format!("{}: {e}", path.display())))?;
    let mut header: Vec<String> = (1..=data.dim()).map(|i| format!("f{i}")).collect();
    header.push("label".to_string());
    writer
        .write_record(&header)
        .map_err(|e| Error::Csv(e.to_string()))?;
    for e in data.iter() {
        let mut record: Vec<String> = e.x.iter().map(|v| format!("{v}")).collect();
        record.push(format!("{}", e.y));
        writer
            .write_record(&record)
            .map_err(|e| Error::Csv(e.to_string()))?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_tmp(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f.flush().unwrap();
        f
    }

    #[test]
    fn three_row_file_parses() {
        let f = write_tmp("f1,f2,label\n1.0,2.0,3.5\n4,5,6\n-1,0.5,2\n");
        let d = load_csv(f.path(), "label", Task::Regression).unwrap();
        assert_eq!(d.len(), 3);
        assert_eq!(d.dim(), 2);
        assert_eq!(d.example(0).y, 3.5);
        assert_eq!(d.example(2).x, vec![-1.0, 0.5]);
    }

    #[test]
    fn missing_label_column_is_reported() {
        let f = write_tmp("f1,f2,target\n1,2,3\n");
        let err = load_csv(f.path(), "label", Task::Regression).unwrap_err();
        assert!(matches!(err, Error::LabelColumnNotFound(c) if c == "label"));
    }

    // Hand-constructed 4-row fixture: distinct labels {b, a} sort to
    // [a, b], so a -> -1 and b -> +1 regardless of file order.
    #[test]
    fn binary_string_labels_map_by_sorted_order() {
        let f = write_tmp("f1,label\n0.0,b\n1.0,a\n2.0,b\n3.0,a\n");
        let d = load_csv(f.path(), "label", Task::Binary).unwrap();
        let got: Vec<f64> = d.iter().map(|e| e.y).collect();
        assert_eq!(got, vec![1.0, -1.0, 1.0, -1.0]);
    }

    #[test]
    fn binary_numeric_labels_sort_numerically() {
        let f = write_tmp("f1,label\n0,1\n1,-1\n2,-1\n");
        let d = load_csv(f.path(), "label", Task::Binary).unwrap();
        let got: Vec<f64> = d.iter().map(|e| e.y).collect();
        assert_eq!(got, vec![1.0, -1.0, -1.0]);
    }

    #[test]
    fn too_many_binary_labels_is_an_error() {
        let f = write_tmp("f1,label\n0,a\n1,b\n2,c\n");
        let err = load_csv(f.path(), "label", Task::Binary).unwrap_err();
        assert!(matches!(err, Error::BinaryLabelCount { found: 3, .. }));
    }

    #[test]
    fn non_numeric_cell_names_row_and_column() {
        let f = write_tmp("f1,f2,label\n1,2,3\n1,oops,3\n");
        let err = load_csv(f.path(), "label", Task::Regression).unwrap_err();
        match err {
            Error::CsvCell { row, column, .. } => {
                assert_eq!(row, 2);
                assert_eq!(column, "f2");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn empty_file_is_an_error() {
        let f = write_tmp("f1,label\n");
        let err = load_csv(f.path(), "label", Task::Regression).unwrap_err();
        assert!(matches!(err, Error::EmptyDataset(_)));
    }

    #[test]
    fn save_then_load_roundtrips() {
        let d = crate::synth::gen_synthetic(
            &crate::synth::SyntheticSpec::Blobs {
                m: 12,
                d: 3,
                separation: 2.0,
            },
            crate::rng::Seed(5),
        )
        .unwrap();
        let f = tempfile::NamedTempFile::new().unwrap();
        save_csv(&d, f.path()).unwrap();
        let back = load_csv(f.path(), "label", Task::Binary).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn multiclass_labels_become_indices() {
        let f = write_tmp("f1,label\n0,red\n1,blue\n2,green\n3,blue\n");
        let d = load_csv(f.path(), "label", Task::Multiclass).unwrap();
        // sorted: blue, green, red
        let got: Vec<f64> = d.iter().map(|e| e.y).collect();
        assert_eq!(got, vec![2.0, 0.0, 1.0, 0.0]);
        assert_eq!(d.labels(), &[0.0, 1.0, 2.0]);
    }
}
