use std::io::Write;
use std::path::Path;

use super::{Label, LabeledDataset, LabeledPoint};
use crate::error::{Error, Result};

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".to_string())
}

fn read_records(path: &Path) -> Result<Vec<csv::StringRecord>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    if text.trim().is_empty() {
        return Err(Error::NoRows { path: path.into() });
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        rows.push(rec);
    }
    if rows.is_empty() {
        return Err(Error::NoRows { path: path.into() });
    }
    Ok(rows)
}

fn parse_cell(path: &Path, row: usize, column: usize, cell: &str) -> Result<f64> {
    cell.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Parse {
            path: path.into(),
            row,
            column,
            message: format!("not a number: {cell:?}"),
        })
}

/// Read a comma-separated file of numeric feature columns followed by a
/// class column. Rows of `class_a` get label +1, rows of `class_b` get -1,
/// all other rows are dropped. A first row whose feature cells are all
/// non-numeric is treated as a header. Row and column numbers in errors are
/// one-based positions in the file.
pub fn load_two_class_csv(
    path: impl AsRef<Path>,
    class_a: &str,
    class_b: &str,
) -> Result<LabeledDataset> {
    let path = path.as_ref();
    let records = read_records(path)?;

    let is_header = |rec: &csv::StringRecord| {
        rec.len() >= 2 && rec.iter().take(rec.len() - 1).all(|c| c.parse::<f64>().is_err())
    };
    let skip = usize::from(is_header(&records[0]));

    let mut dim = None;
    let mut points = Vec::new();
    for (offset, rec) in records.iter().enumerate().skip(skip) {
        let row = offset + 1;
        if rec.len() < 2 {
            return Err(Error::Parse {
                path: path.into(),
                row,
                column: 1,
                message: "expected feature columns followed by a class column".into(),
            });
        }
        let class = &rec[rec.len() - 1];
        let y = if class == class_a {
            Label::Pos
        } else if class == class_b {
            Label::Neg
        } else {
            continue;
        };
        let x = rec
            .iter()
            .take(rec.len() - 1)
            .enumerate()
            .map(|(c, cell)| parse_cell(path, row, c + 1, cell))
            .collect::<Result<Vec<f64>>>()?;
        match dim {
            None => dim = Some(x.len()),
            Some(d) if d != x.len() => {
                return Err(Error::Parse {
                    path: path.into(),
                    row,
                    column: x.len().min(d) + 1,
                    message: format!("expected {d} feature columns, found {}", x.len()),
                })
            }
            _ => {}
        }
        points.push(LabeledPoint::new(x, y));
    }

    for (name, y) in [(class_a, Label::Pos), (class_b, Label::Neg)] {
        let count = points.iter().filter(|p| p.y == y).count();
        if count < 2 {
            return Err(Error::invalid(format!(
                "{}: class {name:?} has {count} rows, need at least 2",
                path.display()
            )));
        }
    }
    LabeledDataset::new(stem(path), dim.unwrap_or(0), points)
}

/// Export with header `dim,label,x0,...,x{D-1}`.
pub fn write_dataset_csv(ds: &LabeledDataset, mut out: impl Write) -> Result<()> {
    let io = |e| Error::io("<dataset output>", e);
    let mut header = vec!["dim".to_string(), "label".to_string()];
    header.extend((0..ds.dim()).map(|j| format!("x{j}")));
    writeln!(out, "{}", header.join(",")).map_err(io)?;
    for p in ds.points() {
        let mut row = vec![ds.dim().to_string(), p.y.as_i8().to_string()];
        row.extend(p.x.iter().map(|v| v.to_string()));
        writeln!(out, "{}", row.join(",")).map_err(io)?;
    }
    Ok(())
}

/// Read a file written by [`write_dataset_csv`].
pub fn load_dataset_csv(path: impl AsRef<Path>) -> Result<LabeledDataset> {
    let path = path.as_ref();
    let records = read_records(path)?;
    let header = &records[0];
    if header.get(0) != Some("dim") || header.get(1) != Some("label") {
        return Err(Error::Parse {
            path: path.into(),
            row: 1,
            column: 1,
            message: "expected header dim,label,x0,...".into(),
        });
    }
    let dim = header.len() - 2;
    let mut points = Vec::with_capacity(records.len() - 1);
    for (offset, rec) in records.iter().enumerate().skip(1) {
        let row = offset + 1;
        let vals = rec
            .iter()
            .enumerate()
            .map(|(c, cell)| parse_cell(path, row, c + 1, cell))
            .collect::<Result<Vec<f64>>>()?;
        if vals.len() != dim + 2 || vals[0] != dim as f64 {
            return Err(Error::Parse {
                path: path.into(),
                row,
                column: 1,
                message: format!("expected dim {dim} and {dim} features"),
            });
        }
        let y = match vals[1] {
            v if v == 1.0 => Label::Pos,
            v if v == -1.0 => Label::Neg,
            _ => {
                return Err(Error::Parse {
                    path: path.into(),
                    row,
                    column: 2,
                    message: "label must be 1 or -1".into(),
                })
            }
        };
        points.push(LabeledPoint::new(vals[2..].to_vec(), y));
    }
    LabeledDataset::new(stem(path), dim, points)
}
