//! CSV ingestion and export of datasets. Rows are items, columns features.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::likelihood::{DataKind, Dataset};

/// Reads a dataset. With `header`, the first line is skipped.
pub fn load_csv(path: impl AsRef<Path>, kind: DataKind, header: bool) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_csv(file, kind, header)
}

pub fn parse_csv(reader: impl Read, kind: DataKind, header: bool) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut values = Vec::new();
    let mut width: Option<usize> = None;
    let mut n = 0;
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let row = e.position().map_or(0, |p| p.line() as usize);
            Error::Parse {
                row,
                column: 0,
                message: e.to_string(),
            }
        })?;
        let row = record.position().map_or(n + 1, |p| p.line() as usize);
        // Blank lines come through as a single empty field.
        if record.len() == 1 && record[0].is_empty() && width != Some(1) {
            continue;
        }
        match width {
            None => width = Some(record.len()),
            Some(w) if w != record.len() => {
                return Err(Error::Parse {
                    row,
                    column: record.len().min(w) + 1,
                    message: format!("expected {w} columns, found {}", record.len()),
                })
            }
            _ => {}
        }
        for (col, cell) in record.iter().enumerate() {
            let column = col + 1;
            if cell.is_empty() {
                return Err(Error::Parse {
                    row,
                    column,
                    message: "missing value".into(),
                });
            }
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                row,
                column,
                message: format!("not a number: {cell:?}"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    row,
                    column,
                    message: format!("not a finite number: {cell:?}"),
                });
            }
            if kind == DataKind::Binary && v != 0.0 && v != 1.0 {
                return Err(Error::Parse {
                    row,
                    column,
                    message: format!("binary data must be 0 or 1, found {cell:?}"),
                });
            }
            values.push(v);
        }
        n += 1;
    }
    if n == 0 {
        return Err(Error::Parse {
            row: 0,
            column: 0,
            message: "no data rows".into(),
        });
    }
    Dataset::new(n, width.unwrap_or(0), kind, values)
}

/// Writes one line per item. Values use the shortest representation that
/// parses back to the same `f64`.
pub fn write_csv(data: &Dataset, mut out: impl Write) -> Result<()> {
    for i in 0..data.n() {
        let line: Vec<String> = data.row(i).iter().map(|v| format!("{v}")).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

pub fn save_csv(data: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut w = std::io::BufWriter::new(file);
    write_csv(data, &mut w)?;
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_binary_column() {
        let d = parse_csv("0\n1\n".as_bytes(), DataKind::Binary, false).unwrap();
        assert_eq!((d.n(), d.d()), (2, 1));
        assert_eq!(d.values(), &[0.0, 1.0]);
    }

    #[test]
    fn header_is_skipped() {
        let d = parse_csv(
            "a,b\n1.5,2\n-3,4e-2\n".as_bytes(),
            DataKind::Continuous,
            true,
        )
        .unwrap();
        assert_eq!(d.values(), &[1.5, 2.0, -3.0, 0.04]);
    }

    #[test]
    fn missing_cell_is_located() {
        let err = parse_csv("1,2\n3,\n".as_bytes(), DataKind::Continuous, false).unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                row: 2,
                column: 2,
                message: "missing value".into()
            }
        );
    }

    #[test]
    fn ragged_and_garbage_rows() {
        let err = parse_csv("1,2\n3\n".as_bytes(), DataKind::Continuous, false).unwrap_err();
        assert!(matches!(err, Error::Parse { row: 2, .. }), "{err:?}");
        let err = parse_csv("1,2\n3,x\n".as_bytes(), DataKind::Continuous, false).unwrap_err();
        assert!(
            matches!(
                err,
                Error::Parse {
                    row: 2,
                    column: 2,
                    ..
                }
            ),
            "{err:?}"
        );
        let err = parse_csv("0,1\n2,1\n".as_bytes(), DataKind::Binary, false).unwrap_err();
        assert!(
            matches!(
                err,
                Error::Parse {
                    row: 2,
                    column: 1,
                    ..
                }
            ),
            "{err:?}"
        );
        assert!(parse_csv("".as_bytes(), DataKind::Binary, false).is_err());
    }

    #[test]
    fn write_then_read_is_exact() {
        let values = vec![
            0.1,
            -1.0 / 3.0,
            1e-300,
            123456.789,
            std::f64::consts::PI,
            -0.0,
        ];
        let d = Dataset::new(3, 2, DataKind::Continuous, values).unwrap();
        let mut buf = Vec::new();
        write_csv(&d, &mut buf).unwrap();
        let back = parse_csv(&buf[..], DataKind::Continuous, false).unwrap();
        assert_eq!(
            back.values()
                .iter()
                .map(|v| v.to_bits())
                .collect::<Vec<_>>(),
            d.values().iter().map(|v| v.to_bits()).collect::<Vec<_>>()
        );
    }
}
