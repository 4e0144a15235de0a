use std::path::Path;

use crate::error::{Error, Result};
use crate::sequence::{Instance, PointSequence};

/// Series read from a CSV file, one per data row.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    /// Leading non-numeric cells of each row joined by `,`; empty without ID columns.
    pub labels: Vec<String>,
    pub series: Vec<PointSequence>,
}

impl Corpus {
    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    /// Common series length in points.
    pub fn series_len(&self) -> usize {
        self.series.first().map_or(0, PointSequence::len)
    }

    pub fn dim(&self) -> usize {
        self.series.first().map_or(0, PointSequence::dim)
    }

    pub fn to_instance(&self) -> Result<Instance> {
        Instance::new(self.series.clone())
    }

    /// Instance from series `[first, first + count)`, each cut to `[start, start + len)`.
    pub fn window(&self, first: usize, count: usize, start: usize, len: usize) -> Result<Instance> {
        if first + count > self.len() {
            return Err(Error::Infeasible(format!(
                "series window [{first}, {}) exceeds corpus size {}",
                first + count,
                self.len()
            )));
        }
        self.series[first..first + count]
            .iter()
            .map(|s| s.slice(start, len))
            .collect::<Result<Vec<_>>>()
            .and_then(Instance::new)
    }
}

fn is_numeric(cell: &str) -> bool {
    cell.trim().parse::<f64>().is_ok()
}

/// Reads a corpus file. See [`parse_corpus`] for the format.
pub fn ingest_csv(path: impl AsRef<Path>, dim: usize) -> Result<Corpus> {
    let text = std::fs::read_to_string(path.as_ref())?;
    parse_corpus(&text, dim)
}

/// Parses comma-separated series, one per row.
///
/// Each row may start with non-numeric ID cells (same count in every row),
/// followed by the values; groups of `dim` consecutive values form one point.
/// The first row is a header when its first value cell is non-numeric.
/// Row numbers in errors are 1-based file lines.
pub fn parse_corpus(text: &str, dim: usize) -> Result<Corpus> {
    if dim == 0 {
        return Err(Error::input("dimension must be positive"));
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows: Vec<(usize, Vec<String>)> = Vec::new();
    for (idx, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::Format {
            row: idx + 1,
            message: e.to_string(),
        })?;
        if rec.iter().all(|c| c.trim().is_empty()) {
            continue;
        }
        rows.push((idx + 1, rec.iter().map(|c| c.trim().to_string()).collect()));
    }
    if rows.is_empty() {
        return Err(Error::Format {
            row: 1,
            message: "no data rows".into(),
        });
    }
    let layout_row = if rows.len() > 1 {
        &rows[1].1
    } else {
        &rows[0].1
    };
    let id_cols = layout_row.iter().take_while(|c| !is_numeric(c)).count();
    let header = rows[0].1.get(id_cols).is_none_or(|c| !is_numeric(c));
    let data = if header && rows.len() > 1 {
        &rows[1..]
    } else {
        &rows[..]
    };
    if header && rows.len() == 1 {
        return Err(Error::Format {
            row: rows[0].0,
            message: "row has no numeric values".into(),
        });
    }
    let width = data[0].1.len();
    let mut labels = Vec::with_capacity(data.len());
    let mut series = Vec::with_capacity(data.len());
    for (line, cells) in data {
        if cells.len() != width {
            return Err(Error::Format {
                row: *line,
                message: format!("expected {width} cells, found {}", cells.len()),
            });
        }
        let values = cells[id_cols..]
            .iter()
            .enumerate()
            .map(|(col, c)| {
                c.parse::<f64>().map_err(|_| Error::Format {
                    row: *line,
                    message: format!("non-numeric cell {:?} in column {}", c, id_cols + col + 1),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if values.is_empty() || values.len() % dim != 0 {
            return Err(Error::Format {
                row: *line,
                message: format!(
                    "{} values do not form points of dimension {dim}",
                    values.len()
                ),
            });
        }
        let seq = PointSequence::from_flat(dim, values).map_err(|e| Error::Format {
            row: *line,
            message: e.to_string(),
        })?;
        labels.push(cells[..id_cols].join(","));
        series.push(seq);
    }
    Ok(Corpus { labels, series })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_labelled_rows() {
        let c = parse_corpus("a,1,2,3\nb,4,5,6\n", 1).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.series_len(), 3);
        assert_eq!(c.labels, vec!["a", "b"]);
        assert_eq!(c.series[1].as_flat(), &[4.0, 5.0, 6.0]);
    }

    #[test]
    fn header_and_multiple_id_columns() {
        let text = "id,dept,d_1,d_2\nx,FOODS,1,2\ny,FOODS,3,4\n";
        let c = parse_corpus(text, 1).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.labels[0], "x,FOODS");
        let plain = parse_corpus("d1,d2\n1,2\n", 1).unwrap();
        assert_eq!(plain.len(), 1);
        let bare = parse_corpus("1,2\n3,4\n", 1).unwrap();
        assert_eq!(bare.len(), 2);
    }

    #[test]
    fn ragged_rows_name_the_row() {
        let err = parse_corpus("a,1,2,3\nb,4,5\n", 1).unwrap_err();
        assert_eq!(
            err,
            Error::Format {
                row: 2,
                message: "expected 4 cells, found 3".into()
            }
        );
    }

    #[test]
    fn non_numeric_value_is_an_error() {
        let err = parse_corpus("a,1,2\nb,4,x\n", 1).unwrap_err();
        assert!(matches!(err, Error::Format { row: 2, .. }), "{err:?}");
    }

    #[test]
    fn multidimensional_points() {
        let c = parse_corpus("1,2,3,4\n5,6,7,8\n", 2).unwrap();
        assert_eq!(c.dim(), 2);
        assert_eq!(c.series_len(), 2);
        assert!(parse_corpus("1,2,3\n", 2).is_err());
    }

    #[test]
    fn window_slices_series() {
        let c = parse_corpus("1,2,3\n4,5,6\n7,8,9\n", 1).unwrap();
        let x = c.window(1, 2, 1, 2).unwrap();
        assert_eq!(x.sequences()[0].as_flat(), &[5.0, 6.0]);
        assert_eq!(x.sequences()[1].as_flat(), &[8.0, 9.0]);
        assert!(c.window(2, 2, 0, 1).is_err());
    }
}
