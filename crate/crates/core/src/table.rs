//! Header-addressed CSV/TSV reading shared by the lexicon and dataset loaders.

use std::path::Path;

use crate::error::{Error, Result};

/// Reads a delimited file with a header row and returns, per data row, its
/// line number and the fields named by `columns` in that order.
pub(crate) fn read_delimited(path: &Path, delimiter: u8, columns: &[&str]) -> Result<Vec<(usize, Vec<String>)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .flexible(true)
        .trim(csv::Trim::All)
        .quoting(delimiter == b',')
        .from_path(path)
        .map_err(|e| crate::taxonomy::csv_error(path, e))?;
    let header = rdr.headers().map_err(|e| crate::taxonomy::csv_error(path, e))?.clone();
    let positions: Vec<usize> = columns
        .iter()
        .map(|c| {
            header
                .iter()
                .position(|h| h.eq_ignore_ascii_case(c))
                .ok_or_else(|| Error::MissingColumn(c.to_string()))
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| crate::taxonomy::csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let fields = positions
            .iter()
            .zip(columns)
            .map(|(&i, c)| {
                record
                    .get(i)
                    .map(str::to_string)
                    .ok_or_else(|| Error::parse(path, line, format!("missing field `{c}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push((line, fields));
    }
    Ok(rows)
}

pub(crate) fn read_table(path: &Path, columns: &[&str]) -> Result<Vec<(usize, Vec<String>)>> {
    read_delimited(path, b',', columns)
}
