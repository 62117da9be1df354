//! The word2vec / fastText text format: a `<count> <dim>` header, then one
//! `<word> <v1> ... <v_dim>` line per word.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{norm, EmbeddingSpace, Provenance};
use crate::error::{Error, Result};

/// A pass over a vector file.
#[derive(Clone, Debug)]
pub struct VecFileScan {
    /// The vectors that passed the filter.
    pub space: EmbeddingSpace,
    /// Sum of the unit-normalized vectors of every non-zero line.
    pub unit_sum: Vec<f64>,
    /// Number of lines contributing to `unit_sum`.
    pub unit_count: usize,
}

pub fn load_vec_file(path: impl AsRef<Path>) -> Result<EmbeddingSpace> {
    Ok(read_vec_file(path, None)?.space)
}

/// Reads a vector file, keeping only words in `keep` when given. Every line
/// is still validated and counted against the header.
pub fn read_vec_file(path: impl AsRef<Path>, keep: Option<&HashSet<String>>) -> Result<VecFileScan> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut lines = BufReader::new(file).lines();

    let header = match lines.next() {
        Some(line) => line.map_err(|e| Error::io(path, e))?,
        None => return Err(Error::parse(path, 1, "missing `<count> <dim>` header")),
    };
    let fields: Vec<&str> = header.split_whitespace().collect();
    let (count, dim) = match fields.as_slice() {
        [c, d] => match (c.parse::<usize>(), d.parse::<usize>()) {
            (Ok(c), Ok(d)) if d > 0 => (c, d),
            _ => return Err(Error::parse(path, 1, format!("bad header `{header}`"))),
        },
        _ => return Err(Error::parse(path, 1, format!("bad header `{header}`"))),
    };

    let mut space = EmbeddingSpace::new(dim, Provenance::Loaded);
    let mut unit_sum = vec![0.0; dim];
    let mut unit_count = 0;
    let mut vector = Vec::with_capacity(dim);
    let mut seen = 0usize;
    for (n, line) in lines.enumerate() {
        let line_no = n + 2;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let word = parts.next().expect("non-empty line");
        vector.clear();
        for p in parts {
            let x: f64 = p
                .parse()
                .map_err(|_| Error::parse(path, line_no, format!("bad number `{p}`")))?;
            if !x.is_finite() {
                return Err(Error::parse(path, line_no, "non-finite component"));
            }
            vector.push(x);
        }
        if vector.len() != dim {
            return Err(Error::parse(
                path,
                line_no,
                format!("expected {dim} components, found {}", vector.len()),
            ));
        }
        seen += 1;
        let len = norm(&vector);
        if len > 0.0 {
            for (s, x) in unit_sum.iter_mut().zip(&vector) {
                *s += x / len;
            }
            unit_count += 1;
        }
        if keep.is_none_or(|k| k.contains(word)) && space.insert(word, &vector)? {
            log::warn!("{}:{line_no}: duplicate word `{word}`, keeping the later vector", path.display());
        }
    }
    if seen != count {
        return Err(Error::parse(path, 1, format!("header declares {count} vectors, found {seen}")));
    }
    Ok(VecFileScan {
        space,
        unit_sum,
        unit_count,
    })
}

pub fn write_vec_file(space: &EmbeddingSpace, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let io = |e| Error::io(path, e);
    let mut out = BufWriter::new(File::create(path).map_err(io)?);
    writeln!(out, "{} {}", space.len(), space.dim()).map_err(io)?;
    for (word, v) in space.iter() {
        write!(out, "{word}").map_err(io)?;
        for x in v {
            write!(out, " {x}").map_err(io)?;
        }
        writeln!(out).map_err(io)?;
    }
    out.flush().map_err(io)
}
