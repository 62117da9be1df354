use std::collections::{HashMap, HashSet};
use std::path::Path;

use super::Taxonomy;
use crate::error::{Error, Result};
use crate::text;

/// Information content per synset, in natural-log units.
#[derive(Clone, Debug)]
pub struct IcTable {
    values: Vec<f64>,
    total_count: f64,
}

impl IcTable {
    pub fn get(&self, t: &Taxonomy, id: &str) -> Option<f64> {
        t.index.get(id).and_then(|&i| self.values.get(i).copied())
    }

    /// Sum of all supplied lemma counts.
    pub fn total_count(&self) -> f64 {
        self.total_count
    }

    pub(crate) fn value(&self, i: usize) -> f64 {
        self.values[i]
    }
}

/// Resnik-style information content.
///
/// A lemma's count is split equally among its synsets. A synset's cumulative
/// count covers itself and every descendant (each counted once, even under
/// multiple inheritance), and `p(s) = (cum(s) + 1) / (cum(root) + 1)` with the
/// root of the synset's part of speech.
pub fn compute_ic(t: &Taxonomy, counts: &HashMap<String, f64>) -> Result<IcTable> {
    let total: f64 = counts.values().sum();
    if counts.is_empty() || total <= 0.0 {
        return Err(Error::EmptyCounts);
    }
    if let Some((w, c)) = counts.iter().find(|(_, c)| !c.is_finite() || **c < 0.0) {
        return Err(Error::InvalidArgument(format!("count for `{w}` is {c}")));
    }

    let mut own = vec![0.0; t.len()];
    for (lemma, &count) in counts {
        if count == 0.0 {
            continue;
        }
        let lemma = lemma.to_lowercase();
        let senses: Vec<usize> = super::Pos::ALL
            .iter()
            .flat_map(|&pos| t.senses(&lemma, pos).iter().copied())
            .collect();
        let share = count / senses.len().max(1) as f64;
        for i in senses {
            own[i] += share;
        }
    }

    let mut cumulative = vec![0.0; t.len()];
    let mut seen = HashSet::new();
    let mut stack = Vec::new();
    for (i, &c) in own.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        seen.clear();
        stack.push(i);
        while let Some(k) = stack.pop() {
            if seen.insert(k) {
                cumulative[k] += c;
                stack.extend_from_slice(t.parent_indices(k));
            }
        }
    }

    let values = (0..t.len())
        .map(|i| {
            let root = t.root_index(t.pos_of(i));
            if i == root {
                return 0.0;
            }
            let p = (cumulative[i] + 1.0) / (cumulative[root] + 1.0);
            (-p.ln()).max(0.0)
        })
        .collect();
    Ok(IcTable {
        values,
        total_count: total,
    })
}

/// Reads `lemma,count` rows. A header row is skipped when its count field
/// is not numeric.
pub fn load_counts_csv(path: impl AsRef<Path>) -> Result<HashMap<String, f64>> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let mut counts = HashMap::new();
    for (n, record) in reader.records().enumerate() {
        let record = record?;
        let line = n + 1;
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != 2 {
            return Err(Error::parse(path, line, "expected `lemma,count`"));
        }
        let count: f64 = match record[1].parse() {
            Ok(c) => c,
            Err(_) if line == 1 => continue,
            Err(_) => return Err(Error::parse(path, line, format!("bad count `{}`", &record[1]))),
        };
        if !count.is_finite() || count < 0.0 {
            return Err(Error::parse(path, line, "count must be non-negative"));
        }
        *counts.entry(record[0].to_lowercase()).or_insert(0.0) += count;
    }
    Ok(counts)
}

/// Token counts of a raw text corpus, using the workbench tokenizer.
pub fn counts_from_corpus(path: impl AsRef<Path>) -> Result<HashMap<String, f64>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut counts = HashMap::new();
    for token in text::tokenize(&text) {
        *counts.entry(token).or_insert(0.0) += 1.0;
    }
    Ok(counts)
}

pub(crate) fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::parse(path, line, format!("{other:?}")),
    }
}
