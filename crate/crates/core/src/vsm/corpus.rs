use std::collections::HashMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::tokenize;

/// How a text source is cut into documents.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Segmentation {
    /// Blank-line separated blocks.
    #[default]
    Blocks,
    /// One document per file.
    PerFile,
    /// One document per non-empty line.
    Lines,
}

/// Reads a file, or every regular file of a directory in name order, into
/// tokenized documents. Documents with no tokens are dropped.
pub fn read_corpus(path: impl AsRef<Path>, segmentation: Segmentation) -> Result<Vec<Vec<String>>> {
    let path = path.as_ref();
    let files: Vec<PathBuf> = if path.is_dir() {
        let mut files: Vec<PathBuf> = std::fs::read_dir(path)
            .map_err(|e| Error::io(path, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file())
            .collect();
        files.sort();
        files
    } else {
        vec![path.to_path_buf()]
    };

    let mut docs = Vec::new();
    for file in files {
        let text = std::fs::read_to_string(&file).map_err(|e| Error::io(&file, e))?;
        match segmentation {
            Segmentation::PerFile => docs.push(tokenize(&text)),
            Segmentation::Lines => docs.extend(text.lines().map(tokenize)),
            Segmentation::Blocks => {
                let mut block = String::new();
                for line in text.lines() {
                    if line.trim().is_empty() {
                        docs.push(tokenize(&block));
                        block.clear();
                    } else {
                        block.push_str(line);
                        block.push('\n');
                    }
                }
                docs.push(tokenize(&block));
            }
        }
    }
    docs.retain(|d| !d.is_empty());
    Ok(docs)
}

/// Sparse word-by-document count matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct TermDocMatrix {
    words: Vec<String>,
    vocab: HashMap<String, usize>,
    doc_count: usize,
    /// Per word: (document, count), sorted by document.
    rows: Vec<Vec<(usize, f64)>>,
}

impl TermDocMatrix {
    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn row_of(&self, word: &str) -> Option<usize> {
        self.vocab.get(word).copied()
    }

    pub fn vocab_size(&self) -> usize {
        self.words.len()
    }

    pub fn doc_count(&self) -> usize {
        self.doc_count
    }

    pub fn count(&self, word: &str, doc: usize) -> f64 {
        self.row_of(word)
            .and_then(|r| {
                let row = &self.rows[r];
                row.binary_search_by_key(&doc, |&(d, _)| d).ok().map(|i| row[i].1)
            })
            .unwrap_or(0.0)
    }

    pub fn row(&self, r: usize) -> &[(usize, f64)] {
        &self.rows[r]
    }
}

/// Counts word occurrences per document; words whose corpus total is below
/// `min_count` are dropped. Rows follow first-occurrence order.
pub fn build_dtm(docs: &[Vec<String>], min_count: usize) -> Result<TermDocMatrix> {
    if docs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut totals: HashMap<&str, usize> = HashMap::new();
    let mut order: Vec<&str> = Vec::new();
    for doc in docs {
        for w in doc {
            let e = totals.entry(w.as_str()).or_insert(0);
            if *e == 0 {
                order.push(w);
            }
            *e += 1;
        }
    }
    let words: Vec<String> = order
        .into_iter()
        .filter(|w| totals[w] >= min_count.max(1))
        .map(str::to_string)
        .collect();
    if words.is_empty() {
        return Err(Error::EmptyVocabulary);
    }
    let vocab: HashMap<String, usize> = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();

    let mut rows = vec![Vec::new(); words.len()];
    for (d, doc) in docs.iter().enumerate() {
        let mut local: HashMap<usize, f64> = HashMap::new();
        for w in doc {
            if let Some(&r) = vocab.get(w) {
                *local.entry(r).or_insert(0.0) += 1.0;
            }
        }
        for (r, c) in local {
            rows[r].push((d, c));
        }
    }
    Ok(TermDocMatrix {
        words,
        vocab,
        doc_count: docs.len(),
        rows,
    })
}
