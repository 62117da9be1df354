//! Hypernym taxonomies and the six taxonomy-based similarity metrics.
//!
//! A [`Taxonomy`] holds noun and verb synsets connected by "is-a" links.
//! Every synset without a parent is adopted by a synthetic per-POS root, so
//! any two synsets of the same part of speech are connected.
//!
//! Depth counts nodes, not edges: the virtual root has depth 1 and a synset's
//! depth is the number of nodes on the longest root-to-synset path.

mod ic;
mod metrics;
mod parse;

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) use ic::csv_error;
pub use ic::{compute_ic, counts_from_corpus, load_counts_csv, IcTable};
pub use metrics::{
    synset_similarity, word_similarities, word_similarity, Metric, MetricScore, Polarity,
};
pub use parse::{load_taxonomy, parse_tsv, TaxonomyFormat};

/// Part of speech. Only nouns and verbs carry hypernym hierarchies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pos {
    #[serde(rename = "N")]
    Noun,
    #[serde(rename = "V")]
    Verb,
}

impl Pos {
    pub const ALL: [Pos; 2] = [Pos::Noun, Pos::Verb];

    pub fn tag(self) -> char {
        match self {
            Pos::Noun => 'n',
            Pos::Verb => 'v',
        }
    }

    fn slot(self) -> usize {
        match self {
            Pos::Noun => 0,
            Pos::Verb => 1,
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag())
    }
}

impl FromStr for Pos {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "n" | "N" | "noun" => Ok(Pos::Noun),
            "v" | "V" | "verb" => Ok(Pos::Verb),
            other => Err(Error::InvalidArgument(format!("unknown part of speech `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Synset {
    pub id: String,
    pub pos: Pos,
    pub lemmas: Vec<String>,
    pub parents: Vec<String>,
}

impl Synset {
    pub fn new(id: impl Into<String>, pos: Pos, lemmas: &[&str], parents: &[&str]) -> Self {
        Synset {
            id: id.into(),
            pos,
            lemmas: lemmas.iter().map(|s| s.to_string()).collect(),
            parents: parents.iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// An immutable, acyclic hypernym graph with a lemma index.
#[derive(Clone, Debug)]
pub struct Taxonomy {
    synsets: Vec<Synset>,
    index: HashMap<String, usize>,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
    depth: Vec<u32>,
    max_depth: [u32; 2],
    roots: [usize; 2],
    lemma_index: HashMap<(Pos, String), Vec<usize>>,
}

fn root_id(pos: Pos) -> String {
    format!("*ROOT*.{}", pos.tag())
}

impl Taxonomy {
    /// Builds a taxonomy, adopting parentless synsets under the per-POS
    /// virtual root. Lemmas are lowercased.
    pub fn from_synsets(synsets: Vec<Synset>) -> Result<Self> {
        let mut all = Vec::with_capacity(synsets.len() + 2);
        for pos in Pos::ALL {
            all.push(Synset {
                id: root_id(pos),
                pos,
                lemmas: Vec::new(),
                parents: Vec::new(),
            });
        }
        let roots = [0, 1];

        let mut index = HashMap::with_capacity(synsets.len() + 2);
        index.insert(all[0].id.clone(), 0);
        index.insert(all[1].id.clone(), 1);
        for mut s in synsets {
            if s.lemmas.is_empty() {
                return Err(Error::InvalidArgument(format!("synset `{}` has no lemmas", s.id)));
            }
            for lemma in &mut s.lemmas {
                if lemma.is_empty() || lemma.chars().any(char::is_whitespace) {
                    return Err(Error::InvalidArgument(format!(
                        "synset `{}` has invalid lemma `{lemma}`",
                        s.id
                    )));
                }
                *lemma = lemma.to_lowercase();
            }
            if index.insert(s.id.clone(), all.len()).is_some() {
                return Err(Error::InvalidArgument(format!("duplicate synset id `{}`", s.id)));
            }
            all.push(s);
        }

        let n = all.len();
        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        for i in 2..n {
            let pos = all[i].pos;
            if all[i].parents.is_empty() {
                all[i].parents.push(root_id(pos));
            }
            for p in &all[i].parents {
                let &j = index.get(p).ok_or_else(|| Error::UnknownSynset(p.clone()))?;
                if all[j].pos != pos {
                    return Err(Error::PosMismatch(all[i].id.clone(), p.clone()));
                }
                if !parents[i].contains(&j) {
                    parents[i].push(j);
                    children[j].push(i);
                }
            }
        }

        detect_cycle(&parents).map_err(|i| Error::Cycle(all[i].id.clone()))?;
        let depth = longest_depths(&parents, &children, &roots);
        let mut max_depth = [1u32; 2];
        for (i, s) in all.iter().enumerate() {
            let slot = s.pos.slot();
            max_depth[slot] = max_depth[slot].max(depth[i]);
        }

        let mut lemma_index: HashMap<(Pos, String), Vec<usize>> = HashMap::new();
        for (i, s) in all.iter().enumerate().skip(2) {
            for lemma in &s.lemmas {
                let entry = lemma_index.entry((s.pos, lemma.clone())).or_default();
                if !entry.contains(&i) {
                    entry.push(i);
                }
            }
        }

        Ok(Taxonomy {
            synsets: all,
            index,
            parents,
            children,
            depth,
            max_depth,
            roots,
            lemma_index,
        })
    }

    /// Number of synsets, virtual roots included.
    pub fn len(&self) -> usize {
        self.synsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.synsets.len() <= 2
    }

    pub fn synsets(&self) -> impl Iterator<Item = &Synset> {
        self.synsets.iter()
    }

    pub fn synset(&self, id: &str) -> Option<&Synset> {
        self.index.get(id).map(|&i| &self.synsets[i])
    }

    pub fn virtual_root(&self, pos: Pos) -> &str {
        &self.synsets[self.roots[pos.slot()]].id
    }

    pub fn is_virtual_root(&self, id: &str) -> bool {
        self.index.get(id).is_some_and(|&i| i < 2)
    }

    /// Synset ids for `lemma` under `pos`, in sense order.
    pub fn synsets_for(&self, lemma: &str, pos: Pos) -> Vec<&str> {
        self.senses(lemma, pos)
            .iter()
            .map(|&i| self.synsets[i].id.as_str())
            .collect()
    }

    pub fn contains_lemma(&self, lemma: &str, pos: Pos) -> bool {
        !self.senses(lemma, pos).is_empty()
    }

    /// Every (pos, lemma) key of the lemma index.
    pub fn lemmas(&self) -> impl Iterator<Item = (Pos, &str)> {
        self.lemma_index.keys().map(|(p, l)| (*p, l.as_str()))
    }

    /// Node-counted depth of the deepest synset of `pos`.
    pub fn max_depth(&self, pos: Pos) -> u32 {
        self.max_depth[pos.slot()]
    }

    pub fn synset_depth(&self, id: &str) -> Result<u32> {
        Ok(self.depth[self.idx(id)?])
    }

    /// Edges on the shortest undirected path between two synsets.
    pub fn shortest_path_length(&self, a: &str, b: &str) -> Result<u32> {
        let (i, j) = self.same_pos(a, b)?;
        Ok(self.path_between(i, j))
    }

    /// The deepest common ancestor; ties go to the smallest id.
    pub fn least_common_subsumer(&self, a: &str, b: &str) -> Result<&Synset> {
        let (i, j) = self.same_pos(a, b)?;
        Ok(&self.synsets[self.lcs(i, j)])
    }

    pub(crate) fn idx(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownSynset(id.to_string()))
    }

    pub(crate) fn same_pos(&self, a: &str, b: &str) -> Result<(usize, usize)> {
        let i = self.idx(a)?;
        let j = self.idx(b)?;
        if self.synsets[i].pos != self.synsets[j].pos {
            return Err(Error::PosMismatch(a.to_string(), b.to_string()));
        }
        Ok((i, j))
    }

    pub(crate) fn senses(&self, lemma: &str, pos: Pos) -> &[usize] {
        let key = (pos, lemma.to_lowercase());
        self.lemma_index.get(&key).map(Vec::as_slice).unwrap_or(&[])
    }

    pub(crate) fn pos_of(&self, i: usize) -> Pos {
        self.synsets[i].pos
    }

    pub(crate) fn depth_of(&self, i: usize) -> u32 {
        self.depth[i]
    }

    pub(crate) fn parent_indices(&self, i: usize) -> &[usize] {
        &self.parents[i]
    }

    pub(crate) fn root_index(&self, pos: Pos) -> usize {
        self.roots[pos.slot()]
    }

    /// Reorders the senses of a lemma; ids not already listed are ignored.
    pub(crate) fn set_sense_order(&mut self, lemma: &str, pos: Pos, ordered: &[String]) {
        let Some(entry) = self.lemma_index.get_mut(&(pos, lemma.to_string())) else {
            return;
        };
        let mut sorted: Vec<usize> = ordered
            .iter()
            .filter_map(|id| self.index.get(id).copied())
            .filter(|i| entry.contains(i))
            .collect();
        sorted.dedup();
        for &i in entry.iter() {
            if !sorted.contains(&i) {
                sorted.push(i);
            }
        }
        *entry = sorted;
    }

    /// Ancestors of `i` (inclusive).
    pub(crate) fn ancestors(&self, i: usize) -> HashSet<usize> {
        let mut seen = HashSet::new();
        let mut stack = vec![i];
        while let Some(k) = stack.pop() {
            if seen.insert(k) {
                stack.extend_from_slice(&self.parents[k]);
            }
        }
        seen
    }

    pub(crate) fn lcs(&self, i: usize, j: usize) -> usize {
        if i == j {
            return i;
        }
        let up = self.ancestors(i);
        let mut best: Option<usize> = None;
        for k in self.ancestors(j) {
            if !up.contains(&k) {
                continue;
            }
            best = Some(match best {
                None => k,
                Some(b) => {
                    let (dk, db) = (self.depth[k], self.depth[b]);
                    if dk > db || (dk == db && self.synsets[k].id < self.synsets[b].id) {
                        k
                    } else {
                        b
                    }
                }
            });
        }
        best.expect("same-pos synsets share the virtual root")
    }

    /// Undirected BFS distance; both synsets share a virtual root so the
    /// search always terminates with a finite length.
    pub(crate) fn path_between(&self, i: usize, j: usize) -> u32 {
        if i == j {
            return 0;
        }
        let dist = self.bfs(i, |k| k == j);
        dist.get(&j).copied().expect("same-pos synsets are connected")
    }

    /// Undirected distances from `start` to each of `targets`.
    pub(crate) fn distances_to(&self, start: usize, targets: &[usize]) -> Vec<u32> {
        let mut remaining: HashSet<usize> = targets.iter().copied().collect();
        let dist = self.bfs(start, |k| {
            remaining.remove(&k);
            remaining.is_empty()
        });
        targets
            .iter()
            .map(|t| dist.get(t).copied().unwrap_or(u32::MAX))
            .collect()
    }

    fn bfs(&self, start: usize, mut done: impl FnMut(usize) -> bool) -> HashMap<usize, u32> {
        let mut dist = HashMap::new();
        dist.insert(start, 0u32);
        if done(start) {
            return dist;
        }
        let mut queue = VecDeque::from([start]);
        while let Some(k) = queue.pop_front() {
            let d = dist[&k] + 1;
            for &next in self.parents[k].iter().chain(&self.children[k]) {
                if dist.contains_key(&next) {
                    continue;
                }
                dist.insert(next, d);
                if done(next) {
                    return dist;
                }
                queue.push_back(next);
            }
        }
        dist
    }
}

/// Returns the index of a synset on a cycle, if any.
fn detect_cycle(parents: &[Vec<usize>]) -> std::result::Result<(), usize> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let mut mark = vec![Mark::New; parents.len()];
    for start in 0..parents.len() {
        if mark[start] != Mark::New {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        mark[start] = Mark::Active;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if let Some(&p) = parents[node].get(*next) {
                *next += 1;
                match mark[p] {
                    Mark::Active => return Err(p),
                    Mark::New => {
                        mark[p] = Mark::Active;
                        stack.push((p, 0));
                    }
                    Mark::Done => {}
                }
            } else {
                mark[node] = Mark::Done;
                stack.pop();
            }
        }
    }
    Ok(())
}

/// Longest-path depth with roots at 1, in topological order from the roots.
fn longest_depths(parents: &[Vec<usize>], children: &[Vec<usize>], roots: &[usize; 2]) -> Vec<u32> {
    let n = parents.len();
    let mut pending: Vec<usize> = parents.iter().map(Vec::len).collect();
    let mut depth = vec![1u32; n];
    let mut queue: VecDeque<usize> = roots.iter().copied().collect();
    while let Some(k) = queue.pop_front() {
        for &c in &children[k] {
            depth[c] = depth[c].max(depth[k] + 1);
            pending[c] -= 1;
            if pending[c] == 0 {
                queue.push_back(c);
            }
        }
    }
    depth
}

#[cfg(test)]
pub(crate) mod fixture {
    use super::*;

    /// The car / bicycle / factory chain used throughout the tests.
    pub fn vehicles() -> Taxonomy {
        let rows = [
            ("entity", &["entity"][..], &[][..]),
            ("artifact", &["artifact"], &["entity"]),
            ("structure", &["structure", "construction"], &["artifact"]),
            ("instrumentality", &["instrumentality"], &["structure"]),
            ("conveyance", &["conveyance"], &["instrumentality"]),
            ("vehicle", &["vehicle"], &["conveyance"]),
            ("wheeled-vehicle", &["wheeled_vehicle"], &["vehicle"]),
            ("car", &["car", "auto", "automobile"], &["wheeled-vehicle"]),
            ("bicycle", &["bicycle", "bike"], &["wheeled-vehicle"]),
            ("building", &["building"], &["structure"]),
            ("factory", &["factory", "plant"], &["building"]),
        ];
        let synsets = rows
            .iter()
            .map(|(id, lemmas, parents)| Synset::new(*id, Pos::Noun, lemmas, parents))
            .collect();
        Taxonomy::from_synsets(synsets).unwrap()
    }
}
