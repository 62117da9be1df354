//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use wordsim::vsm::pair_cosine;
use wordsim::{EmbeddingSpace, Pos, Synset, Taxonomy};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn test_rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// A random noun/verb DAG of at most `max_synsets` synsets with shared
/// lemmas (polysemy) and multiple inheritance. Ids are shuffled so that the
/// lexicographic LCS tie-break is exercised.
pub fn random_synsets(rng: &mut impl Rng, max_synsets: usize) -> Vec<Synset> {
    let n = rng.gen_range(1..=max_synsets);
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(rng);
    let lemma_pool = 2 + n / 3;
    let mut out: Vec<Synset> = Vec::with_capacity(n);
    for k in 0..n {
        let pos = if rng.gen_bool(0.7) { Pos::Noun } else { Pos::Verb };
        let same: Vec<&Synset> = out.iter().filter(|s| s.pos == pos).collect();
        let n_parents = if same.is_empty() { 0 } else { [0, 1, 1, 1, 2, 2, 3][rng.gen_range(0..7)] };
        let mut parents: Vec<String> = (0..n_parents).map(|_| same[rng.gen_range(0..same.len())].id.clone()).collect();
        parents.sort();
        parents.dedup();
        let n_lemmas = rng.gen_range(1..=3);
        let mut lemmas: Vec<String> = (0..n_lemmas).map(|_| format!("w{}", rng.gen_range(0..lemma_pool))).collect();
        lemmas.sort();
        lemmas.dedup();
        let lemma_refs: Vec<&str> = lemmas.iter().map(String::as_str).collect();
        let parent_refs: Vec<&str> = parents.iter().map(String::as_str).collect();
        out.push(Synset::new(format!("s{}", labels[k]), pos, &lemma_refs, &parent_refs));
    }
    out
}

/// Exhaustive reference over a dense node set: Floyd-Warshall distances,
/// transitive-closure ancestry and recursive longest depths.
pub struct BruteTaxonomy {
    pub ids: Vec<String>,
    pub pos: Vec<Pos>,
    pub lemmas: Vec<Vec<String>>,
    index: HashMap<String, usize>,
    dist: Vec<Vec<u32>>,
    ancestor: Vec<Vec<bool>>,
    depth: Vec<u32>,
}

const INF: u32 = u32::MAX / 4;

impl BruteTaxonomy {
    /// `roots` are the ids the implementation uses for the virtual roots.
    pub fn new(synsets: &[Synset], noun_root: &str, verb_root: &str) -> Self {
        let mut ids = vec![noun_root.to_string(), verb_root.to_string()];
        let mut pos = vec![Pos::Noun, Pos::Verb];
        let mut lemmas = vec![Vec::new(), Vec::new()];
        for s in synsets {
            ids.push(s.id.clone());
            pos.push(s.pos);
            lemmas.push(s.lemmas.iter().map(|l| l.to_lowercase()).collect());
        }
        let index: HashMap<String, usize> = ids.iter().enumerate().map(|(i, id)| (id.clone(), i)).collect();
        let n = ids.len();
        let mut parents = vec![Vec::new(); n];
        for (k, s) in synsets.iter().enumerate() {
            let i = k + 2;
            if s.parents.is_empty() {
                parents[i].push(if s.pos == Pos::Noun { 0 } else { 1 });
            }
            for p in &s.parents {
                parents[i].push(index[p]);
            }
        }

        let mut dist = vec![vec![INF; n]; n];
        for i in 0..n {
            dist[i][i] = 0;
            for &p in &parents[i] {
                dist[i][p] = 1;
                dist[p][i] = 1;
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = dist[i][k] + dist[k][j];
                    if via < dist[i][j] {
                        dist[i][j] = via;
                    }
                }
            }
        }

        let mut ancestor = vec![vec![false; n]; n];
        for i in 0..n {
            ancestor[i][i] = true;
            for &p in &parents[i] {
                ancestor[i][p] = true;
            }
        }
        for k in 0..n {
            for i in 0..n {
                if ancestor[i][k] {
                    for j in 0..n {
                        if ancestor[k][j] {
                            ancestor[i][j] = true;
                        }
                    }
                }
            }
        }

        fn longest(i: usize, parents: &[Vec<usize>], memo: &mut Vec<Option<u32>>) -> u32 {
            if let Some(d) = memo[i] {
                return d;
            }
            let d = 1 + parents[i].iter().map(|&p| longest(p, parents, memo)).max().unwrap_or(0);
            memo[i] = Some(d);
            d
        }
        let mut memo = vec![None; n];
        let depth = (0..n).map(|i| longest(i, &parents, &mut memo)).collect();

        BruteTaxonomy {
            ids,
            pos,
            lemmas,
            index,
            dist,
            ancestor,
            depth,
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn idx(&self, id: &str) -> usize {
        self.index[id]
    }

    pub fn distance(&self, i: usize, j: usize) -> u32 {
        self.dist[i][j]
    }

    pub fn depth(&self, i: usize) -> u32 {
        self.depth[i]
    }

    pub fn max_depth(&self, pos: Pos) -> u32 {
        (0..self.len()).filter(|&i| self.pos[i] == pos).map(|i| self.depth[i]).max().unwrap()
    }

    /// Deepest common ancestor, smallest id among equally deep ones.
    pub fn lcs(&self, i: usize, j: usize) -> usize {
        let mut common: Vec<usize> = (0..self.len()).filter(|&k| self.ancestor[i][k] && self.ancestor[j][k]).collect();
        common.sort_by(|&a, &b| self.depth[b].cmp(&self.depth[a]).then(self.ids[a].cmp(&self.ids[b])));
        common[0]
    }

    pub fn senses(&self, lemma: &str, pos: Pos) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.pos[i] == pos && self.lemmas[i].iter().any(|l| l == lemma))
            .collect()
    }

    /// Information content with counts split over every sense of a lemma
    /// in either part of speech and add-one smoothing against the root.
    pub fn information_content(&self, counts: &HashMap<String, f64>) -> Vec<f64> {
        let n = self.len();
        let mut own = vec![0.0; n];
        for (lemma, &c) in counts {
            let senses: Vec<usize> = (0..n).filter(|&i| self.lemmas[i].iter().any(|l| l == lemma)).collect();
            for &i in &senses {
                own[i] += c / senses.len() as f64;
            }
        }
        let cumulative: Vec<f64> = (0..n)
            .map(|s| (0..n).filter(|&d| self.ancestor[d][s]).map(|d| own[d]).sum())
            .collect();
        (0..n)
            .map(|i| {
                let root = if self.pos[i] == Pos::Noun { 0 } else { 1 };
                if i == root {
                    0.0
                } else {
                    (-((cumulative[i] + 1.0) / (cumulative[root] + 1.0)).ln()).max(0.0)
                }
            })
            .collect()
    }

    pub fn path(&self, i: usize, j: usize) -> f64 {
        1.0 / (self.distance(i, j) as f64 + 1.0)
    }

    pub fn lch(&self, i: usize, j: usize) -> f64 {
        let d = self.distance(i, j) as f64 + 1.0;
        -(d / (2.0 * self.max_depth(self.pos[i]) as f64)).ln()
    }

    pub fn wup(&self, i: usize, j: usize) -> f64 {
        2.0 * self.depth(self.lcs(i, j)) as f64 / (self.depth(i) + self.depth(j)) as f64
    }

    pub fn res(&self, ic: &[f64], i: usize, j: usize) -> f64 {
        ic[self.lcs(i, j)]
    }

    pub fn jcn(&self, ic: &[f64], i: usize, j: usize) -> f64 {
        (ic[i] + ic[j] - 2.0 * ic[self.lcs(i, j)]).max(0.0)
    }

    pub fn lin(&self, ic: &[f64], i: usize, j: usize) -> f64 {
        let denom = ic[i] + ic[j];
        if denom == 0.0 {
            0.0
        } else {
            2.0 * ic[self.lcs(i, j)] / denom
        }
    }
}

pub fn random_taxonomy(rng: &mut impl Rng, max_synsets: usize) -> (Taxonomy, BruteTaxonomy) {
    let synsets = random_synsets(rng, max_synsets);
    let t = Taxonomy::from_synsets(synsets.clone()).expect("generated DAG is valid");
    let b = BruteTaxonomy::new(&synsets, t.virtual_root(Pos::Noun), t.virtual_root(Pos::Verb));
    (t, b)
}

/// A dense `m × n` matrix of rank at most `r` as `W H`, row-major.
pub fn low_rank(rng: &mut impl Rng, m: usize, n: usize, r: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..m * r).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let h: Vec<f64> = (0..r * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut a = vec![0.0; m * n];
    for i in 0..m {
        for j in 0..n {
            a[i * n + j] = (0..r).map(|k| w[i * r + k] * h[k * n + j]).sum();
        }
    }
    a
}

/// Rows of `U_k Σ_k` from the dense symmetric eigendecomposition
/// `A Aᵀ = U Σ² Uᵀ`. (nalgebra's `svd()` mis-factors exactly rank-one
/// inputs, so the oracle goes through the Gram matrix instead.)
pub fn dense_word_vectors(a: &[f64], m: usize, n: usize, k: usize) -> Vec<Vec<f64>> {
    let mat = nalgebra::DMatrix::from_row_slice(m, n, a);
    let eig = nalgebra::SymmetricEigen::new(&mat * mat.transpose());
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[y].total_cmp(&eig.eigenvalues[x]));
    let k = k.min(m);
    (0..m)
        .map(|i| {
            order[..k]
                .iter()
                .map(|&c| eig.eigenvectors[(i, c)] * eig.eigenvalues[c].max(0.0).sqrt())
                .collect()
        })
        .collect()
}

pub fn cosine(u: &[f64], v: &[f64]) -> Option<f64> {
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let nu = u.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nv = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    (nu > 0.0 && nv > 0.0).then(|| dot / (nu * nv))
}

/// Coefficient of determination, computed directly.
pub fn r2(y: &[f64], y_hat: &[f64]) -> f64 {
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let ss_tot: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let ss_res: f64 = y.iter().zip(y_hat).map(|(a, b)| (a - b).powi(2)).sum();
    1.0 - ss_res / ss_tot
}

/// Documents whose term-document counts equal a random non-negative
/// integer matrix of rank at most `r`.
pub fn low_rank_corpus(rng: &mut impl Rng, m: usize, n: usize, r: usize) -> (Vec<Vec<String>>, Vec<f64>) {
    loop {
        let w: Vec<u32> = (0..m * r).map(|_| rng.gen_range(0..3)).collect();
        let h: Vec<u32> = (0..r * n).map(|_| rng.gen_range(0..3)).collect();
        let mut a = vec![0.0; m * n];
        for i in 0..m {
            for j in 0..n {
                a[i * n + j] = (0..r).map(|k| w[i * r + k] * h[k * n + j]).sum::<u32>() as f64;
            }
        }
        let rows_ok = (0..m).all(|i| (0..n).any(|j| a[i * n + j] > 0.0));
        let cols_ok = (0..n).all(|j| (0..m).any(|i| a[i * n + j] > 0.0));
        if !(rows_ok && cols_ok) {
            continue;
        }
        let mut docs = vec![Vec::new(); n];
        for j in 0..n {
            for i in 0..m {
                for _ in 0..a[i * n + j] as usize {
                    docs[j].push(format!("w{i}"));
                }
            }
        }
        return (docs, a);
    }
}

const FRUIT: [&str; 6] = ["apple", "pear", "plum", "fig", "grape", "melon"];
const VEHICLES: [&str; 6] = ["truck", "car", "bus", "tram", "train", "van"];

/// Two vocabularies that never share a sentence.
pub fn two_cluster_corpus(seed: u64) -> Vec<Vec<String>> {
    let mut rng = test_rng(seed);
    let (a, b) = (FRUIT, VEHICLES);
    (0..600)
        .map(|s| {
            let words = if s % 2 == 0 { &a } else { &b };
            (0..8).map(|_| words[rng.gen_range(0..words.len())].to_string()).collect()
        })
        .collect()
}

pub fn cluster_margin(space: &EmbeddingSpace) -> f64 {
    let (a, b) = (FRUIT, VEHICLES);
    let mut within = Vec::new();
    let mut between = Vec::new();
    for (gi, g) in [&a, &b].iter().enumerate() {
        for (x, w1) in g.iter().enumerate() {
            for w2 in &g[x + 1..] {
                within.push(pair_cosine(space, w1, w2).unwrap());
            }
            if gi == 0 {
                for w2 in &b {
                    between.push(pair_cosine(space, w1, w2).unwrap());
                }
            }
        }
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    mean(&within) - mean(&between)
}
