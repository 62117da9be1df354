//! Truncated SVD of a sparse matrix by randomized subspace iteration.
//!
//! The range of `A` is sketched with `k + oversample` random probes and
//! refined by power iterations until the leading `k` singular values settle.
//! The small projected problem is solved with one-sided Jacobi rotations.

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::rng;

/// Compressed sparse rows.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds from per-row `(column, value)` lists.
    pub fn from_rows(ncols: usize, rows: &[Vec<(usize, f64)>]) -> Self {
        let mut indptr = Vec::with_capacity(rows.len() + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for row in rows {
            for &(c, v) in row {
                assert!(c < ncols, "column {c} out of range");
                indices.push(c);
                values.push(v);
            }
            indptr.push(indices.len());
        }
        CsrMatrix {
            nrows: rows.len(),
            ncols,
            indptr,
            indices,
            values,
        }
    }

    pub fn from_dense(nrows: usize, ncols: usize, data: &[f64]) -> Self {
        let rows: Vec<Vec<(usize, f64)>> = (0..nrows)
            .map(|r| {
                (0..ncols)
                    .filter_map(|c| {
                        let v = data[r * ncols + c];
                        (v != 0.0).then_some((c, v))
                    })
                    .collect()
            })
            .collect();
        Self::from_rows(ncols, &rows)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.indptr[r]..self.indptr[r + 1];
        self.indices[span.clone()].iter().copied().zip(self.values[span].iter().copied())
    }

    /// `A · X` for a column-major block `X` (ncols × l).
    fn mul(&self, x: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.nrows]; x.len()];
        for r in 0..self.nrows {
            for (c, v) in self.row(r) {
                for (o, xc) in out.iter_mut().zip(x) {
                    o[r] += v * xc[c];
                }
            }
        }
        out
    }

    /// `Aᵀ · Y` for a column-major block `Y` (nrows × l).
    fn mul_t(&self, y: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.ncols]; y.len()];
        for r in 0..self.nrows {
            for (c, v) in self.row(r) {
                for (o, yc) in out.iter_mut().zip(y) {
                    o[c] += v * yc[r];
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SvdOptions {
    pub oversample: usize,
    pub max_iterations: usize,
    /// Relative change in the leading singular values that counts as settled.
    pub tolerance: f64,
}

impl Default for SvdOptions {
    fn default() -> Self {
        SvdOptions {
            oversample: 10,
            max_iterations: 300,
            tolerance: 1e-10,
        }
    }
}

/// `A ≈ U diag(s) Vᵀ` with `U` (m × k) and `V` (n × k) stored column-major.
#[derive(Clone, Debug)]
pub struct TruncatedSvd {
    pub u: Vec<Vec<f64>>,
    pub s: Vec<f64>,
    pub v: Vec<Vec<f64>>,
    pub iterations: usize,
}

impl TruncatedSvd {
    /// Row `r` of the rank-k reconstruction.
    pub fn reconstruct_row(&self, r: usize) -> Vec<f64> {
        let n = self.v.first().map_or(0, Vec::len);
        let mut out = vec![0.0; n];
        for ((u, &s), v) in self.u.iter().zip(&self.s).zip(&self.v) {
            let w = u[r] * s;
            for (o, &vc) in out.iter_mut().zip(v) {
                *o += w * vc;
            }
        }
        out
    }
}

pub fn truncated_svd(a: &CsrMatrix, k: usize, seed: u64, opts: &SvdOptions) -> Result<TruncatedSvd> {
    let max_rank = a.nrows.min(a.ncols);
    if k == 0 || k > max_rank {
        return Err(Error::RankTooLarge { k, max: max_rank });
    }
    let l = (k + opts.oversample).min(max_rank);
    let exact = l == max_rank;
    let mut rng = rng(seed);

    let probes: Vec<Vec<f64>> = (0..l)
        .map(|_| (0..a.ncols).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    let mut q = a.mul(&probes);
    orthonormalize(&mut q, &mut rng);

    let mut previous: Option<Vec<f64>> = None;
    for iteration in 1..=opts.max_iterations {
        // Z = AᵀQ = W Σ Pᵀ, so A ≈ Q Zᵀ = (Q P) Σ Wᵀ.
        let z = a.mul_t(&q);
        let (w, sigma, p) = jacobi_svd(z)?;

        let settled = previous.as_ref().is_some_and(|prev| {
            let scale = sigma[0].max(f64::MIN_POSITIVE);
            prev.iter()
                .zip(&sigma)
                .take(k)
                .all(|(a, b)| (a - b).abs() <= opts.tolerance * scale)
        });
        if exact || settled {
            let u = (0..k)
                .map(|j| {
                    let mut col = vec![0.0; a.nrows];
                    for (qi, &pij) in q.iter().zip(&p[j]) {
                        for (c, &x) in col.iter_mut().zip(qi) {
                            *c += pij * x;
                        }
                    }
                    col
                })
                .collect();
            return Ok(TruncatedSvd {
                u,
                s: sigma[..k].to_vec(),
                v: w[..k].to_vec(),
                iterations: iteration,
            });
        }
        previous = Some(sigma);

        let mut z = w;
        orthonormalize(&mut z, &mut rng);
        q = a.mul(&z);
        orthonormalize(&mut q, &mut rng);
    }
    Err(Error::Convergence(format!(
        "truncated SVD did not settle within {} iterations",
        opts.max_iterations
    )))
}

/// Modified Gram-Schmidt, applied twice. Columns that vanish (rank
/// deficiency) are replaced by random directions orthogonal to the rest.
fn orthonormalize(cols: &mut [Vec<f64>], rng: &mut impl Rng) {
    for j in 0..cols.len() {
        let reference = super::norm(&cols[j]).max(1.0);
        for attempt in 0..4 {
            for _ in 0..2 {
                for i in 0..j {
                    let (done, rest) = cols.split_at_mut(j);
                    let proj = super::dot(&done[i], &rest[0]);
                    for (x, &y) in rest[0].iter_mut().zip(&done[i]) {
                        *x -= proj * y;
                    }
                }
            }
            let n = super::norm(&cols[j]);
            if n > 1e-12 * reference || attempt == 3 {
                if n > 0.0 {
                    cols[j].iter_mut().for_each(|x| *x /= n);
                }
                break;
            }
            for x in cols[j].iter_mut() {
                *x = rng.gen_range(-1.0..1.0);
            }
        }
    }
}

/// One-sided Jacobi SVD of a column-major block `G` (n × l):
/// `G = W diag(σ) Pᵀ`, sorted by descending σ. Returns (W, σ, P) with P
/// column-major (l × l).
pub(crate) fn jacobi_svd(mut g: Vec<Vec<f64>>) -> Result<(Vec<Vec<f64>>, Vec<f64>, Vec<Vec<f64>>)> {
    let l = g.len();
    let mut p: Vec<Vec<f64>> = (0..l)
        .map(|j| {
            let mut e = vec![0.0; l];
            e[j] = 1.0;
            e
        })
        .collect();

    // Columns shorter than this are numerically zero and left alone.
    let floor = (f64::EPSILON * f64::EPSILON) * g.iter().map(|c| super::dot(c, c)).sum::<f64>();
    const MAX_SWEEPS: usize = 80;
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..l {
            for j in i + 1..l {
                let alpha = super::dot(&g[i], &g[i]);
                let beta = super::dot(&g[j], &g[j]);
                let gamma = super::dot(&g[i], &g[j]);
                if gamma == 0.0 || gamma.abs() <= 1e-15 * (alpha * beta).sqrt() || alpha.min(beta) <= floor {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut g, i, j, c, s);
                rotate(&mut p, i, j, c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Convergence("Jacobi SVD sweeps exhausted".into()));
    }

    let mut sigma: Vec<f64> = g.iter().map(|c| super::norm(c)).collect();
    let mut order: Vec<usize> = (0..l).collect();
    order.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]).then(a.cmp(&b)));
    let w = order
        .iter()
        .map(|&j| {
            let s = sigma[j];
            if s > 0.0 {
                g[j].iter().map(|x| x / s).collect()
            } else {
                vec![0.0; g[j].len()]
            }
        })
        .collect();
    let p = order.iter().map(|&j| p[j].clone()).collect();
    sigma = order.iter().map(|&j| sigma[j]).collect();
    Ok((w, sigma, p))
}

fn rotate(cols: &mut [Vec<f64>], i: usize, j: usize, c: f64, s: f64) {
    let (left, right) = cols.split_at_mut(j);
    for (x, y) in left[i].iter_mut().zip(right[0].iter_mut()) {
        let (a, b) = (*x, *y);
        *x = c * a - s * b;
        *y = s * a + c * b;
    }
}
