mod common;

use common::{cluster_margin, cosine, dense_word_vectors, low_rank, low_rank_corpus, test_rng, two_cluster_corpus};
use rand::Rng;
use wordsim::vsm::svd::{truncated_svd, CsrMatrix, SvdOptions};
use wordsim::vsm::{build_dtm, pair_cosine, pair_loss, train_lsa, train_sgns, LsaConfig, SgnsConfig};

#[test]
fn truncated_svd_reconstructs_low_rank_matrices() {
    let mut rng = test_rng(21);
    for trial in 0..200 {
        let m = rng.gen_range(2..=20);
        let n = rng.gen_range(2..=20);
        let k = rng.gen_range(1..=m.min(n).min(12));
        let r = rng.gen_range(1..=k);
        let a = low_rank(&mut rng, m, n, r);
        let svd = truncated_svd(&CsrMatrix::from_dense(m, n, &a), k, trial, &SvdOptions::default()).unwrap();
        let err: f64 = (0..m)
            .flat_map(|i| {
                let row = svd.reconstruct_row(i);
                let a = &a;
                row.into_iter().enumerate().map(move |(j, x)| (x - a[i * n + j]).powi(2))
            })
            .sum::<f64>()
            .sqrt();
        assert!(err < 1e-6, "trial {trial}: {m}x{n} rank {r}, k {k}: error {err}");
        assert!(svd.s.windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn lsa_cosines_match_dense_svd() {
    let mut rng = test_rng(22);
    let mut compared = 0;
    for trial in 0..100 {
        let m = rng.gen_range(2..=20);
        let n = rng.gen_range(2..=20);
        let k = rng.gen_range(1..=m.min(n).min(12));
        let r = rng.gen_range(1..=k);
        let (docs, a) = low_rank_corpus(&mut rng, m, n, r);
        let dtm = build_dtm(&docs, 1).unwrap();
        assert_eq!(dtm.vocab_size(), m);
        let model = train_lsa(&dtm, &LsaConfig::new(k, trial)).unwrap();
        let oracle = dense_word_vectors(&a, m, n, k);
        for i in 0..m {
            for j in 0..m {
                let (wi, wj) = (format!("w{i}"), format!("w{j}"));
                let got = pair_cosine(&model.space, &wi, &wj).unwrap();
                // Rows of A and of U_k Σ_k have the same Gram matrix when k ≥ rank.
                let direct = cosine(&a[i * n..(i + 1) * n], &a[j * n..(j + 1) * n]).unwrap();
                let dense = cosine(&oracle[i], &oracle[j]).unwrap();
                assert!((got - dense).abs() < 1e-6, "trial {trial}: cos(w{i}, w{j}) {got} vs dense {dense}");
                assert!((got - direct).abs() < 1e-6, "trial {trial}: cos(w{i}, w{j}) {got} vs rows {direct}");
                compared += 1;
            }
        }
    }
    assert!(compared > 1000);
}

#[test]
fn zero_output_vectors_cost_ln2_per_term() {
    let mut rng = test_rng(23);
    for k in 1..=10 {
        let dim = rng.gen_range(1..50);
        let target: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let zero = vec![0.0; dim];
        let negatives: Vec<&[f64]> = vec![&zero; k];
        let l = pair_loss(&target, &zero, &negatives);
        assert!((l.loss - (1.0 + k as f64) * std::f64::consts::LN_2).abs() <= 1e-12);
    }
}

#[test]
fn pair_loss_gradients_match_finite_differences() {
    let mut rng = test_rng(24);
    let h = 1e-6;
    for _ in 0..50 {
        let dim = rng.gen_range(2..12);
        let k = rng.gen_range(1..6);
        let mut vecs: Vec<Vec<f64>> = (0..k + 2).map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let loss = |v: &[Vec<f64>]| {
            let negs: Vec<&[f64]> = v[2..].iter().map(Vec::as_slice).collect();
            pair_loss(&v[0], &v[1], &negs).loss
        };
        let analytic = {
            let negs: Vec<&[f64]> = vecs[2..].iter().map(Vec::as_slice).collect();
            let l = pair_loss(&vecs[0], &vecs[1], &negs);
            let mut g = vec![l.grad_target, l.grad_context];
            g.extend(l.grad_negatives);
            g
        };
        for v in 0..vecs.len() {
            for d in 0..dim {
                let x = vecs[v][d];
                vecs[v][d] = x + h;
                let up = loss(&vecs);
                vecs[v][d] = x - h;
                let down = loss(&vecs);
                vecs[v][d] = x;
                let numeric = (up - down) / (2.0 * h);
                let a = analytic[v][d];
                let rel = (a - numeric).abs() / a.abs().max(numeric.abs()).max(1e-3);
                assert!(rel < 1e-5, "vector {v} dim {d}: analytic {a}, numeric {numeric}");
            }
        }
    }
}

fn sgns_config(seed: u64) -> SgnsConfig {
    let mut cfg = SgnsConfig::new(seed);
    cfg.dim = 20;
    cfg.window = 3;
    cfg.epochs = 5;
    cfg.min_count = 1;
    cfg
}

#[test]
fn sgns_separates_two_clusters() {
    let corpus = two_cluster_corpus(25);
    let space = train_sgns(&corpus, &sgns_config(3)).unwrap();
    let margin = cluster_margin(&space);
    assert!(margin >= 0.2, "margin {margin}");
}

#[test]
fn sgns_is_bit_deterministic() {
    let corpus = two_cluster_corpus(26);
    let a = train_sgns(&corpus, &sgns_config(9)).unwrap();
    let b = train_sgns(&corpus, &sgns_config(9)).unwrap();
    assert_eq!(a.words(), b.words());
    for (w, v) in a.iter() {
        let u = b.get(w).unwrap();
        assert!(v.iter().zip(u).all(|(x, y)| x.to_bits() == y.to_bits()));
    }
    let c = train_sgns(&corpus, &sgns_config(10)).unwrap();
    assert_ne!(a.get("apple"), c.get("apple"));
}
