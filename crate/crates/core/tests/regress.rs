use proptest::prelude::*;
use rand::Rng;
use wordsim::regress::{
    fit, grid_candidates, grid_search, importance, r_squared, standardize, DesignMatrix, ErtParams, FittedModel,
    ImportanceMethod, MlpParams, MlrParams, ModelBody, Network, Node, Objective, RegressorParams,
};
use wordsim::rng;

fn names(p: usize) -> Vec<String> {
    (0..p).map(|j| format!("x{j}")).collect()
}

fn random_design(n: usize, p: usize, seed: u64, target: impl Fn(&[f64], &mut rng::Rng) -> f64) -> DesignMatrix {
    let mut r = rng::rng(seed);
    let mut rows = Vec::new();
    let mut y = Vec::new();
    for _ in 0..n {
        let row: Vec<f64> = (0..p).map(|_| r.gen_range(-1.0..1.0)).collect();
        y.push(target(&row, &mut r));
        rows.push(row);
    }
    DesignMatrix::new(names(p), rows, y).unwrap()
}

fn mlr() -> RegressorParams {
    RegressorParams::Mlr(MlrParams {})
}

fn ert(params: ErtParams) -> RegressorParams {
    RegressorParams::Ert(params)
}

#[test]
fn mlp_gradient_matches_central_differences() {
    for (seed, sizes) in [(1u64, vec![3, 4, 1]), (2, vec![2, 5, 3, 1]), (3, vec![4, 2, 2, 1])] {
        let mut r = rng::rng(seed);
        let mut net = Network::random(&sizes, &mut r);
        let rows: Vec<Vec<f64>> = (0..6).map(|_| (0..sizes[0]).map(|_| r.gen_range(-2.0..2.0)).collect()).collect();
        let y: Vec<f64> = (0..6).map(|_| r.gen_range(-1.0..1.0)).collect();
        let (_, grad) = net.loss_and_gradient(&rows, &y);
        let theta = net.parameters().to_vec();
        let h = 1e-6;
        for k in 0..theta.len() {
            let mut t = theta.clone();
            t[k] = theta[k] + h;
            net.set_parameters(&t);
            let up = net.loss_and_gradient(&rows, &y).0;
            t[k] = theta[k] - h;
            net.set_parameters(&t);
            let down = net.loss_and_gradient(&rows, &y).0;
            net.set_parameters(&theta);
            let numeric = (up - down) / (2.0 * h);
            let rel = (numeric - grad[k]).abs() / numeric.abs().max(grad[k].abs()).max(1e-8);
            assert!(rel < 1e-5, "sizes {sizes:?} param {k}: {numeric} vs {}", grad[k]);
        }
    }
}

#[test]
fn mlp_learns_identity() {
    let xs: Vec<f64> = (0..200).map(|i| -1.0 + 2.0 * i as f64 / 199.0).collect();
    let x = DesignMatrix::new(names(1), xs.iter().map(|&v| vec![v]).collect(), xs.clone()).unwrap();
    let model = fit(&RegressorParams::Mlp(MlpParams::default()), &x, 1).unwrap();
    let ModelBody::Mlp { trace, .. } = &model.body else { panic!() };
    assert!(trace.epochs <= 500);
    let r2 = r_squared(&xs, &model.predict(&x).unwrap()).unwrap();
    assert!(r2 >= 0.99, "train R² {r2} after {} epochs", trace.epochs);
}

#[test]
fn ert_single_split_oracle() {
    let x = DesignMatrix::new(names(1), vec![vec![0.0], vec![1.0], vec![2.0], vec![3.0]], vec![0.0, 0.0, 1.0, 1.0])
        .unwrap();
    // Exhaustive oracle: the variance reduction of every cut between
    // consecutive points; only the middle gap yields pure children.
    let y = x.target();
    let sse = |s: &[f64]| {
        let m = s.iter().sum::<f64>() / s.len() as f64;
        s.iter().map(|v| (v - m).powi(2)).sum::<f64>()
    };
    let gains: Vec<f64> = (1..4).map(|k| sse(y) - sse(&y[..k]) - sse(&y[k..])).collect();
    let best_gap = gains.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
    assert_eq!(best_gap, 1);

    for seed in 0..20 {
        let params = ErtParams {
            n_trees: 1,
            min_samples_split: 2,
            split_candidates: 64,
            ..Default::default()
        };
        let model = fit(&ert(params), &x, seed).unwrap();
        let ModelBody::Ert { trees, .. } = &model.body else { panic!() };
        let tree = &trees[0];
        let Node::Split { threshold, left, right, .. } = *tree.root() else { panic!("root is a leaf") };
        assert!(threshold > best_gap as f64 && threshold < best_gap as f64 + 1.0, "{threshold}");
        for child in [left, right] {
            assert!(matches!(tree.nodes[child], Node::Leaf { .. }), "child {child} split further");
        }
    }
}

#[test]
fn fully_grown_tree_reproduces_training_rows() {
    let x = random_design(60, 3, 9, |r, g| r[0] * 2.0 + g.gen_range(-0.5..0.5));
    let params = ErtParams {
        n_trees: 1,
        min_samples_split: 2,
        ..Default::default()
    };
    let model = fit(&ert(params), &x, 4).unwrap();
    assert_eq!(model.predict(&x).unwrap(), x.target());
}

#[test]
fn ert_importance_finds_signal() {
    let x = random_design(300, 2, 5, |r, _| r[0]);
    let model = fit(&ert(ErtParams::default()), &x, 11).unwrap();
    let report = importance(&model, &x, ImportanceMethod::Impurity, 0).unwrap();
    assert!(report.values[0] > 0.8, "{:?}", report.values);
    assert!((report.values.iter().sum::<f64>() - 1.0).abs() < 1e-9);

    let single = random_design(50, 1, 6, |r, g| r[0] + g.gen_range(-0.1..0.1));
    let model = fit(&ert(ErtParams::default()), &single, 1).unwrap();
    assert_eq!(importance(&model, &single, ImportanceMethod::Impurity, 0).unwrap().values, vec![1.0]);
}

#[test]
fn permutation_importance_of_unused_column_is_small() {
    let x = random_design(5000, 3, 21, |r, g| 2.0 * r[0] - r[1] + g.gen_range(-0.3..0.3));
    let model = fit(&mlr(), &x, 0).unwrap();
    let report = importance(&model, &x, ImportanceMethod::Permutation, 3).unwrap();
    assert!(report.values[2].abs() < 0.05, "{:?}", report.values);
    assert!(report.values[0] > 0.5);
    let again = importance(&model, &x, ImportanceMethod::Permutation, 3).unwrap();
    assert_eq!(report, again);
}

#[test]
fn ert_train_beats_test_on_noisy_target() {
    let data = random_design(200, 3, 77, |r, g| r[0] + r[1] * r[2] + g.gen_range(-1.0..1.0));
    let (data, _) = standardize(&data).unwrap();
    let (mut train_sum, mut test_sum) = (0.0, 0.0);
    for trial in 0..50u64 {
        let mut order: Vec<usize> = (0..200).collect();
        rand::seq::SliceRandom::shuffle(&mut order[..], &mut rng::rng(trial));
        let (train, test) = (data.select_rows(&order[..150]), data.select_rows(&order[150..]));
        let params = ErtParams {
            n_trees: 10,
            ..Default::default()
        };
        let model = fit(&ert(params), &train, trial).unwrap();
        train_sum += r_squared(train.target(), &model.predict(&train).unwrap()).unwrap();
        test_sum += r_squared(test.target(), &model.predict(&test).unwrap()).unwrap();
    }
    assert!(train_sum / 50.0 > test_sum / 50.0);
}

#[test]
fn fits_are_bit_reproducible_and_round_trip() {
    let x = random_design(80, 3, 2, |r, g| r[0] - 0.5 * r[2] + g.gen_range(-0.2..0.2));
    let (x, _) = standardize(&x).unwrap();
    let mlp = RegressorParams::Mlp(MlpParams {
        max_epochs: 30,
        ..Default::default()
    });
    for params in [mlr(), mlp, ert(ErtParams::default())] {
        let a = fit(&params, &x, 42).unwrap();
        let b = fit(&params, &x, 42).unwrap();
        assert_eq!(a, b);
        let restored = FittedModel::from_json(&a.to_json().unwrap()).unwrap();
        assert_eq!(restored, a);
        let pa = a.predict(&x).unwrap();
        let pr = restored.predict(&x).unwrap();
        assert!(pa.iter().zip(&pr).all(|(u, v)| u.to_bits() == v.to_bits()));
    }
}

#[test]
fn model_file_round_trip() {
    let x = random_design(40, 2, 8, |r, _| r[0] * r[1]);
    let model = fit(&ert(ErtParams::default()), &x, 5).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.json");
    model.save(&path).unwrap();
    assert_eq!(FittedModel::load(&path).unwrap(), model);
    let text = std::fs::read_to_string(&path).unwrap().replace("\"format_version\": 1", "\"format_version\": 99");
    assert!(FittedModel::from_json(&text).is_err());
}

#[test]
fn mlr_handles_more_features_than_rows() {
    let x = random_design(4, 9, 3, |r, _| r.iter().sum());
    let model = fit(&mlr(), &x, 0).unwrap();
    let r2 = r_squared(x.target(), &model.predict(&x).unwrap()).unwrap();
    assert!((r2 - 1.0).abs() < 1e-9);
}

#[test]
fn grid_search_contracts() {
    let grid = vec![
        ("n_trees".to_string(), vec![serde_json::json!(1), serde_json::json!(2)]),
        ("min_samples_split".to_string(), vec![serde_json::json!(3)]),
    ];
    let base = ert(ErtParams::default());
    assert_eq!(grid_candidates(&base, &grid).unwrap().len(), 2);
    assert!(grid_candidates(&base, &Vec::new()).is_err());

    // A fully grown single tree fits distinct rows exactly.
    let x = random_design(40, 2, 4, |r, g| r[0] + g.gen_range(-0.5..0.5));
    let grid = vec![(
        "min_samples_split".to_string(),
        vec![serde_json::json!(30), serde_json::json!(2), serde_json::json!(10)],
    )];
    let one_tree = ert(ErtParams {
        n_trees: 1,
        ..Default::default()
    });
    let result = grid_search(&one_tree, &x, &grid, Objective::TrainR2, 0).unwrap();
    assert_eq!(result.evaluated.len(), 3);
    assert!(matches!(result.best, RegressorParams::Ert(ErtParams { min_samples_split: 2, .. })));
    assert_eq!(result.best_score, 1.0);

    // Identical candidates: the first one enumerated wins.
    let grid = vec![("split_candidates".to_string(), vec![serde_json::json!(1), serde_json::json!(1)])];
    let result = grid_search(&mlr_as_ert_noop(), &x, &grid, Objective::TrainR2, 0).unwrap();
    assert_eq!(result.evaluated[0].1, result.evaluated[1].1);
    assert_eq!(result.best, result.evaluated[0].0);

    let cv = grid_search(&one_tree, &x, &grid, Objective::CrossValidated { folds: 4 }, 0).unwrap();
    assert!(cv.best_score < 1.0);
}

fn mlr_as_ert_noop() -> RegressorParams {
    ert(ErtParams {
        n_trees: 3,
        ..Default::default()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mlr_residuals_orthogonal_to_columns(seed in 0u64..10_000, n in 5usize..40, p in 1usize..5) {
        let x = random_design(n, p, seed, |r, g| r.iter().sum::<f64>() + g.gen_range(-1.0..1.0));
        let (x, _) = standardize(&x).unwrap();
        let model = fit(&mlr(), &x, 0).unwrap();
        let pred = model.predict(&x).unwrap();
        let resid: Vec<f64> = x.target().iter().zip(&pred).map(|(a, b)| a - b).collect();
        for j in 0..p {
            let dot: f64 = x.column(j).iter().zip(&resid).map(|(a, b)| a * b).sum();
            prop_assert!(dot.abs() < 1e-8, "column {j}: {dot}");
        }
    }

    #[test]
    fn duplicated_column_leaves_mlr_predictions(seed in 0u64..10_000, n in 3usize..30) {
        let x = random_design(n, 2, seed, |r, g| r[0] - r[1] + g.gen_range(-0.5..0.5));
        let rows: Vec<Vec<f64>> = x.rows().map(|r| vec![r[0], r[1], r[0]]).collect();
        let dup = DesignMatrix::new(names(3), rows, x.target().to_vec()).unwrap();
        let a = fit(&mlr(), &x, 0).unwrap().predict(&x).unwrap();
        let b = fit(&mlr(), &dup, 0).unwrap().predict(&dup).unwrap();
        for (u, v) in a.iter().zip(&b) {
            prop_assert!((u - v).abs() < 1e-8, "{u} vs {v}");
        }
    }

    #[test]
    fn ert_predictions_within_target_range(seed in 0u64..10_000, n in 2usize..40) {
        let x = random_design(n, 2, seed, |_, g| g.gen_range(-5.0..5.0));
        let params = ErtParams { n_trees: 5, ..Default::default() };
        let model = fit(&ert(params), &x, seed).unwrap();
        let lo = x.target().iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = x.target().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let probe = random_design(20, 2, seed + 1, |_, _| 0.0);
        for y in model.predict(&probe).unwrap() {
            prop_assert!(y >= lo - 1e-12 && y <= hi + 1e-12);
        }
    }

    #[test]
    fn standardized_columns_have_unit_moments(seed in 0u64..10_000, n in 2usize..50) {
        let x = random_design(n, 3, seed, |r, _| r[0] * 10.0 + 3.0);
        let (z, params) = standardize(&x).unwrap();
        for j in 0..3 {
            if params.constant[j] { continue; }
            let c = z.column(j);
            let mean = c.iter().sum::<f64>() / n as f64;
            let var = c.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
            prop_assert!(mean.abs() < 1e-10 && (var.sqrt() - 1.0).abs() < 1e-10);
        }
    }
}
