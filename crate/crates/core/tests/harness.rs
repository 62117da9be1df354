mod common;

use std::collections::{BTreeMap, HashSet};

use common::{fixture, test_rng};
use proptest::prelude::*;
use rand::Rng;
use wordsim::harness::{
    assemble_design_matrix, run_experiment, run_model, split_indices, write_csv, ExperimentConfig, FeatureSource,
    FeatureTable, MissingPolicy, ModelSpec, RunStatus, SpecStatus, WorkbenchConfig,
};
use wordsim::regress::{RegressorKind, RegressorParams};

/// Box-Muller standard normal.
fn normal(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn src(name: &str) -> FeatureSource {
    FeatureSource::Embedding(name.to_string())
}

/// `n` rows of three standard-normal features and `target(a, b, c, noise)`.
fn synthetic(n: usize, seed: u64, target: impl Fn(f64, f64, f64, f64) -> f64) -> FeatureTable {
    let mut rng = test_rng(seed);
    let mut cols: BTreeMap<FeatureSource, Vec<Option<f64>>> = BTreeMap::new();
    let mut y = Vec::with_capacity(n);
    for _ in 0..n {
        let (a, b, c, e) = (normal(&mut rng), normal(&mut rng), normal(&mut rng), normal(&mut rng));
        for (k, v) in [("a", a), ("b", b), ("c", c)] {
            cols.entry(src(k)).or_default().push(Some(v));
        }
        y.push(target(a, b, c, e));
    }
    let ids = (0..n).map(|i| format!("p{i}")).collect();
    FeatureTable::from_columns(ids, y, cols).unwrap()
}

fn spec(id: u32, regressors: &[RegressorKind]) -> ModelSpec {
    ModelSpec::new(id, "abc", vec![src("a"), src("b"), src("c")], regressors).unwrap()
}

fn config(train: usize, test: usize, iterations: usize, seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        train_size: train,
        test_size: test,
        iterations,
        seed,
        ..ExperimentConfig::default()
    }
}

#[test]
fn unrelated_target_gives_no_test_r2() {
    let table = synthetic(300, 1, |_, _, _, e| e);
    let s = spec(1, &[RegressorKind::Mlr]);
    let r = run_model(&table, &s, &s.regressors, &config(200, 100, 100, 3)).unwrap();
    let test = r.regressors[0].r2_test_mean.unwrap();
    assert!(test < 0.05, "test R² {test}");
    assert!(r.regressors[0].r2_train_mean.unwrap() > test);
}

#[test]
fn planted_linear_target_is_recovered() {
    let table = synthetic(300, 2, |a, b, c, e| 2.0 * a - b + 0.5 * c + 0.05 * e);
    let s = spec(1, &[RegressorKind::Mlr]);
    let r = run_model(&table, &s, &s.regressors, &config(200, 100, 50, 4)).unwrap();
    let test = r.regressors[0].r2_test_mean.unwrap();
    assert!(test > 0.99, "test R² {test}");
    assert_eq!(r.regressors[0].r2_test.len(), 50);
}

#[test]
fn equal_seeds_give_identical_reports() {
    let table = synthetic(120, 5, |a, b, _, e| a * b + 0.3 * e);
    let specs = [spec(1, &RegressorKind::ALL), spec(2, &[RegressorKind::Mlr])];
    let cfg = config(80, 30, 4, 11);
    let one = run_experiment(&table, &specs, &cfg).unwrap();
    let two = run_experiment(&table, &specs, &cfg).unwrap();
    assert_eq!(serde_json::to_string(&one).unwrap(), serde_json::to_string(&two).unwrap());
    let mut a = Vec::new();
    let mut b = Vec::new();
    write_csv(&one, &mut a).unwrap();
    write_csv(&two, &mut b).unwrap();
    assert_eq!(a, b);

    let other = run_experiment(&table, &specs, &config(80, 30, 4, 12)).unwrap();
    assert_ne!(one.models[0].regressors[0].r2_test, other.models[0].regressors[0].r2_test);
}

#[test]
fn test_r2_spread_shrinks_with_larger_test_sets() {
    let table = synthetic(600, 6, |a, b, c, e| a + b + c + 1.5 * e);
    let s = spec(1, &[RegressorKind::Mlr]);
    let small = run_model(&table, &s, &s.regressors, &config(300, 20, 200, 7)).unwrap();
    let large = run_model(&table, &s, &s.regressors, &config(300, 300, 200, 7)).unwrap();
    let (sd_small, sd_large) = (small.regressors[0].r2_test_sd.unwrap(), large.regressors[0].r2_test_sd.unwrap());
    assert!(sd_large < sd_small, "sd {sd_large} with 300 test rows vs {sd_small} with 20");
}

#[test]
fn missing_cells_drop_or_impute() {
    let mut cols = BTreeMap::new();
    cols.insert(src("a"), vec![Some(1.0), None, Some(3.0), Some(4.0), Some(5.0)]);
    cols.insert(src("b"), vec![Some(2.0), Some(1.0), None, None, Some(0.0)]);
    cols.insert(src("c"), vec![None; 5]);
    let ids = (0..5).map(|i| format!("p{i}")).collect();
    let table = FeatureTable::from_columns(ids, vec![1.0, 2.0, 3.0, 4.0, 5.0], cols).unwrap();
    let ab = ModelSpec::new(1, "ab", vec![src("a"), src("b")], &[RegressorKind::Mlr]).unwrap();

    let (x, cov) = assemble_design_matrix(&table, &ab, MissingPolicy::DropRow).unwrap();
    assert_eq!((cov.total_rows, cov.retained_rows, cov.imputed_cells), (5, 2, 0));
    assert_eq!(x.row_ids(), ["p0", "p4"]);
    assert_eq!(cov.per_feature.iter().map(|f| f.observed).collect::<Vec<_>>(), [4, 3]);

    let (x, cov) = assemble_design_matrix(&table, &ab, MissingPolicy::MeanImpute).unwrap();
    assert_eq!((cov.retained_rows, cov.imputed_cells), (5, 3));
    assert_eq!(x.get(1, 0), 13.0 / 4.0);
    assert_eq!(x.get(2, 1), 1.0);

    let c = ModelSpec::new(2, "c", vec![src("c")], &[RegressorKind::Mlr]).unwrap();
    assert!(assemble_design_matrix(&table, &c, MissingPolicy::MeanImpute).is_err());
    let (_, cov) = assemble_design_matrix(&table, &c, MissingPolicy::DropRow).unwrap();
    assert_eq!(cov.retained_rows, 0);
    let d = ModelSpec::new(3, "d", vec![src("d")], &[RegressorKind::Mlr]).unwrap();
    assert!(assemble_design_matrix(&table, &d, MissingPolicy::DropRow).is_err());
}

#[test]
fn short_and_skipped_specs_stay_in_the_report() {
    let mut table = synthetic(60, 8, |a, _, _, e| a + 0.1 * e);
    let mut cols: BTreeMap<FeatureSource, Vec<Option<f64>>> = table.sources().map(|s| (s.clone(), table.column(s).unwrap().to_vec())).collect();
    cols.insert(src("sparse"), (0..60).map(|i| (i % 3 == 0).then_some(i as f64)).collect());
    table = FeatureTable::from_columns(table.pair_ids.clone(), table.target.clone(), cols).unwrap();

    let mut skipped = spec(3, &[RegressorKind::Mlr]);
    skipped.status = SpecStatus::Skipped("unavailable: x".into());
    let short = ModelSpec::new(2, "sparse", vec![src("sparse")], &[RegressorKind::Mlr]).unwrap();
    let report = run_experiment(&table, &[spec(1, &[RegressorKind::Mlr]), short, skipped], &config(30, 10, 2, 1)).unwrap();
    assert_eq!(report.models[0].status, RunStatus::Ok);
    assert!(matches!(&report.models[1].status, RunStatus::Failed(r) if r.contains("20 rows retained")));
    assert_eq!(report.models[1].coverage.as_ref().unwrap().retained_rows, 20);
    assert_eq!(report.models[2].status, RunStatus::Skipped("unavailable: x".into()));
    assert!(report.models[2].regressors[0].r2_test_mean.is_none());
}

#[test]
fn scatter_reports_ratings_of_the_first_test_split() {
    let table = synthetic(100, 9, |a, b, _, e| 5.0 + 2.0 * a - b + 0.2 * e);
    let s = spec(1, &[RegressorKind::Mlr]);
    for before in [true, false] {
        let mut cfg = config(60, 25, 3, 2);
        cfg.standardize_before_split = before;
        let r = run_model(&table, &s, &s.regressors, &cfg).unwrap();
        assert_eq!(r.scatter.len(), 25);
        let (_, test) = split_indices(100, 60, 25, wordsim::rng::derive(wordsim::rng::derive(2, 1), 0));
        for ((p, o), &i) in r.scatter.iter().zip(&test) {
            assert_eq!(*o, table.target[i]);
            assert!((p - o).abs() < 1.5, "predicted {p}, observed {o}");
        }
    }
}

#[test]
fn best_regressor_importance_names_the_driving_feature() {
    let table = synthetic(200, 10, |a, _, _, e| (2.0 * a).sin() * 3.0 + 0.1 * e);
    let s = spec(1, &[RegressorKind::Ert, RegressorKind::Mlr]);
    let r = run_model(&table, &s, &s.regressors, &config(150, 50, 5, 3)).unwrap();
    assert_eq!(r.best_regressor, Some(RegressorKind::Ert));
    assert_eq!(r.top_features[0].0, "a");
    assert!(r.top_features.iter().all(|(_, v)| *v > 0.1));
}

#[test]
fn regressor_override_and_grid() {
    let table = synthetic(80, 12, |a, b, _, e| a - b + 0.1 * e);
    let mut cfg = config(50, 20, 2, 5);
    cfg.regressors = Some(vec![RegressorKind::Mlr, RegressorKind::Ert]);
    cfg.grids.insert(RegressorKind::Ert, vec![("n_trees".into(), vec![5.into(), 10.into()])]);
    let report = run_experiment(&table, &[spec(1, &[RegressorKind::Mlp])], &cfg).unwrap();
    let kinds: Vec<RegressorKind> = report.models[0].regressors.iter().map(|r| r.regressor).collect();
    assert_eq!(kinds, [RegressorKind::Mlr, RegressorKind::Ert]);
    match &report.models[0].regressors[1].params {
        RegressorParams::Ert(p) => assert!([5, 10].contains(&p.n_trees)),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn fixture_config_runs_every_standard_model() {
    let config = WorkbenchConfig::load(fixture("mini.json")).unwrap();
    let dataset = config.load_dataset().unwrap();
    assert_eq!(dataset.len(), 60);
    let providers = config.load_providers(&dataset).unwrap();
    let specs = config.model_specs(&providers.availability()).unwrap();
    assert_eq!(specs.len(), 28);
    assert!(specs.iter().all(ModelSpec::is_ready));
    let table = FeatureTable::compute(&dataset, &providers, config.difference);
    let mut cfg = config.experiment.clone();
    cfg.iterations = 2;
    let report = run_experiment(&table, &specs, &cfg).unwrap();
    assert!(report.models.iter().all(|m| m.status == RunStatus::Ok));
    let rows: usize = report.models.iter().map(|m| m.regressors.len()).sum();
    assert_eq!(rows, 6 + 4 + 18 * 3);
    // Two fixture words have no norms.
    assert_eq!(report.model(14).unwrap().coverage.as_ref().unwrap().retained_rows, 58);
    assert_eq!(report.model(13).unwrap().coverage.as_ref().unwrap().retained_rows, 60);
}

proptest! {
    #[test]
    fn splits_are_disjoint_and_sized(n in 4usize..300, seed in any::<u64>(), frac in 0.1f64..0.8) {
        let train = ((n as f64 * frac) as usize).max(1);
        let test = (n - train).min(1 + n / 4);
        let (a, b) = split_indices(n, train, test, seed);
        prop_assert_eq!(a.len(), train);
        prop_assert_eq!(b.len(), test);
        let sa: HashSet<usize> = a.iter().copied().collect();
        prop_assert_eq!(sa.len(), train);
        prop_assert!(b.iter().all(|i| !sa.contains(i) && *i < n));
        prop_assert_eq!(b.iter().collect::<HashSet<_>>().len(), test);
    }
}
