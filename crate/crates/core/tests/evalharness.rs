mod common;

use std::collections::BTreeMap;

use common::stats::kendall_tau_b;
use common::{check_split, split_dataset};
use ionscreen::corpus::{labeled_synthetic_dataset, IonLibrary};
use ionscreen::datasets::{Category, Property, PseudoLabelConfig};
use ionscreen::evalharness::{
    cross_validate, kendall_tau, make_split, pearson_r, rank_aggregate, rmse, DatasetTable,
    EvalError, FittedModel, MetricMeans, SplitScheme,
};
use ionscreen::predictor::{ModelSpec, PredictorError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn hand_metric_values() {
    assert!((rmse(&[0.0, 0.0], &[3.0, 4.0]).unwrap() - 12.5f64.sqrt()).abs() < 1e-12);
    let x: Vec<f64> = (0..10).map(f64::from).collect();
    let y: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
    assert!((pearson_r(&x, &y).unwrap() - 1.0).abs() < 1e-12);
    let neg: Vec<f64> = x.iter().map(|v| 5.0 - v).collect();
    assert!((pearson_r(&x, &neg).unwrap() + 1.0).abs() < 1e-12);
    let t = kendall_tau(&[1.0, 2.0, 2.0, 3.0], &[1.0, 2.0, 3.0, 4.0]).unwrap();
    assert!((t - 5.0 / 30f64.sqrt()).abs() < 1e-12);
    assert!((kendall_tau(&x, &neg).unwrap() + 1.0).abs() < 1e-12);
}

#[test]
fn degenerate_inputs_are_errors() {
    assert!(matches!(rmse(&[1.0], &[1.0, 2.0]), Err(EvalError::LengthMismatch(1, 2))));
    assert!(rmse(&[], &[]).is_err());
    assert!(pearson_r(&[1.0], &[1.0]).is_err());
    assert!(pearson_r(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).is_err());
    assert!(kendall_tau(&[2.0, 2.0], &[1.0, 3.0]).is_err());
    assert!(kendall_tau(&[f64::NAN, 1.0], &[1.0, 3.0]).is_err());
}

#[test]
fn tau_matches_pair_count_on_tied_vectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut checked = 0;
    while checked < 100 {
        let n = rng.gen_range(2..=200);
        let levels = rng.gen_range(2..=8);
        let x: Vec<f64> = (0..n).map(|_| f64::from(rng.gen_range(0..levels))).collect();
        let y: Vec<f64> = (0..n).map(|_| f64::from(rng.gen_range(0..levels))).collect();
        let want = kendall_tau_b(&x, &y);
        if !want.is_finite() {
            assert!(kendall_tau(&x, &y).is_err());
            continue;
        }
        assert!((kendall_tau(&x, &y).unwrap() - want).abs() < 1e-12, "n = {n}");
        checked += 1;
    }
}

#[test]
fn every_scheme_gives_disjoint_balanced_reproducible_folds() {
    for scheme in SplitScheme::ALL {
        let records = split_dataset(scheme, 500, 3);
        for (k, seed) in [(5, 0), (5, 42), (3, 7), (10, 1)] {
            check_split(&records, scheme, k, seed).unwrap_or_else(|e| panic!("{scheme} k={k}: {e}"));
        }
    }
}

#[test]
fn seeds_change_the_assignment() {
    let records = split_dataset(SplitScheme::Ternary, 500, 3);
    let a = make_split(&records, SplitScheme::Ternary, 5, 1).unwrap();
    let b = make_split(&records, SplitScheme::Ternary, 5, 2).unwrap();
    assert_ne!(a.assignment, b.assignment);
}

#[test]
fn split_errors() {
    let records = split_dataset(SplitScheme::Cation, 50, 3);
    assert!(matches!(make_split(&records, SplitScheme::Cation, 1, 0), Err(EvalError::InvalidK(1))));
    assert!(matches!(
        make_split(&records, SplitScheme::Solvent, 5, 0),
        Err(EvalError::MissingGroupKey { index: 0, .. })
    ));
    let few = &records[..2];
    assert!(make_split(few, SplitScheme::IlPair, 5, 0).is_err());
}

#[test]
fn cross_validation_with_a_mean_model_matches_hand_computation() {
    let pools = IonLibrary::build().pools();
    let records =
        labeled_synthetic_dataset(&pools, 200, 5, Category::IlSolute, Property::SolvationDg).unwrap();
    let plan = make_split(&records, SplitScheme::Cation, 5, 0).unwrap();
    let mean_model = |_: &[Vec<f64>], y: &[f64]| -> Result<FittedModel, PredictorError> {
        let m = y.iter().sum::<f64>() / y.len() as f64;
        Ok(Box::new(move |_: &[f64]| m))
    };
    let report = cross_validate(
        &records,
        &plan,
        &mean_model,
        Property::SolvationDg,
        &PseudoLabelConfig::default(),
    )
    .unwrap();
    let values: Vec<f64> = records.iter().map(|r| r.value.unwrap()).collect();
    let mut fold_rmse = Vec::new();
    for f in 0..5 {
        let (test, train): (Vec<usize>, Vec<usize>) =
            (0..records.len()).partition(|&i| plan.fold_of(&records[i]) == Some(f));
        let m = train.iter().map(|&i| values[i]).sum::<f64>() / train.len() as f64;
        let mse = test.iter().map(|&i| (values[i] - m).powi(2)).sum::<f64>() / test.len() as f64;
        let fm = &report.folds[f];
        assert_eq!((fm.n_train, fm.n_test), (train.len(), test.len()));
        assert!((fm.rmse - mse.sqrt()).abs() < 1e-12, "{} vs {}", fm.rmse, mse.sqrt());
        // A constant prediction has no correlation.
        assert!(fm.pearson_r.is_none() && fm.kendall_tau.is_none(), "{fm:?}");
        fold_rmse.push(mse.sqrt());
    }
    let mean = fold_rmse.iter().sum::<f64>() / 5.0;
    let var = fold_rmse.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 4.0;
    assert!((report.rmse.mean - mean).abs() < 1e-12);
    assert!((report.rmse.std - var.sqrt()).abs() < 1e-12);
    assert!(report.pearson_r.is_none());
}

#[test]
fn ridge_cross_validation_beats_the_mean() {
    let pools = IonLibrary::build().pools();
    let records =
        labeled_synthetic_dataset(&pools, 300, 9, Category::IlSolute, Property::SolvationDg).unwrap();
    let plan = make_split(&records, SplitScheme::IlPair, 5, 0).unwrap();
    let config = PseudoLabelConfig::default();
    let ridge = cross_validate(&records, &plan, &ModelSpec::Ridge { lambda: 1.0 }, Property::SolvationDg, &config)
        .unwrap();
    let values: Vec<f64> = records.iter().map(|r| r.value.unwrap()).collect();
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let spread = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / values.len() as f64).sqrt();
    assert!(ridge.rmse.mean < spread, "{} vs {spread}", ridge.rmse.mean);
    assert!(ridge.pearson_r.unwrap().mean > 0.5);
    let again = cross_validate(&records, &plan, &ModelSpec::Ridge { lambda: 1.0 }, Property::SolvationDg, &config)
        .unwrap();
    assert_eq!(ridge, again);
}

#[test]
fn records_without_the_property_are_skipped() {
    let pools = IonLibrary::build().pools();
    let mut records =
        labeled_synthetic_dataset(&pools, 100, 2, Category::IlSolute, Property::SolvationDg).unwrap();
    let plan = make_split(&records, SplitScheme::Cation, 3, 0).unwrap();
    let config = PseudoLabelConfig::default();
    let spec = ModelSpec::Ridge { lambda: 1.0 };
    let full = cross_validate(&records, &plan, &spec, Property::SolvationDg, &config).unwrap();
    let total: usize = full.folds.iter().map(|f| f.n_test).sum();
    assert_eq!(total, 100);
    for r in records.iter_mut().take(10) {
        r.property = Some(Property::TransferDgIlWater);
    }
    let part = cross_validate(&records, &plan, &spec, Property::SolvationDg, &config).unwrap();
    assert_eq!(part.folds.iter().map(|f| f.n_test).sum::<usize>(), 90);
}

fn table(name: &str, rows: &[(&str, f64, f64, f64)]) -> DatasetTable {
    DatasetTable {
        dataset: name.into(),
        models: rows
            .iter()
            .map(|&(m, rmse, pearson_r, kendall_tau)| (m.to_string(), MetricMeans { rmse, pearson_r, kendall_tau }))
            .collect::<BTreeMap<_, _>>(),
    }
}

#[test]
fn rank_aggregation_by_hand() {
    let d1 = table("d1", &[("a", 0.5, 0.9, 0.7), ("b", 0.6, 0.8, 0.8), ("c", 0.6, 0.7, 0.6)]);
    let d2 = table("d2", &[("a", 1.0, 0.2, 0.1), ("b", 0.8, 0.4, 0.3), ("c", 0.9, 0.3, 0.2)]);
    let ranks = rank_aggregate(&[d1, d2]).unwrap();
    // d1: a = (1+1+2)/3, b = (2.5+2+1)/3, c = (2.5+3+3)/3
    // d2: a = 3, b = 1, c = 2
    let want = [("b", 5.5 / 3.0, 1.0), ("a", 4.0 / 3.0, 3.0), ("c", 8.5 / 3.0, 2.0)];
    let got: Vec<_> = ranks.iter().map(|r| r.model.as_str()).collect();
    assert_eq!(got, ["b", "a", "c"]);
    for (r, (name, first, second)) in ranks.iter().zip(want) {
        assert_eq!(r.model, name);
        assert!((r.per_dataset[0] - first).abs() < 1e-12);
        assert!((r.per_dataset[1] - second).abs() < 1e-12);
        assert!((r.average - (first + second) / 2.0).abs() < 1e-12);
    }
    let missing = table("d3", &[("a", 1.0, 0.2, 0.1)]);
    let d1 = table("d1", &[("a", 0.5, 0.9, 0.7), ("b", 0.6, 0.8, 0.8)]);
    assert!(matches!(rank_aggregate(&[d1, missing]), Err(EvalError::MissingCell { .. })));
}
