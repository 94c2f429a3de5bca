mod common;

use common::oracles;
use compind_core::ssm::{diversity_factor, reference_ranks, shares, spearman, spearman_rank_difference, ssm_loss};
use compind_core::{AggregationMethod, CiVector, DecisionMatrix, Stage, WeightVector};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn distinct(rng: &mut impl Rng, m: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..m).map(|k| k as f64 + rng.random::<f64>() * 0.9 + 0.05).collect();
    v.shuffle(rng);
    v
}

#[test]
fn pearson_of_ranks_matches_rank_difference_form() {
    let mut rng = oracles::rng(5);
    for case in 0..1000 {
        let m = 3 + case % 10;
        let a = distinct(&mut rng, m);
        let b = distinct(&mut rng, m);
        let rho = spearman(&a, &b).unwrap();
        assert!((rho - oracles::spearman_eq6(&a, &b)).abs() < 1e-12);
        assert!((rho - spearman_rank_difference(&a, &b).unwrap()).abs() < 1e-12);
    }
}

fn ci(scores: Vec<f64>) -> CiVector {
    CiVector {
        method: AggregationMethod::Saw,
        scores,
    }
}

#[test]
fn loss_matches_transcription() {
    let mut rng = oracles::rng(9);
    let r0 = reference_ranks(3);
    for _ in 0..500 {
        let cols: Vec<Vec<f64>> = (0..8).map(|_| distinct(&mut rng, 3)).collect();
        let rows: Vec<Vec<f64>> = (0..3).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
        let w = oracles::simplex(&mut rng, 8);
        let c = distinct(&mut rng, 3);
        let mat = DecisionMatrix::from_rows(&rows, Stage::Raw).unwrap();
        let d = ssm_loss(
            &mat,
            &WeightVector::new(w.clone()).unwrap(),
            &ci(c.clone()),
            &r0,
            &mut Vec::new(),
        )
        .unwrap();
        assert!((d - oracles::ssm_loss(&rows, &w, &c, &r0)).abs() < 1e-12);
    }
}

#[test]
fn single_indicator_composite_loses_nothing() {
    let mut rng = oracles::rng(21);
    for _ in 0..100 {
        let m = 3 + rng.random_range(0..6);
        let x = distinct(&mut rng, m);
        let rows: Vec<Vec<f64>> = x.iter().map(|&v| vec![v]).collect();
        let mat = DecisionMatrix::from_rows(&rows, Stage::Raw).unwrap();
        let d = ssm_loss(
            &mat,
            &WeightVector::new(vec![1.0]).unwrap(),
            &ci(x.clone()),
            &reference_ranks(m),
            &mut Vec::new(),
        )
        .unwrap();
        assert!(d < 1e-12);
    }
}

#[test]
fn composite_proportional_to_the_only_weighted_column_loses_nothing() {
    let mut rng = oracles::rng(33);
    for _ in 0..100 {
        let a = distinct(&mut rng, 5);
        let b = distinct(&mut rng, 5);
        let rows: Vec<Vec<f64>> = (0..5).map(|i| vec![a[i], b[i]]).collect();
        let mat = DecisionMatrix::from_rows(&rows, Stage::Raw).unwrap();
        let k = rng.random_range(0.1..10.0);
        let d = ssm_loss(
            &mat,
            &WeightVector::new(vec![1.0, 0.0]).unwrap(),
            &ci(a.iter().map(|v| k * v).collect()),
            &reference_ranks(5),
            &mut Vec::new(),
        )
        .unwrap();
        assert!(d < 1e-12);
    }
}

#[test]
fn constant_composite_contributes_zero_with_warning() {
    let rows = vec![vec![1.0, 4.0], vec![2.0, 5.0], vec![3.0, 6.0]];
    let mat = DecisionMatrix::from_rows(&rows, Stage::Raw).unwrap();
    let w = WeightVector::new(vec![0.5, 0.5]).unwrap();
    let mut warnings = Vec::new();
    let d = ssm_loss(&mat, &w, &ci(vec![0.4; 3]), &reference_ranks(3), &mut warnings).unwrap();
    let left = 0.5 * oracles::information_term(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0])
        + 0.5 * oracles::information_term(&[4.0, 5.0, 6.0], &[3.0, 2.0, 1.0]);
    assert!((d - left.abs()).abs() < 1e-12);
    assert_eq!(warnings.len(), 1);
}

proptest! {
    #[test]
    fn loss_is_invariant_to_positive_column_scaling(
        seed in any::<u64>(),
        k in prop::collection::vec(0.1f64..10.0, 4),
        kc in 0.1f64..10.0,
    ) {
        let mut rng = oracles::rng(seed);
        let cols: Vec<Vec<f64>> = (0..4).map(|_| distinct(&mut rng, 6)).collect();
        let w = oracles::simplex(&mut rng, 4);
        let c = distinct(&mut rng, 6);
        let rows: Vec<Vec<f64>> = (0..6).map(|i| cols.iter().map(|col| col[i]).collect()).collect();
        let scaled: Vec<Vec<f64>> = (0..6).map(|i| (0..4).map(|j| k[j] * cols[j][i]).collect()).collect();
        let wv = WeightVector::new(w).unwrap();
        let r0 = reference_ranks(6);
        let d1 = ssm_loss(&DecisionMatrix::from_rows(&rows, Stage::Raw).unwrap(), &wv, &ci(c.clone()), &r0, &mut Vec::new()).unwrap();
        let d2 = ssm_loss(
            &DecisionMatrix::from_rows(&scaled, Stage::Raw).unwrap(),
            &wv,
            &ci(c.iter().map(|v| kc * v).collect()),
            &r0,
            &mut Vec::new(),
        ).unwrap();
        prop_assert!((d1 - d2).abs() < 1e-12);
        prop_assert!(d1 >= 0.0);
    }

    #[test]
    fn spearman_ignores_monotone_transforms(seed in any::<u64>()) {
        let mut rng = oracles::rng(seed);
        let a = distinct(&mut rng, 7);
        let b = distinct(&mut rng, 7);
        let fa: Vec<f64> = a.iter().map(|v| v.powi(3) + v.exp()).collect();
        let gb: Vec<f64> = b.iter().map(|v| v.ln()).collect();
        prop_assert!((spearman(&a, &b).unwrap() - spearman(&fa, &gb).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn diversity_grows_as_shares_move_away_from_uniform(
        target in prop::collection::vec(0.01f64..1.0, 5),
        s in 0.0f64..1.0,
        ds in 0.001f64..0.5,
    ) {
        let q = shares(&target).unwrap();
        let u = 1.0 / 5.0;
        let mix = |t: f64| -> Vec<f64> { q.iter().map(|qi| (1.0 - t) * u + t * qi).collect() };
        let t2 = (s + ds).min(1.0);
        let d1 = diversity_factor(&mix(s)).unwrap();
        let d2 = diversity_factor(&mix(t2)).unwrap();
        prop_assert!(d2 >= d1 - 1e-12);
        prop_assert!((0.0..=1.0).contains(&d1));
    }
}
