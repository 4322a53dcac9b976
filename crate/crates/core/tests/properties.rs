use copod_core::{
    average_precision, fit_marginal, roc_auc, skewness, split, CopodModel, Dataset, SplitPlan,
    Variant,
};
use proptest::prelude::*;

fn column() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![-50i32..50, 0i32..5].prop_map(|v| v as f64 / 4.0), 2..60)
}

fn matrix() -> impl Strategy<Value = (usize, Vec<f64>)> {
    (1usize..6, 3usize..40).prop_flat_map(|(d, n)| {
        (
            Just(d),
            prop::collection::vec((-200i32..200).prop_map(|v| v as f64 / 8.0), n * d),
        )
    })
}

fn labelled_scores() -> impl Strategy<Value = (Vec<f64>, Vec<u8>)> {
    prop::collection::vec(((-20i32..20).prop_map(f64::from), 0u8..2), 2..60)
        .prop_map(|pairs| pairs.into_iter().unzip())
        .prop_filter("both classes", |(_, l): &(Vec<f64>, Vec<u8>)| {
            l.contains(&0) && l.contains(&1)
        })
}

proptest! {
    #[test]
    fn tails_are_monotone(col in column(), a in -15.0f64..15.0, b in -15.0f64..15.0) {
        let m = fit_marginal(&col).unwrap();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(m.left_tail(lo) <= m.left_tail(hi));
        prop_assert!(m.right_tail(lo) >= m.right_tail(hi));
        let max = col.iter().cloned().fold(f64::MIN, f64::max);
        let min = col.iter().cloned().fold(f64::MAX, f64::min);
        prop_assert_eq!(m.left_tail(max), 1.0);
        prop_assert_eq!(m.right_tail(min), 1.0);
    }

    #[test]
    fn skewness_is_affine_invariant(col in column(), scale in 0.01f64..100.0, shift in -100.0f64..100.0) {
        let base = skewness(&col).unwrap();
        let moved: Vec<f64> = col.iter().map(|x| scale * x + shift).collect();
        let after = skewness(&moved).unwrap();
        if col.iter().all(|&x| x == col[0]) {
            prop_assert_eq!(after, 0.0);
        } else {
            prop_assert!((base - after).abs() < 1e-12, "{} vs {}", base, after);
        }
    }

    #[test]
    fn scores_are_bounded_and_consistent((d, values) in matrix()) {
        let ds = Dataset::from_flat(values, d, None, None).unwrap();
        let model = CopodModel::fit(&ds).unwrap();
        let bound = d as f64 * ((ds.n() + 1) as f64).ln();
        for x in ds.rows() {
            let s = model.score_one(x, Variant::Max).unwrap();
            for p in [s.p_l, s.p_r, s.p_s, s.score] {
                prop_assert!(p.is_finite() && p >= 0.0 && p <= bound + 1e-12);
            }
            prop_assert!(s.score >= s.p_l && s.score >= s.p_r && s.score >= s.p_s);

            let obs = model.copula_observations(x).unwrap();
            let mut additive = 0.0;
            for j in 0..d {
                let single = model.marginals()[j].left_tail(x[j]).max(model.probability_floor());
                additive += -single.ln();
                let expect_w = if model.marginals()[j].skew() < 0.0 { obs.u[j] } else { obs.v[j] };
                prop_assert_eq!(obs.w[j], expect_w);
                prop_assert!(obs.u[j] >= 1.0 / ds.n() as f64);
            }
            prop_assert!((additive - s.p_l).abs() < 1e-12);

            let dims = model.dimensional_scores(x).unwrap();
            prop_assert!(dims.iter().all(|&o| o >= 0.0 && o <= ((ds.n() + 1) as f64).ln() + 1e-12));
        }
    }

    #[test]
    fn out_of_range_queries_stay_finite((d, values) in matrix(), far in 1e3f64..1e9) {
        let ds = Dataset::from_flat(values, d, None, None).unwrap();
        let model = CopodModel::fit(&ds).unwrap();
        for x in [vec![far; d], vec![-far; d]] {
            let s = model.score_one(&x, Variant::Max).unwrap();
            prop_assert!((s.score - d as f64 * ((ds.n() + 1) as f64).ln()).abs() < 1e-9);
        }
    }

    #[test]
    fn one_d_left_scores_nonincreasing(mut col in prop::collection::vec(-1000i32..1000, 3..50)) {
        col.sort_unstable();
        col.dedup();
        prop_assume!(col.len() >= 3);
        let xs: Vec<f64> = col.iter().map(|&v| f64::from(v)).collect();
        let model = CopodModel::fit(&Dataset::from_flat(xs.clone(), 1, None, None).unwrap()).unwrap();
        prop_assume!(model.marginals()[0].skew() < 0.0);
        let scores: Vec<f64> = xs.iter().map(|&x| model.score_one(&[x], Variant::Left).unwrap().score).collect();
        prop_assert!(scores.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn explain_bands_are_ordered((d, values) in matrix(), alpha in 0.01f64..0.99) {
        let ds = Dataset::from_flat(values, d, None, None).unwrap();
        let model = CopodModel::fit(&ds).unwrap();
        let e = model.explain(ds.row(0), &ds, alpha).unwrap();
        for j in 0..d {
            prop_assert!(e.band_99[j] >= e.band_contamination[j]);
        }
    }

    #[test]
    fn split_preserves_row_multiset((d, values) in matrix(), seed in any::<u64>(), frac in 0.2f64..0.8) {
        let ds = Dataset::from_flat(values, d, None, None).unwrap();
        let plan = SplitPlan::new(frac, seed);
        let (train, test) = split(&ds, &plan).unwrap();
        prop_assert_eq!(train.n(), (frac * ds.n() as f64 + 0.5).floor() as usize);
        let key = |r: &[f64]| r.iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        let mut original: Vec<_> = ds.rows().map(key).collect();
        let mut joined: Vec<_> = train.rows().chain(test.rows()).map(key).collect();
        original.sort();
        joined.sort();
        prop_assert_eq!(original, joined);
    }

    #[test]
    fn metrics_are_permutation_invariant((scores, labels) in labelled_scores(), seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let mut idx: Vec<usize> = (0..scores.len()).collect();
        idx.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let s2: Vec<f64> = idx.iter().map(|&i| scores[i]).collect();
        let l2: Vec<u8> = idx.iter().map(|&i| labels[i]).collect();
        prop_assert_eq!(roc_auc(&scores, &labels).unwrap(), roc_auc(&s2, &l2).unwrap());
        let (a, b) = (average_precision(&scores, &labels).unwrap(), average_precision(&s2, &l2).unwrap());
        prop_assert!((a - b).abs() < 1e-12);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&a));
    }
}
