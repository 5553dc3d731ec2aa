mod common;

use dst_fusion::compact::{compact_combine, compact_combine_all, CompactMass};
use dst_fusion::decision::{expected_utilities, predict};
use dst_fusion::evidence::{build_mass, kept_classes, BuildMode, BuildPolicy, ScoreVector};
use dst_fusion::exec::Execution;
use dst_fusion::frame::Frame;
use dst_fusion::mass::combine_pair;
use dst_fusion::pipeline::{
    evaluate_with, generate_fixture, load_labels, load_scores, FixtureSpec, ScoreFormat,
};
use proptest::collection::vec;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn compact(min_theta: f64) -> impl Strategy<Value = CompactMass> {
    (2usize..=12).prop_flat_map(move |n| {
        (
            vec(prop_oneof![Just(0.0), 0.0..1.0f64], n),
            min_theta..1.0f64,
        )
            .prop_map(|(raw, theta)| {
                let total: f64 = raw.iter().sum();
                if total == 0.0 {
                    return CompactMass::vacuous(raw.len());
                }
                let s = raw.iter().map(|r| r / total * (1.0 - theta)).collect();
                CompactMass::new(s, theta).unwrap()
            })
    })
}

fn compact_pair(min_theta: f64) -> impl Strategy<Value = (CompactMass, CompactMass)> {
    (compact(min_theta), any::<u64>()).prop_map(move |(a, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = common::random_compact(&mut rng, a.frame_size(), min_theta);
        (a, b)
    })
}

fn scores() -> impl Strategy<Value = Vec<f64>> {
    vec(-100.0..100.0f64, 2..16)
}

proptest! {
    #[test]
    fn compact_family_is_closed((a, b) in compact_pair(0.0)) {
        if let Ok((m, r)) = compact_combine(&a, &b) {
            prop_assert!(m.singleton().iter().all(|&s| s >= 0.0) && m.theta() >= 0.0);
            let total = m.singleton_total() + m.theta();
            prop_assert!((total - 1.0).abs() <= 1e-9);
            prop_assert!((0.0..1.0).contains(&r.k));
            prop_assert!(CompactMass::new(m.singleton().to_vec(), m.theta()).is_ok());
        }
    }

    #[test]
    fn positive_theta_never_totally_conflicts(list in vec(compact(1e-6), 1..8)) {
        let n = list[0].frame_size();
        let list: Vec<_> = list.into_iter().filter(|m| m.frame_size() == n).collect();
        let (_, reports) = compact_combine_all(&list).unwrap();
        prop_assert!(reports.iter().all(|r| r.k < 1.0));
    }

    #[test]
    fn compact_measures_match_general(m in compact(0.0)) {
        prop_assume!(m.frame_size() <= 10);
        let frame = Frame::indexed(m.frame_size()).unwrap();
        let g = m.lift_to_general(&frame).unwrap();
        for c in 0..m.frame_size() {
            let single = frame.singleton(c).unwrap();
            prop_assert!((g.bel(single).unwrap() - m.bel_singleton(c)).abs() <= 1e-12);
            prop_assert!((g.pl(single).unwrap() - m.pl_singleton(c)).abs() <= 1e-12);
            prop_assert!((g.bel(single.complement()).unwrap() - m.bel_complement(c)).abs() <= 1e-12);
        }
    }

    #[test]
    fn conflict_is_symmetric((a, b) in compact_pair(1e-6)) {
        prop_assume!(a.frame_size() <= 8);
        let frame = Frame::indexed(a.frame_size()).unwrap();
        let (ga, gb) = (a.lift_to_general(&frame).unwrap(), b.lift_to_general(&frame).unwrap());
        let (_, k1) = combine_pair(&ga, &gb).unwrap();
        let (_, k2) = combine_pair(&gb, &ga).unwrap();
        prop_assert!((k1.k - k2.k).abs() <= 1e-12);
        let (_, c1) = compact_combine(&a, &b).unwrap();
        let (_, c2) = compact_combine(&b, &a).unwrap();
        prop_assert!((c1.k - c2.k).abs() <= 1e-12);
    }

    #[test]
    fn at_most_two_classes_pass(f in scores()) {
        let (kept, _) = kept_classes(&f);
        prop_assert!(kept.len() <= 2);
        for &c in &kept {
            prop_assert!(f[c] > 0.0);
        }
    }

    #[test]
    fn two_kept_classes_tie_exactly(x in 0.1..50.0f64, n in 2usize..10, i in 0usize..10, j in 0usize..10) {
        let (i, j) = (i % n, j % n);
        prop_assume!(i != j);
        let mut f = vec![0.0; n];
        f[i] = x;
        f[j] = x;
        let (kept, _) = kept_classes(&f);
        prop_assert_eq!(kept.len(), 2);
        let m = build_mass(&ScoreVector::new("m", f), &BuildPolicy::default()).unwrap();
        prop_assert_eq!(m.singleton()[i], m.singleton()[j]);
        prop_assert!(predict(&m).tie);
    }

    #[test]
    fn literal_mode_reserves_exactly_the_floor(f in scores(), floor in 0.0..0.5f64) {
        let policy = BuildPolicy::new(BuildMode::Literal, floor).unwrap();
        let m = build_mass(&ScoreVector::new("m", f), &policy).unwrap();
        prop_assert!(m.is_vacuous() || m.theta() == floor);
    }

    #[test]
    fn residual_theta_is_bounded(f in scores(), floor in 0.0..0.5f64) {
        let policy = BuildPolicy::new(BuildMode::ResidualTheta, floor).unwrap();
        let m = build_mass(&ScoreVector::new("m", f), &policy).unwrap();
        prop_assert!(m.theta() >= floor - 1e-15);
        prop_assert!((m.singleton_total() + m.theta() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn utility_identities(m in compact(0.0)) {
        let u = expected_utilities(&m);
        let s = m.singleton_total();
        let n = m.frame_size() as f64;
        prop_assert!(u.as_slice().iter().all(|&x| (-1.0 - 1e-12..=1.0 + 1e-12).contains(&x)));
        let sum: f64 = u.as_slice().iter().sum();
        prop_assert!((sum - (2.0 - n) * s).abs() <= 1e-9);
        for (c, &x) in u.as_slice().iter().enumerate() {
            prop_assert!((x - (2.0 * m.singleton()[c] - s)).abs() <= 1e-12);
        }
    }

    #[test]
    fn compact_utilities_match_general_bel(m in compact(0.0)) {
        prop_assume!(m.frame_size() <= 10);
        let frame = Frame::indexed(m.frame_size()).unwrap();
        let g = m.lift_to_general(&frame).unwrap();
        let u = expected_utilities(&m);
        for c in 0..m.frame_size() {
            let single = frame.singleton(c).unwrap();
            let reference = g.bel(single).unwrap() - g.bel(single.complement()).unwrap();
            prop_assert!((u.as_slice()[c] - reference).abs() <= 1e-12);
        }
    }
}

#[test]
fn fused_predictions_ignore_model_order() {
    let dir = tempfile::tempdir().unwrap();
    let spec = FixtureSpec {
        classes: 6,
        models: 4,
        samples: 300,
        seed: 11,
    };
    let files = generate_fixture(spec, dir.path()).unwrap();
    let mut models: Vec<_> = files
        .score_files
        .iter()
        .map(|p| load_scores(p, ScoreFormat::Csv).unwrap())
        .collect();
    let labels = load_labels(&files.labels_file).unwrap();
    // residual mode with a small floor so more models take part
    let policy = BuildPolicy::new(BuildMode::ResidualTheta, 1e-3).unwrap();
    let forward = evaluate_with(&models, &labels, &policy, Execution::Sequential).unwrap();
    models.reverse();
    let backward = evaluate_with(&models, &labels, &policy, Execution::Sequential).unwrap();
    assert_eq!(forward.per_model_accuracy, backward.per_model_accuracy);
    for (a, b) in forward.per_sample.iter().zip(&backward.per_sample) {
        if !a.tie && !b.tie {
            assert_eq!(
                a.fused_prediction, b.fused_prediction,
                "sample {}",
                a.sample_id
            );
        }
        assert!((a.max_utility - b.max_utility).abs() <= 1e-9);
    }
}
