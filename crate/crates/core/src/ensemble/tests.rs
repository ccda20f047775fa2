use super::*;
use crate::corpus::{Block, Label};
use crate::synthetic::{leakage_dataset, LeakageParams};
use proptest::prelude::*;

fn canonical_small(k: usize) -> BlockLayout {
    let mut blocks = Vec::new();
    let mut start = 0;
    for (label, split, len) in [
        (Label::Positive, Split::Train, k),
        (Label::Negative, Split::Train, k),
        (Label::Positive, Split::Test, k),
        (Label::Negative, Split::Test, k),
        (Label::Unlabeled, Split::Extra, 2 * k),
    ] {
        blocks.push(Block {
            label,
            split,
            start,
            len,
        });
        start += len;
    }
    BlockLayout::from_blocks(blocks).unwrap()
}

/// Checks every invariant of `kind` on `map`; returns whether some touched
/// index was paired with a document of the other class.
fn check_invariants(kind: SchemeKind, layout: &BlockLayout, map: &AlignmentMap) -> bool {
    let mut crossed = false;
    for i in 0..layout.len() {
        let j = map.get(i);
        let (bi, bj) = (layout.block_containing(i), layout.block_containing(j));
        if !kind.touches(bi.split) {
            assert_eq!(i, j, "{kind}: untouched index moved");
            continue;
        }
        assert_eq!(bi.split, bj.split, "{kind}: left its split");
        if kind.is_cross_class() {
            crossed |= bi.label != bj.label;
        } else {
            assert!(layout.same_block(i, j), "{kind}: left its block");
        }
    }
    crossed
}

#[test]
fn correct_is_identity() {
    let l = canonical_small(5);
    assert!(apply_scheme(&ShuffleScheme::new(SchemeKind::CorrectMatching, 3), &l).is_identity());
}

#[test]
fn scheme_a_on_canonical_layout() {
    let l = canonical_small(50);
    let m = apply_scheme(&ShuffleScheme::new(SchemeKind::TestInClass, 1), &l);
    assert!((0..100).all(|i| m.get(i) == i));
    assert!((100..150).all(|i| (100..150).contains(&m.get(i))));
    assert!((150..200).all(|i| (150..200).contains(&m.get(i))));
    assert!((100..200).any(|i| m.get(i) != i));
}

#[test]
fn scheme_d_brute_force_membership() {
    let l = canonical_small(50);
    let m = apply_scheme(&ShuffleScheme::new(SchemeKind::TrainTestCrossClass, 7), &l);
    let split_of = |i: usize| if i < 100 { 0 } else if i < 200 { 1 } else { 2 };
    let mut crossed = 0;
    for i in 0..l.len() {
        assert_eq!(split_of(i), split_of(m.get(i)));
        if i < 200 && (i / 50) != (m.get(i) / 50) {
            crossed += 1;
        }
    }
    assert!(crossed > 50);
}

#[test]
fn schemes_are_seed_reproducible() {
    let l = canonical_small(30);
    for kind in SchemeKind::ALL {
        let a = apply_scheme(&ShuffleScheme::new(kind, 5), &l);
        assert_eq!(a, apply_scheme(&ShuffleScheme::new(kind, 5), &l));
        if kind.is_seeded() {
            assert_ne!(a, apply_scheme(&ShuffleScheme::new(kind, 6), &l));
        }
    }
}

#[test]
fn scheme_names_round_trip() {
    for kind in SchemeKind::ALL {
        assert_eq!(kind.name().parse::<SchemeKind>().unwrap(), kind);
    }
    assert!("E".parse::<SchemeKind>().is_err());
}

fn random_layout() -> impl Strategy<Value = BlockLayout> {
    let tag = prop_oneof![
        Just((Label::Positive, Split::Train)),
        Just((Label::Negative, Split::Train)),
        Just((Label::Positive, Split::Validation)),
        Just((Label::Negative, Split::Validation)),
        Just((Label::Positive, Split::Test)),
        Just((Label::Negative, Split::Test)),
        Just((Label::Unlabeled, Split::Extra)),
    ];
    prop::collection::vec((tag, 1usize..25), 1..12).prop_map(|spec| {
        let mut blocks = Vec::new();
        let mut start = 0;
        for ((label, split), len) in spec {
            blocks.push(Block {
                label,
                split,
                start,
                len,
            });
            start += len;
        }
        BlockLayout::from_blocks(blocks).unwrap()
    })
}

proptest! {
    #[test]
    fn scheme_invariants_hold(layout in random_layout(), seed in any::<u64>()) {
        for kind in SchemeKind::ALL {
            let m = apply_scheme(&ShuffleScheme::new(kind, seed), &layout);
            check_invariants(kind, &layout, &m);
        }
    }

    #[test]
    fn merge_keeps_each_side(layout in random_layout(), seed in any::<u64>()) {
        let tags: Vec<(Label, Split)> = layout
            .blocks()
            .iter()
            .flat_map(|b| std::iter::repeat_n((b.label, b.split), b.len))
            .collect();
        let meta = CorpusMeta::from_tags(tags).unwrap();
        let tr = apply_scheme(&ShuffleScheme::new(SchemeKind::TrainTestInClass, seed), meta.layout());
        let te = apply_scheme(&ShuffleScheme::new(SchemeKind::TestCrossClass, seed), meta.layout());
        let m = merge_by_split(&tr, &te, &meta).unwrap();
        for i in 0..meta.len() {
            let want = if meta.split(i) == Split::Test { te.get(i) } else { tr.get(i) };
            prop_assert_eq!(m.get(i), want);
        }
    }
}

fn small_leakage(block_len: usize) -> crate::synthetic::LeakageData {
    leakage_dataset(
        &LeakageParams {
            block_len,
            ..LeakageParams::default()
        },
        11,
    )
    .unwrap()
}

fn inputs(d: &crate::synthetic::LeakageData) -> EnsembleInputs<'_> {
    EnsembleInputs {
        dense: &d.dense,
        sparse: &d.sparse,
        sparse_dim: d.sparse_dim,
        meta: &d.meta,
    }
}

fn quick_config() -> EnsembleConfig {
    EnsembleConfig {
        c_grid: vec![0.1, 10.0],
        cv_folds: 3,
        ..EnsembleConfig::default()
    }
}

#[test]
fn in_class_shuffle_inflates_accuracy() {
    let d = small_leakage(1000);
    let guard = LabelGuard::new(&d.meta);
    let cfg = quick_config();
    let acc = |kind| {
        evaluate_ensemble(&inputs(&d), &ShuffleScheme::new(kind, 2), &cfg, &guard)
            .unwrap()
            .test_accuracy
    };
    let correct = acc(SchemeKind::CorrectMatching);
    let c = acc(SchemeKind::TrainTestInClass);
    let b = acc(SchemeKind::TestCrossClass);
    assert!(c > correct + 0.01, "C {c} vs correct {correct}");
    assert!(b < correct - 0.1, "B {b} vs correct {correct}");
    assert_eq!(guard.reveals(), 3);
}

#[test]
fn mixed_mode_names_both_schemes() {
    let d = small_leakage(300);
    let guard = LabelGuard::new(&d.meta);
    let r = evaluate_mixed(
        &inputs(&d),
        &ShuffleScheme::new(SchemeKind::TrainTestInClass, 1),
        &ShuffleScheme::new(SchemeKind::CorrectMatching, 1),
        &quick_config(),
        &guard,
    )
    .unwrap();
    assert_eq!(r.scheme, "C>correct");
}

#[test]
fn coverage_mismatch_is_an_error() {
    let d = small_leakage(50);
    let guard = LabelGuard::new(&d.meta);
    let mut inp = inputs(&d);
    inp.sparse = &d.sparse[1..];
    let err = evaluate_ensemble(
        &inp,
        &ShuffleScheme::new(SchemeKind::CorrectMatching, 0),
        &quick_config(),
        &guard,
    );
    assert!(matches!(err, Err(Error::IdSetMismatch(_))));
}

#[test]
fn rescaled_weights_give_identical_decisions() {
    let d = small_leakage(200);
    let guard = LabelGuard::new(&d.meta);
    let inp = inputs(&d);
    let map = AlignmentMap::identity(d.meta.len());
    let cfg = EnsembleConfig {
        scale: 2.0,
        fixed_c: Some(1.0),
        protocol: Protocol::CrossValidation,
        ..quick_config()
    };
    let f = fit_ensemble(&inp, map.clone(), &cfg, &guard, 0).unwrap();
    let idx: Vec<usize> = (0..d.meta.len()).collect();
    let at_s = f.features(&inp, &idx).unwrap();
    let s_prime = 0.3;
    let at_s_prime = inp.features(&map, &idx).unwrap().with_dense_scale(s_prime).unwrap();
    let mut moved = f.model.clone();
    moved.rescale_dense(f.scale / s_prime);
    let (a, b) = (f.model.logits(&at_s).unwrap(), moved.logits(&at_s_prime).unwrap());
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-9);
        assert_eq!(*x > 0.0, *y > 0.0);
    }
}

#[test]
fn correct_matching_ignores_doc_id_relabeling() {
    // Validation protocol so the outcome does not depend on fold assignment.
    let d = small_leakage(150);
    let n = d.meta.len();
    let mut tags: Vec<(Label, Split)> = d.meta.tags().to_vec();
    // Move 100 train documents to validation.
    for i in (0..300).step_by(3) {
        tags[i].1 = Split::Validation;
    }
    let meta = CorpusMeta::from_tags(tags.clone()).unwrap();
    let cfg = EnsembleConfig {
        c_grid: vec![0.1, 10.0],
        scale_grid: vec![1.0, 4.0],
        ..EnsembleConfig::default()
    };
    let run = |meta: &CorpusMeta, dense: &EmbeddingMatrix, sparse: &[BonVector]| {
        let guard = LabelGuard::new(meta);
        let inp = EnsembleInputs {
            dense,
            sparse,
            sparse_dim: d.sparse_dim,
            meta,
        };
        evaluate_ensemble(&inp, &ShuffleScheme::new(SchemeKind::CorrectMatching, 0), &cfg, &guard)
            .unwrap()
    };
    let base = run(&meta, &d.dense, &d.sparse);

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut seed::rng(4, "relabel", &[]));
    let relabeled = AlignmentMap::from_perm(order).unwrap();
    let meta2 = CorpusMeta::from_tags(relabeled.gather(&tags)).unwrap();
    let rows: Vec<Vec<f32>> = d.dense.iter_rows().map(<[f32]>::to_vec).collect();
    let dense2 =
        EmbeddingMatrix::from_vec(relabeled.gather(&rows).concat(), d.dense.dim()).unwrap();
    let sparse2 = relabeled.gather(&d.sparse);
    let other = run(&meta2, &dense2, &sparse2);
    assert_eq!(base.test_accuracy, other.test_accuracy);
    assert_eq!((base.scale, base.c), (other.scale, other.c));
}

#[test]
fn import_round_trip_and_missing_ids() {
    let d = small_leakage(10);
    let text = crate::dv_model::format_doc_vectors(&d.dense);
    let file = crate::dv_model::parse_embeddings(&text).unwrap();
    let map: HashMap<String, usize> = (0..40).map(|i| (i.to_string(), i)).collect();
    assert_eq!(import_external_dense(&file, &map, 40).unwrap(), d.dense);
    let mut partial = map.clone();
    partial.remove("7");
    assert!(matches!(
        import_external_dense(&file, &partial, 40),
        Err(Error::MissingIds(_))
    ));
    assert!(import_external_dense(&file, &map, 41).is_err());
}

#[test]
fn report_csv_has_summary_rows() {
    let run = |seed, acc| EnsembleRun {
        scheme: "A".into(),
        seed,
        scale: 1.0,
        c: 0.5,
        tuning_accuracy: None,
        test_accuracy: acc,
        protocol: "cv",
    };
    let r = EnsembleReport {
        runs: vec![run(1, 0.9), run(2, 0.8)],
    };
    let csv = r.to_csv();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "scheme,seed,split,accuracy,std,scale,C,protocol");
    assert_eq!(lines[1], "A,1,test,0.9,,1,0.5,cv");
    assert!(lines[3].starts_with("A,summary,test,0.85"));
    let (m, sd) = mean_std(&[0.9, 0.8]);
    assert!((m - 0.85).abs() < 1e-12 && (sd - 0.0707106781).abs() < 1e-9);
}
