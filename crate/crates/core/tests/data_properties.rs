use proptest::prelude::*;
use qperc_core::data::{
    make_hard_dataset, make_planted_margin_dataset, margin, margin_sweep_2d, normalize, Label,
    LabeledDataset, LabeledPoint,
};

fn dataset_2d(raw: Vec<(f64, f64, bool)>) -> LabeledDataset {
    let points = raw
        .into_iter()
        .map(|(a, b, pos)| LabeledPoint::new(vec![a, b], if pos { Label::Pos } else { Label::Neg }))
        .collect();
    LabeledDataset::new("p", 2, points).unwrap()
}

#[test]
fn hard_margin_large() {
    let r = margin(&make_hard_dataset(1000).unwrap());
    assert!((r.gamma - 1.0 / 1000f64.sqrt()).abs() < 1e-9, "{}", r.gamma);
}

#[test]
fn hard_margin_all_sizes_up_to_200() {
    for n in 1..=200 {
        let r = margin(&make_hard_dataset(n).unwrap());
        assert!((r.gamma - 1.0 / (n as f64).sqrt()).abs() < 1e-9, "n={n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn optimizer_agrees_with_sweep(
        raw in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0, any::<bool>()), 1..12)
    ) {
        let ds = dataset_2d(raw);
        let opt = margin(&ds);
        let sweep = margin_sweep_2d(&ds).unwrap();
        prop_assert!((opt.gamma - sweep.gamma).abs() < 1e-5, "{} vs {}", opt.gamma, sweep.gamma);
    }

    #[test]
    fn witness_separates(
        n in 2usize..60, d in 2usize..6, gamma in 0.01f64..0.5, seed in any::<u64>()
    ) {
        let ds = make_planted_margin_dataset(n, d, gamma, seed).unwrap();
        let r = margin(&ds);
        let w = r.witness.unwrap();
        let worst = ds.signed_margins(&w).into_iter().fold(f64::INFINITY, f64::min);
        prop_assert!(worst / w.norm() >= r.gamma - 1e-9);
    }

    #[test]
    fn normalize_idempotent(
        raw in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0, any::<bool>()), 1..20)
    ) {
        let ds = dataset_2d(raw);
        if let Ok(once) = normalize(&ds) {
            let twice = normalize(&once).unwrap();
            for (a, b) in once.points().iter().zip(twice.points()) {
                for (u, v) in a.x.iter().zip(&b.x) {
                    prop_assert!((u - v).abs() <= 1e-15);
                }
            }
            prop_assert!(once.points().iter().all(|p| p.norm() <= 1.0 + 1e-12));
        }
    }
}
