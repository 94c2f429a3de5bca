use compind_core::{
    apply_prep, slice_year, validate_dataset, HierarchySpec, IndicatorSpec, Polarity, Prep, RawRecord, Stage,
};
use proptest::prelude::*;

fn hierarchy() -> HierarchySpec {
    HierarchySpec::new(
        vec![
            IndicatorSpec::new("a", "G1", Polarity::Benefit, Prep::None),
            IndicatorSpec::new("b", "G1", Polarity::Cost, Prep::Reciprocal),
            IndicatorSpec::new("c", "G2", Polarity::Benefit, Prep::Reciprocal),
        ],
        &[("G1", "first"), ("G2", "second")],
        "TOP",
    )
    .unwrap()
}

const ENTITIES: [&str; 3] = ["X", "Y", "Z"];
const YEARS: [i32; 4] = [2015, 2016, 2017, 2018];
const INDICATORS: [&str; 3] = ["a", "b", "c"];

fn records(values: &[f64]) -> Vec<RawRecord> {
    let mut out = Vec::new();
    let mut k = 0;
    for e in ENTITIES {
        for y in YEARS {
            for ind in INDICATORS {
                out.push(RawRecord::new(e, y, ind, values[k]));
                k += 1;
            }
        }
    }
    out
}

proptest! {
    #[test]
    fn validation_ignores_record_order(
        values in prop::collection::vec(0.1f64..100.0, 36),
        perm in Just((0..36usize).collect::<Vec<_>>()).prop_shuffle(),
    ) {
        let h = hierarchy();
        let recs = records(&values);
        let shuffled: Vec<RawRecord> = perm.iter().map(|&i| recs[i].clone()).collect();
        let a = validate_dataset(&recs, &h, None).unwrap();
        let b = validate_dataset(&shuffled, &h, None).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn year_slices_restack_to_the_input(values in prop::collection::vec(-50.0f64..50.0, 36)) {
        let ds = validate_dataset(&records(&values), &hierarchy(), None).unwrap();
        for (t, &year) in YEARS.iter().enumerate() {
            let mat = slice_year(&ds, year).unwrap();
            prop_assert_eq!(mat.stage(), Stage::Raw);
            for (i, _) in ENTITIES.iter().enumerate() {
                for (j, _) in INDICATORS.iter().enumerate() {
                    let expected = values[(i * YEARS.len() + t) * INDICATORS.len() + j];
                    prop_assert_eq!(mat.get(i, j), expected);
                }
            }
        }
    }

    #[test]
    fn reciprocal_prep_is_an_involution(values in prop::collection::vec(0.01f64..1e4, 36)) {
        let ds = validate_dataset(&records(&values), &hierarchy(), None).unwrap();
        let twice = apply_prep(&apply_prep(&ds).unwrap()).unwrap();
        for (x, y) in ds.values().iter().zip(twice.values()) {
            prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
        }
    }
}

#[test]
fn prep_only_touches_reciprocal_indicators() {
    let values: Vec<f64> = (1..=36).map(f64::from).collect();
    let ds = validate_dataset(&records(&values), &hierarchy(), None).unwrap();
    let p = apply_prep(&ds).unwrap();
    let a = ds.indicator_index("a").unwrap();
    let b = ds.indicator_index("b").unwrap();
    for i in 0..3 {
        for t in 0..4 {
            assert_eq!(p.value(i, a, t), ds.value(i, a, t));
            assert_eq!(p.value(i, b, t), 1.0 / ds.value(i, b, t));
        }
    }
}
