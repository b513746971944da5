use clonescope_core::text::{cosine, jaro, jaro_winkler, normalize_text, JaroWinklerParams};
use clonescope_oracles as oracle;
use proptest::prelude::*;

#[test]
fn matches_definitional_oracle_on_random_pairs() {
    let mut rng = oracle::rng(2024);
    let alphabet = ['a', 'b', 'c', 'd'];
    let params = JaroWinklerParams::default();
    for _ in 0..10_000 {
        let s1 = oracle::random_string(&mut rng, &alphabet, 12);
        let s2 = oracle::random_string(&mut rng, &alphabet, 12);
        let j = jaro(&s1, &s2);
        assert!((j - oracle::jaro(&s1, &s2)).abs() <= 1e-12, "{s1:?} {s2:?}");
        let jw = jaro_winkler(&s1, &s2, &params);
        assert!((jw - oracle::jaro_winkler(&s1, &s2, 0.1, 4)).abs() <= 1e-12, "{s1:?} {s2:?}");
    }
}

#[test]
fn martha_marhta() {
    let j = jaro("MARTHA", "MARHTA");
    assert!((j - 17.0 / 18.0).abs() < 1e-15);
    let jw = jaro_winkler("MARTHA", "MARHTA", &JaroWinklerParams::default());
    assert!((jw - (17.0 / 18.0 + 0.3 * (1.0 / 18.0))).abs() < 1e-15);
    assert!((jw - 0.961_111_111_111).abs() < 1e-12);
}

fn short_string() -> impl Strategy<Value = String> {
    proptest::collection::vec(prop::sample::select(vec!['a', 'b', 'c', 'd']), 0..=12)
        .prop_map(|v| v.into_iter().collect())
}

proptest! {
    #[test]
    fn symmetric_and_bounded(s1 in short_string(), s2 in short_string()) {
        let p = JaroWinklerParams::default();
        let (j, jr) = (jaro(&s1, &s2), jaro(&s2, &s1));
        prop_assert_eq!(j, jr);
        prop_assert_eq!(jaro_winkler(&s1, &s2, &p), jaro_winkler(&s2, &s1, &p));
        prop_assert!((0.0..=1.0).contains(&j));
        prop_assert!((0.0..=1.0).contains(&jaro_winkler(&s1, &s2, &p)));
    }

    #[test]
    fn winkler_boost_only_with_shared_prefix(s1 in short_string(), s2 in short_string()) {
        let p = JaroWinklerParams::default();
        let j = jaro(&s1, &s2);
        let jw = jaro_winkler(&s1, &s2, &p);
        prop_assert!(jw >= j);
        let prefix = s1.chars().zip(s2.chars()).take_while(|(a, b)| a == b).count();
        prop_assert_eq!(jw == j, prefix == 0 || j == 1.0);
    }

    #[test]
    fn normalize_is_idempotent(text in "[A-Za-z0-9 ,.!?'-]{0,60}") {
        let once = normalize_text(&text);
        prop_assert_eq!(normalize_text(&once), once);
    }

    #[test]
    fn cosine_is_scale_invariant(
        a in proptest::collection::vec(0.0f64..10.0, 5),
        b in proptest::collection::vec(0.0f64..10.0, 5),
        c in 0.01f64..100.0,
    ) {
        let scaled: Vec<f64> = a.iter().map(|v| v * c).collect();
        let base = cosine(&a, &b).unwrap();
        prop_assert!((cosine(&scaled, &b).unwrap() - base).abs() < 1e-12);
        if a.iter().any(|&v| v > 0.0) {
            prop_assert!((cosine(&a, &a).unwrap() - 1.0).abs() < 1e-12);
        }
    }
}
