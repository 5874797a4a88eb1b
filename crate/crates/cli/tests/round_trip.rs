use ietforge::numeric::parse_oracle;
use ietforge::{build_iet, Iet, Permutation, QAlpha};
use ietforge_cli::{parse_spec, serialize_spec, LoadOptions};
use proptest::prelude::*;
use std::sync::Arc;

const ALPHAS: &[&str] = &["sqrt(2)/2", "sqrt(3)/5", "cf[0;2,(1)]", "0.4142135 +/- 1e-7"];

fn arb_iet() -> impl Strategy<Value = Iet> {
    (1usize..7, 0..ALPHAS.len()).prop_flat_map(|(m, k)| {
        let perm = Just((1..=m).collect::<Vec<usize>>()).prop_shuffle();
        let lengths = prop::collection::vec((1i64..30, 1i64..12, 0i64..5, 1i64..9), m);
        (perm, lengths).prop_map(move |(perm, lengths)| {
            let oracle = Arc::new(parse_oracle(ALPHAS[k], false).unwrap());
            let lengths = lengths.into_iter().map(|(a, b, c, d)| QAlpha::frac(a, b, c, d)).collect();
            build_iet(Permutation::new(perm).unwrap(), lengths, oracle).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn serialized_specs_parse_back_to_the_same_map(t in arb_iet()) {
        let text = serialize_spec(&t);
        let subject = parse_spec(&text, &LoadOptions::default()).unwrap();
        prop_assert_eq!(subject.oracle.declaration(), t.oracle().declaration());
        prop_assert_eq!(subject.iet.permutation(), t.permutation());
        prop_assert_eq!(subject.iet.lengths(), t.lengths());
        prop_assert!(subject.iet == t);
        prop_assert_eq!(serialize_spec(&subject.iet), text);
    }
}
