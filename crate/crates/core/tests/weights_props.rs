use num_rational::BigRational;
use proptest::prelude::*;

use flatmorse::weights::{is_regular, normalize, Regularity};
use flatmorse::WeightConfig;

fn weight() -> impl Strategy<Value = BigRational> {
    (1i64..40, 2i64..41)
        .prop_filter("interior", |(p, q)| p < q)
        .prop_map(|(p, q)| BigRational::new(p.into(), q.into()))
}

fn regular_flag(w: Vec<BigRational>) -> bool {
    is_regular(&WeightConfig::parabolic(1, w).unwrap())
        .unwrap()
        .is_regular()
}

proptest! {
    #[test]
    fn regularity_ignores_order(mut w in prop::collection::vec(weight(), 1..7), k in 0usize..7) {
        let before = regular_flag(w.clone());
        let k = k % w.len();
        w.rotate_left(k);
        prop_assert_eq!(before, regular_flag(w));
    }

    #[test]
    fn flipping_two_weights_keeps_regularity(w in prop::collection::vec(weight(), 2..7)) {
        let mut flipped = w.clone();
        for t in flipped.iter_mut().take(2) {
            *t = BigRational::from_integer(1.into()) - t.clone();
        }
        prop_assert_eq!(regular_flag(w), regular_flag(flipped));
    }

    #[test]
    fn witness_has_integer_kappa(w in prop::collection::vec(weight(), 1..7)) {
        let cfg = WeightConfig::parabolic(1, w).unwrap();
        if let Regularity::Irregular { witness } = is_regular(&cfg).unwrap() {
            let k = flatmorse::weights::kappa(&cfg, witness).value;
            prop_assert!(k.is_integer());
        }
    }

    #[test]
    fn normalize_is_idempotent(
        w in prop::collection::vec(weight(), 1..5),
        zeros in 0usize..3,
        ones in 0usize..3,
    ) {
        let mut all = w;
        all.extend(std::iter::repeat_n(BigRational::from_integer(0.into()), zeros));
        all.extend(std::iter::repeat_n(BigRational::from_integer(1.into()), ones));
        let once = normalize(&WeightConfig::raw(2, all).unwrap()).unwrap().config;
        let twice = normalize(&once).unwrap().config;
        prop_assert_eq!(once, twice);
    }
}
