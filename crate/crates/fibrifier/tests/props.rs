//! Property tests over the seeded generators: serialization round trips,
//! validation totality, opposite involution, and generator soundness.

use proptest::prelude::*;

use fibrifier::cat::opposite;
use fibrifier::corpus::{gen_category, gen_fibration, gen_functor, GenConfig};
use fibrifier::fibcheck::{is_fibration, Criterion};
use fibrifier::json::{to_canonical_string, CatDoc, FunctorDoc};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn serialization_round_trips(seed in any::<u64>()) {
        let cfg = GenConfig::with_seed(seed);
        let c = gen_category(&cfg);
        let doc = CatDoc::of(&c);
        let text = to_canonical_string(&doc);
        let back: CatDoc = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(&*back.into_cat().unwrap(), &*c);

        let f = gen_functor(&cfg);
        let fdoc = FunctorDoc::of(&f);
        let back: FunctorDoc = serde_json::from_str(&to_canonical_string(&fdoc)).unwrap();
        prop_assert!(back.into_functor().unwrap().same_as(&f));
    }

    #[test]
    fn validate_accepts_generated_and_is_idempotent(seed in any::<u64>()) {
        let cfg = GenConfig::with_seed(seed);
        let c = gen_category(&cfg);
        let r1 = c.validate();
        let r2 = c.validate();
        prop_assert!(r1.is_valid());
        prop_assert_eq!(r1, r2);
    }

    #[test]
    fn opposite_is_involutive(seed in any::<u64>()) {
        let cfg = GenConfig::with_seed(seed);
        let c = gen_category(&cfg);
        let opp = opposite(&c);
        prop_assert!(opp.validate().is_valid());
        prop_assert_eq!(&opposite(&opp), &*c);
    }

    #[test]
    fn generated_fibrations_satisfy_direct_criterion(seed in any::<u64>()) {
        let cfg = GenConfig::with_seed(seed);
        let fib = gen_fibration(&cfg);
        prop_assert!(fib.proj.source.object_count() <= cfg.max_objects);
        prop_assert!(fib.proj.source.mor_count() <= cfg.max_morphisms);
        prop_assert!(is_fibration(&fib.proj, &[Criterion::Direct]).verdict());
    }

    #[test]
    fn regeneration_is_byte_identical(seed in any::<u64>()) {
        let cfg = GenConfig::with_seed(seed);
        let a = to_canonical_string(&FunctorDoc::of(&gen_fibration(&cfg).proj));
        let b = to_canonical_string(&FunctorDoc::of(&gen_fibration(&cfg).proj));
        prop_assert_eq!(a, b);
    }
}
