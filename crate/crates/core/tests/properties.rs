use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use unaware::dsl::{parse_model, serialize_model};
use unaware::epistemics::{validate_possibility, Knowledge};
use unaware::harness::{
    generate_model, mutate_with, search_counterexample, shrink, GenConfig, MutationKind,
    SearchMode, Shape,
};
use unaware::preferences::{derive_possibility, induce_preferences, WeightScheme};
use unaware::{ClaimId, UnawarenessModel};

fn shape() -> impl Strategy<Value = Shape> {
    prop_oneof![Just(Shape::Chain), Just(Shape::Diamond), Just(Shape::Random)]
}

fn config() -> impl Strategy<Value = GenConfig> {
    (any::<u64>(), 1..=5usize, 1..=6usize, shape()).prop_map(|(seed, s, n, shape)| GenConfig {
        seed,
        max_spaces: s,
        max_states_per_space: n,
        shape,
        weight_scheme: Some(WeightScheme::SeededRandom(seed)),
    })
}

fn model(cfg: &GenConfig) -> UnawarenessModel {
    generate_model(cfg).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_models_respect_bounds_and_validate(cfg in config()) {
        let m = model(&cfg);
        let lat = &m.lattice;
        prop_assert!(lat.space_count() <= cfg.max_spaces);
        for s in lat.spaces() {
            prop_assert!(lat.states_of(s).len() <= cfg.max_states_per_space);
        }
        let c = m.correspondence.as_ref().unwrap();
        prop_assert!(validate_possibility(lat, c).is_valid());
    }

    #[test]
    fn generation_is_deterministic(cfg in config()) {
        prop_assert_eq!(model(&cfg), model(&cfg));
    }

    #[test]
    fn serialization_round_trips(cfg in config()) {
        let m = model(&cfg);
        let text = serialize_model(&m);
        let back = parse_model(&text).unwrap();
        prop_assert_eq!(serialize_model(&back), text);
        prop_assert_eq!(back, m);
    }

    #[test]
    fn negation_is_an_involution_and_disjoint(cfg in config()) {
        let m = model(&cfg);
        let lat = &m.lattice;
        for e in lat.all_events() {
            let n = lat.negate(&e);
            prop_assert_eq!(lat.negate(&n), e.clone());
            prop_assert!(lat.members(&n).is_disjoint(&lat.members(&e)));
        }
    }

    #[test]
    fn de_morgan_holds_on_pairs(cfg in config(), picks in proptest::collection::vec(any::<prop::sample::Index>(), 8)) {
        let m = model(&cfg);
        let lat = &m.lattice;
        let events = lat.all_events();
        for pair in picks.chunks(2) {
            let e = pair[0].get(&events);
            let f = pair[1].get(&events);
            let lhs = lat.negate(&lat.disjoin([e, f]));
            let rhs = lat.conjoin([&lat.negate(e), &lat.negate(f)]);
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn knowledge_is_truthful_and_awareness_symmetric(cfg in config()) {
        let m = model(&cfg);
        let lat = &m.lattice;
        let c = m.correspondence.as_ref().unwrap();
        let k = Knowledge::new(lat, c).unwrap();
        for e in lat.all_events() {
            prop_assert!(lat.members(&k.know(&e)).is_subset(&lat.members(&e)));
            prop_assert_eq!(k.aware(&e), k.aware(&lat.negate(&e)));
            prop_assert_eq!(k.unaware(&e), lat.negate(&k.aware(&e)));
        }
    }

    #[test]
    fn induced_weights_reveal_the_correspondence(cfg in config(), w in any::<u64>()) {
        let m = model(&cfg);
        let c = m.correspondence.as_ref().unwrap();
        for scheme in [WeightScheme::Uniform, WeightScheme::SeededRandom(w)] {
            let p = induce_preferences(&m.lattice, c, scheme);
            prop_assert_eq!(&derive_possibility(&m.lattice, &p), c);
        }
    }

    #[test]
    fn mutations_break_their_targets(cfg in config(), seed in any::<u64>()) {
        let m = model(&cfg);
        for kind in MutationKind::ALL {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            if let Some(mu) = mutate_with(&m, kind, &mut rng) {
                let c = mu.model.possibility().unwrap();
                let report = validate_possibility(&mu.model.lattice, &c);
                prop_assert!(kind.targets().iter().any(|&p| !report.holds(p)), "{} survived", kind);
            }
        }
    }

    #[test]
    fn shrinking_preserves_failure(cfg in config()) {
        let m = model(&cfg);
        let fails = |x: &UnawarenessModel| x.lattice.space_count() >= 2;
        if fails(&m) {
            let s = shrink(&m, fails);
            prop_assert!(fails(&s));
            prop_assert!(s.lattice.state_count() <= m.lattice.state_count());
            prop_assert_eq!(s.lattice.state_count(), 2);
        }
    }
}

#[test]
fn search_is_reproducible() {
    let cfg = GenConfig::default();
    let a = search_counterexample(&cfg, ClaimId::FolkNegationComplement, 10, SearchMode::Valid).unwrap();
    let b = search_counterexample(&cfg, ClaimId::FolkNegationComplement, 10, SearchMode::Valid).unwrap();
    assert_eq!(a, b);
    let none = search_counterexample(&cfg, ClaimId::Prop2(3), 20, SearchMode::Valid).unwrap();
    assert!(none.is_none());
}
