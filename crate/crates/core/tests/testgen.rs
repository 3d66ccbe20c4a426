use hisc::automaton::{enumerate, equivalent, Automaton};
use hisc::projection::ProjectionContext;
use hisc::testgen::{
    nfa_shortest_rejected, nfa_universal, pspace_gadget, railroad_models, random_instance,
    random_nfa, Profile,
};
use proptest::prelude::*;

fn golden(name: &str) -> Automaton {
    let path = format!(
        "{}/tests/data/railroad/{name}.des",
        env!("CARGO_MANIFEST_DIR")
    );
    Automaton::from_des(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn railroad_models_match_golden_files() {
    let (g1, g2, k, ctx) = railroad_models();
    for (model, name) in [(&g1, "g1"), (&g2, "g2"), (&k, "spec")] {
        let stored = golden(name);
        assert_eq!(model.to_des(), stored.to_des(), "{name}");
        assert!(equivalent(model, &stored).unwrap());
    }
    let flags = ProjectionContext::new(golden("g1").alphabet().union(golden("g2").alphabet()));
    assert_eq!(flags.observable(), ctx.observable());
    assert_eq!(flags.highlevel(), ctx.highlevel());
}

#[test]
fn generators_are_reproducible() {
    for seed in 0..20 {
        for profile in [
            Profile::MocByConstruction,
            Profile::Unconstrained,
            Profile::AcyclicSmall,
        ] {
            let a = random_instance(seed, profile);
            let b = random_instance(seed, profile);
            assert_eq!(a.plant.to_des(), b.plant.to_des());
            assert_eq!(a.spec.to_des(), b.spec.to_des());
        }
        assert_eq!(
            random_nfa(seed, 4, 2).to_des(),
            random_nfa(seed, 4, 2).to_des()
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn moc_profile_has_nested_alphabets(seed in 0u64..100_000) {
        let inst = random_instance(seed, Profile::MocByConstruction);
        let (o, h) = (inst.ctx.observable(), inst.ctx.highlevel());
        prop_assert!(o.is_subset(&h) || h.is_subset(&o));
    }

    #[test]
    fn acyclic_profile_is_acyclic(seed in 0u64..100_000) {
        let inst = random_instance(seed, Profile::AcyclicSmall);
        prop_assert!(!hisc::automaton::has_cycle(&inst.plant));
    }

    /// The rejected string really is rejected, and nothing shorter is.
    #[test]
    fn shortest_rejected_is_shortest(seed in 0u64..100_000) {
        let a = random_nfa(seed, 4, 2);
        match nfa_shortest_rejected(&a) {
            None => prop_assert!(nfa_universal(&a).unwrap()),
            Some(w) => {
                prop_assert!(!hisc::automaton::member(&a, &w));
                let k = a.alphabet().len();
                let below = enumerate(&a, w.len().saturating_sub(1)).len();
                let all: usize = (0..w.len()).map(|i| k.pow(i as u32)).sum();
                prop_assert_eq!(below, all);
            }
        }
    }

    /// The gadget is polynomial in the NFA.
    #[test]
    fn gadget_size_is_linear(seed in 0u64..100_000) {
        let a = random_nfa(seed, 4, 2);
        let (g, _) = pspace_gadget(&a).unwrap();
        let m = a.num_transitions();
        prop_assert!(g.num_states() <= 10 * m + 2 * a.alphabet().len() + 8);
        prop_assert!(g.is_deterministic());
    }
}
