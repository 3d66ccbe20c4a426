use hisc::automaton::{chars, enumerate, member, Automaton};
use hisc::projection::{parallel, project, project_string, Map, ProjectionContext};
use hisc::relational::{
    check_loc, check_moc, check_moc_report, check_oc, map_pairs_q, map_pairs_q2, oc_pair_witness,
    sufficient_moc, sync_pair_product, Proof,
};
use hisc::testgen::{
    brute_loc, brute_moc, brute_moc_pair, brute_oc, brute_oc_pair, railroad_models,
    random_instance, Profile,
};
use hisc::Verdict;
use proptest::prelude::*;

fn load(rel: &str) -> Automaton {
    let path = format!("{}/tests/data/{rel}", env!("CARGO_MANIFEST_DIR"));
    Automaton::from_des(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn golden(rel: &str) -> (Automaton, ProjectionContext) {
    let l = load(rel).mark_all();
    let ctx = ProjectionContext::new(l.alphabet().clone());
    (l, ctx)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Every pair string of `L ∥_{Σo} L` splits into two strings of `L`
    /// with equal observations.
    #[test]
    fn pair_product_decomposes(seed in 0u64..10_000) {
        let inst = random_instance(seed, Profile::Unconstrained);
        let l = inst.plant.mark_all();
        let ctx = &inst.ctx;
        let pa = sync_pair_product(&l, &l, &ctx.observable()).unwrap();
        for word in pa.enumerate_generated(6) {
            let left: Vec<_> = word.iter().filter_map(|p| p.left.clone()).collect();
            let right: Vec<_> = word.iter().filter_map(|p| p.right.clone()).collect();
            prop_assert!(member(&l, &left));
            prop_assert!(member(&l, &right));
            prop_assert_eq!(
                project_string(ctx, Map::P, &left).unwrap(),
                project_string(ctx, Map::P, &right).unwrap()
            );
        }
    }

    /// `Q` applied to both sides lands in `Q(L) × Q(L)`; applied to the
    /// right side only, in `L × Q(L)`.
    #[test]
    fn mapped_pairs_are_abstract(seed in 0u64..10_000) {
        let inst = random_instance(seed, Profile::Unconstrained);
        let l = inst.plant.mark_all();
        let ctx = &inst.ctx;
        let q_l = project(&l, &ctx.highlevel());
        let pa = sync_pair_product(&l, &l, &ctx.observable()).unwrap();
        let sides = |word: &[hisc::relational::PairEvent]| {
            let left: Vec<_> = word.iter().filter_map(|p| p.left.clone()).collect();
            let right: Vec<_> = word.iter().filter_map(|p| p.right.clone()).collect();
            (left, right)
        };
        for word in map_pairs_q(&pa, ctx).unwrap().enumerate_generated(5) {
            let (left, right) = sides(&word);
            prop_assert!(member(&q_l, &left) && member(&q_l, &right));
        }
        for word in map_pairs_q2(&pa, ctx).unwrap().enumerate_generated(5) {
            let (left, right) = sides(&word);
            prop_assert!(member(&l, &left) && member(&q_l, &right));
        }
    }

    /// Reported violations are confirmed by the brute-force pair oracles,
    /// on cyclic plants too.
    #[test]
    fn violations_are_sound(seed in 0u64..10_000) {
        let inst = random_instance(seed, Profile::Unconstrained);
        let l = inst.plant.mark_all();
        let ctx = &inst.ctx;
        let phi = |w: &[_]| {
            let q = project_string(ctx, Map::Q, w).unwrap();
            project_string(ctx, Map::PHi, &q).unwrap()
        };
        if let Some(c) = check_oc(&l, ctx, None).unwrap().counterexample() {
            prop_assert_eq!(
                project_string(ctx, Map::PHi, &c.left).unwrap(),
                project_string(ctx, Map::PHi, &c.right).unwrap()
            );
            prop_assert_eq!(oc_pair_witness(&l, ctx, &c.left, &c.right).unwrap(), None);
            let obs = 2 * (c.left.len() + c.right.len()) + 4;
            prop_assert!(!brute_oc_pair(&l, ctx, &c.left, &c.right, obs).unwrap());
        }
        if let Some(c) = check_moc(&l, ctx, None).unwrap().counterexample() {
            prop_assert!(member(&l, &c.left));
            prop_assert_eq!(phi(&c.left), project_string(ctx, Map::PHi, &c.right).unwrap());
            prop_assert!(!brute_moc_pair(&l, ctx, &c.left, &c.right).unwrap());
        }
    }

    /// On acyclic plants the exact checkers agree with brute force.
    #[test]
    fn agrees_with_brute_force_on_acyclic(seed in 0u64..10_000) {
        let inst = random_instance(seed, Profile::AcyclicSmall);
        let l = inst.plant.mark_all();
        let ctx = &inst.ctx;
        let oc = check_oc(&l, ctx, None).unwrap();
        let moc = check_moc(&l, ctx, None).unwrap();
        let loc = check_loc(&l, ctx, None).unwrap();
        prop_assert!(oc.holds() || oc.is_violated());
        prop_assert!(moc.holds() || moc.is_violated());
        prop_assert_eq!(oc.is_violated(), brute_oc(&l, ctx, 8).unwrap().is_violated());
        prop_assert_eq!(moc.is_violated(), brute_moc(&l, ctx, 8).unwrap().is_violated());
        prop_assert_eq!(loc.is_violated(), brute_loc(&l, ctx, 8).unwrap().is_violated());
    }

    /// MOC implies OC; the sufficient conditions imply MOC.
    #[test]
    fn moc_is_stronger(seed in 0u64..10_000) {
        let inst = random_instance(seed, Profile::Unconstrained);
        let l = inst.plant.mark_all();
        let ctx = &inst.ctx;
        let moc = check_moc(&l, ctx, None).unwrap();
        let oc = check_oc(&l, ctx, None).unwrap();
        if oc.is_violated() {
            prop_assert!(moc.is_violated());
        }
        if sufficient_moc(ctx) {
            prop_assert_eq!(moc, Verdict::Holds { by: Proof::SufficientCondition });
        }
    }
}

#[test]
fn oc_violation_counterexample() {
    let (l, ctx) = golden("oc_violation/plant.des");
    let v = check_oc(&l, &ctx, None).unwrap();
    let c = v.counterexample().expect("violated");
    assert_eq!((c.left.clone(), c.right.clone()), (chars("ab"), chars("b")));
    assert!(brute_oc(&l, &ctx, 6).unwrap().is_violated());
}

#[test]
fn interleaving_golden_oc_holds() {
    let (l, ctx) = golden("interleaving/plant.des");
    assert!(check_oc(&l, &ctx, None).unwrap().holds());
    assert!(brute_oc(&l, &ctx, 6).unwrap().holds());
}

#[test]
fn moc_gap_golden_verdicts() {
    let (l, ctx) = golden("moc_gap/plant.des");
    assert_eq!(
        check_oc(&l, &ctx, None).unwrap(),
        Verdict::Holds {
            by: Proof::ExhaustiveFinite
        }
    );
    let report = check_moc_report(&l, &ctx, None).unwrap();
    let c = report.verdict.counterexample().unwrap();
    assert_eq!(c.to_string(), "c | bc");
    assert!(report.pair_states > 0);
}

#[test]
fn railroad_moc_violation_is_confirmed_independently() {
    let (g1, g2, _, ctx) = railroad_models();
    let l = parallel(&[&g1, &g2]).unwrap().mark_all();
    let v = check_moc(&l, &ctx, Some(20)).unwrap();
    let c = v.counterexample().expect("violated");
    assert_eq!(c.left, vec![hisc::automaton::ev("a_e")]);
    assert!(!brute_moc_pair(&l, &ctx, &c.left, &c.right).unwrap());
    assert!(brute_moc(&l, &ctx, 6).unwrap().is_violated());
    // OC alone is not refuted by the same pair
    assert!(!check_oc(&l, &ctx, Some(20)).unwrap().is_violated());
}

#[test]
fn generated_strings_are_enumerable() {
    let (l, _) = golden("moc_gap/plant.des");
    assert_eq!(enumerate(&l, 3).len(), 7);
}
