use hisc::automaton::{
    accessible, combine, complement, concat_sigma_star, determinize, enumerate, equivalent,
    has_cycle, included, is_nonblocking, member, minimize, prefix_closure, to_dfa, trim, Alphabet,
    Automaton, AutomatonError, SetOp,
};
use hisc::testgen::random_automaton;
use proptest::prelude::*;

fn pair(seed: u64) -> (Automaton, Automaton) {
    let a = random_automaton(seed.wrapping_mul(2), 5, 3);
    let b = random_automaton(seed.wrapping_mul(2) | 1, 5, 3);
    let sigma = a.alphabet().union(b.alphabet());
    (
        a.with_alphabet(&sigma).unwrap(),
        b.with_alphabet(&sigma).unwrap(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn determinize_preserves_language(seed in any::<u64>()) {
        let a = random_automaton(seed, 5, 3);
        let d = determinize(&a);
        prop_assert!(d.is_deterministic());
        prop_assert!(equivalent(&a, &d).unwrap());
    }

    #[test]
    fn minimize_is_canonical(seed in any::<u64>()) {
        let a = random_automaton(seed, 5, 3);
        let m = minimize(&a);
        prop_assert!(equivalent(&a, &m).unwrap());
        prop_assert_eq!(minimize(&m).num_states(), m.num_states());
        prop_assert_eq!(minimize(&to_dfa(&a)).num_states(), m.num_states());
    }

    #[test]
    fn boolean_identities(seed in any::<u64>()) {
        let (a, b) = pair(seed);
        let union = combine(SetOp::Union, &a, &b).unwrap();
        let inter = combine(SetOp::Intersection, &a, &b).unwrap();
        let diff = combine(SetOp::Difference, &a, &b).unwrap();
        prop_assert!(included(&a, &union).unwrap().holds());
        prop_assert!(included(&inter, &a).unwrap().holds());
        prop_assert!(included(&diff, &a).unwrap().holds());
        // a \ b = a ∩ co(b)
        let via_complement = combine(SetOp::Intersection, &a, &complement(&b)).unwrap();
        prop_assert!(equivalent(&diff, &via_complement).unwrap());
        // a = (a ∩ b) ∪ (a \ b)
        let back = combine(SetOp::Union, &inter, &diff).unwrap();
        prop_assert!(equivalent(&a, &back).unwrap());
    }

    #[test]
    fn complement_is_involutive(seed in any::<u64>()) {
        let a = random_automaton(seed, 5, 3);
        prop_assert!(equivalent(&complement(&complement(&a)), &a).unwrap());
        let both = combine(SetOp::Intersection, &a, &complement(&a)).unwrap();
        prop_assert!(enumerate(&both, 6).is_empty());
    }

    #[test]
    fn inclusion_witness_is_genuine(seed in any::<u64>()) {
        let (a, b) = pair(seed);
        if let Some(w) = included(&a, &b).unwrap().witness() {
            prop_assert!(member(&a, w));
            prop_assert!(!member(&b, w));
        }
    }

    #[test]
    fn prefix_closure_contains_prefixes(seed in any::<u64>()) {
        let a = random_automaton(seed, 5, 3);
        let c = prefix_closure(&a);
        for w in enumerate(&a, 6).strings {
            for i in 0..=w.len() {
                prop_assert!(member(&c, &w[..i]));
            }
        }
        prop_assert!(equivalent(&prefix_closure(&c), &c).unwrap());
    }

    #[test]
    fn concat_sigma_star_is_extension_closed(seed in any::<u64>()) {
        let a = random_automaton(seed, 4, 2);
        let c = concat_sigma_star(&a);
        prop_assert!(included(&a, &c).unwrap().holds());
        for w in enumerate(&c, 5).strings {
            for e in a.alphabet().events() {
                let mut longer = w.clone();
                longer.push(e.clone());
                prop_assert!(member(&c, &longer));
            }
        }
    }

    #[test]
    fn trim_is_nonblocking(seed in any::<u64>()) {
        let a = random_automaton(seed, 5, 3);
        let t = trim(&a);
        // the empty language keeps its single, unmarked initial state
        let empty = enumerate(&t, 0).is_empty() && !t.marked().iter().any(|m| *m);
        prop_assert!(empty || is_nonblocking(&t));
        prop_assert!(equivalent(&a, &t).unwrap());
        prop_assert!(accessible(&a).num_states() <= a.num_states());
    }

    #[test]
    fn des_round_trip(seed in any::<u64>()) {
        let a = random_automaton(seed, 5, 3);
        let text = a.to_des();
        let back = Automaton::from_des(&text).unwrap();
        prop_assert_eq!(back.to_des(), text);
    }
}

#[test]
fn cycles_are_detected() {
    let cyclic = Automaton::from_des(
        "events: a b\nstates: 0 1\ninitial: 0\nmarked: 0\ntrans: 0 a 1\ntrans: 1 b 0\n",
    )
    .unwrap();
    assert!(has_cycle(&cyclic));
    let acyclic =
        Automaton::from_des("events: a b\nstates: 0 1\ninitial: 0\nmarked: 1\ntrans: 0 a 1\n")
            .unwrap();
    assert!(!has_cycle(&acyclic));
}

#[test]
fn malformed_input_is_rejected() {
    let unknown_event = "events: a\nstates: 0\ninitial: 0\nmarked: 0\ntrans: 0 b 0\n";
    assert_eq!(
        Automaton::from_des(unknown_event).unwrap_err(),
        AutomatonError::UnknownEvent("b".into())
    );
    let unknown_state = "events: a\nstates: 0\ninitial: 1\nmarked: 0\n";
    assert!(Automaton::from_des(unknown_state).is_err());
}

#[test]
fn mismatched_alphabets_are_an_error() {
    let a = Automaton::universal(Alphabet::parse("a").unwrap());
    let b = Automaton::universal(Alphabet::parse("b").unwrap());
    assert_eq!(
        combine(SetOp::Union, &a, &b).unwrap_err(),
        AutomatonError::AlphabetMismatch
    );
}
