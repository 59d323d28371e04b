mod common;

use boole_core::event_algebra::{bell_scenario, EventSystem, Formula};
use boole_core::{Error, Limits};
use proptest::prelude::*;

// Reference evaluator, written against the AST only.
fn holds(f: &Formula, labels: &[String], bits: &[u8]) -> bool {
    match f {
        Formula::Atom(a) => bits[labels.iter().position(|l| l == a).unwrap()] == 1,
        Formula::Not(g) => !holds(g, labels, bits),
        Formula::And(gs) => gs.iter().all(|g| holds(g, labels, bits)),
        Formula::Or(gs) => gs.iter().any(|g| holds(g, labels, bits)),
        Formula::Iff(a, b) => holds(a, labels, bits) == holds(b, labels, bits),
        Formula::Implies(a, b) => !holds(a, labels, bits) || holds(b, labels, bits),
    }
}

fn formula(n: usize) -> impl Strategy<Value = Formula> {
    let leaf = (0..n).prop_map(|i| Formula::atom(format!("E{}", i + 1)));
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            prop::collection::vec(inner.clone(), 1..4).prop_map(Formula::And),
            prop::collection::vec(inner.clone(), 1..4).prop_map(Formula::Or),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::implies(a, b)),
        ]
    })
}

fn system(max_events: usize) -> impl Strategy<Value = EventSystem> {
    (1..=max_events).prop_flat_map(|n| {
        prop::collection::vec(formula(n), 0..4).prop_map(move |cs| {
            let events = (1..=n).map(|i| format!("E{i}")).collect();
            EventSystem::new(events, cs).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn enumeration_is_exactly_the_satisfying_set(sys in system(9)) {
        let n = sys.len();
        let rows: Vec<Vec<u8>> = sys.enumerate_extremal_vectors().iter().map(|v| v.bits().to_vec()).collect();
        let expected = common::truth_table(n, |bits| {
            sys.constraints().iter().all(|c| holds(c, sys.events(), bits))
        });
        prop_assert_eq!(&rows, &expected);
        for bits in common::truth_table(n, |_| true) {
            prop_assert_eq!(sys.satisfies(&bits).unwrap(), expected.contains(&bits));
        }
        prop_assert!(rows.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn formulas_round_trip_through_text(f in formula(5)) {
        let text = f.to_string();
        prop_assert_eq!(Formula::parse(&text).unwrap(), f);
    }

    #[test]
    fn json_round_trip(sys in system(6)) {
        let doc = sys.to_doc();
        let json = serde_json::to_string(&doc).unwrap();
        let back = EventSystem::from_json(&json, &Limits::default()).unwrap();
        prop_assert_eq!(back.enumerate_extremal_vectors(), sys.enumerate_extremal_vectors());
    }
}

#[test]
fn twelve_events_exhaustive() {
    let events: Vec<String> = (1..=12).map(|i| format!("E{i}")).collect();
    let constraints = vec![
        Formula::parse("(iff E12 (and E1 E2 E3))").unwrap(),
        Formula::parse("(implies E4 (or E5 (not E6)))").unwrap(),
        Formula::parse("(or E7 E8 E9 E10 E11)").unwrap(),
    ];
    let sys = EventSystem::new(events, constraints).unwrap();
    let rows: Vec<Vec<u8>> = sys.enumerate_extremal_vectors().iter().map(|v| v.bits().to_vec()).collect();
    let expected = common::truth_table(12, |b| {
        (b[11] == (b[0] & b[1] & b[2])) && (b[3] == 0 || b[4] == 1 || b[5] == 0) && b[6..11].contains(&1)
    });
    assert_eq!(rows, expected);
}

#[test]
fn bell_scenarios_match_local_assignments() {
    for m in [2usize, 3] {
        let sys = bell_scenario(2, m).unwrap();
        assert_eq!(sys.len(), 2 * m + m * m);
        let rows: Vec<Vec<u8>> = sys.enumerate_extremal_vectors().iter().map(|v| v.bits().to_vec()).collect();
        // One row per deterministic local assignment, joints filled by conjunction.
        let mut expected: Vec<Vec<u8>> = common::truth_table(2 * m, |_| true)
            .into_iter()
            .map(|local| {
                let mut r = local.clone();
                for i in 0..m {
                    for j in 0..m {
                        r.push(local[i] & local[m + j]);
                    }
                }
                r
            })
            .collect();
        expected.sort();
        assert_eq!(rows, expected);
        assert_eq!(rows.len(), 1 << (2 * m));
    }
    assert!(matches!(bell_scenario(3, 2), Err(Error::UnsupportedScenario(_))));
    assert!(matches!(bell_scenario(2, 4), Err(Error::UnsupportedScenario(_))));
}

#[test]
fn event_cap_is_enforced() {
    let events: Vec<String> = (1..=17).map(|i| format!("E{i}")).collect();
    assert!(matches!(
        EventSystem::new(events, vec![]),
        Err(Error::EventLimitExceeded { count: 17, limit: 16 })
    ));
}
