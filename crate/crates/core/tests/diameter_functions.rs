use proptest::prelude::*;

use ultrametric::diamfn::{ball, check_axioms, check_ball_dichotomy, synthesize_ultrametric, tau_from_space};
use ultrametric::oracle::random_ultrametric;
use ultrametric::{DiameterFunction, Scalar, SubsetId, UltrametricSpace};

fn small_space(max_n: usize) -> impl Strategy<Value = UltrametricSpace> {
    (1usize..=max_n, 1usize..=4, any::<u64>()).prop_map(|(n, depth, seed)| random_ultrametric(n, depth, seed))
}

fn pairs_max(t: &DiameterFunction, a: SubsetId) -> Scalar {
    let ix = a.indices();
    let mut best = Scalar::zero();
    for (k, &i) in ix.iter().enumerate() {
        for &j in &ix[k + 1..] {
            best = best.max(t.value(SubsetId::pair(i, j)));
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn synthesis_inverts_tau(s in small_space(6)) {
        let t = tau_from_space(&s).unwrap();
        prop_assert!(check_axioms(&t).unwrap().ok());
        prop_assert_eq!(synthesize_ultrametric(&t).unwrap(), s);
    }

    #[test]
    fn tau_is_isotone_and_nonnegative(s in small_space(6)) {
        let t = tau_from_space(&s).unwrap();
        let all: Vec<SubsetId> = SubsetId::all(s.n()).collect();
        for &a in &all {
            for &b in &all {
                if a.is_subset_of(b) {
                    prop_assert!(t.value(a) <= t.value(b));
                }
            }
        }
    }

    #[test]
    fn tau_is_max_over_pairs(s in small_space(8)) {
        let t = tau_from_space(&s).unwrap();
        for a in SubsetId::all(s.n()).filter(|a| a.len() >= 2) {
            prop_assert_eq!(t.value(a), pairs_max(&t, a));
        }
    }

    #[test]
    fn lazy_tau_matches_dense(s in small_space(10)) {
        let dense = DiameterFunction::from_space(&s).unwrap();
        let lazy = DiameterFunction::lazy(&s).unwrap();
        for a in SubsetId::all(s.n()) {
            prop_assert_eq!(dense.value(a), lazy.value(a));
        }
    }

    #[test]
    fn tau_json_round_trips(s in small_space(5)) {
        let t = tau_from_space(&s).unwrap();
        prop_assert_eq!(DiameterFunction::from_json(&t.to_json().unwrap()).unwrap(), t);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(25))]

    #[test]
    fn recentering_keeps_the_ball(s in small_space(4)) {
        let t = tau_from_space(&s).unwrap();
        let all: Vec<SubsetId> = SubsetId::all(s.n()).collect();
        let mut radii: Vec<Scalar> = all.iter().map(|&a| t.value(a)).collect();
        radii.sort();
        radii.dedup();
        for r in &radii {
            for &a in &all {
                let members: Vec<SubsetId> = all.iter().copied().filter(|&c| &t.value(a | c) <= r).collect();
                prop_assert_eq!(&ball(&t, a, r).unwrap().members, &members);
                for &c in &members {
                    let around_c: Vec<SubsetId> = all.iter().copied().filter(|&e| &t.value(c | e) <= r).collect();
                    prop_assert_eq!(&around_c, &members);
                }
            }
        }
    }

    #[test]
    fn ball_dichotomy_holds(s in small_space(4)) {
        let report = check_ball_dichotomy(&tau_from_space(&s).unwrap()).unwrap();
        prop_assert!(report.ok(), "{:?}", report.counterexample);
    }
}
