use gamma_lab::congruence::all_partitions;
use gamma_lab::enumerate::permutations;
use gamma_lab::format::parse_unvalidated;
use gamma_lab::{
    canonical_key, check_congruence, filter_closure, is_filter, parse_structure, principal_filter,
    principal_filter_oracle, random_structure, relation_n, serialize_structure, up_set, validate, ElementSet,
    EnumConfig, Kind, PoGammaStructure,
};
use proptest::prelude::*;

fn structure() -> impl Strategy<Value = PoGammaStructure> {
    (1usize..=5, 1usize..=2, any::<u64>())
        .prop_map(|(n, g, seed)| random_structure(&EnumConfig::new(n, g), seed).unwrap())
}

fn with_subsets() -> impl Strategy<Value = (PoGammaStructure, ElementSet, ElementSet)> {
    structure()
        .prop_flat_map(|s| {
            let n = s.n();
            (
                Just(s),
                prop::collection::vec(any::<bool>(), n),
                prop::collection::vec(any::<bool>(), n),
            )
        })
        .prop_map(|(s, a, extra)| {
            let n = s.n();
            let small = ElementSet::from_elements(n, (0..n).filter(|&i| a[i]));
            let big = ElementSet::from_elements(n, (0..n).filter(|&i| a[i] || extra[i]));
            (s, small, big)
        })
}

// Straight from the definitions, one quadruple loop per axiom.
fn naive_valid(s: &PoGammaStructure) -> bool {
    let n = s.n();
    let r = (0..n).all(|a| s.leq(a, a));
    let anti = (0..n).all(|a| (0..n).all(|b| !(s.leq(a, b) && s.leq(b, a)) || a == b));
    let trans = (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| !(s.leq(a, b) && s.leq(b, c)) || s.leq(a, c))));
    let compat = (0..s.g()).all(|gm| {
        (0..n).all(|a| {
            (0..n).all(|b| {
                !s.leq(a, b)
                    || (0..n).all(|c| s.leq(s.op(gm, a, c), s.op(gm, b, c)) && s.leq(s.op(gm, c, a), s.op(gm, c, b)))
            })
        })
    });
    let assoc = s.kind() == Kind::Groupoid
        || (0..s.g()).all(|gm| {
            (0..s.g()).all(|mu| {
                (0..n)
                    .all(|a| (0..n).all(|b| (0..n).all(|c| s.op(mu, s.op(gm, a, b), c) == s.op(gm, a, s.op(mu, b, c)))))
            })
        });
    r && anti && trans && compat && assoc
}

fn naive_is_filter(s: &PoGammaStructure, f: &ElementSet) -> bool {
    let n = s.n();
    if f.is_empty() {
        return false;
    }
    for gm in 0..s.g() {
        for a in 0..n {
            for b in 0..n {
                let p = f.contains(s.op(gm, a, b));
                if f.contains(a) && f.contains(b) && !p {
                    return false;
                }
                if p && !(f.contains(a) && f.contains(b)) {
                    return false;
                }
            }
        }
    }
    (0..n).all(|a| (0..n).all(|b| !(f.contains(a) && s.leq(a, b)) || f.contains(b)))
}

fn permuted(s: &PoGammaStructure, pm: usize, pg: usize) -> (PoGammaStructure, Vec<usize>) {
    let perms_m = permutations(s.n());
    let perms_g = permutations(s.g());
    let m = perms_m[pm % perms_m.len()].clone();
    let g = &perms_g[pg % perms_g.len()];
    (s.relabel(&m, g).unwrap(), m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn random_structures_are_valid(s in structure()) {
        prop_assert!(validate(&s).is_valid());
        prop_assert!(naive_valid(&s));
    }

    #[test]
    fn validate_agrees_with_definitions(
        n in 1usize..=3,
        g in 1usize..=2,
        semigroup in any::<bool>(),
        raw in prop::collection::vec(any::<u8>(), 2 * 9 + 9),
    ) {
        let op = (0..g * n * n).map(|i| raw[i] as usize % n).collect();
        let mut leq: Vec<bool> = (0..n * n).map(|i| raw[18 + i] % 3 == 0).collect();
        for a in 0..n {
            leq[a * n + a] = raw[18 + a] % 5 != 0;
        }
        let kind = if semigroup { Kind::Semigroup } else { Kind::Groupoid };
        let s = PoGammaStructure::from_flat(n, g, op, leq, kind).unwrap();
        prop_assert_eq!(validate(&s).is_valid(), naive_valid(&s));
    }

    #[test]
    fn closure_is_a_closure_operator((s, small, big) in with_subsets()) {
        prop_assume!(!small.is_empty());
        let c_small = filter_closure(&s, &small).unwrap();
        let c_big = filter_closure(&s, &big).unwrap();
        prop_assert!(small.is_subset(&c_small));
        prop_assert!(c_small.is_subset(&c_big));
        prop_assert_eq!(&filter_closure(&s, &c_small).unwrap(), &c_small);
        prop_assert!(is_filter(&s, &c_small).unwrap().verdict);
        prop_assert!(naive_is_filter(&s, &c_small));
    }

    #[test]
    fn principal_filter_matches_oracle(s in structure()) {
        for a in 0..s.n() {
            let f = principal_filter(&s, a).unwrap();
            prop_assert_eq!(&f, &principal_filter_oracle(&s, a).unwrap());
            prop_assert!(f.contains(a));
            prop_assert!(up_set(&s, a).unwrap().is_subset(&f));
        }
    }

    #[test]
    fn is_filter_matches_definition(s in structure(), mask in any::<u64>()) {
        let f = ElementSet::from_mask(s.n(), mask & ((1 << s.n()) - 1));
        prop_assert_eq!(is_filter(&s, &f).unwrap().verdict, naive_is_filter(&s, &f));
    }

    #[test]
    fn up_sets_are_up_closed(s in structure()) {
        for a in 0..s.n() {
            let u = up_set(&s, a).unwrap();
            prop_assert!(u.contains(a));
            for x in u.iter() {
                for y in 0..s.n() {
                    prop_assert!(!s.leq(x, y) || u.contains(y));
                }
            }
        }
    }

    #[test]
    fn relation_n_is_a_semilattice_congruence(s in structure()) {
        let p = relation_n(&s).unwrap();
        prop_assert!(check_congruence(&s, &p).unwrap().is_semilattice);
        for a in 0..s.n() {
            for b in 0..s.n() {
                let same = principal_filter(&s, a).unwrap() == principal_filter(&s, b).unwrap();
                prop_assert_eq!(p.same(a, b), same);
            }
        }
    }

    #[test]
    fn serialization_round_trips(s in structure()) {
        let text = serialize_structure(&s);
        prop_assert_eq!(&parse_structure(&text).unwrap(), &s);
        prop_assert_eq!(serialize_structure(&parse_unvalidated(&text).unwrap()), text);
    }

    #[test]
    fn relabeling_transports_filters(s in structure(), pm in any::<usize>(), pg in any::<usize>()) {
        let (t, m) = permuted(&s, pm, pg);
        prop_assert!(validate(&t).is_valid());
        prop_assert_eq!(canonical_key(&s).unwrap(), canonical_key(&t).unwrap());
        for a in 0..s.n() {
            let moved = ElementSet::from_elements(s.n(), principal_filter(&s, a).unwrap().iter().map(|x| m[x]));
            prop_assert_eq!(principal_filter(&t, m[a]).unwrap(), moved);
        }
    }
}

#[test]
fn semilattice_congruences_form_a_meet_closed_family() {
    let s = gamma_lab::samples::chain_min(4, 2);
    let slc: Vec<_> = all_partitions(4)
        .into_iter()
        .filter(|p| check_congruence(&s, p).unwrap().is_semilattice)
        .collect();
    for p in &slc {
        for q in &slc {
            assert!(check_congruence(&s, &p.meet(q)).unwrap().is_semilattice);
        }
    }
}
