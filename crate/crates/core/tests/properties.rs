use palg::algebra::{product, verify_p_algebra};
use palg::duality::{disjoint_union, duality_roundtrip, join_irreducibles, upset_algebra};
use palg::format::{parse_algebra, parse_poset, write_algebra, write_poset};
use palg::morphism::is_isomorphic;
use palg::{FinitePoset, Limits};
use proptest::prelude::*;

// Generators only go upwards in index order, so the closure is always a poset.
fn poset(max: usize) -> impl Strategy<Value = FinitePoset> {
    (1..=max).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut pairs = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if bits[k] {
                        pairs.push((i, j));
                    }
                    k += 1;
                }
            }
            FinitePoset::from_generators(n, pairs, None).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn star_laws(p in poset(5)) {
        let a = upset_algebra(&p, &Limits::default()).unwrap();
        prop_assert!(verify_p_algebra(&a.to_raw()).is_ok());
        for x in a.elements() {
            let s = a.star(x);
            prop_assert_eq!(a.star(a.star(s)), s);
            prop_assert_eq!(a.meet(x, s), a.zero());
            prop_assert!(a.leq(x, a.star(s)));
        }
    }

    #[test]
    fn join_irreducibles_recover_poset(p in poset(5)) {
        let limits = Limits::default();
        let a = upset_algebra(&p, &limits).unwrap();
        prop_assert!(join_irreducibles(&a).is_isomorphic(&p));
        prop_assert!(duality_roundtrip(&a, &limits).unwrap().is_isomorphism());
    }

    #[test]
    fn disjoint_union_is_product(p in poset(3), q in poset(3)) {
        let limits = Limits::default();
        let sum = upset_algebra(&disjoint_union(&[p.clone(), q.clone()]), &limits).unwrap();
        let prod = product(
            &[upset_algebra(&p, &limits).unwrap(), upset_algebra(&q, &limits).unwrap()],
            &limits,
        )
        .unwrap();
        prop_assert!(is_isomorphic(&sum, &prod).is_some());
    }

    #[test]
    fn file_formats_round_trip(p in poset(5)) {
        let back = parse_poset(&write_poset(&p)).unwrap();
        prop_assert_eq!(&back, &p);
        let a = upset_algebra(&p, &Limits::default()).unwrap();
        let text = write_algebra(&a);
        let b = parse_algebra(&text).unwrap();
        prop_assert_eq!(write_algebra(&b), text);
        prop_assert_eq!(b.to_raw(), a.to_raw());
    }
}
