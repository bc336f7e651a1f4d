mod common;

use proptest::prelude::*;
use quadrep::constructive::{decompose, validate, AlgorithmId, Decomposition, Domain, Target};
use quadrep::forms::{mat_mul, Mat3, TernaryForm, IDENTITY};
use quadrep::genus::{is_equivalent, reduce};
use quadrep::local::is_locally_represented;
use quadrep::scan::{find_restricted, ResidueFilter};

fn small_form() -> impl Strategy<Value = TernaryForm> {
    (1i64..8, 1i64..8, 1i64..12, -4i64..=4, -4i64..=4, -4i64..=4)
        .prop_filter_map("positive definite", |(a, b, c, r, s, t)| TernaryForm::new(a, b, c, r, s, t).ok())
}

/// Products of elementary shears and a coordinate swap.
fn unimodular() -> impl Strategy<Value = Mat3> {
    prop::collection::vec((0usize..3, 0usize..3, -2i64..=2, any::<bool>()), 0..6).prop_map(|ops| {
        ops.into_iter().fold(IDENTITY, |m, (i, j, k, swap)| {
            let mut e = IDENTITY;
            if i != j {
                e[i][j] = k;
            }
            if swap {
                e.swap(i, (i + 1) % 3);
            }
            mat_mul(&m, &e)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solutions_evaluate_to_n(f in small_form(), n in 0i64..200) {
        let sols = f.represent_all(n).unwrap();
        prop_assert_eq!(sols.len() as u64, f.represent_count(n).unwrap());
        for v in &sols {
            prop_assert_eq!(common::eval(&f.coeffs(), *v), n);
        }
        prop_assert!(sols.windows(2).all(|w| w[0] < w[1]));
        let brute = common::rep_counts(&f.coeffs(), n as usize)[n as usize];
        prop_assert_eq!(sols.len() as u64, brute);
    }

    #[test]
    fn equivalent_forms_share_canonical_form(f in small_form(), m in unimodular()) {
        let g = f.transform(&m).unwrap();
        prop_assert_eq!(g.discriminant(), f.discriminant());
        prop_assert_eq!(reduce(&g).form, reduce(&f).form);
        prop_assert!(is_equivalent(&f, &g));
        for n in 0..30 {
            prop_assert_eq!(f.represent_count(n).unwrap(), g.represent_count(n).unwrap());
        }
    }

    #[test]
    fn automorphisms_preserve_the_form(f in small_form()) {
        let auts = f.automorphisms();
        prop_assert!(auts.contains(&IDENTITY));
        for m in &auts {
            prop_assert_eq!(f.transform(m).unwrap(), f);
        }
        prop_assert_eq!(auts.len() as u64, common::aut_order(&f.coeffs()));
    }

    #[test]
    fn global_representation_implies_local(f in small_form(), n in 1i64..150) {
        if f.represents(n).unwrap() {
            for p in [2u64, 3, 5, 7] {
                prop_assert!(is_locally_represented(&f, n, p).unwrap().represented);
            }
        }
    }

    #[test]
    fn unconditional_decompositions_validate(
        v in prop::sample::select(AlgorithmId::UNCONDITIONAL.to_vec()),
        n in 1i64..1_000_000_000_000,
    ) {
        let d = decompose(v, n).unwrap().found().expect("unconditional variant");
        prop_assert!(validate(&d, n));
        let back: Decomposition = serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
        prop_assert_eq!(&back, &d);
        let mut tampered = d.clone();
        tampered.quad[0] += 1;
        prop_assert!(!validate(&tampered, n));
        prop_assert!(!validate(&d, n + 1));
    }

    #[test]
    fn restricted_witnesses_check(
        w in prop::array::uniform4(1i64..4),
        lin in prop::array::uniform4(-3i64..=3),
        fixed in -3i64..=6,
        nat in any::<bool>(),
        n in 0i64..400,
    ) {
        let form = quadrep::DiagonalQuaternary::new(w).unwrap();
        let domain = if nat { Domain::Naturals } else { Domain::Integers };
        let r = quadrep::constructive::RestrictionSpec::new(lin, Target::Fixed(fixed), domain).unwrap();
        if let Some(wit) = find_restricted(&form, &r, n).unwrap() {
            prop_assert!(wit.check(&form, &r));
            prop_assert_eq!(wit.n, n);
        }
    }

    #[test]
    fn literals_round_trip(vals in prop::collection::btree_set(-50i64..50, 1..5), m in 2i64..40) {
        let t = Target::AnyOf(vals.iter().copied().collect());
        prop_assert_eq!(t.to_string().parse::<Target>().unwrap(), t);
        let rs: Vec<i64> = vals.iter().map(|v| v.rem_euclid(m)).collect();
        let text = format!("{m}:{}", rs.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(","));
        let f: ResidueFilter = text.parse().unwrap();
        prop_assert_eq!(f.to_string().parse::<ResidueFilter>().unwrap(), f.clone());
        for x in 0..3 * m {
            prop_assert_eq!(f.excludes(x), rs.contains(&x.rem_euclid(m)));
        }
    }
}
