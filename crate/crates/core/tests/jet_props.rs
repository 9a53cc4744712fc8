//! Property tests for the jet arithmetic: ring laws at fixed truncation,
//! the Leibniz and chain rules, truncation monotonicity and representation
//! canonicality.

use moufang::rational::rat;
use moufang::{Jet, Rational, RationalJet};

use proptest::prelude::*;

fn arb_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=9).prop_map(|(n, d)| rat(n, d))
}

/// Exponent vector of the given total degree.
fn arb_exponents(num_vars: usize, order: u32) -> impl Strategy<Value = Vec<u32>> {
    (0..=order).prop_flat_map(move |degree| {
        proptest::collection::vec(0..num_vars, degree as usize).prop_map(move |slots| {
            let mut e = vec![0u32; num_vars];
            for s in slots {
                e[s] += 1;
            }
            e
        })
    })
}

fn arb_jet(num_vars: usize, order: u32) -> impl Strategy<Value = RationalJet> {
    proptest::collection::vec((arb_exponents(num_vars, order), arb_rational()), 0..=6)
        .prop_map(move |terms| Jet::from_terms(num_vars, order, terms))
}

/// A jet with zero constant term, usable as a substitution.
fn arb_substitution(num_vars: usize, order: u32) -> impl Strategy<Value = RationalJet> {
    proptest::collection::vec(
        ((1..=order.max(1)).prop_flat_map(move |degree| {
            proptest::collection::vec(0..num_vars, degree as usize).prop_map(move |slots| {
                let mut e = vec![0u32; num_vars];
                for s in slots {
                    e[s] += 1;
                }
                e
            })
        }),
         arb_rational()),
        0..=5,
    )
    .prop_map(move |terms| Jet::from_terms(num_vars, order, terms))
}

/// Three jets sharing one variable space and order.
fn arb_triple() -> impl Strategy<Value = (RationalJet, RationalJet, RationalJet)> {
    (1usize..=6, 0u32..=4).prop_flat_map(|(vars, order)| {
        (
            arb_jet(vars, order),
            arb_jet(vars, order),
            arb_jet(vars, order),
        )
    })
}

/// A source jet, matching substitutions into a common target space, and a
/// target variable to differentiate in.
fn arb_chain_setup() -> impl Strategy<Value = (RationalJet, Vec<RationalJet>, usize)> {
    (1usize..=3, 1u32..=4, 1usize..=3).prop_flat_map(|(src, order, tgt)| {
        (
            arb_jet(src, order),
            proptest::collection::vec(arb_substitution(tgt, order), src),
            0..tgt,
        )
    })
}

fn canonical(jet: &RationalJet) -> bool {
    use num_traits::Zero;
    jet.terms()
        .all(|(e, c)| !c.is_zero() && e.total_degree() <= jet.order())
}

proptest! {
    #[test]
    fn ring_laws((a, b, c) in arb_triple()) {
        let ab = a.try_add(&b).unwrap();
        let ba = b.try_add(&a).unwrap();
        prop_assert_eq!(&ab, &ba);

        let assoc_l = ab.try_add(&c).unwrap();
        let assoc_r = a.try_add(&b.try_add(&c).unwrap()).unwrap();
        prop_assert_eq!(assoc_l, assoc_r);

        let mul_ab = a.try_mul(&b).unwrap();
        let mul_ba = b.try_mul(&a).unwrap();
        prop_assert_eq!(&mul_ab, &mul_ba);

        let mul_assoc_l = mul_ab.try_mul(&c).unwrap();
        let mul_assoc_r = a.try_mul(&b.try_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(mul_assoc_l, mul_assoc_r);

        let distro_l = a.try_mul(&b.try_add(&c).unwrap()).unwrap();
        let distro_r = a.try_mul(&b).unwrap().try_add(&a.try_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(distro_l, distro_r);
    }

    #[test]
    fn leibniz_rule((a, b, _) in arb_triple(), var_pick in 0usize..6) {
        let var = var_pick % a.num_vars();
        let lhs = a.try_mul(&b).unwrap().try_partial(var).unwrap();
        let rhs = a.try_partial(var).unwrap().try_mul(&b).unwrap()
            .try_add(&a.try_mul(&b.try_partial(var).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn chain_rule((a, subs, var) in arb_chain_setup()) {
        let target_vars = subs[0].num_vars();
        let lhs = a.substitute(&subs).unwrap().try_partial(var).unwrap();
        let mut rhs = Jet::zero(target_vars, a.order().min(subs[0].order()).saturating_sub(1));
        for (w, sub) in subs.iter().enumerate() {
            let term = a.try_partial(w).unwrap()
                .substitute(&subs).unwrap()
                .try_mul(&sub.try_partial(var).unwrap()).unwrap();
            rhs = rhs.try_add(&term).unwrap();
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn truncation_monotonicity((a, b, _) in arb_triple(), cut in 0u32..=4) {
        let order = a.order().min(cut);
        let sum_then_cut = a.try_add(&b).unwrap().truncate_to(order);
        let cut_then_sum = a.truncate_to(order).try_add(&b.truncate_to(order)).unwrap();
        prop_assert_eq!(sum_then_cut, cut_then_sum);

        let mul_then_cut = a.try_mul(&b).unwrap().truncate_to(order);
        let cut_then_mul = a.truncate_to(order).try_mul(&b.truncate_to(order)).unwrap();
        prop_assert_eq!(mul_then_cut, cut_then_mul);
    }

    #[test]
    fn results_are_canonical((a, b, _) in arb_triple(), var_pick in 0usize..6) {
        let var = var_pick % a.num_vars();
        prop_assert!(canonical(&a.try_add(&b).unwrap()));
        prop_assert!(canonical(&a.try_sub(&b).unwrap()));
        prop_assert!(canonical(&a.try_mul(&b).unwrap()));
        prop_assert!(canonical(&a.try_partial(var).unwrap()));
    }

    #[test]
    fn embed_project_roundtrip(
        (a, _, _) in arb_triple(),
        offset in 0usize..3,
    ) {
        let vars = a.num_vars();
        let target = vars + offset + 1;
        let map: Vec<usize> = (0..vars).map(|v| v + offset).collect();
        let embedded = a.embed(target, &map).unwrap();
        prop_assert!(canonical(&embedded));
        let back = embedded.project(&map).unwrap();
        prop_assert_eq!(back, a);
    }
}
