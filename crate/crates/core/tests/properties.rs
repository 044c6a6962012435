use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use entropic_energy::algebra::{independent_join, Prob};
use entropic_energy::energy::{
    additive_energy, doubling, is_sidon_rv, mult_energy, self_energy, set_energy, set_energy_by_representations,
};
use entropic_energy::entropy::{conditional_entropy, entropy, marginal_entropy};
use entropic_energy::laws::gen::{random_dist, random_group, random_pair, random_ring, random_set, random_sidon_set, GenCaps};
use entropic_energy::{Carrier, Dist, Element, GroupSpec, Joint, RingSpec, Word};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn group() -> impl Strategy<Value = GroupSpec> {
    prop_oneof![
        Just(GroupSpec::Integers),
        (1u64..=30).prop_map(GroupSpec::IntegersMod),
        prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 101]).prop_map(GroupSpec::FpAdditive),
        prop::sample::select(vec![3u64, 5, 7, 11, 13, 101]).prop_map(GroupSpec::FpMultiplicative),
        Just(GroupSpec::Product(vec![GroupSpec::IntegersMod(4), GroupSpec::Integers])),
    ]
}

fn element(g: &GroupSpec, raw: &[i64]) -> Element {
    let coords: Vec<BigInt> = match g {
        GroupSpec::FpMultiplicative(p) => vec![BigInt::from(raw[0].rem_euclid(*p as i64 - 1) + 1)],
        GroupSpec::Product(_) => raw[..2].iter().map(|&v| BigInt::from(v)).collect(),
        _ => vec![BigInt::from(raw[0])],
    };
    g.canonicalize(&coords).unwrap()
}

fn total(j: &Joint) -> Prob {
    j.iter().fold(Prob::zero(), |acc, (_, p)| acc + p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn group_axioms(g in group(), a in prop::collection::vec(-1000i64..1000, 2), b in prop::collection::vec(-1000i64..1000, 2), c in prop::collection::vec(-1000i64..1000, 2)) {
        let (a, b, c) = (element(&g, &a), element(&g, &b), element(&g, &c));
        let e = g.identity();
        prop_assert_eq!(g.op(&g.op(&a, &b)?, &c)?, g.op(&a, &g.op(&b, &c)?)?);
        prop_assert_eq!(g.op(&a, &b)?, g.op(&b, &a)?);
        prop_assert_eq!(g.op(&a, &e)?, a.clone());
        prop_assert_eq!(g.op(&a, &g.inv(&a)?)?, e);
        prop_assert!(g.is_canonical(&a));
    }

    #[test]
    fn field_distributes(p in prop::sample::select(vec![2u64, 3, 5, 7, 13, 31]), a in -100i64..100, b in -100i64..100, c in -100i64..100) {
        let r = Carrier::Ring(RingSpec::Fp(p));
        let el = |v: i64| r.canonicalize(&[BigInt::from(v)]).unwrap();
        let (a, b, c) = (el(a), el(b), el(c));
        prop_assert_eq!(r.mul(&a, &r.add(&b, &c)?)?, r.add(&r.mul(&a, &b)?, &r.mul(&a, &c)?)?);
        prop_assert_eq!(r.mul(&a, &b)?, r.mul(&b, &a)?);
    }

    #[test]
    fn dist_invariants(seed in any::<u64>()) {
        let caps = GenCaps::default();
        let mut r = rng(seed);
        let j = random_pair(&mut r, &caps);
        prop_assert_eq!(total(&j), Prob::one());
        let s = j.pushforward(&Word::sum_of(0, 1))?;
        prop_assert_eq!(total(&s), Prob::one());
        let h = entropy(&j).0;
        prop_assert!(h >= 0.0);
        prop_assert!(h <= (j.support_size() as f64).log2() + 1e-12);
        // Chain rule in two steps.
        let lhs = entropy(&j).0;
        let rhs = marginal_entropy(&j, &[1])?.0 + conditional_entropy(&j, &[0], &[1])?.0;
        prop_assert!((lhs - rhs).abs() < 1e-9);
    }

    #[test]
    fn join_marginals_recover_inputs(seed in any::<u64>()) {
        let caps = GenCaps::default();
        let mut r = rng(seed);
        let c = random_group(&mut r);
        let x = random_dist(&mut r, &c, 6, false, &caps);
        let y = random_dist(&mut r, &c, 6, false, &caps);
        let j = independent_join(&[&x, &y])?;
        prop_assert_eq!(&j.marginal(&[0])?, x.as_joint());
        prop_assert_eq!(&j.marginal(&[1])?, y.as_joint());
        prop_assert!((entropy(&j).0 - entropy(&x).0 - entropy(&y).0).abs() < 1e-9);
    }

    #[test]
    fn trials_have_the_right_marginals(seed in any::<u64>()) {
        let caps = GenCaps::default();
        let mut r = rng(seed);
        let j = random_pair(&mut r, &caps);
        let t = j.cond_indep_trials(&Word::sum_of(0, 1))?;
        prop_assert_eq!(t.arity(), 4);
        prop_assert_eq!(&t.marginal(&[0, 1])?, &j);
        prop_assert_eq!(&t.marginal(&[2, 3])?, &j);
        // Both trials share the statistic.
        for (tuple, _) in t.iter() {
            let c = j.carrier();
            prop_assert_eq!(c.add(&tuple[0], &tuple[1])?, c.add(&tuple[2], &tuple[3])?);
        }
    }

    #[test]
    fn energy_routes_agree(seed in any::<u64>()) {
        let caps = GenCaps::default();
        let mut r = rng(seed);
        let j = random_pair(&mut r, &caps);
        let e = additive_energy(&j)?;
        prop_assert!((e.via_formula.0 - e.via_construction.0).abs() < 1e-9);
        let ring = random_ring(&mut r);
        let x = random_dist(&mut r, &ring, 5, false, &caps);
        let y = random_dist(&mut r, &ring, 5, false, &caps);
        let m = mult_energy(independent_join(&[&x, &y])?)?;
        prop_assert!((m.via_formula.0 - m.via_construction.0).abs() < 1e-9);
    }

    #[test]
    fn self_energy_is_three_h_minus_doubling(seed in any::<u64>()) {
        let caps = GenCaps::default();
        let mut r = rng(seed);
        let c = random_group(&mut r);
        let x = random_dist(&mut r, &c, 8, false, &caps);
        let a = self_energy(&x)?.value.0;
        prop_assert!((a - (3.0 * entropy(&x).0 - doubling(&x)?.0)).abs() < 1e-9);
        prop_assert!(doubling(&x)?.0 >= -1e-12);
    }

    #[test]
    fn set_energy_counts_agree(seed in any::<u64>()) {
        let caps = GenCaps::default();
        let mut r = rng(seed);
        let c = random_group(&mut r);
        let a = random_set(&mut r, &c, 6, false, &caps);
        let b = random_set(&mut r, &c, 6, false, &caps);
        let e = set_energy(&c, &a, &b)?;
        prop_assert_eq!(e, set_energy_by_representations(&c, &a, &b)?);
        let (na, nb) = (a.len() as u64, b.len() as u64);
        prop_assert!(e >= na * nb && e <= na * nb * na.min(nb));
    }

    #[test]
    fn sidon_sets_carry_sidon_variables(seed in any::<u64>()) {
        let caps = GenCaps::default();
        let mut r = rng(seed);
        let s = random_sidon_set(&mut r, 6, &caps);
        let weights: Vec<(Element, u64)> = s.iter().enumerate().map(|(i, e)| (e.clone(), i as u64 + 1)).collect();
        let x = Dist::weighted(Carrier::Group(GroupSpec::Integers), &weights)?;
        prop_assert!(is_sidon_rv(&x, 1e-9)?.0);
    }

    #[test]
    fn json_round_trip(seed in any::<u64>()) {
        let caps = GenCaps::default();
        let mut r = rng(seed);
        let j = random_pair(&mut r, &caps);
        let s = j.to_json_string();
        let back = Joint::from_json_str(&s)?;
        prop_assert_eq!(&back, &j);
        prop_assert_eq!(back.to_json_string(), s);
    }
}
