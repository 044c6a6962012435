use entropic_energy::algebra::{independent_join, is_prime};
use entropic_energy::explorer::{gk_scan, subfield_closed_form, subfield_example, DEFAULT_BUDGET};
use entropic_energy::laws::gen::HEGARTY;
use entropic_energy::laws::{bsg_report, evaluate_law, katz_tao_report, plunnecke_check, LawId, LawInput};
use entropic_energy::{Carrier, Dist, Element, GroupSpec, RingSpec, DEFAULT_TOL};

fn uni(c: Carrier, vs: &[i64]) -> Dist {
    let els: Vec<Element> = vs.iter().map(|&v| Element::scalar(v)).collect();
    Dist::uniform_on(c, &els).unwrap()
}

fn z() -> Carrier {
    Carrier::Group(GroupSpec::Integers)
}

#[test]
fn bsg_on_z4_is_tight() {
    let u = uni(Carrier::Group(GroupSpec::IntegersMod(4)), &[0, 1, 2, 3]);
    let r = bsg_report(&independent_join(&[&u, &u]).unwrap()).unwrap();
    assert_eq!(r.log_c.0, 0.0);
    assert!((r.h_x1_given_sum.0 - 2.0).abs() < 1e-12);
    assert!((r.h_y2_given_sum.0 - 2.0).abs() < 1e-12);
    assert!((r.h_cross_sum_given_sum.0 - 2.0).abs() < 1e-12);
    assert!(r.pass);
}

#[test]
fn bsg_on_point_masses() {
    let p = uni(z(), &[3]);
    let r = bsg_report(&independent_join(&[&p, &p]).unwrap()).unwrap();
    assert_eq!(r.log_c.0, 0.0);
    assert_eq!(r.h_cross_sum_given_sum.0, 0.0);
    assert!(r.pass);
}

#[test]
fn bsg_on_hegarty() {
    let neg: Vec<i64> = HEGARTY.iter().map(|v| -v).collect();
    let j = independent_join(&[uni(z(), &HEGARTY), uni(z(), &neg)]).unwrap();
    let r = bsg_report(&j).unwrap();
    assert!((r.log_c.0 - (9.0 - 7.492951172213042)).abs() < 1e-9);
    assert!(r.pass);
}

#[test]
fn katz_tao_examples() {
    let f5 = Carrier::Ring(RingSpec::Fp(5));
    let x = uni(f5, &[1, 2, 3, 4]);
    let r = katz_tao_report(&x, &x, &x, &x).unwrap();
    assert!(r.slack.0 >= -DEFAULT_TOL);
    let second = r.second_claim.unwrap();
    // A(X) < M(X) = 3H(X) here, so log C = 3H(X) - A(X) > 0.
    assert!(second.applicable);
    assert!(second.lhs.0 <= second.rhs.0);

    let y = uni(Carrier::Ring(RingSpec::IntegerRing), &[1, 2]);
    assert!(katz_tao_report(&y, &y, &y, &y).unwrap().slack.0 >= -DEFAULT_TOL);

    let g = uni(z(), &[1, 2]);
    assert!(katz_tao_report(&g, &g, &g, &g).is_err());
    let with_zero = uni(Carrier::Ring(RingSpec::Fp(5)), &[0, 1]);
    assert!(katz_tao_report(&with_zero, &with_zero, &with_zero, &with_zero).is_err());
}

#[test]
fn plunnecke_examples() {
    let z6 = Carrier::Group(GroupSpec::IntegersMod(6));
    let w = uni(z6.clone(), &[0, 1, 2, 3, 4, 5]);
    let other = Dist::weighted(z6, &[(Element::scalar(1), 1), (Element::scalar(4), 3)]).unwrap();
    let r = plunnecke_check(&w, &[other.clone(), other], DEFAULT_TOL).unwrap();
    assert!((r.lhs.0 - 6f64.log2()).abs() < 1e-12);
    assert!((r.rhs.0 - 6f64.log2()).abs() < 1e-12);

    let b = uni(z(), &[0, 1]);
    let r = plunnecke_check(&b, &[b.clone()], DEFAULT_TOL).unwrap();
    assert!((r.lhs.0 - 1.5).abs() < 1e-12);
    assert!((r.rhs.0 - 1.5).abs() < 1e-12);
    assert!(r.pass);
}

#[test]
fn lemma_a2_reports_both_differences() {
    let u = uni(Carrier::Group(GroupSpec::IntegersMod(4)), &[0, 1, 2, 3]);
    let r = evaluate_law(LawId::LemA2, &LawInput::Joint(independent_join(&[&u, &u]).unwrap()), DEFAULT_TOL).unwrap();
    assert_eq!(r.components.len(), 2);
    assert!(r.components.iter().all(|c| (c.rhs.0 - 2.0).abs() < 1e-12));
}

#[test]
fn subfield_sweep() {
    for q in (3..=101).filter(|&q| is_prime(q)) {
        let r = subfield_example(q).unwrap();
        assert!(r.deviation <= 1e-9, "q = {q}: {}", r.deviation);
        assert!((r.mult_energy.0 - 3.0 * ((q - 1) as f64).log2()).abs() <= 1e-9);
        assert_eq!(subfield_closed_form(q), r.closed_form);
    }
}

#[test]
fn gk_is_monotone_in_k() {
    let f = Carrier::Ring(RingSpec::Fp(11));
    let d = Dist::weighted(f, &[(Element::scalar(0), 1), (Element::scalar(3), 2), (Element::scalar(7), 1)]).unwrap();
    let r = gk_scan(11, 4, &d, DEFAULT_BUDGET).unwrap();
    assert_eq!(r.lhs_by_k.len(), 4);
    assert!(r.lhs_by_k.windows(2).all(|w| w[1].0 >= w[0].0 - 1e-12));
}
