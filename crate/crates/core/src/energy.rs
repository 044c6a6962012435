//! Entropic additive and multiplicative energy, doubling, and the
//! combinatorial quantities they mirror (set energy, Sidon sets).

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::{independent_join, Carrier, Dist, Element, GroupSpec, Joint, Word};
use crate::entropy::{entropy, entropy_of_word, Bits, DEFAULT_TOL};
use crate::error::{Error, Result};

/// An energy value computed along both routes: the closed formula
/// `2 H(X,Y) - H(X * Y)` and the entropy of two conditionally independent
/// trials relative to `X * Y` (for `*` the relevant operation).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub value: Bits,
    pub via_formula: Bits,
    pub via_construction: Bits,
    /// SHA-256 of the canonical JSON encoding of the input joint.
    pub inputs_digest: String,
}

pub fn digest(j: &Joint) -> String {
    hex::encode(Sha256::digest(j.to_json_string().as_bytes()))
}

fn check_pair(j: &Joint) -> Result<()> {
    if j.arity() == 2 {
        Ok(())
    } else {
        Err(Error::ArityMismatch { expected: 2, got: j.arity() })
    }
}

fn energy_relative_to(j: &Joint, combine: &Word) -> Result<EnergyReport> {
    check_pair(j)?;
    let via_formula = 2.0 * entropy(j) - entropy_of_word(j, combine)?;
    let via_construction = entropy(j.cond_indep_trials(combine)?);
    if !via_formula.approx_eq(via_construction, DEFAULT_TOL) {
        return Err(Error::EnergyMismatch { formula: via_formula.0, construction: via_construction.0 });
    }
    Ok(EnergyReport { value: via_formula, via_formula, via_construction, inputs_digest: digest(j) })
}

/// `A(X,Y) = 2 H(X,Y) - H(X+Y)` for a joint over `(X, Y)`.
pub fn additive_energy(j: impl AsRef<Joint>) -> Result<EnergyReport> {
    energy_relative_to(j.as_ref(), &Word::sum_of(0, 1))
}

/// The word interpreting `XY` on a carrier: the ring product, or the group
/// law of `F_p^*`.
pub fn product_word(carrier: &Carrier) -> Result<Word> {
    match carrier {
        Carrier::Ring(_) => Ok(Word::prod_of(0, 1)),
        Carrier::Group(GroupSpec::FpMultiplicative(_)) => Ok(Word::sum_of(0, 1)),
        Carrier::Group(_) => Err(Error::RingOpOnGroup),
    }
}

/// `M(X,Y) = 2 H(X,Y) - H(XY)`.
pub fn mult_energy(j: impl AsRef<Joint>) -> Result<EnergyReport> {
    let j = j.as_ref();
    energy_relative_to(j, &product_word(j.carrier())?)
}

/// `A(X) = A(X, X')` with `X'` an independent copy; equals `4 H(X) - H(X+X')`.
pub fn self_energy(d: &Dist) -> Result<EnergyReport> {
    additive_energy(independent_join(&[d, d])?)
}

/// `M(X) = M(X, X')`.
pub fn self_mult_energy(d: &Dist) -> Result<EnergyReport> {
    mult_energy(independent_join(&[d, d])?)
}

/// `H(X + X')` for an independent copy `X'`.
pub fn self_sum_entropy(d: &Dist) -> Result<Bits> {
    entropy_of_word(independent_join(&[d, d])?, &Word::sum_of(0, 1))
}

/// `H(XX')` for an independent copy `X'`.
pub fn self_product_entropy(d: &Dist) -> Result<Bits> {
    let j = independent_join(&[d, d])?;
    let w = product_word(j.carrier())?;
    entropy_of_word(j, &w)
}

/// Entropic doubling `s(X) = H(X+X') - H(X)`.
pub fn doubling(d: &Dist) -> Result<Bits> {
    Ok(self_sum_entropy(d)? - entropy(d))
}

fn canonical_set(carrier: &Carrier, set: &[Element]) -> Result<Vec<Element>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(set.len());
    for e in set {
        let c = carrier.canonicalize(e.coords())?;
        if !seen.insert(c.clone()) {
            return Err(Error::DuplicateElement(c.to_string()));
        }
        out.push(c);
    }
    Ok(out)
}

/// `E(A,B)`: the number of ordered quadruples `(a, a', b, b')` in
/// `A x A x B x B` with `a + b = a' + b'`, counted by brute force.
pub fn set_energy(carrier: &Carrier, a: &[Element], b: &[Element]) -> Result<u64> {
    let a = canonical_set(carrier, a)?;
    let b = canonical_set(carrier, b)?;
    let sums = a
        .iter()
        .map(|x| b.iter().map(|y| carrier.add(x, y)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let mut count = 0u64;
    for (i, _) in a.iter().enumerate() {
        for (k, _) in a.iter().enumerate() {
            for j in 0..b.len() {
                for l in 0..b.len() {
                    if sums[i][j] == sums[k][l] {
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(count)
}

/// `E(A,B) = sum_s r(s)^2` where `r(s)` counts representations `s = a + b`.
pub fn set_energy_by_representations(carrier: &Carrier, a: &[Element], b: &[Element]) -> Result<u64> {
    let a = canonical_set(carrier, a)?;
    let b = canonical_set(carrier, b)?;
    let mut reps: BTreeMap<Element, u64> = BTreeMap::new();
    for x in &a {
        for y in &b {
            *reps.entry(carrier.add(x, y)?).or_default() += 1;
        }
    }
    Ok(reps.values().map(|r| r * r).sum())
}

/// The sumset `A + B`.
pub fn sumset(carrier: &Carrier, a: &[Element], b: &[Element]) -> Result<BTreeSet<Element>> {
    let mut out = BTreeSet::new();
    for x in a {
        for y in b {
            out.insert(carrier.add(x, y)?);
        }
    }
    Ok(out)
}

/// True iff `a + b = a' + b'` forces `{a, b} = {a', b'}`.
pub fn is_sidon_set(carrier: &Carrier, set: &[Element]) -> Result<bool> {
    let set = canonical_set(carrier, set)?;
    let mut sums = BTreeSet::new();
    for (i, x) in set.iter().enumerate() {
        for y in &set[i..] {
            if !sums.insert(carrier.add(x, y)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Sidon test for a random variable: `s(X) >= H(X) - 1`. Returns the verdict
/// and the slack `s(X) - H(X) + 1`.
pub fn is_sidon_rv(d: &Dist, tol: f64) -> Result<(bool, Bits)> {
    let slack = doubling(d)? - entropy(d) + Bits(1.0);
    Ok((slack.0 >= -tol, slack))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::RingSpec;

    fn z() -> Carrier {
        Carrier::Group(GroupSpec::Integers)
    }

    fn els(vs: &[i64]) -> Vec<Element> {
        vs.iter().map(|&v| Element::scalar(v)).collect()
    }

    fn u_on(c: Carrier, vs: &[i64]) -> Dist {
        Dist::uniform_on(c, &els(vs)).unwrap()
    }

    const HEGARTY: [i64; 8] = [-7, -5, -4, -3, 0, 4, 5, 7];

    #[test]
    fn additive_energy_examples() {
        let x = u_on(z(), &HEGARTY);
        let neg: Vec<i64> = HEGARTY.iter().map(|v| -v).collect();
        let y = u_on(z(), &neg);
        let a = additive_energy(independent_join(&[&x, &y]).unwrap()).unwrap();
        assert!((a.value.0 - 7.493).abs() < 1e-3);

        let pm = Joint::point_mass(z(), els(&[3, 4])).unwrap();
        assert_eq!(additive_energy(&pm).unwrap().value.0, 0.0);

        let b = u_on(z(), &[0, 1]);
        let a = additive_energy(independent_join(&[&b, &b]).unwrap()).unwrap();
        assert!((a.value.0 - 2.5).abs() < 1e-12);
        assert!((a.via_construction.0 - 2.5).abs() < 1e-12);
        assert_eq!(a.inputs_digest.len(), 64);

        assert!(matches!(additive_energy(&x), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn self_energy_examples() {
        let x = u_on(z(), &HEGARTY);
        assert!((self_energy(&x).unwrap().value.0 - 7.487).abs() < 1e-3);
        assert_eq!(self_energy(&u_on(z(), &[9])).unwrap().value.0, 0.0);
        for n in [2u64, 3, 5, 6] {
            let zn = Carrier::Group(GroupSpec::IntegersMod(n));
            let all: Vec<i64> = (0..n as i64).collect();
            let a = self_energy(&u_on(zn, &all)).unwrap();
            assert!((a.value.0 - 3.0 * (n as f64).log2()).abs() < 1e-12);
        }
    }

    #[test]
    fn mult_energy_examples() {
        let f5 = Carrier::Group(GroupSpec::FpMultiplicative(5));
        let m = self_mult_energy(&u_on(f5, &[1, 2, 3, 4])).unwrap();
        assert!((m.value.0 - 6.0).abs() < 1e-12);

        let ring = Carrier::Ring(RingSpec::Fp(5));
        let m = self_mult_energy(&u_on(ring, &[1, 2, 3, 4])).unwrap();
        assert!((m.value.0 - 6.0).abs() < 1e-12);

        let one = Carrier::Ring(RingSpec::IntegerRing);
        assert_eq!(self_mult_energy(&u_on(one.clone(), &[1])).unwrap().value.0, 0.0);

        let m = self_mult_energy(&u_on(one, &[1, 2])).unwrap();
        assert!((m.value.0 - 2.5).abs() < 1e-12);

        assert_eq!(self_mult_energy(&u_on(z(), &[1, 2])), Err(Error::RingOpOnGroup));
    }

    #[test]
    fn doubling_examples() {
        let z5 = Carrier::Group(GroupSpec::IntegersMod(5));
        assert!(doubling(&u_on(z5, &[0, 1, 2, 3, 4])).unwrap().0.abs() < 1e-12);
        let s = doubling(&u_on(z(), &[0, 1, 2])).unwrap();
        assert!((s.0 - 0.61220).abs() < 1e-5);
        assert_eq!(doubling(&u_on(z(), &[4])).unwrap().0, 0.0);
    }

    #[test]
    fn set_energy_examples() {
        assert_eq!(set_energy(&z(), &els(&[0, 1]), &els(&[0, 1])).unwrap(), 6);
        assert_eq!(set_energy(&z(), &els(&[3]), &els(&[8])).unwrap(), 1);
        assert_eq!(set_energy(&z(), &els(&[1, 2, 5, 11]), &els(&[1, 2, 5, 11])).unwrap(), 28);
        assert!(matches!(set_energy(&z(), &els(&[1, 1]), &els(&[0])), Err(Error::DuplicateElement(_))));
    }

    #[test]
    fn sidon_examples() {
        assert!(!is_sidon_set(&z(), &els(&[0, 1, 2])).unwrap());
        assert!(is_sidon_set(&z(), &els(&[1, 2, 5, 11])).unwrap());
        assert!(is_sidon_set(&z(), &els(&[7])).unwrap());

        let (ok, slack) = is_sidon_rv(&u_on(z(), &[0, 1, 2]), DEFAULT_TOL).unwrap();
        assert!(ok);
        assert!((slack.0 - (0.612197 - 0.584963)).abs() < 1e-5);
        let (ok, slack) = is_sidon_rv(&u_on(z(), &[3]), DEFAULT_TOL).unwrap();
        assert!(ok && (slack.0 - 1.0).abs() < 1e-12);
        let z8 = Carrier::Group(GroupSpec::IntegersMod(8));
        let (ok, _) = is_sidon_rv(&u_on(z8, &[0, 1, 2, 3, 4, 5, 6, 7]), DEFAULT_TOL).unwrap();
        assert!(!ok);
    }
}
