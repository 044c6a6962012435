//! Shannon entropy of exact distributions, in bits.

use std::collections::BTreeMap;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{Element, Joint, Prob, Word};
use crate::error::{Error, Result};

/// Default comparison tolerance, in bits.
pub const DEFAULT_TOL: f64 = 1e-9;

/// An information quantity measured in bits.
#[derive(Debug, Clone, Copy, Default, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Bits(pub f64);

impl Bits {
    pub const ZERO: Bits = Bits(0.0);

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn to_nats(self) -> f64 {
        self.0 * std::f64::consts::LN_2
    }

    pub fn in_base(self, base: LogBase) -> f64 {
        match base {
            LogBase::Bits => self.0,
            LogBase::Nats => self.to_nats(),
        }
    }

    pub fn log2(x: f64) -> Bits {
        Bits(x.log2())
    }

    pub fn min(self, other: Bits) -> Bits {
        Bits(self.0.min(other.0))
    }

    pub fn max(self, other: Bits) -> Bits {
        Bits(self.0.max(other.0))
    }

    pub fn abs(self) -> Bits {
        Bits(self.0.abs())
    }

    pub fn approx_eq(self, other: Bits, tol: f64) -> bool {
        (self.0 - other.0).abs() <= tol
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Add for Bits {
    type Output = Bits;
    fn add(self, o: Bits) -> Bits {
        Bits(self.0 + o.0)
    }
}

impl AddAssign for Bits {
    fn add_assign(&mut self, o: Bits) {
        self.0 += o.0;
    }
}

impl Sub for Bits {
    type Output = Bits;
    fn sub(self, o: Bits) -> Bits {
        Bits(self.0 - o.0)
    }
}

impl Neg for Bits {
    type Output = Bits;
    fn neg(self) -> Bits {
        Bits(-self.0)
    }
}

impl Mul<Bits> for f64 {
    type Output = Bits;
    fn mul(self, b: Bits) -> Bits {
        Bits(self * b.0)
    }
}

impl Div<f64> for Bits {
    type Output = Bits;
    fn div(self, d: f64) -> Bits {
        Bits(self.0 / d)
    }
}

impl Sum for Bits {
    fn sum<I: Iterator<Item = Bits>>(iter: I) -> Bits {
        Bits(iter.map(|b| b.0).sum())
    }
}

/// Output unit for reports. Internal arithmetic is always in bits.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    #[default]
    Bits,
    Nats,
}

impl LogBase {
    pub fn unit(self) -> &'static str {
        match self {
            LogBase::Bits => "bits",
            LogBase::Nats => "nats",
        }
    }
}

fn log2_big(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        n.to_f64().expect("fits in f64").log2()
    } else {
        let shift = bits - 64;
        (n >> shift).to_f64().expect("fits in f64").log2() + shift as f64
    }
}

/// `p log2(1/p)` computed as `p (log2 den - log2 num)`.
fn surprisal_term(p: &Prob) -> f64 {
    let pf = p.to_f64().expect("probability is finite");
    pf * (log2_big(p.denom()) - log2_big(p.numer()))
}

/// Entropy of a list of probabilities summing to one.
pub fn entropy_of_probs<'a>(probs: impl IntoIterator<Item = &'a Prob>) -> Bits {
    Bits(probs.into_iter().map(surprisal_term).sum())
}

/// Entropy of the tuple-valued variable a joint describes.
pub fn entropy(j: impl AsRef<Joint>) -> Bits {
    entropy_of_probs(j.as_ref().iter().map(|(_, p)| p))
}

/// `sum_y P(Y = y) H(X | Y = y)` for grouped (given, target) keys.
fn fiber_entropy<K: Ord>(fibers: BTreeMap<K, BTreeMap<Vec<Element>, Prob>>) -> Bits {
    fibers
        .into_values()
        .map(|fiber| {
            let mass: Prob = fiber.values().fold(Prob::zero(), |acc, p| acc + p);
            let conditional: Vec<Prob> = fiber.values().map(|q| q / &mass).collect();
            mass.to_f64().expect("finite") * entropy_of_probs(&conditional)
        })
        .sum()
}

fn check_indices(j: &Joint, idx: &[usize]) -> Result<()> {
    for &i in idx {
        if i >= j.arity() {
            return Err(Error::IndexOutOfRange { index: i, arity: j.arity() });
        }
    }
    Ok(())
}

/// `H(target | given)`, computed fiber by fiber from the definition.
pub fn conditional_entropy(j: impl AsRef<Joint>, target: &[usize], given: &[usize]) -> Result<Bits> {
    let j = j.as_ref();
    check_indices(j, target)?;
    check_indices(j, given)?;
    if let Some(&i) = target.iter().find(|i| given.contains(i)) {
        return Err(Error::IndexOverlap(i));
    }
    if target.is_empty() {
        return Ok(Bits::ZERO);
    }
    let mut fibers: BTreeMap<Vec<Element>, BTreeMap<Vec<Element>, Prob>> = BTreeMap::new();
    for (t, p) in j.iter() {
        let g: Vec<Element> = given.iter().map(|&i| t[i].clone()).collect();
        let x: Vec<Element> = target.iter().map(|&i| t[i].clone()).collect();
        *fibers.entry(g).or_default().entry(x).or_insert_with(Prob::zero) += p;
    }
    Ok(fiber_entropy(fibers))
}

/// `H(target | statistic)` where the statistic is a word over the tuple.
pub fn conditional_entropy_given_statistic(
    j: impl AsRef<Joint>,
    target: &[usize],
    statistic: &Word,
) -> Result<Bits> {
    let j = j.as_ref();
    check_indices(j, target)?;
    statistic.check(j.carrier(), j.arity())?;
    let mut fibers: BTreeMap<Element, BTreeMap<Vec<Element>, Prob>> = BTreeMap::new();
    for (t, p) in j.iter() {
        let z = statistic.eval(j.carrier(), t)?;
        let x: Vec<Element> = target.iter().map(|&i| t[i].clone()).collect();
        *fibers.entry(z).or_default().entry(x).or_insert_with(Prob::zero) += p;
    }
    Ok(fiber_entropy(fibers))
}

/// Entropy of a word pushed forward through the joint.
pub fn entropy_of_word(j: impl AsRef<Joint>, word: &Word) -> Result<Bits> {
    Ok(entropy(j.as_ref().pushforward(word)?))
}

/// Joint entropy of several words evaluated together.
pub fn entropy_of_words(j: impl AsRef<Joint>, words: &[Word]) -> Result<Bits> {
    Ok(entropy(j.as_ref().pushforward_tuple(words)?))
}

/// Entropy of a marginal.
pub fn marginal_entropy(j: impl AsRef<Joint>, indices: &[usize]) -> Result<Bits> {
    Ok(entropy(j.as_ref().marginal(indices)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{independent_join, ratio, Carrier, Dist, GroupSpec};

    fn z() -> Carrier {
        Carrier::Group(GroupSpec::Integers)
    }

    fn u(vs: &[i64]) -> Dist {
        let els: Vec<Element> = vs.iter().map(|&v| Element::scalar(v)).collect();
        Dist::uniform_on(z(), &els).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert!((entropy(u(&[-7, -5, -4, -3, 0, 4, 5, 7])).0 - 3.0).abs() < 1e-12);
        assert_eq!(entropy(u(&[42])).0, 0.0);
        let j = independent_join(&[u(&[0, 1, 2]), u(&[0, 1, 2])]).unwrap();
        let s = j.pushforward(&Word::sum_of(0, 1)).unwrap();
        let closed = (2.0 / 9.0) * 9f64.log2() + (4.0 / 9.0) * (4.5f64).log2() + (1.0 / 3.0) * 3f64.log2();
        assert!((entropy(&s).0 - closed).abs() < 1e-12);
        assert!((closed - 2.19716).abs() < 1e-5);
    }

    #[test]
    fn normalisation() {
        assert!((entropy(u(&[0, 1])).0 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn huge_denominators_stay_finite() {
        let big = BigInt::from(3u8).pow(800);
        let p = Prob::new(BigInt::from(1), big.clone());
        let q = Prob::new(big.clone() - 1u8, big);
        let h = entropy_of_probs([&p, &q]);
        assert!(h.0.is_finite() && h.0 >= 0.0);
    }

    #[test]
    fn conditional_entropy_examples() {
        let j = independent_join(&[u(&[0, 1, 2]), u(&[5, 6])]).unwrap();
        let h = conditional_entropy(&j, &[0], &[1]).unwrap();
        assert!((h.0 - 3f64.log2()).abs() < 1e-12);

        let dup = u(&[1, 2, 3]).marginal(&[0, 0]).unwrap();
        assert_eq!(conditional_entropy(&dup, &[0], &[1]).unwrap().0, 0.0);

        let diag = u(&[0, 1]).marginal(&[0, 0]).unwrap();
        assert_eq!(conditional_entropy(&diag, &[0], &[1]).unwrap().0, 0.0);

        assert_eq!(conditional_entropy(&j, &[0], &[0]), Err(Error::IndexOverlap(0)));
        assert!(matches!(conditional_entropy(&j, &[2], &[]), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn statistic_conditioning_examples() {
        let z4 = Carrier::Group(GroupSpec::IntegersMod(4));
        let els: Vec<Element> = (0..4).map(Element::scalar).collect();
        let u4 = Dist::uniform_on(z4, &els).unwrap();
        let j = independent_join(&[&u4, &u4]).unwrap();
        let h = conditional_entropy_given_statistic(&j, &[0], &Word::sum_of(0, 1)).unwrap();
        assert!((h.0 - 2.0).abs() < 1e-12);

        let h = conditional_entropy_given_statistic(&j, &[0], &Word::constant(0)).unwrap();
        assert!((h.0 - 2.0).abs() < 1e-12);

        let j = independent_join(&[u(&[0, 1]), u(&[0, 1])]).unwrap();
        let h = conditional_entropy_given_statistic(&j, &[0], &Word::sum_of(0, 1)).unwrap();
        assert!((h.0 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn weighted_entropy() {
        let d = Dist::new(z(), [(Element::scalar(0), ratio(1, 4)), (Element::scalar(1), ratio(3, 4))]).unwrap();
        let expected = 0.25 * 4f64.log2() + 0.75 * (4.0f64 / 3.0).log2();
        assert!((entropy(&d).0 - expected).abs() < 1e-15);
        assert!((Bits(1.0).to_nats() - std::f64::consts::LN_2).abs() < 1e-16);
    }
}
