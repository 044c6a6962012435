//! Exact-rational distributions over tuples of carrier elements.

use std::collections::BTreeMap;
use std::ops::Deref;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::structure::{Carrier, Element};
use super::word::Word;
use crate::error::{Error, Result};

/// Probability values: arbitrary-precision rationals.
pub type Prob = BigRational;

/// `num/den` as an exact probability.
pub fn ratio(num: i64, den: i64) -> Prob {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// A finitely supported distribution of a k-tuple of carrier elements.
///
/// Probabilities are strictly positive and sum to exactly one; every key is a
/// tuple of length `arity` whose entries are canonical for the carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Joint {
    carrier: Carrier,
    arity: usize,
    atoms: BTreeMap<Vec<Element>, Prob>,
}

impl Joint {
    /// Validating constructor. Zero-probability entries are dropped; repeated
    /// tuples, negative weights and totals other than one are errors.
    pub fn new(
        carrier: Carrier,
        arity: usize,
        atoms: impl IntoIterator<Item = (Vec<Element>, Prob)>,
    ) -> Result<Joint> {
        carrier.validate()?;
        if arity == 0 {
            return Err(Error::InvalidConfig("arity must be at least 1".into()));
        }
        let mut map = BTreeMap::new();
        let mut total = Prob::zero();
        for (tuple, p) in atoms {
            if tuple.len() != arity {
                return Err(Error::ArityMismatch { expected: arity, got: tuple.len() });
            }
            if let Some(bad) = tuple.iter().find(|e| !carrier.is_canonical(e)) {
                return Err(Error::NonCanonical(bad.to_string()));
            }
            if p.is_negative() {
                return Err(Error::InvalidProbability(format!("negative weight {p}")));
            }
            if p.is_zero() {
                continue;
            }
            total += &p;
            let key = fmt_tuple(&tuple);
            if map.insert(tuple, p).is_some() {
                return Err(Error::DuplicateElement(key));
            }
        }
        if map.is_empty() {
            return Err(Error::EmptySupport);
        }
        if !total.is_one() {
            return Err(Error::InvalidProbability(format!("probabilities sum to {total}")));
        }
        Ok(Joint { carrier, arity, atoms: map })
    }

    /// Builds from an accumulated map whose total is already one.
    pub(crate) fn from_map(carrier: Carrier, arity: usize, mut atoms: BTreeMap<Vec<Element>, Prob>) -> Joint {
        atoms.retain(|_, p| !p.is_zero());
        debug_assert!(!atoms.is_empty());
        debug_assert!(atoms.values().fold(Prob::zero(), |acc, p| acc + p).is_one());
        Joint { carrier, arity, atoms }
    }

    pub fn point_mass(carrier: Carrier, tuple: Vec<Element>) -> Result<Joint> {
        let arity = tuple.len();
        Joint::new(carrier, arity, [(tuple, Prob::one())])
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of atoms with positive probability.
    pub fn support_size(&self) -> usize {
        self.atoms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[Element], &Prob)> {
        self.atoms.iter().map(|(t, p)| (t.as_slice(), p))
    }

    pub fn prob(&self, tuple: &[Element]) -> Prob {
        self.atoms.get(tuple).cloned().unwrap_or_else(Prob::zero)
    }

    pub fn max_prob(&self) -> &Prob {
        self.atoms.values().max().expect("non-empty support")
    }

    pub fn is_point_mass(&self) -> bool {
        self.atoms.len() == 1
    }

    fn check_same_carrier(&self, other: &Joint) -> Result<()> {
        if self.carrier == other.carrier {
            Ok(())
        } else {
            Err(Error::SpecMismatch(self.carrier.to_string(), other.carrier.to_string()))
        }
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.arity {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: i, arity: self.arity })
        }
    }

    /// Product measure of `self` and `other`; the tuple of `other` is appended.
    pub fn join(&self, other: &Joint) -> Result<Joint> {
        self.check_same_carrier(other)?;
        let mut map = BTreeMap::new();
        for (t1, p1) in &self.atoms {
            for (t2, p2) in &other.atoms {
                let mut t = t1.clone();
                t.extend(t2.iter().cloned());
                map.insert(t, p1 * p2);
            }
        }
        Ok(Joint::from_map(self.carrier.clone(), self.arity + other.arity, map))
    }

    /// Projection onto the listed coordinates, in the listed order.
    /// Repeating an index duplicates that coordinate.
    pub fn marginal(&self, indices: &[usize]) -> Result<Joint> {
        if indices.is_empty() {
            return Err(Error::InvalidConfig("marginal needs at least one index".into()));
        }
        for &i in indices {
            self.check_index(i)?;
        }
        let mut map: BTreeMap<Vec<Element>, Prob> = BTreeMap::new();
        for (t, p) in &self.atoms {
            let key: Vec<Element> = indices.iter().map(|&i| t[i].clone()).collect();
            *map.entry(key).or_insert_with(Prob::zero) += p;
        }
        Ok(Joint::from_map(self.carrier.clone(), indices.len(), map))
    }

    /// Distribution of a combiner word applied to each tuple.
    pub fn pushforward(&self, word: &Word) -> Result<Dist> {
        word.check(&self.carrier, self.arity)?;
        let mut map: BTreeMap<Vec<Element>, Prob> = BTreeMap::new();
        for (t, p) in &self.atoms {
            let v = word.eval(&self.carrier, t)?;
            *map.entry(vec![v]).or_insert_with(Prob::zero) += p;
        }
        Ok(Dist(Joint::from_map(self.carrier.clone(), 1, map)))
    }

    /// Joint distribution of several words evaluated on the same tuple.
    pub fn pushforward_tuple(&self, words: &[Word]) -> Result<Joint> {
        if words.is_empty() {
            return Err(Error::InvalidConfig("need at least one word".into()));
        }
        for w in words {
            w.check(&self.carrier, self.arity)?;
        }
        let mut map: BTreeMap<Vec<Element>, Prob> = BTreeMap::new();
        for (t, p) in &self.atoms {
            let key = words.iter().map(|w| w.eval(&self.carrier, t)).collect::<Result<Vec<_>>>()?;
            *map.entry(key).or_insert_with(Prob::zero) += p;
        }
        Ok(Joint::from_map(self.carrier.clone(), words.len(), map))
    }

    /// Restriction to the event `statistic = value`, renormalized.
    pub fn condition(&self, statistic: &Word, value: &Element) -> Result<Joint> {
        statistic.check(&self.carrier, self.arity)?;
        let mut kept = BTreeMap::new();
        let mut mass = Prob::zero();
        for (t, p) in &self.atoms {
            if statistic.eval(&self.carrier, t)? == *value {
                mass += p;
                kept.insert(t.clone(), p.clone());
            }
        }
        if mass.is_zero() {
            return Err(Error::ZeroProbabilityEvent);
        }
        for p in kept.values_mut() {
            *p /= &mass;
        }
        Ok(Joint::from_map(self.carrier.clone(), self.arity, kept))
    }

    /// Groups atoms by the value of `statistic`, returning each fiber with its mass.
    pub fn fibers(&self, statistic: &Word) -> Result<BTreeMap<Element, (Prob, Vec<(&[Element], &Prob)>)>> {
        statistic.check(&self.carrier, self.arity)?;
        let mut out: BTreeMap<Element, (Prob, Vec<(&[Element], &Prob)>)> = BTreeMap::new();
        for (t, p) in &self.atoms {
            let z = statistic.eval(&self.carrier, t)?;
            let slot = out.entry(z).or_insert_with(|| (Prob::zero(), Vec::new()));
            slot.0 += p;
            slot.1.push((t.as_slice(), p));
        }
        Ok(out)
    }

    /// Two conditionally independent trials of the whole tuple relative to
    /// `statistic`: `P(t1, t2) = P(t1) P(t2) / P(Z = z)` whenever both tuples
    /// map to the same `z`. The result has arity `2 * arity`, trial one first.
    pub fn cond_indep_trials(&self, statistic: &Word) -> Result<Joint> {
        let mut map = BTreeMap::new();
        for (mass, members) in self.fibers(statistic)?.into_values() {
            for (t1, p1) in &members {
                for (t2, p2) in &members {
                    let mut t = t1.to_vec();
                    t.extend_from_slice(t2);
                    map.insert(t, (*p1 * *p2) / &mass);
                }
            }
        }
        Ok(Joint::from_map(self.carrier.clone(), 2 * self.arity, map))
    }

    /// Reinterprets an arity-1 joint as a `Dist`.
    pub fn into_dist(self) -> Result<Dist> {
        if self.arity == 1 {
            Ok(Dist(self))
        } else {
            Err(Error::ArityMismatch { expected: 1, got: self.arity })
        }
    }

    /// Same probabilities over a different carrier; every element must be
    /// canonical there too.
    pub fn with_carrier(&self, carrier: Carrier) -> Result<Joint> {
        Joint::new(carrier, self.arity, self.atoms.iter().map(|(t, p)| (t.clone(), p.clone())))
    }
}

impl AsRef<Joint> for Joint {
    fn as_ref(&self) -> &Joint {
        self
    }
}

pub(crate) fn fmt_tuple(t: &[Element]) -> String {
    if t.len() == 1 {
        return t[0].to_string();
    }
    let parts: Vec<String> = t.iter().map(|e| e.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// Product measure of all parts, tuples concatenated in order.
pub fn independent_join<J: AsRef<Joint>>(parts: &[J]) -> Result<Joint> {
    let (first, rest) = parts
        .split_first()
        .ok_or_else(|| Error::InvalidConfig("nothing to join".into()))?;
    rest.iter().try_fold(first.as_ref().clone(), |acc, j| acc.join(j.as_ref()))
}

/// A single-coordinate distribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dist(Joint);

impl Dist {
    pub fn new(carrier: Carrier, atoms: impl IntoIterator<Item = (Element, Prob)>) -> Result<Dist> {
        Joint::new(carrier, 1, atoms.into_iter().map(|(e, p)| (vec![e], p))).map(Dist)
    }

    /// Uniform distribution on `support`, after canonicalizing each element.
    pub fn uniform_on(carrier: Carrier, support: &[Element]) -> Result<Dist> {
        if support.is_empty() {
            return Err(Error::EmptySupport);
        }
        let weight = ratio(1, support.len() as i64);
        let canon = support
            .iter()
            .map(|e| carrier.canonicalize(e.coords()))
            .collect::<Result<Vec<_>>>()?;
        Dist::new(carrier, canon.into_iter().map(|e| (e, weight.clone())))
    }

    pub fn point_mass(carrier: Carrier, e: Element) -> Result<Dist> {
        Joint::point_mass(carrier, vec![e]).map(Dist)
    }

    /// Weights proportional to the given positive integers.
    pub fn weighted(carrier: Carrier, atoms: &[(Element, u64)]) -> Result<Dist> {
        let total: u64 = atoms.iter().map(|(_, w)| *w).sum();
        if total == 0 {
            return Err(Error::EmptySupport);
        }
        Dist::new(
            carrier,
            atoms.iter().map(|(e, w)| (e.clone(), ratio(*w as i64, total as i64))),
        )
    }

    pub fn prob_of(&self, e: &Element) -> Prob {
        self.0.prob(std::slice::from_ref(e))
    }

    pub fn elements(&self) -> impl Iterator<Item = (&Element, &Prob)> {
        self.0.iter().map(|(t, p)| (&t[0], p))
    }

    pub fn support(&self) -> Vec<Element> {
        self.elements().map(|(e, _)| e.clone()).collect()
    }

    pub fn as_joint(&self) -> &Joint {
        &self.0
    }

    pub fn into_joint(self) -> Joint {
        self.0
    }
}

impl Deref for Dist {
    type Target = Joint;

    fn deref(&self) -> &Joint {
        &self.0
    }
}

impl AsRef<Joint> for Dist {
    fn as_ref(&self) -> &Joint {
        &self.0
    }
}

impl From<Dist> for Joint {
    fn from(d: Dist) -> Joint {
        d.0
    }
}

pub fn uniform_on(carrier: Carrier, support: &[Element]) -> Result<Dist> {
    Dist::uniform_on(carrier, support)
}
