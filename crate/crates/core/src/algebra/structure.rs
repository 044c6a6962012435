//! Ambient structures: abelian groups, rings, and their canonical elements.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A group or ring element, stored as canonical integer coordinates.
///
/// Every kind of carrier uses one coordinate, except products, which flatten
/// the coordinates of their factors in order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(Vec<BigInt>);

impl Element {
    pub fn new(coords: Vec<BigInt>) -> Self {
        Element(coords)
    }

    pub fn scalar(v: i64) -> Self {
        Element(vec![BigInt::from(v)])
    }

    pub fn from_i64s(vs: &[i64]) -> Self {
        Element(vs.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

fn reduce(v: &BigInt, m: u64) -> BigInt {
    v.mod_floor(&BigInt::from(m))
}

fn is_reduced(v: &BigInt, m: u64) -> bool {
    !v.is_negative() && *v < BigInt::from(m)
}

/// Finite and finitely generated abelian groups the library works over.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    /// The integers under addition.
    Integers,
    /// Z/nZ under addition.
    IntegersMod(u64),
    /// The additive group of F_p.
    FpAdditive(u64),
    /// F_p^*, the nonzero residues under multiplication.
    FpMultiplicative(u64),
    /// Direct product; coordinates are concatenated.
    Product(Vec<GroupSpec>),
}

impl GroupSpec {
    pub fn integers_mod(n: u64) -> Result<Self> {
        let g = GroupSpec::IntegersMod(n);
        g.validate()?;
        Ok(g)
    }

    pub fn fp_additive(p: u64) -> Result<Self> {
        let g = GroupSpec::FpAdditive(p);
        g.validate()?;
        Ok(g)
    }

    pub fn fp_multiplicative(p: u64) -> Result<Self> {
        let g = GroupSpec::FpMultiplicative(p);
        g.validate()?;
        Ok(g)
    }

    pub fn product(factors: Vec<GroupSpec>) -> Result<Self> {
        let g = GroupSpec::Product(factors);
        g.validate()?;
        Ok(g)
    }

    /// Checks moduli, primality and product arity.
    pub fn validate(&self) -> Result<()> {
        match self {
            GroupSpec::Integers => Ok(()),
            GroupSpec::IntegersMod(n) => {
                if *n == 0 {
                    Err(Error::InvalidModulus(0))
                } else {
                    Ok(())
                }
            }
            GroupSpec::FpAdditive(p) | GroupSpec::FpMultiplicative(p) => check_prime(*p),
            GroupSpec::Product(fs) => {
                if fs.is_empty() {
                    return Err(Error::EmptyProduct);
                }
                fs.iter().try_for_each(GroupSpec::validate)
            }
        }
    }

    /// Number of integer coordinates in an element.
    pub fn arity(&self) -> usize {
        match self {
            GroupSpec::Product(fs) => fs.iter().map(GroupSpec::arity).sum(),
            _ => 1,
        }
    }

    /// Group order, if finite and small enough to count.
    pub fn order(&self) -> Option<u128> {
        match self {
            GroupSpec::Integers => None,
            GroupSpec::IntegersMod(n) | GroupSpec::FpAdditive(n) => Some(*n as u128),
            GroupSpec::FpMultiplicative(p) => Some(*p as u128 - 1),
            GroupSpec::Product(fs) => fs
                .iter()
                .map(GroupSpec::order)
                .try_fold(1u128, |acc, o| acc.checked_mul(o?)),
        }
    }

    fn split<'a>(&self, coords: &'a [BigInt]) -> Vec<&'a [BigInt]> {
        let GroupSpec::Product(fs) = self else {
            return vec![coords];
        };
        let mut out = Vec::with_capacity(fs.len());
        let mut at = 0;
        for f in fs {
            let k = f.arity();
            out.push(&coords[at..at + k]);
            at += k;
        }
        out
    }

    fn check_arity(&self, got: usize) -> Result<()> {
        let expected = self.arity();
        if expected == got {
            Ok(())
        } else {
            Err(Error::ArityMismatch { expected, got })
        }
    }

    /// Reduces raw coordinates to the canonical representative.
    pub fn canonicalize(&self, raw: &[BigInt]) -> Result<Element> {
        self.check_arity(raw.len())?;
        let mut out = Vec::with_capacity(raw.len());
        self.canon_into(raw, &mut out)?;
        Ok(Element(out))
    }

    fn canon_into(&self, raw: &[BigInt], out: &mut Vec<BigInt>) -> Result<()> {
        match self {
            GroupSpec::Integers => out.push(raw[0].clone()),
            GroupSpec::IntegersMod(n) | GroupSpec::FpAdditive(n) => out.push(reduce(&raw[0], *n)),
            GroupSpec::FpMultiplicative(p) => {
                let r = reduce(&raw[0], *p);
                if r.is_zero() {
                    return Err(Error::ZeroInMultiplicativeGroup(*p));
                }
                out.push(r);
            }
            GroupSpec::Product(fs) => {
                for (f, part) in fs.iter().zip(self.split(raw)) {
                    f.canon_into(part, out)?;
                }
            }
        }
        Ok(())
    }

    pub fn is_canonical(&self, e: &Element) -> bool {
        if e.arity() != self.arity() {
            return false;
        }
        match self {
            GroupSpec::Integers => true,
            GroupSpec::IntegersMod(n) | GroupSpec::FpAdditive(n) => is_reduced(&e.0[0], *n),
            GroupSpec::FpMultiplicative(p) => is_reduced(&e.0[0], *p) && !e.0[0].is_zero(),
            GroupSpec::Product(fs) => fs
                .iter()
                .zip(self.split(&e.0))
                .all(|(f, part)| f.is_canonical(&Element(part.to_vec()))),
        }
    }

    pub fn identity(&self) -> Element {
        let mut out = Vec::with_capacity(self.arity());
        self.identity_into(&mut out);
        Element(out)
    }

    fn identity_into(&self, out: &mut Vec<BigInt>) {
        match self {
            GroupSpec::FpMultiplicative(_) => out.push(BigInt::one()),
            GroupSpec::Product(fs) => fs.iter().for_each(|f| f.identity_into(out)),
            _ => out.push(BigInt::zero()),
        }
    }

    /// The group law. For `FpMultiplicative` this is multiplication mod p.
    pub fn op(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check_arity(a.arity())?;
        self.check_arity(b.arity())?;
        let mut out = Vec::with_capacity(a.arity());
        self.op_into(&a.0, &b.0, &mut out);
        Ok(Element(out))
    }

    fn op_into(&self, a: &[BigInt], b: &[BigInt], out: &mut Vec<BigInt>) {
        match self {
            GroupSpec::Integers => out.push(&a[0] + &b[0]),
            GroupSpec::IntegersMod(n) | GroupSpec::FpAdditive(n) => {
                out.push(reduce(&(&a[0] + &b[0]), *n))
            }
            GroupSpec::FpMultiplicative(p) => out.push(reduce(&(&a[0] * &b[0]), *p)),
            GroupSpec::Product(fs) => {
                for ((f, x), y) in fs.iter().zip(self.split(a)).zip(self.split(b)) {
                    f.op_into(x, y, out);
                }
            }
        }
    }

    pub fn inv(&self, a: &Element) -> Result<Element> {
        self.check_arity(a.arity())?;
        let mut out = Vec::with_capacity(a.arity());
        self.inv_into(&a.0, &mut out);
        Ok(Element(out))
    }

    fn inv_into(&self, a: &[BigInt], out: &mut Vec<BigInt>) {
        match self {
            GroupSpec::Integers => out.push(-&a[0]),
            GroupSpec::IntegersMod(n) | GroupSpec::FpAdditive(n) => out.push(reduce(&-&a[0], *n)),
            GroupSpec::FpMultiplicative(p) => {
                // a^(p-2) mod p
                let m = BigInt::from(*p);
                out.push(a[0].modpow(&BigInt::from(*p - 2), &m));
            }
            GroupSpec::Product(fs) => {
                for (f, x) in fs.iter().zip(self.split(a)) {
                    f.inv_into(x, out);
                }
            }
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Integers => write!(f, "Z"),
            GroupSpec::IntegersMod(n) => write!(f, "Z/{n}"),
            GroupSpec::FpAdditive(p) => write!(f, "F_{p}"),
            GroupSpec::FpMultiplicative(p) => write!(f, "F_{p}^*"),
            GroupSpec::Product(fs) => {
                for (i, g) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " x ")?;
                    }
                    write!(f, "{g}")?;
                }
                Ok(())
            }
        }
    }
}

/// Commutative rings with one coordinate per element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingSpec {
    IntegerRing,
    Fp(u64),
}

impl RingSpec {
    pub fn fp(p: u64) -> Result<Self> {
        check_prime(p)?;
        Ok(RingSpec::Fp(p))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            RingSpec::IntegerRing => Ok(()),
            RingSpec::Fp(p) => check_prime(*p),
        }
    }

    /// The additive group underlying the ring.
    pub fn additive_group(&self) -> GroupSpec {
        match self {
            RingSpec::IntegerRing => GroupSpec::Integers,
            RingSpec::Fp(p) => GroupSpec::FpAdditive(*p),
        }
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Result<Element> {
        for e in [a, b] {
            if e.arity() != 1 {
                return Err(Error::ArityMismatch { expected: 1, got: e.arity() });
            }
        }
        let prod = &a.0[0] * &b.0[0];
        Ok(Element(vec![match self {
            RingSpec::IntegerRing => prod,
            RingSpec::Fp(p) => reduce(&prod, *p),
        }]))
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::IntegerRing => write!(f, "Z (ring)"),
            RingSpec::Fp(p) => write!(f, "F_{p} (ring)"),
        }
    }
}

/// The structure a distribution's values live in.
///
/// Sums and differences always use the additive structure (the group law for
/// a group carrier); products are only defined for rings.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Carrier {
    Group(GroupSpec),
    Ring(RingSpec),
}

impl Carrier {
    pub fn validate(&self) -> Result<()> {
        match self {
            Carrier::Group(g) => g.validate(),
            Carrier::Ring(r) => r.validate(),
        }
    }

    /// The group whose law interprets `+` and `-`.
    pub fn additive(&self) -> GroupSpec {
        match self {
            Carrier::Group(g) => g.clone(),
            Carrier::Ring(r) => r.additive_group(),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Carrier::Group(g) => g.arity(),
            Carrier::Ring(_) => 1,
        }
    }

    pub fn is_ring(&self) -> bool {
        matches!(self, Carrier::Ring(_))
    }

    pub fn canonicalize(&self, raw: &[BigInt]) -> Result<Element> {
        match self {
            Carrier::Group(g) => g.canonicalize(raw),
            Carrier::Ring(r) => r.additive_group().canonicalize(raw),
        }
    }

    pub fn is_canonical(&self, e: &Element) -> bool {
        match self {
            Carrier::Group(g) => g.is_canonical(e),
            Carrier::Ring(r) => r.additive_group().is_canonical(e),
        }
    }

    pub fn add(&self, a: &Element, b: &Element) -> Result<Element> {
        match self {
            Carrier::Group(g) => g.op(a, b),
            Carrier::Ring(r) => r.additive_group().op(a, b),
        }
    }

    pub fn neg(&self, a: &Element) -> Result<Element> {
        match self {
            Carrier::Group(g) => g.inv(a),
            Carrier::Ring(r) => r.additive_group().inv(a),
        }
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Result<Element> {
        self.add(a, &self.neg(b)?)
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Result<Element> {
        match self {
            Carrier::Group(_) => Err(Error::RingOpOnGroup),
            Carrier::Ring(r) => r.mul(a, b),
        }
    }

    pub fn zero(&self) -> Element {
        self.additive().identity()
    }
}

impl From<GroupSpec> for Carrier {
    fn from(g: GroupSpec) -> Self {
        Carrier::Group(g)
    }
}

impl From<RingSpec> for Carrier {
    fn from(r: RingSpec) -> Self {
        Carrier::Ring(r)
    }
}

impl fmt::Display for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Carrier::Group(g) => g.fmt(f),
            Carrier::Ring(r) => r.fmt(f),
        }
    }
}

/// `canonicalize` on a group spec with plain machine integers.
pub fn canonicalize(spec: &GroupSpec, raw: &[i64]) -> Result<Element> {
    let raw: Vec<BigInt> = raw.iter().map(|&v| BigInt::from(v)).collect();
    spec.canonicalize(&raw)
}

pub fn group_op(spec: &GroupSpec, a: &Element, b: &Element) -> Result<Element> {
    spec.op(a, b)
}

pub fn group_inv(spec: &GroupSpec, a: &Element) -> Result<Element> {
    spec.inv(a)
}

pub fn ring_mul(ring: &RingSpec, a: &Element, b: &Element) -> Result<Element> {
    ring.mul(a, b)
}
