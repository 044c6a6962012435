//! JSON file format for distributions.
//!
//! ```json
//! {
//!   "spec": {"kind": "integers_mod", "n": 12},
//!   "arity": 2,
//!   "probs": [[[["0"], ["1"]], "1/4"], ...]
//! }
//! ```
//!
//! Each atom is `[tuple, "num/den"]`, where `tuple` holds `arity` elements and
//! each element is an array of decimal coordinate strings. Writers always emit
//! reduced fractions in canonical atom order, so write-then-read-then-write is
//! byte-identical.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::dist::{Joint, Prob};
use super::structure::{Carrier, Element, GroupSpec, RingSpec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CarrierRepr {
    Integers,
    IntegersMod { n: u64 },
    FpAdditive { p: u64 },
    FpMultiplicative { p: u64 },
    Product { factors: Vec<CarrierRepr> },
    IntegerRing,
    Fp { p: u64 },
}

impl From<&GroupSpec> for CarrierRepr {
    fn from(g: &GroupSpec) -> Self {
        match g {
            GroupSpec::Integers => CarrierRepr::Integers,
            GroupSpec::IntegersMod(n) => CarrierRepr::IntegersMod { n: *n },
            GroupSpec::FpAdditive(p) => CarrierRepr::FpAdditive { p: *p },
            GroupSpec::FpMultiplicative(p) => CarrierRepr::FpMultiplicative { p: *p },
            GroupSpec::Product(fs) => CarrierRepr::Product { factors: fs.iter().map(Into::into).collect() },
        }
    }
}

impl From<&Carrier> for CarrierRepr {
    fn from(c: &Carrier) -> Self {
        match c {
            Carrier::Group(g) => g.into(),
            Carrier::Ring(RingSpec::IntegerRing) => CarrierRepr::IntegerRing,
            Carrier::Ring(RingSpec::Fp(p)) => CarrierRepr::Fp { p: *p },
        }
    }
}

impl From<Carrier> for CarrierRepr {
    fn from(c: Carrier) -> Self {
        (&c).into()
    }
}

impl CarrierRepr {
    fn to_group(&self) -> Result<GroupSpec> {
        Ok(match self {
            CarrierRepr::Integers => GroupSpec::Integers,
            CarrierRepr::IntegersMod { n } => GroupSpec::IntegersMod(*n),
            CarrierRepr::FpAdditive { p } => GroupSpec::FpAdditive(*p),
            CarrierRepr::FpMultiplicative { p } => GroupSpec::FpMultiplicative(*p),
            CarrierRepr::Product { factors } => {
                GroupSpec::Product(factors.iter().map(CarrierRepr::to_group).collect::<Result<_>>()?)
            }
            CarrierRepr::IntegerRing | CarrierRepr::Fp { .. } => {
                return Err(Error::InvalidConfig("ring kinds cannot appear inside a product".into()))
            }
        })
    }
}

impl TryFrom<CarrierRepr> for Carrier {
    type Error = Error;

    fn try_from(r: CarrierRepr) -> Result<Carrier> {
        let c = match r {
            CarrierRepr::IntegerRing => Carrier::Ring(RingSpec::IntegerRing),
            CarrierRepr::Fp { p } => Carrier::Ring(RingSpec::Fp(p)),
            other => Carrier::Group(other.to_group()?),
        };
        c.validate()?;
        Ok(c)
    }
}

impl Serialize for Carrier {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CarrierRepr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Carrier {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = CarrierRepr::deserialize(d)?;
        Carrier::try_from(r).map_err(serde::de::Error::custom)
    }
}

/// Formats a probability as `num/den` (always with a denominator).
pub fn format_prob(p: &Prob) -> String {
    format!("{}/{}", p.numer(), p.denom())
}

/// Parses `num/den` or a bare integer.
pub fn parse_prob(s: &str) -> std::result::Result<Prob, String> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| format!("bad numerator in {s:?}"))?;
    let d: BigInt = d.parse().map_err(|_| format!("bad denominator in {s:?}"))?;
    if d.is_zero() || d.is_negative() {
        return Err(format!("denominator must be positive in {s:?}"));
    }
    Ok(BigRational::new(n, d))
}

#[derive(Debug, Serialize, Deserialize)]
struct JointFile {
    spec: CarrierRepr,
    arity: usize,
    probs: Vec<(Vec<Vec<String>>, String)>,
}

fn parse_err(field: impl Into<String>, message: impl ToString) -> Error {
    Error::Parse { field: field.into(), message: message.to_string() }
}

impl Joint {
    pub fn to_json_string(&self) -> String {
        let file = JointFile {
            spec: self.carrier().into(),
            arity: self.arity(),
            probs: self
                .iter()
                .map(|(t, p)| {
                    let tuple = t.iter().map(|e| e.coords().iter().map(|c| c.to_string()).collect()).collect();
                    (tuple, format_prob(p))
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("serializable");
        s.push('\n');
        s
    }

    /// Parses the JSON format, reporting the offending field on failure.
    pub fn from_json_str(s: &str) -> Result<Joint> {
        let de = &mut serde_json::Deserializer::from_str(s);
        let file: JointFile = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            parse_err(if path == "." { "document".to_string() } else { path }, e.into_inner())
        })?;
        let carrier = Carrier::try_from(file.spec).map_err(|e| parse_err("spec", e))?;
        if file.arity == 0 {
            return Err(parse_err("arity", "must be at least 1"));
        }
        let width = carrier.arity();
        let mut atoms = Vec::with_capacity(file.probs.len());
        for (i, (tuple, p)) in file.probs.into_iter().enumerate() {
            if tuple.len() != file.arity {
                return Err(parse_err(
                    format!("probs[{i}]"),
                    format!("tuple has {} elements, arity is {}", tuple.len(), file.arity),
                ));
            }
            let mut elems = Vec::with_capacity(tuple.len());
            for (k, coords) in tuple.into_iter().enumerate() {
                let field = format!("probs[{i}][0][{k}]");
                if coords.len() != width {
                    return Err(parse_err(field, format!("expected {width} coordinates, got {}", coords.len())));
                }
                let raw = coords
                    .iter()
                    .map(|c| c.trim().parse::<BigInt>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| parse_err(field.clone(), e))?;
                let e = Element::new(raw);
                if !carrier.is_canonical(&e) {
                    return Err(parse_err(field, format!("{e} is not canonical for {carrier}")));
                }
                elems.push(e);
            }
            let p = parse_prob(&p).map_err(|m| parse_err(format!("probs[{i}][1]"), m))?;
            atoms.push((elems, p));
        }
        Joint::new(carrier, file.arity, atoms).map_err(|e| parse_err("probs", e))
    }
}
