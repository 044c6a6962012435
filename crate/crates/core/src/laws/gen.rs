//! Random and fixed instances for each law.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use super::{LawId, LawInput};
use crate::algebra::{
    graph_coupling, independent_join, ratio, BipartiteGraph, Carrier, Dist, Element, GroupSpec, Joint, Prob,
    RingSpec, Word,
};
use crate::energy::{is_sidon_rv, is_sidon_set};
use crate::error::Result;

/// Size limits for generated instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct GenCaps {
    /// Maximum number of atoms in a generated joint.
    pub max_support: usize,
    /// Integer coordinates are drawn from `[-coord_range, coord_range]`.
    pub coord_range: i64,
    /// Maximum denominator of a generated probability.
    pub max_den: u64,
}

impl Default for GenCaps {
    fn default() -> Self {
        GenCaps { max_support: 12, coord_range: 16, max_den: 64 }
    }
}

/// Supports of the multi-variable laws stay small so the convolutions they
/// need remain cheap.
const SMALL: usize = 4;

pub fn random_group<R: Rng>(rng: &mut R) -> Carrier {
    let g = match rng.gen_range(0..8) {
        0 | 1 => GroupSpec::Integers,
        2 | 3 => GroupSpec::IntegersMod(rng.gen_range(2..=12)),
        4 => GroupSpec::FpAdditive(*[2, 3, 5, 7, 11, 13].choose(rng).unwrap()),
        5 => GroupSpec::FpMultiplicative(*[3, 5, 7, 11, 13].choose(rng).unwrap()),
        6 => GroupSpec::Product(vec![GroupSpec::IntegersMod(2), GroupSpec::Integers]),
        _ => return Carrier::Ring([RingSpec::IntegerRing, RingSpec::Fp(7)].choose(rng).unwrap().clone()),
    };
    Carrier::Group(g)
}

pub fn random_ring<R: Rng>(rng: &mut R) -> Carrier {
    match rng.gen_range(0..3) {
        0 => Carrier::Ring(RingSpec::IntegerRing),
        _ => Carrier::Ring(RingSpec::Fp(*[3, 5, 7, 11, 13].choose(rng).unwrap())),
    }
}

fn group_order(c: &Carrier) -> Option<u128> {
    c.additive().order()
}

fn random_coord<R: Rng>(rng: &mut R, g: &GroupSpec, caps: &GenCaps) -> Vec<BigInt> {
    match g {
        GroupSpec::FpMultiplicative(p) => vec![BigInt::from(rng.gen_range(1..*p))],
        GroupSpec::Product(fs) => fs.iter().flat_map(|f| random_coord(rng, f, caps)).collect(),
        _ => vec![BigInt::from(rng.gen_range(-caps.coord_range..=caps.coord_range))],
    }
}

pub fn random_element<R: Rng>(rng: &mut R, c: &Carrier, caps: &GenCaps) -> Element {
    c.canonicalize(&random_coord(rng, &c.additive(), caps)).expect("generated coordinates are valid")
}

/// Up to `k` distinct elements, optionally avoiding zero.
pub fn random_set<R: Rng>(rng: &mut R, c: &Carrier, k: usize, avoid_zero: bool, caps: &GenCaps) -> Vec<Element> {
    let mut room = group_order(c).map_or(usize::MAX, |n| n as usize);
    if avoid_zero {
        room = room.saturating_sub(1);
    }
    let k = k.min(room).max(1);
    let mut set = BTreeSet::new();
    let mut tries = 0;
    while set.len() < k && tries < 64 * k {
        tries += 1;
        let e = random_element(rng, c, caps);
        if avoid_zero && e == c.zero() {
            continue;
        }
        set.insert(e);
    }
    if set.is_empty() {
        // Only reachable when zero is the sole candidate left out.
        set.insert(c.canonicalize(&[BigInt::from(1)]).expect("one is valid"));
    }
    let mut v: Vec<Element> = set.into_iter().collect();
    v.shuffle(rng);
    v
}

/// `k` positive integers summing to a random total in `[k, max_den]`.
fn random_weights<R: Rng>(rng: &mut R, k: usize, caps: &GenCaps) -> Vec<Prob> {
    let max_den = (caps.max_den as usize).max(k);
    let total = rng.gen_range(k..=max_den);
    let mut cuts: Vec<usize> = (1..total).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(k - 1).collect();
    cuts.push(0);
    cuts.push(total);
    cuts.sort_unstable();
    if rng.gen_bool(0.3) {
        return vec![ratio(1, k as i64); k];
    }
    cuts.windows(2).map(|w| ratio((w[1] - w[0]) as i64, total as i64)).collect()
}

pub fn random_dist_on<R: Rng>(rng: &mut R, c: &Carrier, support: &[Element], caps: &GenCaps) -> Dist {
    let w = random_weights(rng, support.len(), caps);
    Dist::new(c.clone(), support.iter().cloned().zip(w)).expect("valid distribution")
}

pub fn random_dist<R: Rng>(rng: &mut R, c: &Carrier, max_support: usize, avoid_zero: bool, caps: &GenCaps) -> Dist {
    let k = rng.gen_range(1..=max_support.max(1));
    let s = random_set(rng, c, k, avoid_zero, caps);
    random_dist_on(rng, c, &s, caps)
}

/// A joint of the given arity with at most `caps.max_support` atoms.
pub fn random_joint<R: Rng>(rng: &mut R, c: &Carrier, arity: usize, caps: &GenCaps) -> Joint {
    let k = rng.gen_range(1..=caps.max_support);
    let mut tuples = BTreeSet::new();
    for _ in 0..4 * k {
        if tuples.len() == k {
            break;
        }
        tuples.insert((0..arity).map(|_| random_element(rng, c, caps)).collect::<Vec<_>>());
    }
    let tuples: Vec<_> = tuples.into_iter().collect();
    let w = random_weights(rng, tuples.len(), caps);
    Joint::new(c.clone(), arity, tuples.into_iter().zip(w)).expect("valid joint")
}

/// A coupling `(X, Y)` drawn from several families: arbitrary, independent,
/// graph-induced, functional, and independent uniforms on progressions.
pub fn random_pair<R: Rng>(rng: &mut R, caps: &GenCaps) -> Joint {
    let c = random_group(rng);
    match rng.gen_range(0..5) {
        0 => random_joint(rng, &c, 2, caps),
        1 => {
            let a = rng.gen_range(1..=caps.max_support.min(6));
            let b = rng.gen_range(1..=(caps.max_support / a).max(1));
            let x = random_dist(rng, &c, a, false, caps);
            let y = random_dist(rng, &c, b, false, caps);
            independent_join(&[x, y]).expect("same carrier")
        }
        2 => {
            let (nl, nr) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
            let left = random_set(rng, &c, nl, false, caps);
            let right = random_set(rng, &c, nr, false, caps);
            let mut edges: Vec<(usize, usize)> =
                (0..left.len()).flat_map(|a| (0..right.len()).map(move |b| (a, b))).collect();
            edges.shuffle(rng);
            edges.truncate(rng.gen_range(1..=edges.len().min(caps.max_support)));
            let g = BipartiteGraph::new(left, right, edges).expect("valid graph");
            graph_coupling(&g, c).expect("distinct vertices").joint
        }
        3 => {
            let x = random_dist(rng, &c, caps.max_support, false, caps);
            let shift = Word::Const(random_element(rng, &c, caps).into_coords());
            let f = match rng.gen_range(0..3) {
                0 => Word::coord(0),
                1 => Word::sum(Word::coord(0), shift),
                _ => Word::diff(shift, Word::coord(0)),
            };
            x.pushforward_tuple(&[Word::coord(0), f]).expect("additive words")
        }
        _ => {
            let ap = |rng: &mut R| {
                let n = rng.gen_range(1..=3);
                let start = random_element(rng, &c, caps);
                let step = random_element(rng, &c, caps);
                let mut v = vec![start];
                for _ in 1..n {
                    let next = c.add(v.last().unwrap(), &step).expect("same carrier");
                    if v.contains(&next) {
                        break;
                    }
                    v.push(next);
                }
                Dist::uniform_on(c.clone(), &v).expect("distinct")
            };
            let x = ap(rng);
            let y = ap(rng);
            independent_join(&[x, y]).expect("same carrier")
        }
    }
}

fn random_additive_word<R: Rng>(rng: &mut R, arity: usize, c: &Carrier, caps: &GenCaps) -> Word {
    let mut w = Word::coord(rng.gen_range(0..arity));
    for _ in 0..rng.gen_range(0..3) {
        let term = if rng.gen_bool(0.2) {
            Word::Const(random_element(rng, c, caps).into_coords())
        } else {
            Word::coord(rng.gen_range(0..arity))
        };
        w = match rng.gen_range(0..3) {
            0 => Word::sum(w, term),
            1 => Word::diff(w, term),
            _ if c.is_ring() => Word::prod(w, term),
            _ => Word::sum(w, term),
        };
    }
    w
}

/// A Sidon set in the integers, built greedily from random candidates.
pub fn random_sidon_set<R: Rng>(rng: &mut R, max: usize, caps: &GenCaps) -> Vec<Element> {
    let z = Carrier::Group(GroupSpec::Integers);
    let mut set: Vec<Element> = Vec::new();
    let target = rng.gen_range(1..=max);
    for _ in 0..32 {
        if set.len() == target {
            break;
        }
        let e = random_element(rng, &z, caps);
        if set.contains(&e) {
            continue;
        }
        set.push(e);
        if !is_sidon_set(&z, &set).expect("integers") {
            set.pop();
        }
    }
    set
}

fn random_sidon_rv<R: Rng>(rng: &mut R, caps: &GenCaps) -> Dist {
    let z = Carrier::Group(GroupSpec::Integers);
    if rng.gen_bool(0.5) {
        for _ in 0..8 {
            let d = random_dist(rng, &z, SMALL, false, caps);
            if is_sidon_rv(&d, 0.0).expect("integers").0 {
                return d;
            }
        }
    }
    let s = random_sidon_set(rng, SMALL, caps);
    random_dist_on(rng, &z, &s, caps)
}

fn random_submod<R: Rng>(rng: &mut R, caps: &GenCaps) -> LawInput {
    let c = random_group(rng);
    let base = random_joint(rng, &c, 3, caps);
    let (u, v, t) = (Word::coord(0), Word::coord(1), Word::coord(2));
    let (x, y, z, w) = match rng.gen_range(0..4) {
        0 => (vec![u.clone(), v.clone(), t.clone()], vec![t.clone()], vec![u, t.clone()], vec![v, t]),
        1 => (vec![Word::sum(u.clone(), v.clone())], vec![Word::Const(c.zero().into_coords())], vec![u], vec![v]),
        2 => {
            let ut = Word::sum(u.clone(), t);
            (vec![u.clone(), v.clone()], vec![ut.clone()], vec![u, ut.clone()], vec![v, ut])
        }
        _ => (vec![u.clone()], vec![Word::sum(u.clone(), u.clone())], vec![u.clone()], vec![u]),
    };
    LawInput::Submod { base, x, y, z, w }
}

/// A random instance of `law`.
pub fn random_instance<R: Rng>(law: LawId, rng: &mut R, caps: &GenCaps) -> Result<LawInput> {
    use LawId::*;
    Ok(match law {
        Subadd | CondReduces | LargeChain | NaiveFwd | NaiveBwd | SmallFwd | SmallBwd | LemA2 | Bsg | Symm
        | Asymm => LawInput::Joint(random_pair(rng, caps)),
        Chain => {
            let c = random_group(rng);
            let arity = rng.gen_range(1..=4);
            LawInput::Joint(random_joint(rng, &c, arity, caps))
        }
        CitIdentity => {
            let j = random_pair(rng, caps);
            LawInput::Joint(match rng.gen_range(0..3) {
                0 => j,
                // Z = X + Y, the statistic behind additive energy.
                1 => j.pushforward_tuple(&[Word::coord(0), Word::coord(1), Word::sum_of(0, 1)])?,
                _ => j.pushforward_tuple(&[Word::coord(0), Word::sum_of(0, 1)])?,
            })
        }
        Submod => random_submod(rng, caps),
        MaxProb => {
            if rng.gen_bool(0.5) {
                LawInput::Joint(random_pair(rng, caps))
            } else {
                let c = random_group(rng);
                LawInput::Dist(random_dist(rng, &c, caps.max_support, false, caps))
            }
        }
        Determines => {
            let c = random_group(rng);
            let arity = rng.gen_range(1..=3);
            let joint = random_joint(rng, &c, arity, caps);
            let map = random_additive_word(rng, arity, &c, caps);
            LawInput::Determines { joint, map }
        }
        IndepSumDiff | CsProbe => {
            let c = random_group(rng);
            let x = random_dist(rng, &c, 6, false, caps);
            let y = random_dist(rng, &c, 6, false, caps);
            LawInput::Pair(x, y)
        }
        EnergyBounds => {
            let c = random_group(rng);
            let (na, nb) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
            let a = random_set(rng, &c, na, false, caps);
            let b = random_set(rng, &c, nb, false, caps);
            LawInput::Sets { carrier: c, a, b }
        }
        DoublingEquiv => {
            let c = random_group(rng);
            LawInput::Dist(random_dist(rng, &c, caps.max_support, false, caps))
        }
        SidonSet => {
            let z = Carrier::Group(GroupSpec::Integers);
            let s = random_sidon_set(rng, 6, caps);
            LawInput::Dist(random_dist_on(rng, &z, &s, caps))
        }
        SidonCond => {
            let z = Carrier::Group(GroupSpec::Integers);
            let k = rng.gen_range(1..=3);
            let zw = random_weights(rng, k, caps);
            let mut atoms = Vec::new();
            for (i, pz) in zw.into_iter().enumerate() {
                let fiber = random_sidon_rv(rng, caps);
                for (x, px) in fiber.elements() {
                    atoms.push((vec![x.clone(), Element::scalar(i as i64)], px * &pz));
                }
            }
            LawInput::Joint(Joint::new(z, 2, atoms)?)
        }
        Kt => {
            let c = random_ring(rng);
            let ds: [Dist; 4] = if rng.gen_bool(0.3) {
                let d = random_dist(rng, &c, SMALL, true, caps);
                [d.clone(), d.clone(), d.clone(), d]
            } else {
                std::array::from_fn(|_| random_dist(rng, &c, SMALL, true, caps))
            };
            LawInput::Quad(Box::new(ds))
        }
        Pr => {
            let c = random_group(rng);
            let w = random_dist(rng, &c, SMALL, false, caps);
            let m = rng.gen_range(1..=3);
            let ws = (0..m).map(|_| random_dist(rng, &c, SMALL, false, caps)).collect();
            LawInput::Plunnecke { w, ws }
        }
    })
}

pub const HEGARTY: [i64; 8] = [-7, -5, -4, -3, 0, 4, 5, 7];

fn uni(c: &Carrier, vs: &[i64]) -> Dist {
    let els: Vec<Element> = vs.iter().map(|&v| Element::scalar(v)).collect();
    Dist::uniform_on(c.clone(), &els).expect("distinct elements")
}

fn indep(x: &Dist, y: &Dist) -> Joint {
    independent_join(&[x, y]).expect("same carrier")
}

/// Named reference instances run alongside the random trials.
pub fn battery(law: LawId) -> Vec<(&'static str, LawInput)> {
    use LawId::*;
    let z = Carrier::Group(GroupSpec::Integers);
    let z4 = Carrier::Group(GroupSpec::IntegersMod(4));
    let z6 = Carrier::Group(GroupSpec::IntegersMod(6));
    let f7x = Carrier::Group(GroupSpec::FpMultiplicative(7));
    let neg: Vec<i64> = HEGARTY.iter().map(|v| -v).collect();
    let ua = uni(&z, &HEGARTY);
    let una = uni(&z, &neg);
    let u012 = uni(&z, &[0, 1, 2]);
    let u4 = uni(&z4, &[0, 1, 2, 3]);
    let h6 = uni(&z6, &[0, 2, 4]);
    let f7 = uni(&f7x, &[1, 2, 3, 4, 5, 6]);
    let pairs = || {
        vec![
            ("hegarty", LawInput::Joint(indep(&ua, &una))),
            ("uniform {0,1,2}", LawInput::Joint(indep(&u012, &u012))),
            ("uniform Z/4", LawInput::Joint(indep(&u4, &u4))),
            ("subgroup of Z/6", LawInput::Joint(indep(&h6, &h6))),
            ("uniform F_7^*", LawInput::Joint(indep(&f7, &f7))),
            ("diagonal {0,1,2}", LawInput::Joint(u012.marginal(&[0, 0]).expect("valid"))),
        ]
    };
    let dists = || {
        vec![
            ("hegarty", LawInput::Dist(ua.clone())),
            ("uniform {0,1,2}", LawInput::Dist(u012.clone())),
            ("uniform Z/4", LawInput::Dist(u4.clone())),
            ("uniform F_7^*", LawInput::Dist(f7.clone())),
        ]
    };
    let dist_pairs = || {
        vec![
            ("hegarty", LawInput::Pair(ua.clone(), una.clone())),
            ("uniform {0,1,2}", LawInput::Pair(u012.clone(), u012.clone())),
            ("subgroup of Z/6", LawInput::Pair(h6.clone(), h6.clone())),
        ]
    };
    match law {
        Subadd | CondReduces | LargeChain | NaiveFwd | NaiveBwd | SmallFwd | SmallBwd | LemA2 | Bsg | Symm
        | Asymm | Chain | MaxProb => pairs(),
        CitIdentity => {
            let mut v = pairs();
            let cit = indep(&ua, &una)
                .pushforward_tuple(&[Word::coord(0), Word::sum_of(0, 1)])
                .expect("additive words");
            v.push(("hegarty (X, X+Y)", LawInput::Joint(cit)));
            v
        }
        DoublingEquiv => dists(),
        IndepSumDiff | CsProbe => dist_pairs(),
        Submod => vec![(
            "(X, 2X, X, X) on {0,1,2}",
            LawInput::Submod {
                base: u012.clone().into_joint(),
                x: vec![Word::coord(0)],
                y: vec![Word::sum_of(0, 0)],
                z: vec![Word::coord(0)],
                w: vec![Word::coord(0)],
            },
        )],
        Determines => vec![
            ("hegarty X+Y", LawInput::Determines { joint: indep(&ua, &una), map: Word::sum_of(0, 1) }),
            ("{0,1,2} doubled", LawInput::Determines { joint: u012.clone().into_joint(), map: Word::sum_of(0, 0) }),
        ],
        EnergyBounds => vec![
            (
                "hegarty",
                LawInput::Sets { carrier: z.clone(), a: ua.support(), b: una.support() },
            ),
            ("{0,1,2}", LawInput::Sets { carrier: z.clone(), a: u012.support(), b: u012.support() }),
            ("subgroup of Z/6", LawInput::Sets { carrier: z6.clone(), a: h6.support(), b: h6.support() }),
        ],
        SidonSet => vec![
            ("uniform {0,1,3}", LawInput::Dist(uni(&z, &[0, 1, 3]))),
            ("uniform {0,1,4,6}", LawInput::Dist(uni(&z, &[0, 1, 4, 6]))),
            ("uniform {1,2}", LawInput::Dist(uni(&z, &[1, 2]))),
        ],
        SidonCond => {
            let mut atoms = Vec::new();
            for (x, zv) in [(0, 0), (1, 0), (3, 0)] {
                atoms.push((vec![Element::scalar(x), Element::scalar(zv)], ratio(1, 6)));
            }
            for x in [0, 2] {
                atoms.push((vec![Element::scalar(x), Element::scalar(1)], ratio(1, 4)));
            }
            vec![("fibers {0,1,3} and {0,2}", LawInput::Joint(Joint::new(z.clone(), 2, atoms).expect("valid")))]
        }
        Kt => {
            let quad = |d: Dist| LawInput::Quad(Box::new([d.clone(), d.clone(), d.clone(), d]));
            let fp = |p: u64| {
                let vs: Vec<i64> = (1..p as i64).collect();
                uni(&Carrier::Ring(RingSpec::Fp(p)), &vs)
            };
            vec![
                ("uniform F_5^*", quad(fp(5))),
                ("uniform F_7^*", quad(fp(7))),
                ("uniform {1,2}", quad(uni(&Carrier::Ring(RingSpec::IntegerRing), &[1, 2]))),
            ]
        }
        Pr => vec![
            ("hegarty", LawInput::Plunnecke { w: ua.clone(), ws: vec![ua.clone(), una.clone()] }),
            ("subgroup of Z/6", LawInput::Plunnecke { w: h6.clone(), ws: vec![h6.clone(), h6.clone()] }),
            ("{0,1,2}", LawInput::Plunnecke { w: u012.clone(), ws: vec![u012] }),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_instances_respect_caps() {
        let caps = GenCaps::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let j = random_pair(&mut rng, &caps);
            assert!(j.support_size() <= caps.max_support);
            for i in 0..2 {
                for (_, p) in j.marginal(&[i]).unwrap().iter() {
                    assert!(p.denom() <= &BigInt::from(caps.max_den));
                }
            }
        }
    }

    #[test]
    fn every_law_has_instances() {
        let caps = GenCaps::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for &law in LawId::ALL {
            assert!(!battery(law).is_empty(), "{law}");
            random_instance(law, &mut rng, &caps).unwrap();
        }
    }
}
