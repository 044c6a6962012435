//! A registry of entropy inequalities and identities, each evaluable on a
//! concrete instance with a signed-slack report.
//!
//! Every law is written as one or more components `lhs <= rhs` (or
//! `lhs = rhs` for identities). The reported slack is `rhs - lhs` for the
//! tightest component. Constants such as `log C` are never supplied by the
//! caller: they are inferred from the instance as the smallest non-negative
//! value for which the law's hypothesis holds.

mod bsg;
pub mod gen;
mod katz_tao;
mod plunnecke;
mod suite;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::{independent_join, Carrier, Dist, Element, Joint, Word};
use crate::energy::{additive_energy, doubling, is_sidon_rv, is_sidon_set, self_energy, set_energy, sumset};
use crate::entropy::{conditional_entropy, entropy, entropy_of_word, entropy_of_words, marginal_entropy, Bits};
use crate::error::{Error, Result};

pub use bsg::{bsg_report, BsgReport};
pub use katz_tao::{katz_tao_report, KatzTaoReport, KatzTaoSecondClaim};
pub use plunnecke::plunnecke_check;
pub use suite::{run_battery, run_suite, LawSummary, SuiteConfig, SuiteReport};

macro_rules! law_ids {
    ($($variant:ident => $name:literal),* $(,)?) => {
        /// Identifier of a registered law.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum LawId { $($variant),* }

        impl LawId {
            pub const ALL: &'static [LawId] = &[$(LawId::$variant),*];

            pub fn name(self) -> &'static str {
                match self { $(LawId::$variant => $name),* }
            }
        }

        impl FromStr for LawId {
            type Err = Error;
            fn from_str(s: &str) -> Result<LawId> {
                match s.trim().to_ascii_uppercase().as_str() {
                    $($name => Ok(LawId::$variant),)*
                    other => Err(Error::InvalidConfig(format!("unknown law id {other:?}"))),
                }
            }
        }
    };
}

law_ids! {
    Subadd => "SUBADD",
    CondReduces => "COND_REDUCES",
    Chain => "CHAIN",
    Submod => "SUBMOD",
    MaxProb => "MAXPROB",
    Determines => "DETERMINES",
    IndepSumDiff => "INDEP_SUMDIFF",
    CitIdentity => "CIT_IDENTITY",
    EnergyBounds => "ENERGY_BOUNDS",
    LargeChain => "LARGE_CHAIN",
    NaiveFwd => "NAIVE_FWD",
    NaiveBwd => "NAIVE_BWD",
    SmallFwd => "SMALL_FWD",
    SmallBwd => "SMALL_BWD",
    LemA2 => "LEM_A2",
    Bsg => "BSG",
    Symm => "SYMM",
    Asymm => "ASYMM",
    DoublingEquiv => "DOUBLING_EQUIV",
    SidonSet => "SIDON_SET",
    SidonCond => "SIDON_COND",
    Kt => "KT",
    Pr => "PR",
    CsProbe => "CS_PROBE",
}

impl LawId {
    /// The statement being checked, in plain notation.
    pub fn statement(self) -> &'static str {
        use LawId::*;
        match self {
            Subadd => "H(X,Y) <= H(X) + H(Y)",
            CondReduces => "H(X|Y) <= H(X)",
            Chain => "H(X1,...,Xn) = sum_i H(Xi | X1,...,X(i-1))",
            Submod => "H(X) + H(Y) <= H(Z) + H(W) when (Z,W) determines X and Z, W each determine Y",
            MaxProb => "max_a P(X = a) >= 2^-H(X)",
            Determines => "H(f(X)) <= H(X)",
            IndepSumDiff => "X, Y independent: min(H(X+Y), H(X-Y)) >= max(H(X), H(Y))",
            CitIdentity => "H(X1,X2,Z) = 2 H(X,Z) - H(Z) for trials of X relative to Z",
            EnergyBounds => "log(|A|^2 |B|^2 / |A+B|) <= A(U_A,U_B) <= log E(A,B); s(U_A) >= 3 log|A| - log E(A,A)",
            LargeChain => "A(X,Y) <= H(X,Y) + min(H(X), H(Y))",
            NaiveFwd => "A(X,Y) >= 3/2 (H(X)+H(Y)) - log C  =>  H(X+Y) <= 1/2 (H(X)+H(Y)) + log C",
            NaiveBwd => "H(X+Y) <= 1/2 (H(X)+H(Y)) + log C, H(X,Y) >= H(X)+H(Y) - C'  =>  A(X,Y) >= 3/2 (H(X)+H(Y)) - log C - 2C'",
            SmallFwd => "H(X+Y) >= H(X)+H(Y) - log C  =>  A(X,Y) <= H(X)+H(Y) + log C",
            SmallBwd => "A(X,Y) <= H(X)+H(Y) + log C, H(X,Y) >= H(X)+H(Y) - C'  =>  H(X+Y) >= H(X)+H(Y) - log C - 2C'",
            LemA2 => "max(H(X1-X2), H(X1-Y2)) <= 2H(X) + 2H(Y) - A(X,Y)",
            Bsg => "entropic Balog-Szemeredi-Gowers: H(X1|X+Y) >= H(X) - 2 log C, H(Y2|X+Y) >= H(Y) - 2 log C, H(X1+Y2|X+Y) <= 1/2 (H(X)+H(Y)) + log C",
            Symm => "A(X,Y) >= 3/2 (H(X)+H(Y)) - log C  =>  |H(X) - H(Y)| <= 2 log C",
            Asymm => "A(X,Y) >= 2H(X) + H(Y) - log C  =>  H(X+Y) - H(Y) <= log C",
            DoublingEquiv => "A(X) = 3H(X) - s(X)",
            SidonSet => "X supported on a Sidon set: s(X) >= H(X) - 1",
            SidonCond => "every fiber X|Z=z Sidon: H(X|Z) <= (H(X+X') + 1) / 2",
            Kt => "entropic Katz-Tao: H(XY+ZW) + H(X) + H(Y) + 2H(Z) + 2H(W) <= H(X+Y) + H(Z-W) + H(XZ) + 2H(YZ) + 2H(ZW)",
            Pr => "entropic Plunnecke-Ruzsa: H(W+W1+...+Wm) <= H(W) + sum_i (H(W+Wi) - H(W))",
            CsProbe => "entropic Cauchy-Schwarz (false in general): A(X,Y) <= A(X)/2 + A(Y)/2",
        }
    }

    /// The inputs `evaluate_law` expects.
    pub fn signature(self) -> &'static str {
        use LawId::*;
        match self {
            Subadd | CondReduces | LargeChain | NaiveFwd | NaiveBwd | SmallFwd | SmallBwd | LemA2 | Bsg
            | Symm | Asymm => "Joint of arity 2 over (X, Y)",
            Chain => "Joint of any arity",
            CitIdentity => "Joint of arity >= 2; the last coordinate is Z",
            Submod => "Submod { base, x, y, z, w } with word tuples over the base joint",
            MaxProb => "Dist or Joint",
            Determines => "Determines { joint, map }",
            IndepSumDiff | CsProbe => "Pair of independent Dists",
            EnergyBounds => "Sets { carrier, a, b }",
            DoublingEquiv | SidonSet => "Dist",
            SidonCond => "Joint of arity 2 over (X, Z)",
            Kt => "Quad of independent ring-valued Dists with nonzero supports",
            Pr => "Plunnecke { w, ws }",
        }
    }

    /// False only for probes of statements known to fail.
    pub fn is_theorem(self) -> bool {
        self != LawId::CsProbe
    }

    pub fn is_identity(self) -> bool {
        matches!(self, LawId::Chain | LawId::CitIdentity | LawId::DoublingEquiv)
    }
}

impl fmt::Display for LawId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for LawId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for LawId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Concrete inputs for a law.
#[derive(Debug, Clone, PartialEq)]
pub enum LawInput {
    Joint(Joint),
    Dist(Dist),
    Determines { joint: Joint, map: Word },
    /// Variables given as word tuples over `base`.
    Submod { base: Joint, x: Vec<Word>, y: Vec<Word>, z: Vec<Word>, w: Vec<Word> },
    Pair(Dist, Dist),
    Sets { carrier: Carrier, a: Vec<Element>, b: Vec<Element> },
    Quad(Box<[Dist; 4]>),
    Plunnecke { w: Dist, ws: Vec<Dist> },
}

fn joint_value(j: &Joint) -> Value {
    serde_json::from_str(&j.to_json_string()).expect("valid json")
}

fn words_value(ws: &[Word]) -> Value {
    Value::from(ws.iter().map(|w| w.to_string()).collect::<Vec<_>>())
}

impl LawInput {
    /// JSON form of the inputs, for reproducing a failure.
    pub fn witness(&self) -> Value {
        use serde_json::json;
        match self {
            LawInput::Joint(j) => json!({ "joint": joint_value(j) }),
            LawInput::Dist(d) => json!({ "dist": joint_value(d) }),
            LawInput::Determines { joint, map } => json!({ "joint": joint_value(joint), "map": map.to_string() }),
            LawInput::Submod { base, x, y, z, w } => json!({
                "base": joint_value(base),
                "x": words_value(x), "y": words_value(y), "z": words_value(z), "w": words_value(w),
            }),
            LawInput::Pair(a, b) => json!({ "x": joint_value(a), "y": joint_value(b) }),
            LawInput::Sets { carrier, a, b } => json!({
                "spec": carrier,
                "a": a.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                "b": b.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            }),
            LawInput::Quad(ds) => Value::from(ds.iter().map(|d| joint_value(d)).collect::<Vec<_>>()),
            LawInput::Plunnecke { w, ws } => json!({
                "w": joint_value(w),
                "ws": ws.iter().map(|d| joint_value(d)).collect::<Vec<_>>(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// `lhs <= rhs`
    Le,
    /// `lhs = rhs`
    Eq,
}

/// One inequality or identity inside a law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub name: String,
    pub relation: Relation,
    pub lhs: Bits,
    pub rhs: Bits,
    pub slack: Bits,
    pub pass: bool,
}

/// Result of evaluating a law on one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlackReport {
    pub law: LawId,
    pub lhs: Bits,
    pub rhs: Bits,
    /// `rhs - lhs` of the tightest component.
    pub slack: Bits,
    pub pass: bool,
    pub components: Vec<Component>,
    /// Inferred constants and informational side values.
    pub extras: BTreeMap<String, f64>,
    pub witness: Value,
}

/// Collects components, then condenses them into a `SlackReport`.
#[derive(Debug, Default)]
pub(crate) struct Checks {
    components: Vec<Component>,
    extras: BTreeMap<String, f64>,
    tol: f64,
}

impl Checks {
    pub(crate) fn new(tol: f64) -> Self {
        Checks { tol, ..Default::default() }
    }

    pub(crate) fn le(&mut self, name: &str, lhs: Bits, rhs: Bits) {
        let slack = rhs - lhs;
        let pass = slack.0 >= -self.tol;
        self.components.push(Component { name: name.into(), relation: Relation::Le, lhs, rhs, slack, pass });
    }

    pub(crate) fn eq(&mut self, name: &str, lhs: Bits, rhs: Bits) {
        let slack = rhs - lhs;
        let pass = slack.0.abs() <= self.tol;
        self.components.push(Component { name: name.into(), relation: Relation::Eq, lhs, rhs, slack, pass });
    }

    pub(crate) fn extra(&mut self, key: &str, v: f64) {
        self.extras.insert(key.into(), v);
    }

    pub(crate) fn finish(self, law: LawId, witness: Value) -> SlackReport {
        // Tightest component: smallest slack for inequalities, largest
        // deviation for identities.
        let badness = |c: &Component| match c.relation {
            Relation::Le => -c.slack.0,
            Relation::Eq => c.slack.0.abs(),
        };
        let worst = self
            .components
            .iter()
            .max_by(|a, b| badness(a).total_cmp(&badness(b)))
            .expect("at least one component");
        SlackReport {
            law,
            lhs: worst.lhs,
            rhs: worst.rhs,
            slack: worst.slack,
            pass: self.components.iter().all(|c| c.pass),
            components: self.components.clone(),
            extras: self.extras,
            witness,
        }
    }
}

/// Entropies of a pair `(X, Y)` shared by most two-variable laws.
pub(crate) struct PairStats {
    pub hx: Bits,
    pub hy: Bits,
    pub hxy: Bits,
    pub hsum: Bits,
    pub energy: Bits,
}

impl PairStats {
    pub(crate) fn of(j: &Joint) -> Result<PairStats> {
        if j.arity() != 2 {
            return Err(Error::SignatureMismatch(format!("expected a pair joint, got arity {}", j.arity())));
        }
        let hx = marginal_entropy(j, &[0])?;
        let hy = marginal_entropy(j, &[1])?;
        let hxy = entropy(j);
        let hsum = entropy_of_word(j, &Word::sum_of(0, 1))?;
        let energy = additive_energy(j)?.value;
        Ok(PairStats { hx, hy, hxy, hsum, energy })
    }

    /// Smallest `log C >= 0` with `A(X,Y) >= 3/2 (H(X)+H(Y)) - log C`.
    pub(crate) fn bsg_log_c(&self) -> Bits {
        (1.5 * (self.hx + self.hy) - self.energy).max(Bits::ZERO)
    }
}

fn expect_joint(law: LawId, input: &LawInput) -> Result<&Joint> {
    match input {
        LawInput::Joint(j) => Ok(j),
        LawInput::Dist(d) if law == LawId::MaxProb => Ok(d.as_joint()),
        _ => Err(Error::SignatureMismatch(format!("{law} expects {}", law.signature()))),
    }
}

fn mismatch(law: LawId) -> Error {
    Error::SignatureMismatch(format!("{law} expects {}", law.signature()))
}

/// Whether the word tuple `from` functionally determines `to` on `base`.
pub fn determines(base: &Joint, from: &[Word], to: &[Word]) -> Result<bool> {
    let mut all = from.to_vec();
    all.extend_from_slice(to);
    let j = base.pushforward_tuple(&all)?;
    let mut seen: BTreeMap<&[Element], &[Element]> = BTreeMap::new();
    for (t, _) in j.iter() {
        let (k, v) = t.split_at(from.len());
        if let Some(prev) = seen.insert(k, v) {
            if prev != v {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Evaluates `law` on `input` with comparison tolerance `tol` (bits).
pub fn evaluate_law(law: LawId, input: &LawInput, tol: f64) -> Result<SlackReport> {
    use LawId::*;
    let mut c = Checks::new(tol);
    match law {
        Subadd => {
            let j = expect_joint(law, input)?;
            let s = pair_only(j)?;
            c.le("subadditivity", entropy(j), s.0 + s.1);
        }
        CondReduces => {
            let j = expect_joint(law, input)?;
            let (hx, _) = pair_only(j)?;
            c.le("conditioning", conditional_entropy(j, &[0], &[1])?, hx);
        }
        Chain => {
            let j = expect_joint(law, input)?;
            let steps: Vec<Bits> = (0..j.arity())
                .map(|i| conditional_entropy(j, &[i], &(0..i).collect::<Vec<_>>()))
                .collect::<Result<_>>()?;
            c.eq("chain rule", entropy(j), steps.into_iter().sum());
        }
        Submod => {
            let LawInput::Submod { base, x, y, z, w } = input else { return Err(mismatch(law)) };
            let zw: Vec<Word> = z.iter().chain(w.iter()).cloned().collect();
            if !determines(base, &zw, x)? || !determines(base, z, y)? || !determines(base, w, y)? {
                return Err(Error::SignatureMismatch("declared determinations do not hold".into()));
            }
            let h = |ws: &[Word]| entropy_of_words(base, ws);
            c.le("submodularity", h(x)? + h(y)?, h(z)? + h(w)?);
        }
        MaxProb => {
            let j = expect_joint(law, input)?;
            let pmax = num_traits::ToPrimitive::to_f64(j.max_prob()).expect("finite");
            c.le("max probability", Bits(-pmax.log2()), entropy(j));
        }
        Determines => {
            let LawInput::Determines { joint, map } = input else { return Err(mismatch(law)) };
            c.le("function of X", entropy_of_word(joint, map)?, entropy(joint));
        }
        IndepSumDiff => {
            let LawInput::Pair(dx, dy) = input else { return Err(mismatch(law)) };
            let j = independent_join(&[dx, dy])?;
            let (hx, hy) = (entropy(dx), entropy(dy));
            let hs = entropy_of_word(&j, &Word::sum_of(0, 1))?;
            let hd = entropy_of_word(&j, &Word::diff_of(0, 1))?;
            c.le("H(X) <= H(X+Y)", hx, hs);
            c.le("H(Y) <= H(X+Y)", hy, hs);
            c.le("H(X) <= H(X-Y)", hx, hd);
            c.le("H(Y) <= H(X-Y)", hy, hd);
        }
        CitIdentity => {
            let j = expect_joint(law, input)?;
            if j.arity() < 2 {
                return Err(mismatch(law));
            }
            let k = j.arity();
            let t = j.cond_indep_trials(&Word::Coord(k - 1))?;
            // Trials are (X1.., Z, X2.., Z); drop the repeated Z.
            let keep: Vec<usize> = (0..2 * k - 1).collect();
            let lhs = marginal_entropy(&t, &keep)?;
            let rhs = 2.0 * entropy(j) - marginal_entropy(j, &[k - 1])?;
            c.eq("H(X1,X2,Z) = 2H(X,Z) - H(Z)", lhs, rhs);
        }
        EnergyBounds => {
            let LawInput::Sets { carrier, a, b } = input else { return Err(mismatch(law)) };
            let ua = Dist::uniform_on(carrier.clone(), a)?;
            let ub = Dist::uniform_on(carrier.clone(), b)?;
            let energy = additive_energy(independent_join(&[&ua, &ub])?)?.value;
            let (na, nb) = (a.len() as f64, b.len() as f64);
            let ab = sumset(carrier, &ua.support(), &ub.support())?.len() as f64;
            let e_ab = set_energy(carrier, a, b)? as f64;
            let e_aa = set_energy(carrier, a, a)? as f64;
            c.le("lower", Bits::log2(na * na * nb * nb / ab), energy);
            c.le("upper", energy, Bits::log2(e_ab));
            c.le("doubling form", Bits::log2(na.powi(3)) - Bits::log2(e_aa), doubling(&ua)?);
            c.extra("E(A,B)", e_ab);
            c.extra("|A+B|", ab);
        }
        LargeChain => {
            let s = PairStats::of(expect_joint(law, input)?)?;
            c.le("A(X,Y) <= H(X,Y) + min(H(X),H(Y))", s.energy, s.hxy + s.hx.min(s.hy));
        }
        NaiveFwd => {
            let s = PairStats::of(expect_joint(law, input)?)?;
            let log_c = s.bsg_log_c();
            c.extra("log_c", log_c.0);
            c.le("H(X+Y) <= (H(X)+H(Y))/2 + log C", s.hsum, 0.5 * (s.hx + s.hy) + log_c);
        }
        NaiveBwd => {
            let s = PairStats::of(expect_joint(law, input)?)?;
            let c_prime = s.hx + s.hy - s.hxy;
            let log_c = (s.hsum - 0.5 * (s.hx + s.hy)).max(Bits::ZERO);
            c.extra("log_c", log_c.0);
            c.extra("c_prime", c_prime.0);
            c.le("A(X,Y) >= 3/2 (H(X)+H(Y)) - log C - 2C'", 1.5 * (s.hx + s.hy) - log_c - 2.0 * c_prime, s.energy);
        }
        SmallFwd => {
            let s = PairStats::of(expect_joint(law, input)?)?;
            let log_c = (s.hx + s.hy - s.hsum).max(Bits::ZERO);
            c.extra("log_c", log_c.0);
            // The variant with "- log C" is not a theorem; it is reported
            // for comparison only.
            c.extra("minus_log_c_slack", (s.hx + s.hy - log_c - s.energy).0);
            c.le("A(X,Y) <= H(X)+H(Y) + log C", s.energy, s.hx + s.hy + log_c);
        }
        SmallBwd => {
            let s = PairStats::of(expect_joint(law, input)?)?;
            let c_prime = s.hx + s.hy - s.hxy;
            let log_c = (s.energy - s.hx - s.hy).max(Bits::ZERO);
            c.extra("log_c", log_c.0);
            c.extra("c_prime", c_prime.0);
            c.le("H(X+Y) >= H(X)+H(Y) - log C - 2C'", s.hx + s.hy - log_c - 2.0 * c_prime, s.hsum);
        }
        LemA2 => {
            let j = expect_joint(law, input)?;
            let s = PairStats::of(j)?;
            let t = j.cond_indep_trials(&Word::sum_of(0, 1))?;
            let bound = 2.0 * (s.hx + s.hy) - s.energy;
            c.le("H(X1-X2)", entropy_of_word(&t, &Word::diff_of(0, 2))?, bound);
            c.le("H(X1-Y2)", entropy_of_word(&t, &Word::diff_of(0, 3))?, bound);
        }
        Bsg => {
            let r = bsg_report(expect_joint(law, input)?)?;
            c.extra("log_c", r.log_c.0);
            c.le("H(X1|X+Y) >= H(X) - 2 log C", r.h_x - 2.0 * r.log_c, r.h_x1_given_sum);
            c.le("H(Y2|X+Y) >= H(Y) - 2 log C", r.h_y - 2.0 * r.log_c, r.h_y2_given_sum);
            c.le("H(X1+Y2|X+Y) <= (H(X)+H(Y))/2 + log C", r.h_cross_sum_given_sum, 0.5 * (r.h_x + r.h_y) + r.log_c);
        }
        Symm => {
            let s = PairStats::of(expect_joint(law, input)?)?;
            let log_c = s.bsg_log_c();
            c.extra("log_c", log_c.0);
            c.le("H(X) - 2 log C <= H(Y)", s.hx - 2.0 * log_c, s.hy);
            c.le("H(Y) <= H(X) + 2 log C", s.hy, s.hx + 2.0 * log_c);
        }
        Asymm => {
            let s = PairStats::of(expect_joint(law, input)?)?;
            let log_c = (2.0 * s.hx + s.hy - s.energy).max(Bits::ZERO);
            c.extra("log_c", log_c.0);
            c.le("H(X+Y) - H(Y) <= log C", s.hsum - s.hy, log_c);
        }
        DoublingEquiv => {
            let LawInput::Dist(d) = input else { return Err(mismatch(law)) };
            let a = self_energy(d)?.via_construction;
            c.eq("A(X) = 3H(X) - s(X)", a, 3.0 * entropy(d) - doubling(d)?);
        }
        SidonSet => {
            let LawInput::Dist(d) = input else { return Err(mismatch(law)) };
            if !is_sidon_set(d.carrier(), &d.support())? {
                return Err(Error::SignatureMismatch("support is not a Sidon set".into()));
            }
            let h = entropy(d);
            c.le("s(X) >= H(X) - 1", h - Bits(1.0), doubling(d)?);
            c.le("A(X) <= 2H(X) + 1", self_energy(d)?.value, 2.0 * h + Bits(1.0));
        }
        SidonCond => {
            let j = expect_joint(law, input)?;
            if j.arity() != 2 {
                return Err(mismatch(law));
            }
            let z = Word::Coord(1);
            for value in j.fibers(&z)?.keys() {
                let fiber = j.condition(&z, value)?.marginal(&[0])?.into_dist()?;
                if !is_sidon_rv(&fiber, tol)?.0 {
                    return Err(Error::SignatureMismatch(format!("fiber Z = {value} is not a Sidon variable")));
                }
            }
            let h_cond = conditional_entropy(j, &[0], &[1])?;
            // X' is a conditionally independent copy of X relative to Z.
            let t = j.cond_indep_trials(&z)?;
            let h_pair_sum = entropy_of_word(&t, &Word::sum_of(0, 2))?;
            let x = j.marginal(&[0])?.into_dist()?;
            let h_indep_sum = entropy_of_word(independent_join(&[&x, &x])?, &Word::sum_of(0, 1))?;
            c.extra("independent_copy_slack", ((h_indep_sum + Bits(1.0)) / 2.0 - h_cond).0);
            c.le("H(X|Z) <= (H(X+X') + 1)/2", h_cond, (h_pair_sum + Bits(1.0)) / 2.0);
        }
        Kt => {
            let LawInput::Quad(ds) = input else { return Err(mismatch(law)) };
            let [x, y, z, w] = &**ds;
            let r = katz_tao_report(x, y, z, w)?;
            c.le("Katz-Tao", r.lhs, r.rhs);
            if let Some(second) = &r.second_claim {
                c.extra("log_c", second.log_c.0);
                if second.applicable {
                    c.le("H(XY+ZW) <= H(X) + 8 log C", second.lhs, second.rhs);
                }
            }
        }
        Pr => {
            let LawInput::Plunnecke { w, ws } = input else { return Err(mismatch(law)) };
            return plunnecke_check(w, ws, tol);
        }
        CsProbe => {
            let LawInput::Pair(dx, dy) = input else { return Err(mismatch(law)) };
            let axy = additive_energy(independent_join(&[dx, dy])?)?.value;
            let ax = self_energy(dx)?.value;
            let ay = self_energy(dy)?.value;
            c.le("A(X,Y) <= A(X)/2 + A(Y)/2", axy, 0.5 * (ax + ay));
        }
    }
    Ok(c.finish(law, input.witness()))
}

fn pair_only(j: &Joint) -> Result<(Bits, Bits)> {
    if j.arity() != 2 {
        return Err(Error::SignatureMismatch(format!("expected a pair joint, got arity {}", j.arity())));
    }
    Ok((marginal_entropy(j, &[0])?, marginal_entropy(j, &[1])?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{GroupSpec, RingSpec};
    use crate::DEFAULT_TOL;

    fn els(vs: &[i64]) -> Vec<Element> {
        vs.iter().map(|&v| Element::scalar(v)).collect()
    }

    fn u(c: Carrier, vs: &[i64]) -> Dist {
        Dist::uniform_on(c, &els(vs)).unwrap()
    }

    fn z() -> Carrier {
        Carrier::Group(GroupSpec::Integers)
    }

    #[test]
    fn law_ids_round_trip() {
        for &id in LawId::ALL {
            assert_eq!(id.name().parse::<LawId>().unwrap(), id);
            let json = serde_json::to_string(&id).unwrap();
            assert_eq!(serde_json::from_str::<LawId>(&json).unwrap(), id);
        }
        assert_eq!(LawId::ALL.len(), 24);
        assert!("NOPE".parse::<LawId>().is_err());
    }

    #[test]
    fn submod_on_determination_chain() {
        // (X, f(X), X, X) with f(x) = 2x.
        let base = u(z(), &[0, 1, 2, 5]).into_joint();
        let x = vec![Word::Coord(0)];
        let y = vec![Word::sum_of(0, 0)];
        let input = LawInput::Submod { base: base.clone(), x: x.clone(), y, z: x.clone(), w: x };
        let r = evaluate_law(LawId::Submod, &input, DEFAULT_TOL).unwrap();
        let h = entropy(&base);
        assert!(r.pass);
        assert!((r.slack.0 - (2.0 * h.0 - h.0 - h.0)).abs() < 1e-12);

        let bad = LawInput::Submod {
            base: independent_join(&[u(z(), &[0, 1]), u(z(), &[0, 1])]).unwrap(),
            x: vec![Word::Coord(0)],
            y: vec![Word::Coord(1)],
            z: vec![Word::Coord(0)],
            w: vec![Word::Coord(0)],
        };
        assert!(matches!(evaluate_law(LawId::Submod, &bad, DEFAULT_TOL), Err(Error::SignatureMismatch(_))));
    }

    #[test]
    fn lemma_a2_on_z4_is_tight() {
        let z4 = Carrier::Group(GroupSpec::IntegersMod(4));
        let d = u(z4, &[0, 1, 2, 3]);
        let j = independent_join(&[&d, &d]).unwrap();
        let r = evaluate_law(LawId::LemA2, &LawInput::Joint(j), DEFAULT_TOL).unwrap();
        assert!((r.rhs.0 - 2.0).abs() < 1e-12);
        assert!((r.lhs.0 - 2.0).abs() < 1e-12);
        assert!(r.pass && r.slack.0.abs() < 1e-9);
    }

    #[test]
    fn katz_tao_point_masses() {
        let f7 = Carrier::Ring(RingSpec::Fp(7));
        let one = u(f7, &[1]);
        let input = LawInput::Quad(Box::new([one.clone(), one.clone(), one.clone(), one]));
        let r = evaluate_law(LawId::Kt, &input, DEFAULT_TOL).unwrap();
        assert_eq!(r.lhs.0, 0.0);
        assert_eq!(r.rhs.0, 0.0);
        assert!(r.pass);
    }

    #[test]
    fn identities_flag_deviation_both_ways() {
        let d = u(z(), &[0, 1, 2]);
        let r = evaluate_law(LawId::DoublingEquiv, &LawInput::Dist(d), DEFAULT_TOL).unwrap();
        assert!(r.pass && r.slack.0.abs() < 1e-12);
        let mut c = Checks::new(1e-9);
        c.eq("x", Bits(1.0), Bits(0.5));
        assert!(!c.finish(LawId::Chain, Value::Null).pass);
    }

    #[test]
    fn small_fwd_reports_the_minus_variant() {
        let b = u(z(), &[0, 1]);
        let j = independent_join(&[&b, &b]).unwrap();
        let r = evaluate_law(LawId::SmallFwd, &LawInput::Joint(j), DEFAULT_TOL).unwrap();
        assert!(r.pass);
        // H(X,Y) = 2 > H(X+Y) = 1.5, so the "- log C" form fails here.
        assert!(r.extras["minus_log_c_slack"] < -0.4);
    }

    #[test]
    fn cs_probe_fails_on_hegarty() {
        let a = [-7, -5, -4, -3, 0, 4, 5, 7];
        let neg: Vec<i64> = a.iter().map(|v| -v).collect();
        let input = LawInput::Pair(u(z(), &a), u(z(), &neg));
        let r = evaluate_law(LawId::CsProbe, &input, DEFAULT_TOL).unwrap();
        assert!(!r.pass);
        assert!(r.slack.0 < -0.005);
    }

    #[test]
    fn signature_mismatch() {
        let d = u(z(), &[0, 1]);
        assert!(matches!(
            evaluate_law(LawId::Bsg, &LawInput::Dist(d.clone()), DEFAULT_TOL),
            Err(Error::SignatureMismatch(_))
        ));
        assert!(matches!(
            evaluate_law(LawId::SidonSet, &LawInput::Dist(u(z(), &[0, 1, 2])), DEFAULT_TOL),
            Err(Error::SignatureMismatch(_))
        ));
        assert!(evaluate_law(LawId::MaxProb, &LawInput::Dist(d), DEFAULT_TOL).unwrap().pass);
    }
}
