//! Seeded random verification of the law registry.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::gen::{battery, random_instance, GenCaps};
use super::{evaluate_law, LawId, Relation, SlackReport};
use crate::entropy::DEFAULT_TOL;
use crate::error::{Error, Result};

/// Failing witnesses kept per law.
const MAX_WITNESSES: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random trials per law.
    pub trials: usize,
    /// Laws to run; empty means all.
    pub laws: Vec<LawId>,
    pub caps: GenCaps,
    pub tol: f64,
    /// Also run the fixed reference instances.
    pub battery: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 0, trials: 200, laws: Vec::new(), caps: GenCaps::default(), tol: DEFAULT_TOL, battery: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LawSummary {
    pub id: LawId,
    pub theorem: bool,
    /// Random trials evaluated.
    pub trials: usize,
    /// Reference instances evaluated.
    pub battery: usize,
    pub failures: usize,
    /// Smallest slack seen; for identities, minus the largest deviation.
    pub min_slack: Option<f64>,
    pub witnesses: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub trials: usize,
    pub laws: Vec<LawSummary>,
}

impl SuiteReport {
    /// True when no theorem failed. Probes of false statements are expected
    /// to fail and do not count.
    pub fn passed(&self) -> bool {
        self.laws.iter().all(|l| !l.theorem || l.failures == 0)
    }

    pub fn law(&self, id: LawId) -> Option<&LawSummary> {
        self.laws.iter().find(|l| l.id == id)
    }
}

enum Outcome {
    Evaluated(SlackReport),
    Errored(Value),
}

fn signed_slack(r: &SlackReport) -> f64 {
    r.components
        .iter()
        .map(|c| match c.relation {
            Relation::Le => c.slack.0,
            Relation::Eq => -c.slack.0.abs(),
        })
        .fold(f64::INFINITY, f64::min)
}

fn summarize(id: LawId, trials: usize, battery: usize, outcomes: Vec<Outcome>) -> LawSummary {
    let mut s = LawSummary {
        id,
        theorem: id.is_theorem(),
        trials,
        battery,
        failures: 0,
        min_slack: None,
        witnesses: Vec::new(),
    };
    for o in outcomes {
        let failed_witness = match o {
            Outcome::Evaluated(r) => {
                let slack = signed_slack(&r);
                s.min_slack = Some(s.min_slack.map_or(slack, |m| m.min(slack)));
                (!r.pass).then(|| json!({ "slack": slack, "report": r }))
            }
            Outcome::Errored(w) => Some(w),
        };
        if let Some(w) = failed_witness {
            s.failures += 1;
            if s.witnesses.len() < MAX_WITNESSES {
                s.witnesses.push(w);
            }
        }
    }
    s
}

fn evaluate(id: LawId, label: Value, input: Result<super::LawInput>, tol: f64) -> Outcome {
    let input = match input {
        Ok(i) => i,
        Err(e) => return Outcome::Errored(json!({ "instance": label, "error": e.to_string() })),
    };
    match evaluate_law(id, &input, tol) {
        Ok(r) => Outcome::Evaluated(r),
        Err(e) => Outcome::Errored(json!({ "instance": label, "error": e.to_string(), "input": input.witness() })),
    }
}

fn run(config: &SuiteConfig, random: bool) -> Result<SuiteReport> {
    let laws: Vec<LawId> = if config.laws.is_empty() { LawId::ALL.to_vec() } else { config.laws.clone() };
    let trials = if random { config.trials } else { 0 };
    let summaries = laws
        .par_iter()
        .map(|&id| {
            let law_index = LawId::ALL.iter().position(|&l| l == id).expect("registered") as u64;
            let mut outcomes: Vec<Outcome> = (0..trials)
                .into_par_iter()
                .map(|t| {
                    // One stream per (law, trial): results do not depend on
                    // scheduling.
                    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                    rng.set_stream((law_index << 32) | t as u64);
                    let input = random_instance(id, &mut rng, &config.caps);
                    evaluate(id, json!({ "trial": t }), input, config.tol)
                })
                .collect();
            let fixed = if config.battery { battery(id) } else { Vec::new() };
            let n_fixed = fixed.len();
            outcomes.extend(
                fixed.into_iter().map(|(name, input)| evaluate(id, json!({ "battery": name }), Ok(input), config.tol)),
            );
            summarize(id, trials, n_fixed, outcomes)
        })
        .collect();
    Ok(SuiteReport { seed: config.seed, trials, laws: summaries })
}

/// Runs `config.trials` random instances of each law (plus the reference
/// battery when enabled).
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    if config.trials == 0 {
        return Err(Error::InvalidConfig("trials must be positive".into()));
    }
    if config.caps.max_support == 0 || config.caps.max_den == 0 {
        return Err(Error::InvalidConfig("generation caps must be positive".into()));
    }
    run(config, true)
}

/// Runs only the fixed reference instances.
pub fn run_battery(laws: &[LawId], tol: f64) -> Result<SuiteReport> {
    let config = SuiteConfig { laws: laws.to_vec(), tol, battery: true, ..Default::default() };
    run(&config, false)
}
