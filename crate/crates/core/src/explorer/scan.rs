//! Scans over families of distributions. Nothing here asserts a
//! conjecture; every function only reports what it measured.

use std::collections::HashMap;
use std::io::Write;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{format_prob, independent_join, is_prime, Carrier, Dist, Element, RingSpec, Word};
use crate::entropy::{entropy, entropy_of_word, Bits, DEFAULT_TOL};
use crate::error::{Error, Result};

/// Default enumeration budget; callers may override it.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanFlags {
    /// The support is a multiplicative subgroup.
    pub subgroup: bool,
    /// `delta log2 p <= H(X) <= (1 - delta) log2 p`.
    pub in_window: bool,
    /// `H(X) = 0`, so the ratio is undefined.
    pub undefined: bool,
}

impl ScanFlags {
    fn label(&self) -> String {
        let mut v = Vec::new();
        if self.subgroup {
            v.push("subgroup");
        }
        if self.in_window {
            v.push("window");
        }
        if self.undefined {
            v.push("undefined");
        }
        v.join("|")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub descriptor: String,
    pub h: Bits,
    pub a: Bits,
    pub m: Bits,
    /// `max(A, M) / H`, when `H > 0`.
    pub ratio: Option<f64>,
    /// `3 - ratio`.
    pub epsilon: Option<f64>,
    pub flags: ScanFlags,
}

impl ScanRecord {
    fn new(descriptor: String, h: Bits, a: Bits, m: Bits, flags: ScanFlags) -> ScanRecord {
        let undefined = h.0 <= DEFAULT_TOL;
        let ratio = (!undefined).then(|| a.max(m).0 / h.0);
        ScanRecord {
            descriptor,
            h,
            a,
            m,
            ratio,
            epsilon: ratio.map(|r| 3.0 - r),
            flags: ScanFlags { undefined, ..flags },
        }
    }
}

/// Writes records as CSV with columns `descriptor,H,A,M,ratio,flags`.
pub fn write_csv<W: Write>(records: &[ScanRecord], out: W) -> Result<()> {
    let io = |e: csv::Error| Error::InvalidConfig(format!("csv output failed: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["descriptor", "H", "A", "M", "ratio", "flags"]).map_err(io)?;
    for r in records {
        w.write_record([
            r.descriptor.clone(),
            format!("{:.12}", r.h.0),
            format!("{:.12}", r.a.0),
            format!("{:.12}", r.m.0),
            r.ratio.map(|x| format!("{x:.12}")).unwrap_or_default(),
            r.flags.label(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::InvalidConfig(format!("csv output failed: {e}")))
}

/// Entropy of a multiset of outcomes given by their counts.
fn entropy_of_counts<'a>(counts: impl IntoIterator<Item = &'a u64>) -> Bits {
    let counts: Vec<u64> = counts.into_iter().copied().collect();
    let n: u64 = counts.iter().sum();
    Bits(counts.iter().map(|&c| (c as f64 / n as f64) * (n as f64 / c as f64).log2()).sum())
}

/// `H`, `A`, `M` for `X` uniform on `set` in `F_p`, from representation counts.
fn uniform_stats_mod_p(p: u64, set: &[u64]) -> (Bits, Bits, Bits) {
    let k = set.len() as f64;
    let mut sums = vec![0u64; p as usize];
    let mut prods = vec![0u64; p as usize];
    for &a in set {
        for &b in set {
            sums[((a + b) % p) as usize] += 1;
            prods[((a * b) % p) as usize] += 1;
        }
    }
    let h = Bits(k.log2());
    let nz = |v: &Vec<u64>| v.iter().filter(|&&c| c > 0).copied().collect::<Vec<_>>();
    let a = 4.0 * h - entropy_of_counts(&nz(&sums));
    let m = 4.0 * h - entropy_of_counts(&nz(&prods));
    (h, a, m)
}

fn is_mult_subgroup(p: u64, set: &[u64]) -> bool {
    set.contains(&1) && set.iter().all(|&a| set.iter().all(|&b| set.contains(&((a * b) % p))))
}

/// `H`, `A(X) = 4H - H(X+X')` and `M(X) = 4H - H(XX')` by exact pushforwards.
fn self_stats(d: &Dist) -> Result<(Bits, Bits, Bits)> {
    let h = entropy(d);
    let j = independent_join(&[d, d])?;
    let a = 4.0 * h - entropy_of_word(&j, &Word::sum_of(0, 1))?;
    let m = 4.0 * h - entropy_of_word(&j, &Word::prod_of(0, 1))?;
    Ok((h, a, m))
}

fn describe_set(set: &[u64]) -> String {
    let items: Vec<String> = set.iter().map(u64::to_string).collect();
    format!("{{{}}}", items.join(","))
}

fn describe_dist(d: &Dist) -> String {
    let items: Vec<String> = d.elements().map(|(e, p)| format!("{e}:{}", format_prob(p))).collect();
    format!("{{{}}}", items.join(","))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum ScanMode {
    /// Uniform distributions on every subset of `F_p^*` up to the size cap.
    Exhaustive,
    /// Random rational distributions on random subsets.
    Random { seed: u64, trials: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumProductScan {
    pub p: u64,
    pub max_support: usize,
    pub delta: f64,
    pub mode: ScanMode,
    /// Sorted by epsilon, then descriptor; undefined records last.
    pub records: Vec<ScanRecord>,
    /// Smallest epsilon among records inside the entropy window.
    pub min_epsilon: Option<f64>,
    pub min_epsilon_descriptor: Option<String>,
}

fn binomial(n: u64, k: u64) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Measures `H`, `A`, `M` for distributions on `F_p^*`. Sums are taken in
/// `F_p`, products in `F_p^*`.
pub fn sumproduct_scan(p: u64, max_support: usize, mode: ScanMode, delta: f64, budget: u128) -> Result<SumProductScan> {
    if p < 3 || !is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    let units = (p - 1) as usize;
    if max_support == 0 || max_support > units {
        return Err(Error::SupportTooLarge { size: max_support, limit: units });
    }
    if !(0.0..=0.5).contains(&delta) {
        return Err(Error::InvalidConfig(format!("delta must lie in [0, 1/2], got {delta}")));
    }
    let log_p = (p as f64).log2();
    let window = |h: Bits| h.0 >= delta * log_p - DEFAULT_TOL && h.0 <= (1.0 - delta) * log_p + DEFAULT_TOL;

    let mut records: Vec<ScanRecord> = match mode {
        ScanMode::Exhaustive => {
            let needed: u128 = (1..=max_support as u64).map(|k| binomial(p - 1, k)).sum();
            if needed > budget {
                return Err(Error::BudgetExceeded { needed, budget });
            }
            let subsets: Vec<Vec<usize>> = (1..=max_support).flat_map(|k| combinations(units, k)).collect();
            subsets
                .into_par_iter()
                .map(|idx| {
                    let set: Vec<u64> = idx.iter().map(|&i| i as u64 + 1).collect();
                    let (h, a, m) = uniform_stats_mod_p(p, &set);
                    let flags = ScanFlags { subgroup: is_mult_subgroup(p, &set), in_window: window(h), undefined: false };
                    ScanRecord::new(describe_set(&set), h, a, m, flags)
                })
                .collect()
        }
        ScanMode::Random { seed, trials } => {
            if trials == 0 {
                return Err(Error::InvalidConfig("trials must be positive".into()));
            }
            let needed = trials as u128 * (max_support as u128).pow(2);
            if needed > budget {
                return Err(Error::BudgetExceeded { needed, budget });
            }
            let field = Carrier::Ring(RingSpec::Fp(p));
            (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(t as u64);
                    let k = rng.gen_range(1..=max_support);
                    let mut pool: Vec<u64> = (1..p).collect();
                    rand::seq::SliceRandom::shuffle(pool.as_mut_slice(), &mut rng);
                    let mut set: Vec<u64> = pool[..k].to_vec();
                    set.sort_unstable();
                    let atoms: Vec<(Element, u64)> =
                        set.iter().map(|&v| (Element::scalar(v as i64), rng.gen_range(1..=16))).collect();
                    let d = Dist::weighted(field.clone(), &atoms)?;
                    let (h, a, m) = self_stats(&d)?;
                    let flags = ScanFlags { subgroup: is_mult_subgroup(p, &set), in_window: window(h), undefined: false };
                    Ok(ScanRecord::new(describe_dist(&d), h, a, m, flags))
                })
                .collect::<Result<_>>()?
        }
    };
    records.sort_by(|x, y| {
        let key = |r: &ScanRecord| r.epsilon.unwrap_or(f64::INFINITY);
        key(x).total_cmp(&key(y)).then_with(|| x.descriptor.cmp(&y.descriptor))
    });
    let best = records.iter().filter(|r| r.flags.in_window && r.epsilon.is_some()).min_by(|x, y| {
        x.epsilon.unwrap().total_cmp(&y.epsilon.unwrap()).then_with(|| x.descriptor.cmp(&y.descriptor))
    });
    Ok(SumProductScan {
        p,
        max_support,
        delta,
        mode,
        min_epsilon: best.and_then(|r| r.epsilon),
        min_epsilon_descriptor: best.map(|r| r.descriptor.clone()),
        records,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GkReport {
    pub p: u64,
    pub k: usize,
    /// `H(X1 X1' + ... + Xj Xj')` for `j = 1..=k`.
    pub lhs_by_k: Vec<Bits>,
    pub lhs: Bits,
    /// `min(2 H(X), log2 p) - 1`.
    pub rhs: Bits,
    pub slack: Bits,
}

/// Entropy of a sum of `k` independent products of independent copies of `X`.
pub fn gk_scan(p: u64, k: usize, d: &Dist, budget: u128) -> Result<GkReport> {
    if p < 3 || !is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    let field = Carrier::Ring(RingSpec::Fp(p));
    if d.carrier() != &field {
        return Err(Error::SpecMismatch(field.to_string(), d.carrier().to_string()));
    }
    if k == 0 {
        return Err(Error::InvalidConfig("k must be at least 1".into()));
    }
    let needed = (d.support_size() as u128).checked_pow(2 * k as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let product = independent_join(&[d, d])?.pushforward(&Word::prod_of(0, 1))?;
    let mut total = product.clone();
    let mut lhs_by_k = vec![entropy(&total)];
    for _ in 1..k {
        total = independent_join(&[&total, &product])?.pushforward(&Word::sum_of(0, 1))?;
        lhs_by_k.push(entropy(&total));
    }
    let lhs = *lhs_by_k.last().expect("k >= 1");
    let rhs = (2.0 * entropy(d)).min(Bits::log2(p as f64)) - Bits(1.0);
    Ok(GkReport { p, k, lhs_by_k, lhs, rhs, slack: lhs - rhs })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsViolation {
    pub set: Vec<i64>,
    /// `A(X,Y) - A(X)/2 - A(Y)/2` for `X = U_A`, `Y = U_{-A}`.
    pub margin: Bits,
    pub energy_xy: Bits,
    pub energy_x: Bits,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsFindings {
    pub window: (i64, i64),
    pub size: usize,
    pub examined: u128,
    /// Sorted by decreasing margin, then by set.
    pub violations: Vec<CsViolation>,
}

impl CsFindings {
    pub fn contains(&self, set: &[i64]) -> bool {
        let mut s = set.to_vec();
        s.sort_unstable();
        self.violations.iter().any(|v| v.set == s)
    }
}

fn sum_entropy(a: &[i64], b: &[i64]) -> Bits {
    let mut counts: HashMap<i64, u64> = HashMap::new();
    for x in a {
        for y in b {
            *counts.entry(x + y).or_default() += 1;
        }
    }
    entropy_of_counts(counts.values())
}

/// Enumerates `size`-subsets `A` of the window and keeps those with
/// `A(U_A, U_{-A}) > A(U_A)/2 + A(U_{-A})/2`.
pub fn cs_search(window: (i64, i64), size: usize, budget: u128) -> Result<CsFindings> {
    let (lo, hi) = window;
    if lo > hi || lo < -16 || hi > 16 {
        return Err(Error::InvalidConfig(format!("window [{lo},{hi}] must lie inside [-16,16]")));
    }
    let width = (hi - lo + 1) as usize;
    if size == 0 || size > 10 || size > width {
        return Err(Error::InvalidConfig(format!("set size {size} must be in 1..=min(10, {width})")));
    }
    let examined = binomial(width as u64, size as u64);
    if examined > budget {
        return Err(Error::BudgetExceeded { needed: examined, budget });
    }
    let subsets = combinations(width, size);
    let mut violations: Vec<CsViolation> = subsets
        .into_par_iter()
        .filter_map(|idx| {
            let a: Vec<i64> = idx.iter().map(|&i| lo + i as i64).collect();
            let neg: Vec<i64> = a.iter().map(|v| -v).collect();
            let full = 4.0 * Bits::log2(size as f64);
            let energy_xy = full - sum_entropy(&a, &neg);
            // U_{-A} has the same self-energy as U_A.
            let energy_x = full - sum_entropy(&a, &a);
            let margin = energy_xy - energy_x;
            (margin.0 > DEFAULT_TOL).then_some(CsViolation { set: a, margin, energy_xy, energy_x })
        })
        .collect();
    violations.sort_by(|x, y| y.margin.0.total_cmp(&x.margin.0).then_with(|| x.set.cmp(&y.set)));
    Ok(CsFindings { window, size, examined, violations })
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] != i + n - k) else { return out };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealLineReport {
    pub note: String,
    pub records: Vec<ScanRecord>,
    /// Running maximum of the ratio over the family, in input order.
    pub running_max: Vec<Option<f64>>,
    pub max_ratio: Option<f64>,
}

/// Ratio `max(A(X), M(X)) / H(X)` over a family of integer distributions.
pub fn real_line_probe(family: &[Dist], budget: u128) -> Result<RealLineReport> {
    let ring = Carrier::Ring(RingSpec::IntegerRing);
    let needed: u128 = family.iter().map(|d| (d.support_size() as u128).pow(2)).sum();
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let records: Vec<ScanRecord> = family
        .par_iter()
        .map(|d| {
            if d.carrier() != &ring {
                return Err(Error::SpecMismatch(ring.to_string(), d.carrier().to_string()));
            }
            let (h, a, m) = self_stats(d)?;
            Ok(ScanRecord::new(describe_dist(d), h, a, m, ScanFlags::default()))
        })
        .collect::<Result<_>>()?;
    let mut best: Option<f64> = None;
    let running_max = records
        .iter()
        .map(|r| {
            if let Some(x) = r.ratio {
                best = Some(best.map_or(x, |b| b.max(x)));
            }
            best
        })
        .collect();
    Ok(RealLineReport {
        note: "conjectured bound: ratio <= 3 - eps + o(1); the known constructions force eps <= 1/3".into(),
        records,
        running_max,
        max_ratio: best,
    })
}

/// Named families of integer distributions for `real_line_probe`.
///
/// `intervals`: uniform on `{1..n}`; `gp`: uniform on `{1,2,..,2^(n-1)}`;
/// `random`: random weights on random subsets of `[1, 4n]`.
pub fn real_line_family(name: &str, max_size: usize, seed: u64) -> Result<Vec<Dist>> {
    let ring = Carrier::Ring(RingSpec::IntegerRing);
    let uniform = |vs: Vec<BigInt>| {
        let els: Vec<Element> = vs.into_iter().map(|v| Element::new(vec![v])).collect();
        Dist::uniform_on(ring.clone(), &els)
    };
    if max_size == 0 {
        return Err(Error::InvalidConfig("max size must be positive".into()));
    }
    match name {
        "intervals" => (1..=max_size).map(|n| uniform((1..=n as i64).map(BigInt::from).collect())).collect(),
        "gp" => (1..=max_size).map(|n| uniform((0..n).map(|i| BigInt::from(1u8) << i).collect())).collect(),
        "random" => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (1..=max_size)
                .map(|n| {
                    let mut pool: Vec<i64> = (1..=4 * n as i64).collect();
                    rand::seq::SliceRandom::shuffle(pool.as_mut_slice(), &mut rng);
                    let atoms: Vec<(Element, u64)> =
                        pool[..n].iter().map(|&v| (Element::scalar(v), rng.gen_range(1..=16))).collect();
                    Dist::weighted(ring.clone(), &atoms)
                })
                .collect()
        }
        other => Err(Error::InvalidConfig(format!("unknown family {other:?}; expected intervals, gp or random"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64, vs: &[i64]) -> Dist {
        let els: Vec<Element> = vs.iter().map(|&v| Element::scalar(v)).collect();
        Dist::uniform_on(Carrier::Ring(RingSpec::Fp(p)), &els).unwrap()
    }

    #[test]
    fn count_path_matches_exact_path() {
        for (p, set) in [(7u64, vec![1u64, 2, 4]), (11, vec![1, 3, 4, 9]), (13, vec![2, 5, 6, 7, 11])] {
            let (h, a, m) = uniform_stats_mod_p(p, &set);
            let vs: Vec<i64> = set.iter().map(|&v| v as i64).collect();
            let (h2, a2, m2) = self_stats(&f(p, &vs)).unwrap();
            assert!((h.0 - h2.0).abs() < 1e-12);
            assert!((a.0 - a2.0).abs() < 1e-12);
            assert!((m.0 - m2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn subgroup_of_f7() {
        let s = sumproduct_scan(7, 3, ScanMode::Exhaustive, 0.1, DEFAULT_BUDGET).unwrap();
        let r = s.records.iter().find(|r| r.descriptor == "{1,2,4}").unwrap();
        assert!(r.flags.subgroup);
        assert!((r.m.0 - 3.0 * 3f64.log2()).abs() < 1e-9);
        assert!(r.a.0 < 3.0 * r.h.0);
    }

    #[test]
    fn singletons_are_undefined() {
        let s = sumproduct_scan(5, 1, ScanMode::Exhaustive, 0.1, DEFAULT_BUDGET).unwrap();
        assert_eq!(s.records.len(), 4);
        assert!(s.records.iter().all(|r| r.flags.undefined && r.ratio.is_none()));
        assert_eq!(s.min_epsilon, None);
    }

    #[test]
    fn scan_errors() {
        assert_eq!(sumproduct_scan(9, 2, ScanMode::Exhaustive, 0.1, DEFAULT_BUDGET).unwrap_err(), Error::InvalidPrime(9));
        assert!(matches!(
            sumproduct_scan(7, 7, ScanMode::Exhaustive, 0.1, DEFAULT_BUDGET),
            Err(Error::SupportTooLarge { .. })
        ));
        assert!(matches!(sumproduct_scan(31, 30, ScanMode::Exhaustive, 0.1, 1000), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn gk_examples() {
        let zero = f(7, &[0]);
        let r = gk_scan(7, 1, &zero, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.lhs.0, 0.0);
        assert_eq!(r.rhs.0, -1.0);
        assert_eq!(r.slack.0, 1.0);

        let r = gk_scan(5, 1, &f(5, &[1, 2, 3, 4]), DEFAULT_BUDGET).unwrap();
        assert!((r.lhs.0 - 2.0).abs() < 1e-12);
        assert!((r.rhs.0 - (5f64.log2() - 1.0)).abs() < 1e-12);

        let r = gk_scan(7, 3, &f(7, &[0, 1]), DEFAULT_BUDGET).unwrap();
        assert!(r.lhs_by_k.windows(2).all(|w| w[1].0 >= w[0].0 - 1e-12));
        assert!(matches!(gk_scan(7, 20, &f(7, &[0, 1]), 1000), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn cs_examples() {
        let r = cs_search((-7, 7), 8, DEFAULT_BUDGET).unwrap();
        assert!(r.contains(&[-7, -5, -4, -3, 0, 4, 5, 7]));
        let heg = r.violations.iter().find(|v| v.set == vec![-7, -5, -4, -3, 0, 4, 5, 7]).unwrap();
        assert!((heg.margin.0 - 0.006056).abs() < 1e-5);
        assert!(cs_search((-7, 7), 1, DEFAULT_BUDGET).unwrap().violations.is_empty());
        let r = cs_search((0, 3), 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.examined, 6);
        assert!(r.violations.is_empty());
    }

    #[test]
    fn real_line_examples() {
        let fam = real_line_family("gp", 4, 0).unwrap();
        let r = real_line_probe(&fam, DEFAULT_BUDGET).unwrap();
        assert!(r.records[0].flags.undefined);
        let two = &r.records[1];
        assert!((two.a.0 - 2.5).abs() < 1e-12 && (two.m.0 - 2.5).abs() < 1e-12);
        assert!((two.ratio.unwrap() - 2.5).abs() < 1e-12);
        let four = &r.records[3];
        // Products on {1,2,4,8} behave like sums on {0,1,2,3}.
        assert!((four.m.0 - 5.344360937770434).abs() < 1e-9);
        assert!((four.a.0 - 4.75).abs() < 1e-12);
        assert!(four.m.0 > four.a.0);
        assert_eq!(r.running_max[0], None);
    }

    #[test]
    fn csv_is_deterministic() {
        let s = sumproduct_scan(11, 10, ScanMode::Exhaustive, 0.1, DEFAULT_BUDGET).unwrap();
        assert_eq!(s.records.len(), 1023);
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_csv(&s.records, &mut a).unwrap();
        write_csv(&sumproduct_scan(11, 10, ScanMode::Exhaustive, 0.1, DEFAULT_BUDGET).unwrap().records, &mut b).unwrap();
        assert_eq!(a, b);
        assert!(String::from_utf8(a).unwrap().starts_with("descriptor,H,A,M,ratio,flags\n"));
    }
}
