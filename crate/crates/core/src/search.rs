//! Enumeration of lens space surgeries over bounded family ranges, grouping
//! by (slope, lens class) to find coincidences, and scripted instance checks
//! of the known coincidence families.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::arith::{coprime, sign_pow};
use crate::knots::{
    distinct, lens_surgery, natural_slope, CableSign, Distinctness, Knot, KnotFamily, Slope,
};
use crate::lens::{homeomorphic, LensClass, LensSpace};
use crate::sequences::{ab, fib, PairFamily};

/// Largest torus slope denominator accepted by [`SearchConfig`].
pub const MAX_DENOMINATOR: u64 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("index {n} out of range for {family} (minimum {min})")]
    InvalidIndex {
        family: &'static str,
        n: u64,
        min: u64,
    },
    #[error("unknown verification family {0:?}")]
    UnknownFamily(String),
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("cannot start worker pool: {0}")]
    WorkerPool(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub families: BTreeSet<KnotFamily>,
    /// Bound on `max(p,q)` for `torus(p,q)`.
    pub torus_max: u64,
    /// Bound on `max(a,b)` for `cable(a,b,e)`.
    pub cable_max: u64,
    /// Bound on `max(a,b)` for `kplus(a,b)`.
    pub kplus_max: u64,
    /// Bound on `n` for both tangle families.
    pub tangle_max: u64,
    pub order_max: u64,
    pub slope_denominators: BTreeSet<u64>,
    pub workers: usize,
}

impl SearchConfig {
    /// All families, with parameter bounds large enough that every knot
    /// whose surgery has order at most `order_max` is enumerated, and every
    /// allowed torus slope denominator.
    pub fn covering(order_max: u64) -> Self {
        let largest =
            |f: &dyn Fn(u64) -> u64| (1..).take_while(|&x| f(x) <= order_max).last().unwrap_or(1);
        SearchConfig {
            families: KnotFamily::ALL.into_iter().collect(),
            // npq - 1 <= order_max with p >= 2
            torus_max: ((order_max + 1) / 2).max(1),
            // 4ab - 1 <= order_max with a >= 2
            cable_max: ((order_max + 1) / 8).max(1),
            // a^2 + ab + b^2 with a >= 1
            kplus_max: largest(&|b| b * b + b + 1),
            tangle_max: largest(&|n| 18 * n * n + 33 * n + 15),
            order_max,
            slope_denominators: (1..=MAX_DENOMINATOR).collect(),
            workers: 1,
        }
    }

    pub fn with_families(mut self, families: impl IntoIterator<Item = KnotFamily>) -> Self {
        self.families = families.into_iter().collect();
        self
    }

    pub fn with_denominators(mut self, denominators: impl IntoIterator<Item = u64>) -> Self {
        self.slope_denominators = denominators.into_iter().collect();
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        let bounds = [
            ("torus_max", self.torus_max),
            ("cable_max", self.cable_max),
            ("kplus_max", self.kplus_max),
            ("tangle_max", self.tangle_max),
            ("order_max", self.order_max),
        ];
        if let Some((name, _)) = bounds.iter().find(|(_, v)| *v < 1) {
            return Err(SearchError::InvalidConfig(format!(
                "{name} must be at least 1"
            )));
        }
        if self.workers < 1 {
            return Err(SearchError::InvalidConfig(
                "workers must be at least 1".into(),
            ));
        }
        if self
            .slope_denominators
            .iter()
            .any(|&n| !(1..=MAX_DENOMINATOR).contains(&n))
        {
            return Err(SearchError::InvalidConfig(format!(
                "slope denominators must lie in 1..={MAX_DENOMINATOR}"
            )));
        }
        Ok(())
    }

    fn pool(&self) -> Result<rayon::ThreadPool, SearchError> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| SearchError::WorkerPool(e.to_string()))
    }
}

/// One lens space surgery found by the enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Surgery {
    pub knot: Knot,
    pub slope: Slope,
    pub lens: LensSpace,
}

impl fmt::Display for Surgery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.knot, self.slope, self.lens)
    }
}

fn knots_in_range(config: &SearchConfig) -> Vec<Knot> {
    let coprime_pairs = |lo: u64, max: u64| {
        (lo..=max).flat_map(move |a| {
            (a + 1..=max)
                .filter(move |&b| coprime(&a.into(), &b.into()))
                .map(move |b| (a, b))
        })
    };
    let mut knots = Vec::new();
    for family in &config.families {
        match family {
            KnotFamily::Torus => {
                for (p, q) in coprime_pairs(2, config.torus_max) {
                    if p * q > config.order_max + 1 {
                        continue;
                    }
                    knots.push(Knot::torus(p, q).expect("coprime pair with p >= 2"));
                }
            }
            KnotFamily::Cable => {
                for (a, b) in coprime_pairs(2, config.cable_max) {
                    for sign in [CableSign::Minus, CableSign::Plus] {
                        knots.push(Knot::cable(a, b, sign).expect("coprime pair with a >= 2"));
                    }
                }
            }
            KnotFamily::Kplus => {
                for (a, b) in coprime_pairs(1, config.kplus_max) {
                    knots.push(Knot::kplus(a, b).expect("coprime pair"));
                }
            }
            KnotFamily::TangleHH => {
                knots.extend((1..=config.tangle_max).map(|n| Knot::tangle_hh(n).expect("n >= 1")));
            }
            KnotFamily::TangleTH => {
                knots.extend((1..=config.tangle_max).map(|n| Knot::tangle_th(n).expect("n >= 1")));
            }
        }
    }
    knots
}

fn slopes_for(knot: &Knot, config: &SearchConfig) -> Vec<Slope> {
    match knot {
        Knot::Torus { p, q } => {
            let pq = p * q;
            let mut slopes = Vec::new();
            for &n in &config.slope_denominators {
                for m in [n * &pq - 1, n * &pq + 1] {
                    if coprime(&m, &n.into()) {
                        slopes.push(Slope::new(m, n).expect("n >= 1"));
                    }
                }
            }
            slopes.sort();
            slopes
        }
        _ => natural_slope(knot).into_iter().collect(),
    }
}

fn surgeries_of(knot: &Knot, config: &SearchConfig) -> Vec<Surgery> {
    let order_max = BigInt::from(config.order_max);
    slopes_for(knot, config)
        .into_iter()
        .filter_map(|slope| {
            let lens = lens_surgery(knot, &slope).lens()?.clone();
            (lens.p() <= &order_max).then(|| Surgery {
                knot: knot.clone(),
                slope,
                lens,
            })
        })
        .collect()
}

/// Every lens space surgery in range, ordered by family, parameters, slope.
pub fn enumerate_surgeries(config: &SearchConfig) -> Result<Vec<Surgery>, SearchError> {
    config.validate()?;
    let knots = knots_in_range(config);
    let per_knot: Vec<Vec<Surgery>> = config
        .pool()?
        .install(|| knots.par_iter().map(|k| surgeries_of(k, config)).collect());
    Ok(per_knot.into_iter().flatten().collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordMember {
    pub knot: Knot,
    pub lens: LensSpace,
}

/// Knots with the same slope and homeomorphic surgeries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoincidenceRecord {
    pub slope: Slope,
    pub lens_class: LensClass,
    pub members: Vec<RecordMember>,
    /// Member index pairs whose inequivalence no invariant settles.
    pub unknown_pairs: Vec<(usize, usize)>,
}

impl CoincidenceRecord {
    pub fn multiplicity(&self) -> usize {
        self.members.len()
    }

    /// Every pair of members is certified inequivalent.
    pub fn certified(&self) -> bool {
        self.unknown_pairs.is_empty()
    }

    pub fn to_json(&self) -> Value {
        let members: Vec<Value> = self
            .members
            .iter()
            .map(|m| {
                json!({
                    "family": m.knot.family().tag(),
                    "params": m.knot.params().iter().map(json_int).collect::<Vec<_>>(),
                    "raw_q": json_int(m.lens.q()),
                    "knot": m.knot.to_string(),
                })
            })
            .collect();
        json!({
            "slope": self.slope.to_string(),
            "lens": {"p": json_int(&self.lens_class.p), "q_canonical": json_int(&self.lens_class.q_min)},
            "members": members,
            "certified": self.certified(),
            "unknown_pairs": self.unknown_pairs.iter().map(|&(i, j)| json!([i, j])).collect::<Vec<_>>(),
        })
    }

    pub fn to_json_line(&self) -> String {
        self.to_json().to_string()
    }
}

impl fmt::Display for CoincidenceRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let members: Vec<String> = self
            .members
            .iter()
            .map(|m| format!("{} -> {}", m.knot, m.lens))
            .collect();
        let status = if self.certified() {
            "certified"
        } else {
            "distinct-unknown"
        };
        write!(
            f,
            "slope {} class L{}: {} [{status}]",
            self.slope.short(),
            self.lens_class,
            members.join(", ")
        )
    }
}

/// Integers as JSON numbers when they fit, decimal strings otherwise.
pub fn json_int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(x.to_string()),
    }
}

fn build_record(
    slope: Slope,
    lens_class: LensClass,
    candidates: Vec<Surgery>,
) -> Option<CoincidenceRecord> {
    let mut members: Vec<RecordMember> = Vec::new();
    for s in candidates {
        if members
            .iter()
            .any(|m| distinct(&m.knot, &s.knot) == Distinctness::Equal)
        {
            continue;
        }
        members.push(RecordMember {
            knot: s.knot,
            lens: s.lens,
        });
    }
    if members.len() < 2 {
        return None;
    }
    let mut unknown_pairs = Vec::new();
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            if distinct(&members[i].knot, &members[j].knot) == Distinctness::Unknown {
                unknown_pairs.push((i, j));
            }
        }
    }
    Some(CoincidenceRecord {
        slope,
        lens_class,
        members,
        unknown_pairs,
    })
}

/// Groups the enumeration by (slope, canonical lens class) and keeps groups
/// with at least two inequivalent knots, sorted by order, slope, class.
pub fn find_coincidences(config: &SearchConfig) -> Result<Vec<CoincidenceRecord>, SearchError> {
    let surgeries = enumerate_surgeries(config)?;
    let mut buckets: BTreeMap<(BigInt, Slope, BigInt), Vec<Surgery>> = BTreeMap::new();
    for s in surgeries {
        let class = s.lens.canonical_form();
        buckets
            .entry((class.p, s.slope.clone(), class.q_min))
            .or_default()
            .push(s);
    }
    let groups: Vec<_> = buckets.into_iter().filter(|(_, v)| v.len() >= 2).collect();
    let records = config.pool()?.install(|| {
        groups
            .into_par_iter()
            .filter_map(|((p, slope, q_min), candidates)| {
                build_record(slope, LensClass { p, q_min }, candidates)
            })
            .collect()
    });
    Ok(records)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CoincidenceSummary {
    pub records: usize,
    pub certified: usize,
    pub distinct_unknown: usize,
    pub max_multiplicity: usize,
}

impl fmt::Display for CoincidenceSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "records={} certified={} distinct-unknown={} max-multiplicity={}",
            self.records, self.certified, self.distinct_unknown, self.max_multiplicity
        )
    }
}

pub fn summarize(records: &[CoincidenceRecord]) -> CoincidenceSummary {
    let certified = records.iter().filter(|r| r.certified()).count();
    CoincidenceSummary {
        records: records.len(),
        certified,
        distinct_unknown: records.len() - certified,
        max_multiplicity: records.iter().map(|r| r.multiplicity()).max().unwrap_or(0),
    }
}

/// The coincidence families with closed-form parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyTag {
    /// `torus(a_{n+1}, b_n)` and `torus(a_n, b_{n+1})` from the Fibonacci
    /// pairs at `a_{n+1} b_n + (-1)^{n+1}`.
    FibonacciTorusPair,
    /// `torus(a_n, b_{n+1})` and `torus(b_n, a_{n+1})` from the recurrence
    /// pairs at `(2 a_n b_{n+1} + (-1)^{n+1})/2`.
    HalfIntegralTorusPair,
    /// `tangleHH(n)` and `kplus(3n+1, 3n+4)` at `27n^2+45n+21`.
    TangleKplusPair,
    /// `torus(2n+1, 4n+4)` and `cable(n+1, 2n+1, +1)` at `8n^2+12n+5`.
    TorusCablePair,
    /// `cable(F_n, F_{n+2}, (-1)^n)` and `kplus(F_{n+2}, F_n)` at `4F_nF_{n+2}+(-1)^n`.
    CableKplusPair,
    /// `torus(3n+2, 6n+7)` and `tangleTH(n)` at `18n^2+33n+15`.
    TorusTanglePair,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 6] = [
        FamilyTag::FibonacciTorusPair,
        FamilyTag::HalfIntegralTorusPair,
        FamilyTag::TangleKplusPair,
        FamilyTag::TorusCablePair,
        FamilyTag::CableKplusPair,
        FamilyTag::TorusTanglePair,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            FamilyTag::FibonacciTorusPair => "prop2_2",
            FamilyTag::HalfIntegralTorusPair => "thm1_2_1",
            FamilyTag::TangleKplusPair => "prop_HH",
            FamilyTag::TorusCablePair => "prop_caseST",
            FamilyTag::CableKplusPair => "prop_caseSH",
            FamilyTag::TorusTanglePair => "prop_caseTH",
        }
    }

    pub fn min_index(self) -> u64 {
        match self {
            FamilyTag::CableKplusPair => 3,
            _ => 1,
        }
    }

    /// The two knots and their shared slope at index `n`.
    pub fn instance(self, n: u64) -> Result<(Knot, Knot, Slope), SearchError> {
        if n < self.min_index() {
            return Err(SearchError::InvalidIndex {
                family: self.tag(),
                n,
                min: self.min_index(),
            });
        }
        let bad = |e: crate::knots::KnotError| SearchError::InvalidConfig(e.to_string());
        let seq = |family, n| ab(family, n).expect("index checked");
        let k = BigInt::from(n);
        let out = match self {
            FamilyTag::FibonacciTorusPair => {
                let (a_n, b_n) = seq(PairFamily::Fibonacci, n);
                let (a_n1, b_n1) = seq(PairFamily::Fibonacci, n + 1);
                let m = &a_n1 * &b_n + sign_pow(n + 1);
                (
                    Knot::torus(a_n1, b_n),
                    Knot::torus(a_n, b_n1),
                    Slope::integral(m),
                )
            }
            FamilyTag::HalfIntegralTorusPair => {
                let (a_n, b_n) = seq(PairFamily::Recurrence, n);
                let (a_n1, b_n1) = seq(PairFamily::Recurrence, n + 1);
                let m = 2 * &a_n * &b_n1 + sign_pow(n + 1);
                (
                    Knot::torus(a_n, b_n1),
                    Knot::torus(b_n, a_n1),
                    Slope::new(m, 2).map_err(bad)?,
                )
            }
            FamilyTag::TangleKplusPair => {
                let m: BigInt = 27 * &k * &k + 45 * &k + 21;
                (
                    Knot::tangle_hh(k.clone()),
                    Knot::kplus(3 * &k + 1, 3 * &k + 4),
                    Slope::integral(m),
                )
            }
            FamilyTag::TorusCablePair => {
                let m: BigInt = 8 * &k * &k + 12 * &k + 5;
                (
                    Knot::torus(2 * &k + 1, 4 * &k + 4),
                    Knot::cable(&k + 1, 2 * &k + 1, CableSign::Plus),
                    Slope::integral(m),
                )
            }
            FamilyTag::CableKplusPair => {
                let (f0, f2) = (fib(n), fib(n + 2));
                let sign = if n % 2 == 0 {
                    CableSign::Plus
                } else {
                    CableSign::Minus
                };
                let m = 4 * &f0 * &f2 + sign_pow(n);
                (
                    Knot::cable(f0.clone(), f2.clone(), sign),
                    Knot::kplus(f2, f0),
                    Slope::integral(m),
                )
            }
            FamilyTag::TorusTanglePair => {
                let m: BigInt = 18 * &k * &k + 33 * &k + 15;
                (
                    Knot::torus(3 * &k + 2, 6 * &k + 7),
                    Knot::tangle_th(k),
                    Slope::integral(m),
                )
            }
        };
        let (k1, k2, slope) = out;
        Ok((k1.map_err(bad)?, k2.map_err(bad)?, slope))
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for FamilyTag {
    type Err = SearchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FamilyTag::ALL
            .into_iter()
            .find(|t| t.tag() == s)
            .ok_or_else(|| SearchError::UnknownFamily(s.to_owned()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyCheck {
    pub family: FamilyTag,
    pub n: u64,
    pub passed: bool,
    pub witness: String,
    pub failure: Option<String>,
}

impl fmt::Display for FamilyCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {} n={} witness={}",
            self.family, self.n, self.witness
        )?;
        if let Some(why) = &self.failure {
            write!(f, " reason={why}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyReport {
    pub family: FamilyTag,
    pub checks: Vec<FamilyCheck>,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn summary(&self) -> String {
        let passed = self.checks.iter().filter(|c| c.passed).count();
        format!(
            "SUMMARY {} checked={} passed={} failed={}",
            self.family,
            self.checks.len(),
            passed,
            self.checks.len() - passed
        )
    }

    pub fn lines(&self) -> Vec<String> {
        let mut lines: Vec<String> = self.checks.iter().map(ToString::to_string).collect();
        lines.push(self.summary());
        lines
    }
}

fn check_instance(family: FamilyTag, n: u64) -> Result<FamilyCheck, SearchError> {
    let (k1, k2, slope) = family.instance(n)?;
    let r1 = lens_surgery(&k1, &slope);
    let r2 = lens_surgery(&k2, &slope);
    let mut witness = format!("{k1}&{k2}@{slope}:{r1}~{r2}");
    witness.retain(|c| c != ' ');
    let failure = match (r1.lens(), r2.lens()) {
        (Some(l1), Some(l2)) => {
            if !homeomorphic(l1, l2) {
                Some("lens spaces not homeomorphic".to_owned())
            } else {
                match distinct(&k1, &k2) {
                    Distinctness::Distinct => None,
                    other => Some(format!("distinctness {}", other.tag())),
                }
            }
        }
        _ => Some("surgery is not a lens space".to_owned()),
    };
    Ok(FamilyCheck {
        family,
        n,
        passed: failure.is_none(),
        witness,
        failure,
    })
}

/// Checks every instance `n` in `n_range` of a coincidence family.
pub fn verify_family(
    family: FamilyTag,
    n_range: std::ops::RangeInclusive<u64>,
) -> Result<FamilyReport, SearchError> {
    if n_range.is_empty() {
        return Err(SearchError::InvalidRange(format!("{n_range:?} is empty")));
    }
    let checks = n_range
        .map(|n| check_instance(family, n))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FamilyReport { family, checks })
}

/// A torus-knot pair with equal `pq` whose non-integral surgeries are
/// homeomorphic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonintegralCase {
    pub first: (u64, u64),
    pub second: (u64, u64),
    pub n: u64,
    pub m: u64,
}

impl fmt::Display for NonintegralCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ((p, q), (r, s)) = (self.first, self.second);
        write!(
            f,
            "torus({p},{q}) & torus({r},{s}) at {}/{}",
            self.m, self.n
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NonintegralReport {
    pub tuples_checked: u64,
    pub violations: Vec<NonintegralCase>,
}

/// For torus knots `torus(p,q)`, `torus(r,s)` with `pq = rs`, `r < p`, and
/// slopes `(npq +- 1)/n` with `n_min <= n <= n_max`, checks that
/// `L(m, nq^2)` and `L(m, ns^2)` are never homeomorphic.
pub fn verify_no_nonintegral_pairs(
    p_max: u64,
    n_min: u64,
    n_max: u64,
) -> Result<NonintegralReport, SearchError> {
    if n_min < 3 {
        return Err(SearchError::InvalidRange("n_min must be at least 3".into()));
    }
    let mut by_product: BTreeMap<u64, Vec<(u64, u64)>> = BTreeMap::new();
    for p in 3..=p_max {
        for q in 2..p {
            if coprime(&p.into(), &q.into()) {
                by_product.entry(p * q).or_default().push((p, q));
            }
        }
    }
    let mut report = NonintegralReport::default();
    for (pq, pairs) in &by_product {
        for (i, &(p, q)) in pairs.iter().enumerate() {
            for &(r, s) in &pairs[i + 1..] {
                let (first, second) = if r < p {
                    ((p, q), (r, s))
                } else {
                    ((r, s), (p, q))
                };
                for n in n_min..=n_max {
                    for m in [n * pq - 1, n * pq + 1] {
                        if !coprime(&m.into(), &n.into()) {
                            continue;
                        }
                        report.tuples_checked += 1;
                        let l1 = LensSpace::new(m, n * first.1 * first.1).expect("coprime");
                        let l2 = LensSpace::new(m, n * second.1 * second.1).expect("coprime");
                        if homeomorphic(&l1, &l2) {
                            report.violations.push(NonintegralCase {
                                first,
                                second,
                                n,
                                m,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}
