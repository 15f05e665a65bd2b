//! Exhaustive comparison of the closed-form maxima against BFS.
//!
//! For each order `n`, every connected divisor set is enumerated and its
//! diameter computed from the symbol set. When `2^|D_n|` exceeds the subset
//! cap, only sets with at most `k` divisors are visited: a connected set
//! contains a minimal connected subset, minimal connected sets admit a
//! separation witness and so have at most `k` elements, and adding divisors
//! only adds edges. The overall maximum is therefore still exact.

use std::fmt;
use std::io::{self, Write};

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::canonical::{binomial, DEFAULT_MAX_SUBSETS};
use crate::distance::{apsp_oracle, bfs_profile, eccentricity_from_symbols, DEFAULT_ORACLE_BOUND};
use crate::error::{IcgError, Result};
use crate::extremal::{predict_max_for_t, predict_overall_max, MaxDiameterPrediction};
use crate::graph::{DivisorSet, IcgInstance};
use crate::numtheory::{factorize, gcd, Factorization};

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

const DISCONNECTED: u8 = u8::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TSpec {
    Exactly(usize),
    All,
}

impl fmt::Display for TSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TSpec::Exactly(t) => write!(f, "{t}"),
            TSpec::All => f.write_str("all"),
        }
    }
}

impl Serialize for TSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            TSpec::Exactly(t) => s.serialize_u64(*t as u64),
            TSpec::All => s.serialize_str("all"),
        }
    }
}

impl<'de> Deserialize<'de> for TSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Size(usize),
            Tag(String),
        }
        match Repr::deserialize(d)? {
            Repr::Size(t) => Ok(TSpec::Exactly(t)),
            Repr::Tag(t) if t == "all" => Ok(TSpec::All),
            Repr::Tag(t) => Err(serde::de::Error::custom(format!("bad cardinality {t:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Match,
    Mismatch,
    NotApplicable,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Match => "MATCH",
            Status::Mismatch => "MISMATCH",
            Status::NotApplicable => "NOT_APPLICABLE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub n: u64,
    pub t: TSpec,
    pub predicted: MaxDiameterPrediction,
    pub observed_max: u32,
    /// Lexicographically smallest set attaining `observed_max`.
    pub witness_set: DivisorSet,
    pub status: Status,
}

/// A divisor set with its BFS diameter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetDiameter {
    pub divisor_set: DivisorSet,
    pub diameter: u32,
}

/// `D' = D \ {d}` is connected yet `diam(D) > diam(D')`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotoneViolation {
    pub superset: SetDiameter,
    pub subset: SetDiameter,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderReport {
    pub n: u64,
    /// Whether every subset of `D_n` was visited.
    pub exhaustive: bool,
    pub sets_checked: u64,
    pub records: Vec<VerificationRecord>,
    /// Connected sets with diameter above `2|D| + 1`.
    pub eq1_violations: Vec<SetDiameter>,
    /// Sets with `|D| > k` reaching `2|D| + 1`.
    pub tight_above_k: Vec<SetDiameter>,
    /// Only filled on exhaustive runs.
    pub monotone_violations: Vec<MonotoneViolation>,
    /// Max over separated sets and sets leaving a prime untouched equals
    /// the max over all connected sets.
    pub reduction_holds: bool,
}

impl OrderReport {
    pub fn mismatches(&self) -> impl Iterator<Item = &VerificationRecord> {
        self.records.iter().filter(|r| r.status == Status::Mismatch)
    }

    /// No mismatch and no anomaly of any kind.
    pub fn is_clean(&self) -> bool {
        self.mismatches().next().is_none()
            && self.eq1_violations.is_empty()
            && self.tight_above_k.is_empty()
            && self.monotone_violations.is_empty()
            && self.reduction_holds
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub max_subsets: u64,
    /// Worker threads; `None` uses the rayon default.
    pub jobs: Option<usize>,
    /// Stop after the first order with a mismatch or anomaly.
    pub fail_fast: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_subsets: DEFAULT_MAX_SUBSETS,
            jobs: None,
            fail_fast: false,
        }
    }
}

/// Symbol classes `G_n(d)` for each proper divisor, plus the divisors.
struct OrderData {
    f: Factorization,
    divisors: Vec<u64>,
    classes: Vec<Vec<u64>>,
}

impl OrderData {
    fn new(f: Factorization) -> Self {
        let n = f.n();
        let divisors = f.proper_divisors();
        let mut classes = vec![Vec::new(); divisors.len()];
        for x in 1..n {
            let g = gcd(x, n);
            if let Ok(i) = divisors.binary_search(&g) {
                classes[i].push(x);
            }
        }
        OrderData { f, divisors, classes }
    }

    fn set_of(&self, indices: impl Iterator<Item = usize>) -> Vec<u64> {
        indices.map(|i| self.divisors[i]).collect()
    }

    fn diameter_of(&self, indices: &[usize], symbols: &mut Vec<u64>) -> Option<u32> {
        symbols.clear();
        for &i in indices {
            symbols.extend_from_slice(&self.classes[i]);
        }
        eccentricity_from_symbols(self.f.n(), symbols)
    }

    fn touches_all(&self, set: &[u64]) -> bool {
        self.f.primes().all(|p| set.iter().any(|d| d % p == 0))
    }

    fn divisor_set(&self, set: Vec<u64>) -> DivisorSet {
        DivisorSet::from_sorted_unchecked(self.f.n(), set)
    }
}

/// Running maximum with the lexicographically smallest attaining set.
#[derive(Default)]
struct Best {
    value: u32,
    set: Option<Vec<u64>>,
}

impl Best {
    fn offer(&mut self, value: u32, set: impl FnOnce() -> Vec<u64>) {
        if self.set.is_none() || value > self.value {
            self.value = value;
            self.set = Some(set());
        } else if value == self.value {
            let candidate = set();
            if self.set.as_ref().is_some_and(|s| candidate < *s) {
                self.set = Some(candidate);
            }
        }
    }
}

fn mask_indices(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

struct Sweep {
    per_t: Vec<Best>,
    reduced: Best,
    eq1_violations: Vec<SetDiameter>,
    tight_above_k: Vec<SetDiameter>,
    monotone_violations: Vec<MonotoneViolation>,
    sets_checked: u64,
}

impl Sweep {
    fn new(m: usize) -> Self {
        Sweep {
            per_t: (0..=m).map(|_| Best::default()).collect(),
            reduced: Best::default(),
            eq1_violations: Vec::new(),
            tight_above_k: Vec::new(),
            monotone_violations: Vec::new(),
            sets_checked: 0,
        }
    }

    fn record(&mut self, data: &OrderData, set: Vec<u64>, diam: u32, separated: bool) {
        let t = set.len();
        self.sets_checked += 1;
        if diam > 2 * t as u32 + 1 {
            self.eq1_violations.push(SetDiameter {
                divisor_set: data.divisor_set(set.clone()),
                diameter: diam,
            });
        }
        if t > data.f.k() && diam == 2 * t as u32 + 1 {
            self.tight_above_k.push(SetDiameter {
                divisor_set: data.divisor_set(set.clone()),
                diameter: diam,
            });
        }
        if separated || !data.touches_all(&set) {
            self.reduced.offer(diam, || set.clone());
        }
        self.per_t[t].offer(diam, || set);
    }
}

fn sweep_all_subsets(data: &OrderData) -> Sweep {
    let m = data.divisors.len();
    let full = 1usize << m;
    let mut gcds = vec![0u64; full];
    let mut diams = vec![DISCONNECTED; full];
    let mut sweep = Sweep::new(m);
    let mut symbols = Vec::new();
    let mut indices = Vec::with_capacity(m);
    for mask in 1..full {
        let low = mask.trailing_zeros() as usize;
        gcds[mask] = gcd(gcds[mask & (mask - 1)], data.divisors[low]);
        if gcds[mask] != 1 {
            continue;
        }
        indices.clear();
        indices.extend(mask_indices(mask as u64));
        let diam = data
            .diameter_of(&indices, &mut symbols)
            .expect("gcd 1 implies connected");
        diams[mask] = diam as u8;
    }
    // Any connected D' inside D is reached from D by single removals that
    // stay connected, since supersets of connected sets are connected.
    for mask in 1..full {
        if diams[mask] == DISCONNECTED {
            continue;
        }
        let diam = diams[mask] as u32;
        let mut separated = true;
        for i in mask_indices(mask as u64) {
            let sub = mask & !(1 << i);
            if sub == 0 || diams[sub] == DISCONNECTED {
                continue;
            }
            separated = false;
            if diam > diams[sub] as u32 {
                sweep.monotone_violations.push(MonotoneViolation {
                    superset: SetDiameter {
                        divisor_set: data.divisor_set(data.set_of(mask_indices(mask as u64))),
                        diameter: diam,
                    },
                    subset: SetDiameter {
                        divisor_set: data.divisor_set(data.set_of(mask_indices(sub as u64))),
                        diameter: diams[sub] as u32,
                    },
                });
            }
        }
        sweep.record(data, data.set_of(mask_indices(mask as u64)), diam, separated);
    }
    sweep
}

fn sweep_small_subsets(data: &OrderData) -> Sweep {
    let m = data.divisors.len();
    let k = data.f.k();
    let mut sweep = Sweep::new(m);
    let mut symbols = Vec::new();
    for t in 1..=k.min(m) {
        for indices in (0..m).combinations(t) {
            let set = data.set_of(indices.iter().copied());
            if set.iter().fold(0, |g, &d| gcd(g, d)) != 1 {
                continue;
            }
            let separated = (0..t).all(|skip| {
                set.iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .fold(0, |g, (_, &d)| gcd(g, d))
                    != 1
            });
            let diam = data
                .diameter_of(&indices, &mut symbols)
                .expect("gcd 1 implies connected");
            sweep.record(data, set, diam, separated);
        }
    }
    sweep
}

fn subsets_up_to(m: usize, k: usize) -> u128 {
    (1..=k).map(|t| binomial(m, t)).sum()
}

fn status(predicted: &MaxDiameterPrediction, observed: u32) -> Status {
    if !predicted.applicable {
        Status::NotApplicable
    } else if predicted.value == observed {
        Status::Match
    } else {
        Status::Mismatch
    }
}

/// Records for `t = 1..=k` and one overall record, plus anomaly lists.
pub fn verify_order(n: u64, opts: &VerifyOptions) -> Result<OrderReport> {
    if n < 2 {
        return Err(IcgError::domain(format!("order must be at least 2, got {n}")));
    }
    let f = factorize(n)?;
    let data = OrderData::new(f);
    let m = data.divisors.len();
    let k = data.f.k();
    let exhaustive = m < 64 && (1u128 << m) <= opts.max_subsets as u128;
    let sweep = if exhaustive {
        sweep_all_subsets(&data)
    } else {
        let needed = subsets_up_to(m, k);
        if needed > opts.max_subsets as u128 {
            return Err(IcgError::Resource(format!(
                "n = {n} needs {needed} divisor sets of size <= {k}, above the cap of {}; \
                 raise --max-subsets to proceed",
                opts.max_subsets
            )));
        }
        sweep_small_subsets(&data)
    };

    let mut records = Vec::with_capacity(k + 1);
    let mut overall = Best::default();
    for (t, best) in sweep.per_t.iter().enumerate() {
        let Some(set) = &best.set else { continue };
        overall.offer(best.value, || set.clone());
        if (1..=k).contains(&t) {
            let predicted = predict_max_for_t(&data.f, t)?;
            records.push(VerificationRecord {
                n,
                t: TSpec::Exactly(t),
                predicted,
                observed_max: best.value,
                witness_set: data.divisor_set(set.clone()),
                status: status(&predicted, best.value),
            });
        }
    }
    // Overall witness: smallest size first, then lexicographic.
    let overall_set = sweep
        .per_t
        .iter()
        .find(|b| b.set.is_some() && b.value == overall.value)
        .and_then(|b| b.set.clone())
        .expect("D = {1} is always connected");
    let predicted = predict_overall_max(&data.f);
    records.push(VerificationRecord {
        n,
        t: TSpec::All,
        predicted,
        observed_max: overall.value,
        witness_set: data.divisor_set(overall_set),
        status: status(&predicted, overall.value),
    });

    Ok(OrderReport {
        n,
        exhaustive,
        sets_checked: sweep.sets_checked,
        records,
        eq1_violations: sweep.eq1_violations,
        tight_above_k: sweep.tight_above_k,
        monotone_violations: sweep.monotone_violations,
        reduction_holds: sweep.reduced.value == overall.value,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeReport {
    pub schema_version: u32,
    pub n_lo: u64,
    pub n_hi: u64,
    /// Orders actually processed; fewer than the range under `fail_fast`.
    pub orders_checked: u64,
    pub match_count: u64,
    pub mismatch_count: u64,
    pub not_applicable_count: u64,
    pub mismatches: Vec<VerificationRecord>,
    pub anomalous_orders: Vec<u64>,
    pub orders: Vec<OrderReport>,
}

impl RangeReport {
    pub fn passed(&self) -> bool {
        self.mismatch_count == 0 && self.anomalous_orders.is_empty()
    }

    /// One line per record: `n,t,predicted,observed,status`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "n,t,predicted,observed,status")?;
        for r in self.orders.iter().flat_map(|o| &o.records) {
            writeln!(
                w,
                "{},{},{},{},{}",
                r.n, r.t, r.predicted.value, r.observed_max, r.status
            )?;
        }
        Ok(())
    }
}

fn run_orders(lo: u64, hi: u64, opts: &VerifyOptions) -> Result<Vec<OrderReport>> {
    if !opts.fail_fast {
        return (lo..=hi).into_par_iter().map(|n| verify_order(n, opts)).collect();
    }
    let chunk = rayon::current_num_threads().max(1) as u64;
    let mut out = Vec::new();
    let mut start = lo;
    while start <= hi {
        let end = hi.min(start + chunk - 1);
        let batch: Vec<OrderReport> = (start..=end)
            .into_par_iter()
            .map(|n| verify_order(n, opts))
            .collect::<Result<_>>()?;
        if let Some(bad) = batch.iter().position(|o| !o.is_clean()) {
            out.extend(batch.into_iter().take(bad + 1));
            return Ok(out);
        }
        out.extend(batch);
        start = end + 1;
    }
    Ok(out)
}

/// Runs [`verify_order`] for every `n` in `lo..=hi`; results are ordered by
/// `n` regardless of the worker count.
pub fn verify_range(lo: u64, hi: u64, opts: &VerifyOptions) -> Result<RangeReport> {
    if lo < 2 || lo > hi {
        return Err(IcgError::domain(format!(
            "range {lo}..{hi} must satisfy 2 <= lo <= hi"
        )));
    }
    let orders = match opts.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| IcgError::Resource(format!("thread pool: {e}")))?
            .install(|| run_orders(lo, hi, opts))?,
        None => run_orders(lo, hi, opts)?,
    };
    let records = || orders.iter().flat_map(|o| &o.records);
    let count = |s: Status| records().filter(|r| r.status == s).count() as u64;
    Ok(RangeReport {
        schema_version: SCHEMA_VERSION,
        n_lo: lo,
        n_hi: hi,
        orders_checked: orders.len() as u64,
        match_count: count(Status::Match),
        mismatch_count: count(Status::Mismatch),
        not_applicable_count: count(Status::NotApplicable),
        mismatches: records()
            .filter(|r| r.status == Status::Mismatch)
            .cloned()
            .collect(),
        anomalous_orders: orders
            .iter()
            .filter(|o| {
                !(o.eq1_violations.is_empty()
                    && o.tight_above_k.is_empty()
                    && o.monotone_violations.is_empty()
                    && o.reduction_holds)
            })
            .map(|o| o.n)
            .collect(),
        orders,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitivityReport {
    pub schema_version: u32,
    pub n_max: u64,
    pub instances_checked: u64,
    /// Instances where some row's distance multiset differs from row 0, or
    /// row 0 differs from the single-source BFS.
    pub failures: Vec<DivisorSet>,
}

impl TransitivityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that the all-pairs oracle agrees with vertex-0 BFS and that every
/// vertex sees the same distance multiset. For each `n <= n_max` the sample
/// is every connected set of at most two divisors plus the complete set.
pub fn verify_transitivity(n_max: u64, oracle_bound: u64) -> Result<TransitivityReport> {
    if n_max > oracle_bound {
        return Err(IcgError::Resource(format!(
            "n_max = {n_max} exceeds the oracle bound {oracle_bound}"
        )));
    }
    let per_order: Vec<(u64, Vec<DivisorSet>)> = (2..=n_max.max(1))
        .into_par_iter()
        .map(|n| -> Result<(u64, Vec<DivisorSet>)> {
            let f = factorize(n)?;
            let divisors = f.proper_divisors();
            let mut sample: Vec<Vec<u64>> = (1..=2.min(divisors.len()))
                .flat_map(|t| divisors.iter().copied().combinations(t))
                .filter(|s| s.iter().fold(0, |g, &d| gcd(g, d)) == 1)
                .collect();
            if divisors.len() > 2 {
                sample.push(divisors.clone());
            }
            let mut failures = Vec::new();
            for set in &sample {
                let ds = DivisorSet::from_sorted_unchecked(n, set.clone());
                let g = IcgInstance::from_parts(f.clone(), ds.clone());
                let table = apsp_oracle(&g, oracle_bound)?;
                let profile = bfs_profile(&g);
                let sorted_row = |u: u64| (0..n).map(|v| table.get(u, v)).sorted().collect_vec();
                let reference = sorted_row(0);
                let row0_matches = (0..n).all(|v| table.get(0, v) == profile.get(v));
                if !row0_matches || (1..n).any(|u| sorted_row(u) != reference) {
                    failures.push(ds);
                }
            }
            Ok((sample.len() as u64, failures))
        })
        .collect::<Result<_>>()?;
    Ok(TransitivityReport {
        schema_version: SCHEMA_VERSION,
        n_max,
        instances_checked: per_order.iter().map(|(c, _)| c).sum(),
        failures: per_order.into_iter().flat_map(|(_, f)| f).collect(),
    })
}

/// [`verify_transitivity`] with the default oracle bound.
pub fn verify_transitivity_default(n_max: u64) -> Result<TransitivityReport> {
    verify_transitivity(n_max, DEFAULT_ORACLE_BOUND)
}
