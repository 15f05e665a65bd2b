//! Closed-form maximal diameters and the predicates characterizing the
//! divisor sets that reach them.
//!
//! Notation: `n = p_1^a_1 ... p_k^a_k`, `r(n) = k + #{i : a_i > 1}`,
//! `s(n) = #{i : a_i = 1}`, and `t = |D|`.
//!
//! The maximal diameter over connected `t`-element divisor sets is
//!
//! | condition                                           | value    |
//! |-----------------------------------------------------|----------|
//! | `t = k`                                             | `r`      |
//! | `n = 2 mod 4`, `s >= 2`, `k - s/2 <= t < k`         | `r + 1`  |
//! | `n != 2 mod 4`, `s >= 2`, `k - s/2 <= t < k`        | `r`      |
//! | `n` even, `s >= 2`, `t < k - s/2`                   | `2t + 1` |
//! | `n` odd, `s >= 2`, `t < k - s/2`                    | `2t`     |
//! | `n` even, `s <= 1`, `t < k`                         | `2t + 1` |
//! | `n` odd, `s <= 1`, `t < k`                          | `2t`     |
//!
//! with `s/2` rounded down.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::canonical::{all_separation_witnesses, SeparationWitness};
use crate::error::{IcgError, Result};
use crate::graph::{DivisorSet, IcgInstance};
use crate::numtheory::{self, crt_solve, gcd, valuation, CrtSystem, Factorization};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseLabel {
    #[serde(rename = "T_EQ_K")]
    TEqK,
    #[serde(rename = "R_PLUS_1")]
    RPlus1,
    #[serde(rename = "R_CASE")]
    RCase,
    #[serde(rename = "TWO_T_PLUS_1_BIG_S")]
    TwoTPlus1BigS,
    #[serde(rename = "TWO_T_BIG_S")]
    TwoTBigS,
    #[serde(rename = "TWO_T_PLUS_1_SMALL_S")]
    TwoTPlus1SmallS,
    #[serde(rename = "TWO_T_SMALL_S")]
    TwoTSmallS,
    #[serde(rename = "OVERALL_R")]
    OverallR,
    #[serde(rename = "OVERALL_R_PLUS_1")]
    OverallRPlus1,
}

impl CaseLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseLabel::TEqK => "T_EQ_K",
            CaseLabel::RPlus1 => "R_PLUS_1",
            CaseLabel::RCase => "R_CASE",
            CaseLabel::TwoTPlus1BigS => "TWO_T_PLUS_1_BIG_S",
            CaseLabel::TwoTBigS => "TWO_T_BIG_S",
            CaseLabel::TwoTPlus1SmallS => "TWO_T_PLUS_1_SMALL_S",
            CaseLabel::TwoTSmallS => "TWO_T_SMALL_S",
            CaseLabel::OverallR => "OVERALL_R",
            CaseLabel::OverallRPlus1 => "OVERALL_R_PLUS_1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxDiameterPrediction {
    pub value: u32,
    pub case_label: CaseLabel,
    /// False when `t > k`; `value` is then only the order-wide upper bound.
    pub applicable: bool,
}

/// Maximal diameter over all connected divisor sets of order `n`.
///
/// This is the maximum of [`predict_max_for_t`] over `t = 1..=k`: `r(n) + 1`
/// when `n = 2 (mod 4)` and `s(n) >= 2`, otherwise `r(n)`.
pub fn predict_overall_max(f: &Factorization) -> MaxDiameterPrediction {
    let value = (1..=f.k())
        .map(|t| per_cardinality(f, t).0)
        .max()
        .unwrap_or(1);
    let case_label = if value > f.r() {
        CaseLabel::OverallRPlus1
    } else {
        CaseLabel::OverallR
    };
    MaxDiameterPrediction {
        value,
        case_label,
        applicable: true,
    }
}

fn per_cardinality(f: &Factorization, t: usize) -> (u32, CaseLabel) {
    let k = f.k();
    let r = f.r();
    let s = f.s() as usize;
    let n = f.n();
    let even = n % 2 == 0;
    let t32 = t as u32;
    if t == k {
        return (r, CaseLabel::TEqK);
    }
    debug_assert!(t < k);
    if s >= 2 {
        if t >= k - s / 2 {
            if n % 4 == 2 {
                (r + 1, CaseLabel::RPlus1)
            } else {
                (r, CaseLabel::RCase)
            }
        } else if even {
            (2 * t32 + 1, CaseLabel::TwoTPlus1BigS)
        } else {
            (2 * t32, CaseLabel::TwoTBigS)
        }
    } else if even {
        (2 * t32 + 1, CaseLabel::TwoTPlus1SmallS)
    } else {
        (2 * t32, CaseLabel::TwoTSmallS)
    }
}

/// Maximal diameter over connected `t`-element divisor sets.
pub fn predict_max_for_t(f: &Factorization, t: usize) -> Result<MaxDiameterPrediction> {
    if t < 1 {
        return Err(IcgError::domain("cardinality t must be at least 1"));
    }
    if t > f.k() {
        let overall = predict_overall_max(f);
        return Ok(MaxDiameterPrediction {
            applicable: false,
            ..overall
        });
    }
    let (value, case_label) = per_cardinality(f, t);
    Ok(MaxDiameterPrediction {
        value,
        case_label,
        applicable: true,
    })
}

/// Which characterization a divisor set matched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// `t = k`: every repeated prime appears at least squared in every
    /// divisor it is not assigned to.
    SquareValuations,
    /// `t = k`, `n = 2 (mod 4)`: as above except for one odd prime that
    /// divides the odd divisor exactly once.
    SingleSimpleOddPrime,
    /// `t < k`, `n != 2 (mod 4)`: odd witness primes, and every other prime
    /// is simple and paired with a divisor whose witness prime is simple.
    PairedSimplePrimes,
    /// `t < k`, `n = 2 (mod 4)`: same pairing, reaching `r(n) + 1`.
    PairedSimplePrimesTwiceOdd,
    /// `t < k`, `n` odd: `p_i^2 | d_j` for all `i != j`, reaching `2t`.
    SquaredCofactorsOdd,
    /// `t < k`, `n` even: odd witness primes with `p_i^2 | d_j`, reaching `2t + 1`.
    SquaredCofactorsEven,
    /// Some prime divides no divisor; `n = 2m` with `m` odd and the set
    /// satisfies [`Condition::SquareValuations`] over `m`.
    DoubledOddOrder,
    /// Some prime divides no divisor and the set reaches `2|D| + 1`.
    TightOddDivisors,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalVerdict {
    pub attains: bool,
    pub matched_condition: Option<Condition>,
    /// The diameter value the verdict is about.
    pub bound: u32,
    /// The witness under which the condition matched.
    pub witness: Option<SeparationWitness>,
}

impl ExtremalVerdict {
    fn miss(bound: u32) -> Self {
        ExtremalVerdict {
            attains: false,
            matched_condition: None,
            bound,
            witness: None,
        }
    }

    fn hit(bound: u32, condition: Condition, witness: &SeparationWitness) -> Self {
        ExtremalVerdict {
            attains: true,
            matched_condition: Some(condition),
            bound,
            witness: Some(witness.clone()),
        }
    }
}

/// For each repeated witness prime `p`, the divisors other than the one
/// assigned to `p` in which `p` appears fewer than two times.
fn square_deficits(
    f: &Factorization,
    ds: &DivisorSet,
    w: &SeparationWitness,
) -> Vec<(u64, Vec<u64>)> {
    w.assignment
        .iter()
        .filter(|pair| f.exponent_of(pair.prime) > 1)
        .map(|pair| {
            let short: Vec<u64> = ds
                .divisors()
                .iter()
                .copied()
                .filter(|&d| d != pair.divisor && valuation(pair.prime, d) < 2)
                .collect();
            (pair.prime, short)
        })
        .filter(|(_, short)| !short.is_empty())
        .collect()
}

fn square_valuations(f: &Factorization, ds: &DivisorSet, w: &SeparationWitness) -> bool {
    square_deficits(f, ds, w).is_empty()
}

/// The unique odd prime making the single-exception condition hold, if any.
fn single_simple_odd_prime(f: &Factorization, ds: &DivisorSet, w: &SeparationWitness) -> Option<u64> {
    if f.n() % 4 != 2 {
        return None;
    }
    let odd_divisor = w.divisor_for(2)?;
    match square_deficits(f, ds, w).as_slice() {
        [(p, short)] if *p != 2 && short == &[odd_divisor] && valuation(*p, odd_divisor) == 1 => {
            Some(*p)
        }
        _ => None,
    }
}

fn check_witness(ds: &DivisorSet, w: &SeparationWitness) -> Result<()> {
    if !w.is_valid_for(ds) {
        return Err(IcgError::domain(format!(
            "witness does not separate the divisor set {ds}"
        )));
    }
    Ok(())
}

/// Does a `k`-element separated set reach `r(n)`?
pub fn extremal_check_t_eq_k(
    f: &Factorization,
    ds: &DivisorSet,
    w: &SeparationWitness,
) -> Result<ExtremalVerdict> {
    if ds.len() != f.k() {
        return Err(IcgError::domain(format!(
            "expected {} divisors for n = {}, got {}",
            f.k(),
            f.n(),
            ds.len()
        )));
    }
    check_witness(ds, w)?;
    let bound = f.r();
    if square_valuations(f, ds, w) {
        Ok(ExtremalVerdict::hit(bound, Condition::SquareValuations, w))
    } else if single_simple_odd_prime(f, ds, w).is_some() {
        Ok(ExtremalVerdict::hit(bound, Condition::SingleSimpleOddPrime, w))
    } else {
        Ok(ExtremalVerdict::miss(bound))
    }
}

/// Primes of `n` dividing none of the divisors.
pub fn untouched_primes(f: &Factorization, ds: &DivisorSet) -> Vec<u64> {
    f.primes()
        .filter(|&p| ds.divisors().iter().all(|&d| d % p != 0))
        .collect()
}

/// Whether every non-witness prime is simple and misses exactly one
/// divisor, that divisor's witness prime is simple too, and distinct
/// non-witness primes miss distinct divisors.
fn simple_pairing_exists(f: &Factorization, ds: &DivisorSet, w: &SeparationWitness) -> bool {
    let witness_primes: Vec<u64> = w.primes().collect();
    let mut used = Vec::new();
    for p in f.primes().filter(|p| !witness_primes.contains(p)) {
        if f.exponent_of(p) != 1 {
            return false;
        }
        let missed: Vec<u64> = ds
            .divisors()
            .iter()
            .copied()
            .filter(|&d| d % p != 0)
            .collect();
        let [d] = missed.as_slice() else {
            return false;
        };
        let partner = w.prime_for(*d).unwrap_or(0);
        if f.exponent_of(partner) != 1 || used.contains(d) {
            return false;
        }
        used.push(*d);
    }
    true
}

fn squared_cofactors(ds: &DivisorSet, w: &SeparationWitness) -> bool {
    w.assignment.iter().all(|pair| {
        ds.divisors()
            .iter()
            .all(|&d| d == pair.divisor || d % (pair.prime * pair.prime) == 0)
    })
}

/// Does a separated set with `t < k`, touching every prime, reach the
/// bound for its case? Every separation witness of the set is tried.
pub fn extremal_check_t_lt_k(f: &Factorization, ds: &DivisorSet) -> Result<ExtremalVerdict> {
    let t = ds.len();
    let k = f.k();
    if t >= k {
        return Err(IcgError::domain(format!(
            "expected fewer than {k} divisors for n = {}, got {t}",
            f.n()
        )));
    }
    if !ds.is_connected() {
        return Err(IcgError::domain(format!("{ds} is not connected over n = {}", f.n())));
    }
    let untouched = untouched_primes(f, ds);
    if !untouched.is_empty() {
        return Err(IcgError::domain(format!(
            "primes {untouched:?} divide no divisor of {ds}; use check_untouched_prime"
        )));
    }
    let witnesses = all_separation_witnesses(f, ds);
    if witnesses.is_empty() {
        return Err(IcgError::domain(format!("{ds} has no separation witness")));
    }
    let s = f.s() as usize;
    let n = f.n();
    let t32 = t as u32;
    let odd_witness = |w: &SeparationWitness| w.primes().all(|p| p % 2 == 1);

    if s >= 2 && t >= k - s / 2 {
        let (bound, condition) = if n % 4 == 2 {
            (f.r() + 1, Condition::PairedSimplePrimesTwiceOdd)
        } else {
            (f.r(), Condition::PairedSimplePrimes)
        };
        let found = witnesses.iter().find(|w| {
            odd_witness(w) && square_valuations(f, ds, w) && simple_pairing_exists(f, ds, w)
        });
        return Ok(match found {
            Some(w) => ExtremalVerdict::hit(bound, condition, w),
            None => ExtremalVerdict::miss(bound),
        });
    }
    let (bound, condition) = if n % 2 == 1 {
        (2 * t32, Condition::SquaredCofactorsOdd)
    } else {
        (2 * t32 + 1, Condition::SquaredCofactorsEven)
    };
    let found = witnesses
        .iter()
        .find(|w| (n % 2 == 1 || odd_witness(w)) && squared_cofactors(ds, w));
    Ok(match found {
        Some(w) => ExtremalVerdict::hit(bound, condition, w),
        None => ExtremalVerdict::miss(bound),
    })
}

/// Verdicts for a set leaving some prime of `n` untouched.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UntouchedPrimeVerdict {
    pub untouched_primes: Vec<u64>,
    /// Whether the diameter equals `r(n)`.
    pub order_bound: ExtremalVerdict,
    /// Whether the diameter equals `2|D| + 1`.
    pub tight_bound: ExtremalVerdict,
    /// `n = core * cofactor`, where the core carries the witness primes of
    /// the matching decomposition (absent when none exists).
    pub core: Option<u64>,
    pub cofactor: Option<u64>,
}

/// Splits `n` as `core * cofactor` where the core's primes are exactly the
/// witness primes and every prime dividing a divisor is among them.
fn core_split(f: &Factorization, ds: &DivisorSet, w: &SeparationWitness) -> Option<(Factorization, u64)> {
    let witness_primes: Vec<u64> = w.primes().collect();
    let touched_outside = f
        .primes()
        .filter(|p| !witness_primes.contains(p))
        .any(|p| ds.divisors().iter().any(|&d| d % p == 0));
    if touched_outside {
        return None;
    }
    let core: u64 = f
        .factors()
        .iter()
        .filter(|pp| witness_primes.contains(&pp.prime))
        .map(|pp| pp.value())
        .product();
    if core == f.n() || ds.divisors().iter().any(|&d| d >= core) {
        return None;
    }
    let core_f = numtheory::factorize(core).ok()?;
    Some((core_f, f.n() / core))
}

/// Evaluates the doubled-odd-order rule (diameter `r(n)`) and the
/// `2|D| + 1` tightness rule for a set with at least one untouched prime.
///
/// Both rules view `ICG_n(D)` as `ICG_{m n'}(D)` where `D` is separated by
/// all primes of `m` and `n'` collects the remaining primes:
///
/// * `r(n)` is reached iff `n' = 2`, `m` is odd and not prime, and `D`
///   satisfies [`Condition::SquareValuations`] over `m`;
/// * `2|D| + 1` is reached iff `n'` is even, every divisor is odd, and for
///   the witness primes `p_i^2 | d_j` whenever `i != j`.
pub fn check_untouched_prime(f: &Factorization, ds: &DivisorSet) -> Result<UntouchedPrimeVerdict> {
    let untouched = untouched_primes(f, ds);
    if untouched.is_empty() {
        return Err(IcgError::domain(format!(
            "every prime of n = {} divides some divisor of {ds}",
            f.n()
        )));
    }
    let witnesses = all_separation_witnesses(f, ds);
    let tight_value = 2 * ds.len() as u32 + 1;
    let mut order_bound = ExtremalVerdict::miss(f.r());
    let mut tight_bound = ExtremalVerdict::miss(tight_value);
    let mut split = None;

    for w in &witnesses {
        let Some((core, cofactor)) = core_split(f, ds, w) else {
            continue;
        };
        let core_ds = DivisorSet::from_sorted_unchecked(core.n(), ds.divisors().to_vec());
        if !order_bound.attains
            && cofactor == 2
            && core.n() % 2 == 1
            && !core.is_prime()
            && square_valuations(&core, &core_ds, w)
        {
            order_bound = ExtremalVerdict::hit(f.r(), Condition::DoubledOddOrder, w);
            split = Some((core.n(), cofactor));
        }
        if !tight_bound.attains
            && cofactor % 2 == 0
            && ds.divisors().iter().all(|d| d % 2 == 1)
            && squared_cofactors(ds, w)
        {
            tight_bound = ExtremalVerdict::hit(tight_value, Condition::TightOddDivisors, w);
            split.get_or_insert((core.n(), cofactor));
        }
        if split.is_none() {
            split = Some((core.n(), cofactor));
        }
    }
    Ok(UntouchedPrimeVerdict {
        untouched_primes: untouched,
        order_bound,
        tight_bound,
        core: split.map(|s| s.0),
        cofactor: split.map(|s| s.1),
    })
}

/// Divisor sets whose diameter is known in closed form for small orders.
/// Each entry carries its predicted diameter.
pub fn small_family_lookup(f: &Factorization) -> Vec<(DivisorSet, u32)> {
    let n = f.n();
    let ps: Vec<(u64, u32)> = f.factors().iter().map(|pp| (pp.prime, pp.exponent)).collect();
    let r = f.r();
    let sets: Vec<Vec<u64>> = match ps.as_slice() {
        // p1 p2, both odd
        [(p1, 1), (_, 1)] if *p1 > 2 => vec![vec![1]],
        // 4 p2
        [(2, 2), (_, 1)] => vec![vec![1]],
        // 2 p2
        [(2, 1), (_, 1)] => {
            let ds = DivisorSet::from_sorted_unchecked(n, vec![1]);
            return vec![(ds, r + 1)];
        }
        // 2 p2 p3
        [(2, 1), (p2, 1), (p3, 1)] => vec![
            vec![1],
            vec![1, *p2],
            vec![1, *p3],
            vec![2, *p2],
            vec![2, *p3],
            vec![*p2, *p3],
            vec![1, *p2, *p3],
        ],
        // 2 p2^2
        [(2, 1), (p2, 2)] => vec![vec![1], vec![1, *p2]],
        _ => Vec::new(),
    };
    sets.into_iter()
        .map(|d| (DivisorSet::from_sorted_unchecked(n, d), r))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WorstVertexVariant {
    /// `l = -1 (mod p)` for simple primes and `l = p (mod p^a)` otherwise.
    I,
    /// As `I`, except `l = p^2 (mod p^a)` for the single odd prime dividing
    /// the odd divisor exactly once.
    II,
}

/// The vertex built by CRT whose distance from 0 is `r(n)` for sets
/// matching the corresponding condition.
pub fn worst_vertex(
    f: &Factorization,
    ds: &DivisorSet,
    w: &SeparationWitness,
    variant: WorstVertexVariant,
) -> Result<u64> {
    if ds.len() != f.k() {
        return Err(IcgError::domain(format!(
            "worst vertex needs {} divisors for n = {}, got {}",
            f.k(),
            f.n(),
            ds.len()
        )));
    }
    check_witness(ds, w)?;
    let special = match variant {
        WorstVertexVariant::I => None,
        WorstVertexVariant::II => Some(single_simple_odd_prime(f, ds, w).ok_or_else(|| {
            IcgError::domain(format!(
                "variant II needs n = 2 (mod 4) and exactly one odd prime dividing the odd \
                 divisor once; {ds} over n = {} has none",
                f.n()
            ))
        })?),
    };
    let congruences = f.factors().iter().map(|pp| {
        let modulus = pp.value();
        let residue: i64 = if pp.exponent == 1 {
            -1
        } else if Some(pp.prime) == special {
            (pp.prime * pp.prime) as i64
        } else {
            pp.prime as i64
        };
        (residue, modulus)
    });
    crt_solve(&CrtSystem::from_signed(congruences)?)
}

/// `d (y_1 + y_2 [+ 1]) = l (mod n)` with `gcd(d y_i, n) = d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandRepresentation {
    pub d: u64,
    pub l: u64,
    pub parts: Vec<u64>,
    pub plus_one: bool,
}

impl SummandRepresentation {
    /// Re-checks the congruence and the gcd constraints modulo `n`.
    pub fn is_valid(&self, n: u64) -> bool {
        let extra = u64::from(self.plus_one);
        let sum: u128 = self.parts.iter().map(|&y| y as u128).sum::<u128>() + extra as u128;
        let congruent = (self.d as u128 * sum) % n as u128 == self.l as u128 % n as u128;
        let gcds = self
            .parts
            .iter()
            .all(|&y| gcd((self.d as u128 * y as u128 % n as u128) as u64, n) == self.d);
        congruent && gcds
    }
}

/// Writes the multiple `l` of `d` as `d y_1 + d y_2`, or as
/// `d y_1 + d y_2 + d` when `n/d` is even and `l/d` is odd. Parts are the
/// smallest `y_1` in `1..=n/d`, then the matching `y_2` in `1..=n/d`.
pub fn two_three_summands(n: u64, d: u64, l: u64) -> Result<SummandRepresentation> {
    if d == 0 || n % d != 0 {
        return Err(IcgError::domain(format!("{d} does not divide {n}")));
    }
    if l >= n {
        return Err(IcgError::domain(format!("target {l} must be below n = {n}")));
    }
    if l % d != 0 {
        return Err(IcgError::domain(format!("target {l} is not a multiple of {d}")));
    }
    let m = n / d;
    let target = (l / d) % m;
    let search = |shift: u64| {
        let goal = (target + m - shift % m) % m;
        (1..=m).filter(|&y| gcd(y, m) == 1).find_map(|y1| {
            let y2 = match (goal + m - y1 % m) % m {
                0 => m,
                y => y,
            };
            (gcd(y2, m) == 1).then_some((y1, y2))
        })
    };
    let (parts, plus_one) = match search(0) {
        Some((y1, y2)) => (vec![y1, y2], false),
        None if m % 2 == 0 => match search(1) {
            Some((y1, y2)) => (vec![y1, y2], true),
            None => {
                return Err(IcgError::domain(format!(
                    "no representation of {l} by multiples of {d} mod {n}"
                )))
            }
        },
        None => {
            return Err(IcgError::domain(format!(
                "no representation of {l} by multiples of {d} mod {n}"
            )))
        }
    };
    Ok(SummandRepresentation {
        d,
        l,
        parts,
        plus_one,
    })
}

fn check_lift_inputs(m: u64, ds: &DivisorSet, n_prime: u64) -> Result<()> {
    if ds.n() != m {
        return Err(IcgError::domain(format!(
            "divisor set is over {} but m = {m}",
            ds.n()
        )));
    }
    if n_prime < 2 {
        return Err(IcgError::domain("the cofactor n' must exceed 1"));
    }
    if gcd(m, n_prime) != 1 {
        return Err(IcgError::domain(format!("gcd({m}, {n_prime}) != 1")));
    }
    m.checked_mul(n_prime)
        .ok_or(IcgError::Overflow("m * n'"))
        .map(|_| ())
}

/// Diameter of `ICG_{m n'}(D)` from the diameter `base > 2` of `ICG_m(D)`:
/// one more when `n'` is even, unchanged when odd.
pub fn lift_diameter(m: u64, ds: &DivisorSet, base_diam: u32, n_prime: u64) -> Result<u32> {
    check_lift_inputs(m, ds, n_prime)?;
    if base_diam <= 2 {
        return Err(IcgError::domain(format!(
            "base diameter {base_diam} <= 2; use lift_diameter_small"
        )));
    }
    Ok(if n_prime % 2 == 0 { base_diam + 1 } else { base_diam })
}

/// Whether every nonzero residue of `Z_m` is a sum of two symbols of
/// `ICG_m(D)`, i.e. a walk of length exactly two reaches it.
pub fn every_vertex_on_two_walk(g: &IcgInstance) -> bool {
    let m = g.n() as usize;
    let mut hit = vec![false; m];
    let symbols = g.symbols();
    for &a in symbols {
        for &b in symbols {
            hit[(a as usize + b as usize) % m] = true;
        }
    }
    hit[1..].iter().all(|&h| h)
}

/// Diameter of `ICG_{m n'}(D)` when `ICG_m(D)` has diameter 1 or 2.
///
/// * Even `n'` (so `m` odd): 3.
/// * Odd `n'`: 2 if every nonzero residue mod `m` is reached by a walk of
///   length exactly two, else 3. For a complete base this holds unless
///   `m = 2`, where `ICG_{2n'}({1})` has diameter 3.
pub fn lift_diameter_small(m: u64, ds: &DivisorSet, base_diam: u32, n_prime: u64) -> Result<u32> {
    check_lift_inputs(m, ds, n_prime)?;
    let even = n_prime % 2 == 0;
    match base_diam {
        1 | 2 if even => Ok(3),
        1 | 2 => {
            let g = IcgInstance::from_parts(numtheory::factorize(m)?, ds.clone());
            Ok(if every_vertex_on_two_walk(&g) { 2 } else { 3 })
        }
        _ => Err(IcgError::domain(format!(
            "base diameter {base_diam} is not 1 or 2; use lift_diameter"
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyInstance {
    pub n: u64,
    pub divisor_set: DivisorSet,
    pub predicted: u32,
}

/// `n = 2 m` with `m = p_1^2 ... p_k^2` and `D = { m / p_i^2 }`, whose
/// diameter is `2k + 1`.
pub fn saxena_family(primes: &[u64]) -> Result<FamilyInstance> {
    if primes.is_empty() {
        return Err(IcgError::domain("need at least one prime"));
    }
    if let Some(&bad) = primes.iter().find(|&&p| p == 2 || !numtheory::is_prime(p)) {
        return Err(IcgError::domain(format!("{bad} is not an odd prime")));
    }
    if !primes.iter().all_unique() {
        return Err(IcgError::domain(format!("primes {primes:?} repeat")));
    }
    let square = |p: u64| p.checked_mul(p).ok_or(IcgError::Overflow("p^2"));
    let m = primes.iter().try_fold(1u64, |acc, &p| {
        acc.checked_mul(square(p)?).ok_or(IcgError::Overflow("family order"))
    })?;
    let n = m.checked_mul(2).ok_or(IcgError::Overflow("family order"))?;
    let divisors: Vec<u64> = primes.iter().map(|&p| m / (p * p)).collect();
    Ok(FamilyInstance {
        n,
        divisor_set: DivisorSet::new(n, &divisors)?,
        predicted: 2 * primes.len() as u32 + 1,
    })
}

/// Whether `ICG_n(D)` is predicted to have diameter exactly 2: `1 in D`,
/// `D` is not everything, and either `n` is odd or a power of two, or
/// `n = 2^a m` with `m > 1` odd and `2^a in D`. Returns false when the
/// preconditions fail.
pub fn diameter_two_cases(f: &Factorization, ds: &DivisorSet) -> bool {
    if !ds.contains(1) || ds.len() == f.proper_divisors().len() {
        return false;
    }
    let n = f.n();
    let two_part = 1u64 << f.exponent_of(2);
    n % 2 == 1 || two_part == n || ds.contains(two_part)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::separation_witness;
    use crate::distance::{diameter, distance, Diameter};
    use crate::numtheory::factorize;

    fn set(n: u64, d: &[u64]) -> DivisorSet {
        DivisorSet::new(n, d).unwrap()
    }

    fn diam(n: u64, d: &[u64]) -> u32 {
        diameter(&IcgInstance::new(n, d).unwrap()).value.finite().unwrap()
    }

    #[test]
    fn overall_examples() {
        let p = predict_overall_max(&factorize(540).unwrap());
        assert_eq!((p.value, p.case_label), (5, CaseLabel::OverallR));
        let p = predict_overall_max(&factorize(6).unwrap());
        assert_eq!((p.value, p.case_label), (3, CaseLabel::OverallRPlus1));
        assert_eq!(predict_overall_max(&factorize(15).unwrap()).value, 2);
        // 18 = 2 * 3^2 is 2 mod 4 but s = 1: no r + 1
        assert_eq!(predict_overall_max(&factorize(18).unwrap()).value, 3);
        assert_eq!(predict_overall_max(&factorize(2).unwrap()).value, 1);
        assert_eq!(predict_overall_max(&factorize(7).unwrap()).value, 1);
    }

    #[test]
    fn per_t_examples() {
        let p = predict_max_for_t(&factorize(540).unwrap(), 3).unwrap();
        assert_eq!((p.value, p.case_label), (5, CaseLabel::TEqK));
        let p = predict_max_for_t(&factorize(450).unwrap(), 2).unwrap();
        assert_eq!((p.value, p.case_label), (5, CaseLabel::TwoTPlus1SmallS));
        let p = predict_max_for_t(&factorize(105).unwrap(), 2).unwrap();
        assert_eq!((p.value, p.case_label), (3, CaseLabel::RCase));
        let p = predict_max_for_t(&factorize(210).unwrap(), 2).unwrap();
        assert_eq!((p.value, p.case_label), (5, CaseLabel::RPlus1));
        let p = predict_max_for_t(&factorize(210).unwrap(), 1).unwrap();
        assert_eq!((p.value, p.case_label), (3, CaseLabel::TwoTPlus1BigS));
        let p = predict_max_for_t(&factorize(12).unwrap(), 5).unwrap();
        assert!(!p.applicable);
        assert_eq!(p.value, 3);
        assert!(predict_max_for_t(&factorize(12).unwrap(), 0).is_err());
    }

    #[test]
    fn t_eq_k_examples() {
        let cases: [(u64, &[u64], Option<Condition>); 5] = [
            (540, &[45, 20, 108], Some(Condition::SquareValuations)),
            (6750, &[75, 250, 18], Some(Condition::SingleSimpleOddPrime)),
            (1260, &[105, 140, 252, 180], None),
            (420, &[105, 70, 84, 60], None),
            (22050, &[105, 2450, 882, 450], None),
        ];
        for (n, d, want) in cases {
            let f = factorize(n).unwrap();
            let ds = set(n, d);
            let w = separation_witness(&f, &ds).unwrap();
            let v = extremal_check_t_eq_k(&f, &ds, &w).unwrap();
            assert_eq!(v.matched_condition, want, "n = {n}");
            assert_eq!(v.attains, want.is_some());
        }
        let f = factorize(540).unwrap();
        let ds = set(540, &[20, 45]);
        let w = separation_witness(&f, &ds).unwrap();
        assert!(extremal_check_t_eq_k(&f, &ds, &w).is_err());
    }

    #[test]
    fn t_lt_k_examples() {
        let f = factorize(450).unwrap();
        // 2 is untouched by {9, 25}
        assert!(extremal_check_t_lt_k(&f, &set(450, &[9, 25])).is_err());
        let v = extremal_check_t_lt_k(&f, &set(450, &[18, 25])).unwrap();
        assert_eq!(v.bound, 5);
        assert_eq!(v.attains, diam(450, &[18, 25]) == 5);

        // separated but gcd 3
        let f = factorize(105).unwrap();
        assert!(extremal_check_t_lt_k(&f, &set(105, &[15, 21])).is_err());
        let v = extremal_check_t_lt_k(&f, &set(105, &[7, 15])).unwrap();
        assert_eq!(v.bound, 3);
        assert_eq!(v.attains, diam(105, &[7, 15]) == 3);

        let f = factorize(210).unwrap();
        let v = extremal_check_t_lt_k(&f, &set(210, &[14, 15])).unwrap();
        assert_eq!(v.bound, 5);
        assert_eq!(v.attains, diam(210, &[14, 15]) == 5);
    }

    #[test]
    fn untouched_examples() {
        let f = factorize(450).unwrap();
        let v = check_untouched_prime(&f, &set(450, &[9, 25])).unwrap();
        assert!(v.tight_bound.attains);
        assert_eq!(v.tight_bound.bound, 5);
        assert_eq!((v.core, v.cofactor), (Some(225), Some(2)));
        assert_eq!(diam(450, &[9, 25]), 5);

        let f = factorize(900).unwrap();
        let v = check_untouched_prime(&f, &set(900, &[9, 25])).unwrap();
        assert_eq!(v.tight_bound.attains, diam(900, &[9, 25]) == 5);

        let f = factorize(105).unwrap();
        let v = check_untouched_prime(&f, &set(105, &[5, 7])).unwrap();
        assert!(!v.order_bound.attains);
        assert_eq!(v.untouched_primes, vec![3]);

        assert!(check_untouched_prime(&factorize(12).unwrap(), &set(12, &[3, 4])).is_err());
    }

    #[test]
    fn small_family_examples() {
        let f = factorize(15).unwrap();
        assert_eq!(small_family_lookup(&f), vec![(set(15, &[1]), 2)]);
        let f = factorize(18).unwrap();
        assert_eq!(
            small_family_lookup(&f),
            vec![(set(18, &[1]), 3), (set(18, &[1, 3]), 3)]
        );
        let f = factorize(6).unwrap();
        assert_eq!(small_family_lookup(&f), vec![(set(6, &[1]), 3)]);
        assert!(small_family_lookup(&factorize(36).unwrap()).is_empty());
        assert!(small_family_lookup(&factorize(30).unwrap()).len() == 7);
    }

    #[test]
    fn worst_vertex_examples() {
        let f = factorize(540).unwrap();
        let ds = set(540, &[45, 20, 108]);
        let w = separation_witness(&f, &ds).unwrap();
        assert_eq!(worst_vertex(&f, &ds, &w, WorstVertexVariant::I).unwrap(), 354);
        assert!(worst_vertex(&f, &ds, &w, WorstVertexVariant::II).is_err());

        let f = factorize(35).unwrap();
        let ds = set(35, &[5, 7]);
        let w = separation_witness(&f, &ds).unwrap();
        assert_eq!(worst_vertex(&f, &ds, &w, WorstVertexVariant::I).unwrap(), 34);

        let f = factorize(6750).unwrap();
        let ds = set(6750, &[75, 250, 18]);
        let w = separation_witness(&f, &ds).unwrap();
        let l = worst_vertex(&f, &ds, &w, WorstVertexVariant::II).unwrap();
        assert_eq!(l % 2, 1);
        assert_eq!(l % 27, 9);
        assert_eq!(l % 125, 5);
        let g = IcgInstance::new(6750, &[75, 250, 18]).unwrap();
        assert_eq!(distance(&g, 0, l).unwrap(), Some(5));
    }

    #[test]
    fn summand_examples() {
        let r = two_three_summands(15, 3, 6).unwrap();
        assert_eq!((r.parts.as_slice(), r.plus_one), (&[1, 1][..], false));
        let r = two_three_summands(12, 3, 3).unwrap();
        assert_eq!((r.parts.as_slice(), r.plus_one), (&[1, 3][..], true));
        assert!(r.is_valid(12));
        let r = two_three_summands(45, 5, 10).unwrap();
        assert_eq!((r.parts.as_slice(), r.plus_one), (&[1, 1][..], false));
        assert!(two_three_summands(12, 3, 4).is_err());
        assert!(two_three_summands(12, 5, 5).is_err());
        assert!(two_three_summands(12, 3, 12).is_err());
    }

    #[test]
    fn lift_examples() {
        assert_eq!(lift_diameter(6750, &set(6750, &[75, 250, 18]), 5, 7).unwrap(), 5);
        assert_eq!(lift_diameter(12, &set(12, &[3, 4]), 3, 5).unwrap(), 3);
        assert_eq!(diam(60, &[3, 4]), 3);
        assert_eq!(lift_diameter(225, &set(225, &[9, 25]), 4, 2).unwrap(), 5);
        assert!(lift_diameter(12, &set(12, &[3, 4]), 2, 5).is_err());
        assert!(lift_diameter(12, &set(12, &[3, 4]), 3, 3).is_err());

        assert_eq!(lift_diameter_small(5, &set(5, &[1]), 1, 3).unwrap(), 2);
        assert_eq!(lift_diameter_small(5, &set(5, &[1]), 1, 2).unwrap(), 3);
        assert_eq!(lift_diameter_small(2, &set(2, &[1]), 1, 3).unwrap(), 3);
        assert_eq!(diam(6, &[1]), 3);
        assert_eq!(lift_diameter_small(15, &set(15, &[1, 3]), 2, 2).unwrap(), 3);
        assert_eq!(diam(30, &[1, 3]), 3);
    }

    #[test]
    fn saxena_examples() {
        let fam = saxena_family(&[3, 5]).unwrap();
        assert_eq!((fam.n, fam.divisor_set.divisors(), fam.predicted), (450, &[9, 25][..], 5));
        let fam = saxena_family(&[3]).unwrap();
        assert_eq!((fam.n, fam.divisor_set.divisors(), fam.predicted), (18, &[1][..], 3));
        let fam = saxena_family(&[3, 5, 7]).unwrap();
        assert_eq!(fam.n, 22050);
        assert_eq!(fam.divisor_set.divisors(), &[225, 441, 1225]);
        assert!(saxena_family(&[3, 3]).is_err());
        assert!(saxena_family(&[2, 3]).is_err());
        assert!(saxena_family(&[9]).is_err());
        assert!(saxena_family(&[]).is_err());
    }

    #[test]
    fn diameter_two_examples() {
        assert!(diameter_two_cases(&factorize(27).unwrap(), &set(27, &[1])));
        assert!(diameter_two_cases(&factorize(16).unwrap(), &set(16, &[1])));
        assert!(diameter_two_cases(&factorize(12).unwrap(), &set(12, &[1, 4])));
        assert!(!diameter_two_cases(&factorize(12).unwrap(), &set(12, &[1])));
        assert!(!diameter_two_cases(&factorize(7).unwrap(), &set(7, &[1])));
        assert_eq!(diameter(&IcgInstance::new(12, &[1, 4]).unwrap()).value, Diameter::Finite(2));
    }
}
