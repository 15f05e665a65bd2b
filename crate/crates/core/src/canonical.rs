//! Canonical divisor sets for maximal-diameter search.
//!
//! Removing a divisor from `D` can only lengthen distances, so the maximum
//! over connected sets is reached on sets that are *minimal* connected: every
//! proper subset has gcd > 1. Such a set `{d_1, ..., d_t}` admits an injective
//! assignment `d_s -> p_{i_s}` of primes of `n` with
//!
//! * `p_{i_s}` does not divide `d_s`, and
//! * `p_{i_s}` divides every other `d_j`.
//!
//! That assignment is a [`SeparationWitness`].

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{IcgError, Result};
use crate::graph::DivisorSet;
use crate::numtheory::{gcd, Factorization};

/// Default cap on the number of subsets of `D_n` an enumeration may visit.
pub const DEFAULT_MAX_SUBSETS: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessPair {
    pub divisor: u64,
    pub prime: u64,
}

/// Divisor-to-prime assignment, listed in ascending divisor order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationWitness {
    pub assignment: Vec<WitnessPair>,
}

impl SeparationWitness {
    pub fn prime_for(&self, divisor: u64) -> Option<u64> {
        self.assignment
            .iter()
            .find(|p| p.divisor == divisor)
            .map(|p| p.prime)
    }

    pub fn divisor_for(&self, prime: u64) -> Option<u64> {
        self.assignment
            .iter()
            .find(|p| p.prime == prime)
            .map(|p| p.divisor)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.assignment.iter().map(|p| p.prime)
    }

    /// Re-checks injectivity and both divisibility properties against `ds`.
    pub fn is_valid_for(&self, ds: &DivisorSet) -> bool {
        if self.assignment.len() != ds.len() {
            return false;
        }
        let divisors_match = self
            .assignment
            .iter()
            .zip(ds.divisors())
            .all(|(pair, &d)| pair.divisor == d);
        let injective = self.assignment.iter().map(|p| p.prime).all_unique();
        divisors_match
            && injective
            && self.assignment.iter().all(|pair| {
                pair.prime >= 2
                    && ds.n() % pair.prime == 0
                    && separates(pair.prime, pair.divisor, ds.divisors())
            })
    }
}

fn separates(p: u64, d: u64, divisors: &[u64]) -> bool {
    d % p != 0 && divisors.iter().all(|&other| other == d || other % p == 0)
}

/// Candidate primes for each divisor, ascending.
fn candidates(f: &Factorization, ds: &DivisorSet) -> Vec<Vec<u64>> {
    ds.divisors()
        .iter()
        .map(|&d| f.primes().filter(|&p| separates(p, d, ds.divisors())).collect())
        .collect()
}

fn search(
    options: &[Vec<u64>],
    chosen: &mut Vec<u64>,
    all: bool,
    out: &mut Vec<Vec<u64>>,
) {
    if chosen.len() == options.len() {
        out.push(chosen.clone());
        return;
    }
    for &p in &options[chosen.len()] {
        if chosen.contains(&p) {
            continue;
        }
        chosen.push(p);
        search(options, chosen, all, out);
        chosen.pop();
        if !all && !out.is_empty() {
            return;
        }
    }
}

fn to_witness(ds: &DivisorSet, primes: Vec<u64>) -> SeparationWitness {
    SeparationWitness {
        assignment: ds
            .divisors()
            .iter()
            .zip(primes)
            .map(|(&divisor, prime)| WitnessPair { divisor, prime })
            .collect(),
    }
}

/// First witness found by backtracking with divisors ascending and each
/// divisor trying primes ascending.
pub fn separation_witness(f: &Factorization, ds: &DivisorSet) -> Option<SeparationWitness> {
    debug_assert_eq!(f.n(), ds.n());
    let options = candidates(f, ds);
    let mut out = Vec::new();
    search(&options, &mut Vec::new(), false, &mut out);
    out.pop().map(|primes| to_witness(ds, primes))
}

/// Every valid witness, in the same order the backtracking visits them.
pub fn all_separation_witnesses(f: &Factorization, ds: &DivisorSet) -> Vec<SeparationWitness> {
    let options = candidates(f, ds);
    let mut out = Vec::new();
    search(&options, &mut Vec::new(), true, &mut out);
    out.into_iter().map(|p| to_witness(ds, p)).collect()
}

/// `gcd(D) = 1` and every proper subset has gcd > 1 (the empty subset has
/// gcd 0 by convention).
pub fn minimal_connected(ds: &DivisorSet) -> bool {
    if !ds.is_connected() {
        return false;
    }
    // Every proper subset lies inside some subset missing one element.
    let divisors = ds.divisors();
    (0..divisors.len()).all(|skip| {
        let g = divisors
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .fold(0, |g, (_, &d)| gcd(g, d));
        g != 1
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cardinality {
    Exactly(usize),
    All,
}

/// Number of `t`-subsets of an `m`-set, saturating.
pub(crate) fn binomial(m: usize, t: usize) -> u128 {
    if t > m {
        return 0;
    }
    (0..t).fold(1u128, |c, i| c.saturating_mul((m - i) as u128) / (i as u128 + 1))
}

/// Proper divisors of `n`, provided visiting `count(|D_n|)` subsets stays
/// within `max_subsets`.
fn check_count(
    f: &Factorization,
    max_subsets: u64,
    count: impl Fn(usize) -> u128,
) -> Result<Vec<u64>> {
    let divisors = f.proper_divisors();
    let m = divisors.len();
    let subsets = count(m);
    if subsets > max_subsets as u128 {
        return Err(IcgError::Resource(format!(
            "n = {} has {m} proper divisors ({subsets} subsets to visit), above the cap of \
             {max_subsets}; raise --max-subsets to proceed",
            f.n()
        )));
    }
    Ok(divisors)
}

/// Proper divisors of `n` when the full power set fits under the cap.
pub(crate) fn check_cap(f: &Factorization, max_subsets: u64) -> Result<Vec<u64>> {
    check_count(f, max_subsets, |m| 1u128 << m.min(127))
}

fn sets_of_size(n: u64, divisors: &[u64], t: usize) -> impl Iterator<Item = DivisorSet> + '_ {
    divisors
        .iter()
        .copied()
        .combinations(t)
        .map(move |c| DivisorSet::from_sorted_unchecked(n, c))
}

/// Connected `t`-element sets admitting a separation witness, in
/// lexicographic order.
pub fn enumerate_separated(f: &Factorization, t: usize, max_subsets: u64) -> Result<Vec<DivisorSet>> {
    if t == 0 || t > f.k() {
        return Err(IcgError::domain(format!(
            "cardinality t = {t} must lie in 1..={} for n = {}",
            f.k(),
            f.n()
        )));
    }
    let divisors = check_count(f, max_subsets, |m| binomial(m, t))?;
    Ok(sets_of_size(f.n(), &divisors, t)
        .filter(|ds| ds.is_connected() && separation_witness(f, ds).is_some())
        .collect())
}

/// Connected sets of the requested size, ordered by size then
/// lexicographically.
pub fn enumerate_connected(
    f: &Factorization,
    t: Cardinality,
    max_subsets: u64,
) -> Result<Vec<DivisorSet>> {
    let divisors = match t {
        Cardinality::Exactly(0) => {
            return Err(IcgError::domain("cardinality must be at least 1"));
        }
        Cardinality::Exactly(t) => check_count(f, max_subsets, |m| binomial(m, t))?,
        Cardinality::All => check_cap(f, max_subsets)?,
    };
    let sizes = match t {
        Cardinality::Exactly(t) => t..=t,
        _ => 1..=divisors.len(),
    };
    Ok(sizes
        .flat_map(|t| sets_of_size(f.n(), &divisors, t))
        .filter(DivisorSet::is_connected)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::factorize;

    fn set(n: u64, d: &[u64]) -> DivisorSet {
        DivisorSet::new(n, d).unwrap()
    }

    fn witness_pairs(w: &SeparationWitness) -> Vec<(u64, u64)> {
        w.assignment.iter().map(|p| (p.divisor, p.prime)).collect()
    }

    #[test]
    fn witness_examples() {
        let f = factorize(540).unwrap();
        let w = separation_witness(&f, &set(540, &[45, 20, 108])).unwrap();
        assert_eq!(witness_pairs(&w), vec![(20, 3), (45, 2), (108, 5)]);

        let f = factorize(12).unwrap();
        assert!(separation_witness(&f, &set(12, &[3, 4, 6])).is_none());
        let w = separation_witness(&f, &set(12, &[3, 4])).unwrap();
        assert_eq!(witness_pairs(&w), vec![(3, 2), (4, 3)]);
    }

    #[test]
    fn witness_candidates_are_disjoint() {
        // A prime separating d_s divides every other divisor, so it cannot
        // separate any of them; the first choice never needs revisiting.
        let f = factorize(210).unwrap();
        let ds = set(210, &[6, 35]);
        let all = all_separation_witnesses(&f, &ds);
        assert_eq!(all.len(), 4);
        assert_eq!(witness_pairs(&all[0]), vec![(6, 5), (35, 2)]);
        assert!(all.iter().all(|w| w.is_valid_for(&ds)));
        assert_eq!(separation_witness(&f, &ds).as_ref(), all.first());
    }

    #[test]
    fn minimal_connected_examples() {
        assert!(minimal_connected(&set(12, &[3, 4])));
        assert!(!minimal_connected(&set(12, &[3, 4, 6])));
        assert!(minimal_connected(&set(7, &[1])));
        assert!(minimal_connected(&set(12, &[1])));
        assert!(!minimal_connected(&set(12, &[2, 4])));
    }

    #[test]
    fn enumerate_separated_examples() {
        let f = factorize(12).unwrap();
        assert_eq!(
            enumerate_separated(&f, 2, DEFAULT_MAX_SUBSETS).unwrap(),
            vec![set(12, &[2, 3]), set(12, &[3, 4])]
        );
        let f = factorize(13).unwrap();
        assert_eq!(
            enumerate_separated(&f, 1, DEFAULT_MAX_SUBSETS).unwrap(),
            vec![set(13, &[1])]
        );
        let f = factorize(540).unwrap();
        assert!(enumerate_separated(&f, 3, DEFAULT_MAX_SUBSETS)
            .unwrap()
            .contains(&set(540, &[20, 45, 108])));
        assert!(enumerate_separated(&f, 4, DEFAULT_MAX_SUBSETS).is_err());
        assert!(enumerate_separated(&f, 0, DEFAULT_MAX_SUBSETS).is_err());
    }

    #[test]
    fn enumerate_connected_examples() {
        let f = factorize(12).unwrap();
        assert_eq!(
            enumerate_connected(&f, Cardinality::Exactly(1), DEFAULT_MAX_SUBSETS).unwrap(),
            vec![set(12, &[1])]
        );
        let f = factorize(6).unwrap();
        assert_eq!(
            enumerate_connected(&f, Cardinality::Exactly(2), DEFAULT_MAX_SUBSETS).unwrap(),
            vec![set(6, &[1, 2]), set(6, &[1, 3]), set(6, &[2, 3])]
        );
        let f = factorize(4).unwrap();
        assert_eq!(
            enumerate_connected(&f, Cardinality::All, DEFAULT_MAX_SUBSETS).unwrap(),
            vec![set(4, &[1]), set(4, &[1, 2])]
        );
    }

    #[test]
    fn caps_are_enforced() {
        // 720720 has 239 proper divisors
        let f = factorize(720_720).unwrap();
        assert!(matches!(
            enumerate_connected(&f, Cardinality::All, DEFAULT_MAX_SUBSETS),
            Err(IcgError::Resource(_))
        ));
        let f = factorize(12).unwrap();
        assert!(enumerate_connected(&f, Cardinality::All, 16).is_err());
        assert!(enumerate_connected(&f, Cardinality::All, 32).is_ok());
    }

    #[test]
    fn separated_sets_are_exactly_minimal_connected() {
        for n in 2..=200u64 {
            let f = factorize(n).unwrap();
            for ds in enumerate_connected(&f, Cardinality::All, DEFAULT_MAX_SUBSETS).unwrap() {
                assert_eq!(
                    separation_witness(&f, &ds).is_some(),
                    minimal_connected(&ds),
                    "n = {n}, D = {ds}"
                );
            }
        }
    }
}
