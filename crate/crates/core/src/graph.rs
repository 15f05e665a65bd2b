//! Integral circulant graphs `ICG_n(D)`: vertices are residues mod `n` and
//! `a ~ b` iff `gcd(a - b, n)` lies in the divisor set `D`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{IcgError, Result};
use crate::numtheory::{self, gcd, Factorization};

/// A nonempty set of proper divisors of `n`, stored ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawDivisorSet")]
pub struct DivisorSet {
    n: u64,
    divisors: Vec<u64>,
}

#[derive(Deserialize)]
struct RawDivisorSet {
    n: u64,
    divisors: Vec<u64>,
}

impl TryFrom<RawDivisorSet> for DivisorSet {
    type Error = IcgError;

    fn try_from(raw: RawDivisorSet) -> Result<Self> {
        DivisorSet::new(raw.n, &raw.divisors)
    }
}

impl DivisorSet {
    /// Validates and canonicalizes `divisors` (any order) over `n`.
    pub fn new(n: u64, divisors: &[u64]) -> Result<Self> {
        if n < 2 {
            return Err(IcgError::domain(format!("order must be at least 2, got {n}")));
        }
        if divisors.is_empty() {
            return Err(IcgError::EmptyDivisorSet);
        }
        let offenders: Vec<u64> = divisors
            .iter()
            .copied()
            .filter(|&d| d == 0 || d >= n || n % d != 0)
            .collect();
        if !offenders.is_empty() {
            return Err(IcgError::InvalidDivisors { n, offenders });
        }
        let mut sorted = divisors.to_vec();
        sorted.sort_unstable();
        let mut duplicates: Vec<u64> = sorted.windows(2).filter(|w| w[0] == w[1]).map(|w| w[0]).collect();
        if !duplicates.is_empty() {
            duplicates.dedup();
            return Err(IcgError::DuplicateDivisors { n, duplicates });
        }
        Ok(DivisorSet { n, divisors: sorted })
    }

    /// Builds a set from divisors already known to be valid, sorted and distinct.
    pub(crate) fn from_sorted_unchecked(n: u64, divisors: Vec<u64>) -> Self {
        debug_assert!(divisors.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(divisors.iter().all(|&d| d < n && n % d == 0));
        DivisorSet { n, divisors }
    }

    /// All proper divisors of `n`; the graph is complete.
    pub fn all(f: &Factorization) -> Self {
        DivisorSet {
            n: f.n(),
            divisors: f.proper_divisors(),
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    pub fn len(&self) -> usize {
        self.divisors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.divisors.is_empty()
    }

    pub fn contains(&self, d: u64) -> bool {
        self.divisors.binary_search(&d).is_ok()
    }

    /// gcd of all divisors.
    pub fn gcd(&self) -> u64 {
        self.divisors.iter().fold(0, |g, &d| gcd(g, d))
    }

    pub fn is_connected(&self) -> bool {
        self.gcd() == 1
    }
}

impl fmt::Display for DivisorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, d) in self.divisors.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str("}")
    }
}

/// `ICG_n(D)` is connected iff the divisors have gcd 1.
pub fn is_connected(ds: &DivisorSet) -> bool {
    ds.is_connected()
}

/// A validated `ICG_n(D)` with its symbol set `S = { x : gcd(x, n) in D }`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IcgInstance {
    factorization: Factorization,
    divisor_set: DivisorSet,
    symbols: Vec<u64>,
}

impl IcgInstance {
    pub fn new(n: u64, divisors: &[u64]) -> Result<Self> {
        let factorization = numtheory::factorize(n)?;
        let divisor_set = DivisorSet::new(n, divisors)?;
        Ok(Self::from_parts(factorization, divisor_set))
    }

    pub fn from_parts(factorization: Factorization, divisor_set: DivisorSet) -> Self {
        assert_eq!(
            factorization.n(),
            divisor_set.n(),
            "factorization and divisor set disagree on n"
        );
        let n = factorization.n();
        let symbols = (1..n)
            .filter(|&x| divisor_set.contains(gcd(x, n)))
            .collect();
        IcgInstance {
            factorization,
            divisor_set,
            symbols,
        }
    }

    pub fn n(&self) -> u64 {
        self.factorization.n()
    }

    pub fn factorization(&self) -> &Factorization {
        &self.factorization
    }

    pub fn divisor_set(&self) -> &DivisorSet {
        &self.divisor_set
    }

    /// Ascending neighbors of vertex 0.
    pub fn symbols(&self) -> &[u64] {
        &self.symbols
    }

    pub fn degree(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_connected(&self) -> bool {
        self.divisor_set.is_connected()
    }

    /// True when `D` contains every proper divisor, i.e. the graph is `K_n`.
    pub fn is_complete(&self) -> bool {
        self.symbols.len() as u64 == self.n() - 1
    }

    pub fn check_vertex(&self, v: u64) -> Result<()> {
        if v >= self.n() {
            return Err(IcgError::domain(format!(
                "vertex {v} out of range for n = {}",
                self.n()
            )));
        }
        Ok(())
    }

    pub fn adjacent(&self, a: u64, b: u64) -> Result<bool> {
        self.check_vertex(a)?;
        self.check_vertex(b)?;
        if a == b {
            return Ok(false);
        }
        let n = self.n();
        let diff = (a + n - b) % n;
        Ok(self.divisor_set.contains(gcd(diff, n)))
    }
}

/// Sum of `phi(n/d)` over the divisor set: the degree predicted without
/// building the symbol set.
pub fn degree_formula(ds: &DivisorSet) -> u64 {
    ds.divisors()
        .iter()
        .map(|&d| numtheory::euler_phi(ds.n() / d))
        .sum()
}

#[derive(Serialize, Deserialize)]
struct InstanceRepr {
    n: u64,
    divisors: Vec<u64>,
}

impl Serialize for IcgInstance {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        InstanceRepr {
            n: self.n(),
            divisors: self.divisor_set.divisors().to_vec(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IcgInstance {
    fn deserialize<De: Deserializer<'de>>(deserializer: De) -> std::result::Result<Self, De::Error> {
        let repr = InstanceRepr::deserialize(deserializer)?;
        IcgInstance::new(repr.n, &repr.divisors).map_err(serde::de::Error::custom)
    }
}
