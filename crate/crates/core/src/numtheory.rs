//! Exact integer number theory: factorization, valuations, Euler's totient,
//! the Chinese remainder theorem, and the `r(n)` / `s(n)` statistics of a
//! prime factorization.
//!
//! Everything works on `u64` with checked arithmetic. Factorization is plain
//! trial division, which is deterministic and fast enough for the orders
//! handled here (at most [`DEFAULT_FACTOR_BOUND`]).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{IcgError, Result};

/// Largest `n` accepted by [`factorize`].
pub const DEFAULT_FACTOR_BOUND: u64 = 1 << 40;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Extended Euclid on signed values: returns `(g, x, y)` with `a*x + b*y = g`.
fn extended_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_x, mut x) = (1i128, 0i128);
    let (mut old_y, mut y) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_x, x) = (x, old_x - q * x);
        (old_y, y) = (y, old_y - q * y);
    }
    (old_r, old_x, old_y)
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 0 {
        return None;
    }
    let (g, x, _) = extended_gcd(a as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            return false;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimePower {
    pub prime: u64,
    pub exponent: u32,
}

impl PrimePower {
    /// `prime^exponent`; always fits because it divides a `u64`.
    pub fn value(&self) -> u64 {
        self.prime.pow(self.exponent)
    }
}

/// The prime-power decomposition `p_1^a_1 ... p_k^a_k` of `n`, primes ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factorization {
    n: u64,
    factors: Vec<PrimePower>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[PrimePower] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|f| f.prime)
    }

    /// Number of distinct primes.
    pub fn k(&self) -> usize {
        self.factors.len()
    }

    /// `k` plus the number of exponents greater than one.
    pub fn r(&self) -> u32 {
        let repeated = self.factors.iter().filter(|f| f.exponent > 1).count();
        (self.k() + repeated) as u32
    }

    /// Number of exponents equal to one.
    pub fn s(&self) -> u32 {
        self.factors.iter().filter(|f| f.exponent == 1).count() as u32
    }

    /// Exponent of `p` in `n` (0 if `p` does not divide `n`).
    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|f| f.prime == p)
            .map_or(0, |f| f.exponent)
    }

    pub fn is_prime(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].exponent == 1
    }

    pub fn is_prime_power(&self) -> bool {
        self.factors.len() == 1
    }

    /// All divisors of `n` except `n` itself, ascending.
    pub fn proper_divisors(&self) -> Vec<u64> {
        let mut divisors = vec![1u64];
        for pp in &self.factors {
            let current = divisors.len();
            let mut power = 1u64;
            for _ in 0..pp.exponent {
                power *= pp.prime;
                for i in 0..current {
                    divisors.push(divisors[i] * power);
                }
            }
        }
        divisors.sort_unstable();
        divisors.pop();
        divisors
    }

    /// Euler's totient of `n`.
    pub fn phi(&self) -> u64 {
        self.factors
            .iter()
            .map(|f| (f.prime - 1) * f.prime.pow(f.exponent - 1))
            .product()
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, pp) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if pp.exponent == 1 {
                write!(f, "{}", pp.prime)?;
            } else {
                write!(f, "{}^{}", pp.prime, pp.exponent)?;
            }
        }
        Ok(())
    }
}

pub fn factorize(n: u64) -> Result<Factorization> {
    factorize_bounded(n, DEFAULT_FACTOR_BOUND)
}

/// Trial division up to `sqrt(n)`. Rejects `n < 2` and `n > bound`.
pub fn factorize_bounded(n: u64, bound: u64) -> Result<Factorization> {
    if n < 2 {
        return Err(IcgError::domain(format!("cannot factorize n = {n}; need n >= 2")));
    }
    if n > bound {
        return Err(IcgError::domain(format!(
            "n = {n} exceeds the factorization bound {bound}"
        )));
    }
    let mut rest = n;
    let mut factors = Vec::new();
    let mut p = 2u64;
    while p * p <= rest {
        if rest % p == 0 {
            let mut exponent = 0;
            while rest % p == 0 {
                rest /= p;
                exponent += 1;
            }
            factors.push(PrimePower { prime: p, exponent });
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push(PrimePower {
            prime: rest,
            exponent: 1,
        });
    }
    Ok(Factorization { n, factors })
}

/// Largest `a` with `p^a | n`. `p` must be at least 2 and `n` at least 1.
pub fn valuation(p: u64, mut n: u64) -> u32 {
    debug_assert!(p >= 2 && n >= 1);
    let mut a = 0;
    while n % p == 0 {
        n /= p;
        a += 1;
    }
    a
}

pub fn euler_phi(n: u64) -> u64 {
    if n == 1 {
        return 1;
    }
    // n >= 2 here, and factorize only fails on n < 2 or beyond the bound
    match factorize_bounded(n, u64::MAX) {
        Ok(f) => f.phi(),
        Err(_) => unreachable!("factorization of n >= 2 cannot fail without a bound"),
    }
}

pub fn proper_divisors(n: u64) -> Result<Vec<u64>> {
    Ok(factorize(n)?.proper_divisors())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Congruence {
    pub residue: u64,
    pub modulus: u64,
}

/// A system `x = r_i (mod m_i)` with pairwise coprime moduli.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrtSystem {
    congruences: Vec<Congruence>,
}

impl CrtSystem {
    /// Validates the system. Residues are reduced into `[0, m)`; moduli must
    /// be at least 2 (a modulus of 1 is accepted and ignored) and pairwise
    /// coprime.
    pub fn new(congruences: impl IntoIterator<Item = (u64, u64)>) -> Result<Self> {
        let mut out: Vec<Congruence> = Vec::new();
        for (residue, modulus) in congruences {
            if modulus == 0 {
                return Err(IcgError::domain("CRT modulus must be positive"));
            }
            if modulus == 1 {
                continue;
            }
            if let Some(other) = out.iter().find(|c| gcd(c.modulus, modulus) != 1) {
                return Err(IcgError::domain(format!(
                    "CRT moduli {} and {} are not coprime",
                    other.modulus, modulus
                )));
            }
            out.push(Congruence {
                residue: residue % modulus,
                modulus,
            });
        }
        Ok(CrtSystem { congruences: out })
    }

    /// Like [`CrtSystem::new`] but residues may be negative (e.g. `-1 mod p`).
    pub fn from_signed(congruences: impl IntoIterator<Item = (i64, u64)>) -> Result<Self> {
        let mut normalized = Vec::new();
        for (r, m) in congruences {
            if m == 0 {
                return Err(IcgError::domain("CRT modulus must be positive"));
            }
            normalized.push(((r as i128).rem_euclid(m as i128) as u64, m));
        }
        Self::new(normalized)
    }

    pub fn congruences(&self) -> &[Congruence] {
        &self.congruences
    }

    pub fn modulus(&self) -> Result<u64> {
        self.congruences.iter().try_fold(1u64, |acc, c| {
            acc.checked_mul(c.modulus).ok_or(IcgError::Overflow("CRT modulus product"))
        })
    }
}

/// The unique `x` in `[0, prod m_i)` satisfying every congruence, by pairwise
/// combination.
pub fn crt_solve(system: &CrtSystem) -> Result<u64> {
    let mut x: u64 = 0;
    let mut m: u64 = 1;
    for c in system.congruences() {
        let combined = m
            .checked_mul(c.modulus)
            .ok_or(IcgError::Overflow("CRT modulus product"))?;
        // x + m*t = r (mod m_i)  =>  t = (r - x) * m^{-1} (mod m_i)
        let inv = mod_inverse(m % c.modulus, c.modulus).ok_or_else(|| {
            IcgError::domain(format!("CRT modulus {} is not coprime to {}", c.modulus, m))
        })?;
        let diff = (c.residue as i128 - x as i128).rem_euclid(c.modulus as i128) as u128;
        let t = diff * inv as u128 % c.modulus as u128;
        x = (x as u128 + m as u128 * t) as u64;
        m = combined;
    }
    Ok(x)
}
