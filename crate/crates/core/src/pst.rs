//! Perfect-state-transfer admissibility as a set predicate.
//!
//! For `n = 0 (mod 4)`, `ICG_n(D)` is PST-admissible iff
//! `D = D3 + D2 + 2 D2 + 4 D2 + {n / 2^a}` with `a` in `{1, 2}`, where
//! `D3 = { d in D : n/d = 0 (mod 8) }` and
//! `D2 = { d in D : n/d = 4 (mod 8) } \ {n/4}`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::canonical::check_cap;
use crate::distance::eccentricity_from_symbols;
use crate::error::{IcgError, Result};
use crate::extremal::predict_overall_max;
use crate::graph::{DivisorSet, IcgInstance};
use crate::numtheory::Factorization;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PstDecomposition {
    pub d3tilde: Vec<u64>,
    pub d2: Vec<u64>,
    pub two_d2: Vec<u64>,
    pub four_d2: Vec<u64>,
    pub a: u32,
    pub hub: u64,
}

impl PstDecomposition {
    /// Union of the five parts, ascending.
    pub fn union(&self) -> Vec<u64> {
        let all: BTreeSet<u64> = self
            .d3tilde
            .iter()
            .chain(&self.d2)
            .chain(&self.two_d2)
            .chain(&self.four_d2)
            .chain(std::iter::once(&self.hub))
            .copied()
            .collect();
        all.into_iter().collect()
    }
}

/// The decomposition of `D` when it exists, trying `a = 1` before `a = 2`.
pub fn pst_admissible(f: &Factorization, ds: &DivisorSet) -> Option<PstDecomposition> {
    let n = f.n();
    if n % 4 != 0 {
        return None;
    }
    let d3tilde: Vec<u64> = ds.divisors().iter().copied().filter(|&d| (n / d) % 8 == 0).collect();
    let d2: Vec<u64> = ds
        .divisors()
        .iter()
        .copied()
        .filter(|&d| (n / d) % 8 == 4 && d != n / 4)
        .collect();
    let two_d2: Vec<u64> = d2.iter().map(|d| 2 * d).collect();
    let four_d2: Vec<u64> = d2.iter().map(|d| 4 * d).collect();
    (1..=2).find_map(|a| {
        let decomposition = PstDecomposition {
            d3tilde: d3tilde.clone(),
            d2: d2.clone(),
            two_d2: two_d2.clone(),
            four_d2: four_d2.clone(),
            a,
            hub: n >> a,
        };
        (decomposition.union() == ds.divisors()).then_some(decomposition)
    })
}

/// Every PST-admissible divisor set of order `n`, generated from the
/// characterization by choosing `D3`, `D2` and `a` freely. Ascending order.
pub fn enumerate_admissible(f: &Factorization, max_subsets: u64) -> Result<Vec<DivisorSet>> {
    let n = f.n();
    if n % 4 != 0 {
        return Ok(Vec::new());
    }
    check_cap(f, max_subsets)?;
    let divisors = f.proper_divisors();
    let eights: Vec<u64> = divisors.iter().copied().filter(|&d| (n / d) % 8 == 0).collect();
    let fours: Vec<u64> = divisors
        .iter()
        .copied()
        .filter(|&d| (n / d) % 8 == 4 && d != n / 4)
        .collect();
    let mut out = BTreeSet::new();
    for a in 1..=2u32 {
        for mask3 in 0u64..1 << eights.len() {
            for mask2 in 0u64..1 << fours.len() {
                let mut set: BTreeSet<u64> = BTreeSet::from([n >> a]);
                set.extend(pick(&eights, mask3));
                for d in pick(&fours, mask2) {
                    set.extend([d, 2 * d, 4 * d]);
                }
                out.insert(set.into_iter().collect::<Vec<u64>>());
            }
        }
    }
    out.into_iter().map(|d| DivisorSet::new(n, &d)).collect()
}

fn pick(items: &[u64], mask: u64) -> impl Iterator<Item = u64> + '_ {
    items
        .iter()
        .enumerate()
        .filter(move |(i, _)| mask >> i & 1 == 1)
        .map(|(_, &d)| d)
}

/// True iff no PST-admissible set with at most `k` divisors reaches the
/// maximal diameter of order `n`. Checked by BFS on every such set.
pub fn pst_never_maximal(f: &Factorization, max_subsets: u64) -> Result<bool> {
    if f.n() % 4 != 0 {
        return Err(IcgError::domain(format!("n = {} is not a multiple of 4", f.n())));
    }
    let target = predict_overall_max(f).value;
    let hit = enumerate_admissible(f, max_subsets)?
        .into_iter()
        .filter(|ds| ds.len() <= f.k())
        .any(|ds| {
            let g = IcgInstance::from_parts(f.clone(), ds);
            eccentricity_from_symbols(g.n(), g.symbols()) == Some(target)
        });
    Ok(!hit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::DEFAULT_MAX_SUBSETS;
    use crate::numtheory::factorize;

    fn set(n: u64, d: &[u64]) -> DivisorSet {
        DivisorSet::new(n, d).unwrap()
    }

    #[test]
    fn admissible_examples() {
        let f = factorize(8).unwrap();
        let dec = pst_admissible(&f, &set(8, &[1, 2])).unwrap();
        assert_eq!(dec.d3tilde, vec![1]);
        assert!(dec.d2.is_empty());
        assert_eq!((dec.a, dec.hub), (2, 2));
        assert!(pst_admissible(&f, &set(8, &[1])).is_none());
        assert!(pst_admissible(&factorize(6).unwrap(), &set(6, &[1, 3])).is_none());
        let f = factorize(12).unwrap();
        // n/1 = 12 = 4 (mod 8), so 1 in D2 drags in 2 and 4
        let dec = pst_admissible(&f, &set(12, &[1, 2, 4, 6])).unwrap();
        assert_eq!((dec.d2.as_slice(), dec.a), (&[1][..], 1));
        assert!(pst_admissible(&f, &set(12, &[1, 2, 6])).is_none());
    }

    #[test]
    fn generated_sets_are_admissible() {
        for n in (4..=64).step_by(4) {
            let f = factorize(n).unwrap();
            for ds in enumerate_admissible(&f, DEFAULT_MAX_SUBSETS).unwrap() {
                let dec = pst_admissible(&f, &ds).unwrap();
                assert_eq!(dec.union(), ds.divisors());
            }
        }
    }

    #[test]
    fn never_maximal_examples() {
        for n in [8, 12, 16] {
            assert!(pst_never_maximal(&factorize(n).unwrap(), DEFAULT_MAX_SUBSETS).unwrap());
        }
        assert!(!pst_never_maximal(&factorize(4).unwrap(), DEFAULT_MAX_SUBSETS).unwrap());
        assert!(pst_never_maximal(&factorize(6).unwrap(), DEFAULT_MAX_SUBSETS).is_err());
    }
}
