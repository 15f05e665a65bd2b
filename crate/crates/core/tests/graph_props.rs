use icg::numtheory::factorize;
use icg::{degree_formula, DivisorSet, IcgInstance};
use rayon::prelude::*;

mod common;

#[test]
fn symbol_set_is_closed_under_negation() {
    for n in 2..=120u64 {
        let divisors = common::divisors_below(n);
        for d in common::subsets(&divisors).take(512) {
            let g = IcgInstance::new(n, &d).unwrap();
            for &s in g.symbols() {
                assert!(g.symbols().binary_search(&(n - s)).is_ok(), "n = {n}, D = {d:?}");
            }
        }
    }
}

#[test]
fn degree_matches_neighbor_count_for_singletons_and_pairs() {
    (2..=300u64).into_par_iter().for_each(|n| {
        let divisors = common::divisors_below(n);
        let mut sets: Vec<Vec<u64>> = divisors.iter().map(|&d| vec![d]).collect();
        for (i, &a) in divisors.iter().enumerate() {
            for &b in &divisors[i + 1..] {
                sets.push(vec![a, b]);
            }
        }
        for d in sets {
            let g = IcgInstance::new(n, &d).unwrap();
            let neighbors = (1..n).filter(|&v| d.contains(&common::gcd(v, n))).count();
            assert_eq!(g.degree(), neighbors, "n = {n}, D = {d:?}");
            let ds = DivisorSet::new(n, &d).unwrap();
            assert_eq!(degree_formula(&ds), neighbors as u64, "n = {n}, D = {d:?}");
        }
    });
}

#[test]
fn connectivity_matches_reachability() {
    (2..=200u64).into_par_iter().for_each(|n| {
        let f = factorize(n).unwrap();
        let divisors = f.proper_divisors();
        for d in common::subsets(&divisors) {
            let g = IcgInstance::from_parts(f.clone(), DivisorSet::new(n, &d).unwrap());
            let reachable = icg::bfs_profile(&g).all_reachable();
            assert_eq!(g.is_connected(), reachable, "n = {n}, D = {d:?}");
        }
    });
}
