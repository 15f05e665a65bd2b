#![allow(dead_code)]

use std::collections::VecDeque;

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn divisors_below(n: u64) -> Vec<u64> {
    (1..n).filter(|d| n % d == 0).collect()
}

/// Distances from `source`, adjacency tested pairwise by the gcd rule.
pub fn naive_distances(n: u64, d: &[u64], source: u64) -> Vec<Option<u32>> {
    let mut dist = vec![None; n as usize];
    dist[source as usize] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u as usize].unwrap();
        for v in 0..n {
            if v != u && dist[v as usize].is_none() && d.contains(&gcd((u + n - v) % n, n)) {
                dist[v as usize] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Eccentricity of 0 with the naive adjacency; `None` when disconnected.
pub fn naive_diameter(n: u64, d: &[u64]) -> Option<u32> {
    naive_distances(n, d, 0)
        .into_iter()
        .try_fold(0, |m, x| x.map(|x| m.max(x)))
}

/// All subsets of `items` as sorted vectors.
pub fn subsets(items: &[u64]) -> impl Iterator<Item = Vec<u64>> + '_ {
    (1u64..1 << items.len()).map(move |mask| {
        items
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &x)| x)
            .collect()
    })
}
