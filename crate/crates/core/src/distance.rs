//! Exact distances in `ICG_n(D)`.
//!
//! The graph is a circulant, so distances from vertex `u` are distances from
//! vertex 0 shifted by `u`. [`bfs_profile`] does one BFS from 0 over the
//! symbol set. [`apsp_oracle`] runs an independent BFS from every vertex over
//! explicitly built adjacency lists and exists to cross-check the former.
//!
//! BFS is level-synchronous with each frontier processed in ascending vertex
//! order and symbols in ascending order; a vertex's predecessor is the first
//! vertex that discovers it. Witness paths are therefore deterministic.

use std::fmt;
use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{IcgError, Result};
use crate::graph::IcgInstance;

/// Largest order accepted by [`apsp_oracle`] unless overridden.
pub const DEFAULT_ORACLE_BOUND: u64 = 5_000;

/// `n * |S|` above which a single BFS is considered expensive.
pub const BFS_WORK_WARN_THRESHOLD: u128 = 1_000_000_000;

const UNREACHED: u32 = u32::MAX;

/// Distances from vertex 0; `None` marks an unreachable vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceProfile {
    pub n: u64,
    pub dist: Vec<Option<u32>>,
}

impl DistanceProfile {
    pub fn get(&self, v: u64) -> Option<u32> {
        self.dist[v as usize]
    }

    pub fn all_reachable(&self) -> bool {
        self.dist.iter().all(Option::is_some)
    }

    /// Largest finite entry, or `None` if some vertex is unreachable.
    pub fn eccentricity(&self) -> Option<u32> {
        self.dist.iter().try_fold(0, |m, d| d.map(|d| m.max(d)))
    }

    /// Writes `vertex,distance` rows; unreachable vertices get `unreachable`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "vertex,distance")?;
        for (v, d) in self.dist.iter().enumerate() {
            match d {
                Some(d) => writeln!(w, "{v},{d}")?,
                None => writeln!(w, "{v},unreachable")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Diameter {
    Finite(u32),
    Infinite,
}

impl Diameter {
    pub fn finite(self) -> Option<u32> {
        match self {
            Diameter::Finite(d) => Some(d),
            Diameter::Infinite => None,
        }
    }
}

impl fmt::Display for Diameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diameter::Finite(d) => write!(f, "{d}"),
            Diameter::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for Diameter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Diameter::Finite(d) => s.serialize_u32(*d),
            Diameter::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for Diameter {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Finite(u32),
            Tag(String),
        }
        match Repr::deserialize(d)? {
            Repr::Finite(v) => Ok(Diameter::Finite(v)),
            Repr::Tag(t) if t == "infinite" => Ok(Diameter::Infinite),
            Repr::Tag(t) => Err(serde::de::Error::custom(format!("bad diameter {t:?}"))),
        }
    }
}

/// Diameter with the smallest vertex attaining the eccentricity of 0 and a
/// shortest path to it. For a disconnected graph the witness is the smallest
/// unreachable vertex and the path is empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiameterResult {
    pub value: Diameter,
    pub witness_vertex: u64,
    pub witness_path: Vec<u64>,
}

struct BfsTree {
    dist: Vec<u32>,
    parent: Vec<u64>,
}

fn bfs_tree(n: u64, symbols: &[u64]) -> BfsTree {
    let len = n as usize;
    let mut dist = vec![UNREACHED; len];
    let mut parent = vec![0u64; len];
    dist[0] = 0;
    let mut frontier = vec![0u64];
    let mut next = Vec::new();
    let mut level = 0u32;
    while !frontier.is_empty() {
        level += 1;
        for &u in &frontier {
            for &s in symbols {
                let mut v = u + s;
                if v >= n {
                    v -= n;
                }
                let slot = &mut dist[v as usize];
                if *slot == UNREACHED {
                    *slot = level;
                    parent[v as usize] = u;
                    next.push(v);
                }
            }
        }
        next.sort_unstable();
        std::mem::swap(&mut frontier, &mut next);
        next.clear();
    }
    BfsTree { dist, parent }
}

/// Eccentricity of vertex 0 given only the order and symbol set; `None` when
/// disconnected. This is the hot path of the verification sweep.
pub fn eccentricity_from_symbols(n: u64, symbols: &[u64]) -> Option<u32> {
    let len = n as usize;
    let mut seen = vec![false; len];
    seen[0] = true;
    let mut reached = 1usize;
    let mut frontier = vec![0u64];
    let mut next = Vec::new();
    let mut level = 0u32;
    while reached < len {
        if frontier.is_empty() {
            return None;
        }
        level += 1;
        for &u in &frontier {
            for &s in symbols {
                let mut v = u + s;
                if v >= n {
                    v -= n;
                }
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    next.push(v);
                }
            }
        }
        reached += next.len();
        std::mem::swap(&mut frontier, &mut next);
        next.clear();
    }
    Some(level)
}

pub fn bfs_profile(g: &IcgInstance) -> DistanceProfile {
    let tree = bfs_tree(g.n(), g.symbols());
    DistanceProfile {
        n: g.n(),
        dist: tree
            .dist
            .into_iter()
            .map(|d| (d != UNREACHED).then_some(d))
            .collect(),
    }
}

pub fn diameter(g: &IcgInstance) -> DiameterResult {
    let n = g.n();
    let tree = bfs_tree(n, g.symbols());
    if let Some(v) = tree.dist.iter().position(|&d| d == UNREACHED) {
        return DiameterResult {
            value: Diameter::Infinite,
            witness_vertex: v as u64,
            witness_path: Vec::new(),
        };
    }
    let max = tree.dist.iter().copied().max().unwrap_or(0);
    let witness = tree.dist.iter().position(|&d| d == max).unwrap_or(0) as u64;
    let mut path = vec![witness];
    let mut v = witness;
    while v != 0 {
        v = tree.parent[v as usize];
        path.push(v);
    }
    path.reverse();
    DiameterResult {
        value: Diameter::Finite(max),
        witness_vertex: witness,
        witness_path: path,
    }
}

/// Distance from `u` to `v`, read off the profile of vertex 0 at `(v - u) mod n`.
pub fn distance(g: &IcgInstance, u: u64, v: u64) -> Result<Option<u32>> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    let n = g.n();
    Ok(bfs_profile(g).get((v + n - u) % n))
}

/// Same as [`distance`] but reuses a precomputed profile.
pub fn distance_in(profile: &DistanceProfile, u: u64, v: u64) -> Option<u32> {
    let n = profile.n;
    profile.get((v + n - u) % n)
}

/// `n * |S|`, the cost of one BFS.
pub fn bfs_work(g: &IcgInstance) -> u128 {
    g.n() as u128 * g.degree() as u128
}

/// All-pairs distances. Row `u` holds distances from `u`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceTable {
    pub n: u64,
    pub rows: Vec<Vec<Option<u32>>>,
}

impl DistanceTable {
    pub fn get(&self, u: u64, v: u64) -> Option<u32> {
        self.rows[u as usize][v as usize]
    }

    /// Eccentricity of each vertex (`None` where something is unreachable).
    pub fn eccentricities(&self) -> Vec<Option<u32>> {
        self.rows
            .iter()
            .map(|row| row.iter().try_fold(0, |m, d| d.map(|d| m.max(d))))
            .collect()
    }
}

/// BFS from every vertex over adjacency lists built directly from the gcd
/// rule (no translation invariance assumed).
pub fn apsp_oracle(g: &IcgInstance, bound: u64) -> Result<DistanceTable> {
    let n = g.n();
    if n > bound {
        return Err(IcgError::Resource(format!(
            "all-pairs oracle limited to n <= {bound}, got n = {n}"
        )));
    }
    let len = n as usize;
    let adjacency: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|u| {
            (0..n)
                .filter(|&v| g.adjacent(u, v).unwrap_or(false))
                .map(|v| v as usize)
                .collect()
        })
        .collect();
    let rows = (0..len)
        .into_par_iter()
        .map(|source| {
            let mut dist = vec![None; len];
            dist[source] = Some(0u32);
            let mut queue = std::collections::VecDeque::from([source]);
            while let Some(u) = queue.pop_front() {
                let du = dist[u].unwrap_or(0);
                for &v in &adjacency[u] {
                    if dist[v].is_none() {
                        dist[v] = Some(du + 1);
                        queue.push_back(v);
                    }
                }
            }
            dist
        })
        .collect();
    Ok(DistanceTable { n, rows })
}
