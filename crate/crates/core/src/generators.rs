//! Fixture graphs, random regular graphs, and the sharpness construction.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Edge, Graph, VertexSet};

/// Default number of pairing attempts for [`random_regular`].
pub const DEFAULT_MAX_ATTEMPTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("bad order {n} for {what}")]
    BadOrder { what: &'static str, n: usize },
    #[error("no {r}-regular graph on {n} vertices: n*r is odd")]
    ParityViolation { n: usize, r: usize },
    #[error("degree {r} needs more than {n} vertices")]
    DegreeTooLarge { n: usize, r: usize },
    #[error("no simple pairing found after {attempts} attempts")]
    RetriesExhausted { attempts: usize },
    #[error("invalid construction parameters: {0}")]
    ParamDomain(String),
}

fn build(n: usize, edges: impl IntoIterator<Item = Edge>) -> Graph {
    Graph::new(n, edges).expect("generator emits a simple graph")
}

pub fn complete_graph(n: usize) -> Result<Graph, GeneratorError> {
    if n == 0 {
        return Err(GeneratorError::BadOrder { what: "complete graph", n });
    }
    Ok(build(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))))
}

pub fn cycle(n: usize) -> Result<Graph, GeneratorError> {
    if n < 3 {
        return Err(GeneratorError::BadOrder { what: "cycle", n });
    }
    Ok(build(n, (0..n).map(|i| (i, (i + 1) % n))))
}

/// Outer 5-cycle on 0..5, spokes `i -- i+5`, inner pentagram on 5..10.
pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    build(10, outer.chain(spokes).chain(inner))
}

/// Samples a simple `r`-regular graph on `n` vertices.
///
/// Stubs are paired one at a time (Steger–Wormald): two free stubs are drawn
/// uniformly and the pair is rejected if it would form a loop or repeat an
/// edge. An attempt that runs out of admissible pairs is discarded entirely
/// and counts against `max_attempts`. Output is approximately uniform and
/// fully determined by `seed`.
pub fn random_regular(n: usize, r: usize, seed: u64, max_attempts: usize) -> Result<Graph, GeneratorError> {
    if (n * r) % 2 == 1 {
        return Err(GeneratorError::ParityViolation { n, r });
    }
    if r >= n && !(n == 0 && r == 0) {
        return Err(GeneratorError::DegreeTooLarge { n, r });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..max_attempts {
        if let Some(edges) = try_pairing(n, r, &mut rng) {
            return Ok(build(n, edges));
        }
    }
    Err(GeneratorError::RetriesExhausted { attempts: max_attempts })
}

fn try_pairing(n: usize, r: usize, rng: &mut ChaCha8Rng) -> Option<Vec<Edge>> {
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, r)).collect();
    stubs.shuffle(rng);
    let mut adjacent = vec![false; n * n];
    let mut edges = Vec::with_capacity(n * r / 2);
    while !stubs.is_empty() {
        let mut found = false;
        // Random draws first; fall back to a scan to tell "unlucky" from "stuck".
        for _ in 0..4 * stubs.len() {
            let i = rng.gen_range(0..stubs.len());
            let j = rng.gen_range(0..stubs.len());
            let (u, v) = (stubs[i], stubs[j]);
            if u != v && !adjacent[u * n + v] {
                take_pair(&mut stubs, &mut adjacent, &mut edges, n, i, j);
                found = true;
                break;
            }
        }
        if found {
            continue;
        }
        let admissible: Vec<(usize, usize)> = (0..stubs.len())
            .flat_map(|i| (i + 1..stubs.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| stubs[i] != stubs[j] && !adjacent[stubs[i] * n + stubs[j]])
            .collect();
        let &(i, j) = admissible.get(rng.gen_range(0..admissible.len().max(1)))?;
        take_pair(&mut stubs, &mut adjacent, &mut edges, n, i, j);
    }
    Some(edges)
}

fn take_pair(stubs: &mut Vec<usize>, adjacent: &mut [bool], edges: &mut Vec<Edge>, n: usize, i: usize, j: usize) {
    let (u, v) = (stubs[i], stubs[j]);
    adjacent[u * n + v] = true;
    adjacent[v * n + u] = true;
    edges.push((u.min(v), u.max(v)));
    let (hi, lo) = (i.max(j), i.min(j));
    stubs.swap_remove(hi);
    stubs.swap_remove(lo);
}

/// `r` even and at least 4, `m` even with `2 <= m <= r - 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtremalParams {
    r: usize,
    m: usize,
}

impl ExtremalParams {
    pub fn new(r: usize, m: usize) -> Result<Self, GeneratorError> {
        if r < 4 || r % 2 == 1 {
            return Err(GeneratorError::ParamDomain(format!("r = {r} must be even and at least 4")));
        }
        if m % 2 == 1 || m < 2 || m > r - 2 {
            return Err(GeneratorError::ParamDomain(format!("m = {m} must be even with 2 <= m <= {}", r - 2)));
        }
        Ok(ExtremalParams { r, m })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn m(&self) -> usize {
        self.m
    }
}

/// `K_{r+1}` minus the matching `{0,1}, {2,3}, …, {m-2,m-1}`.
pub fn j_block(r: usize, m: usize) -> Result<Graph, GeneratorError> {
    let p = ExtremalParams::new(r, m)?;
    Ok(build(p.r + 1, j_block_edges(p, 0)))
}

fn j_block_edges(p: ExtremalParams, offset: usize) -> impl Iterator<Item = Edge> {
    let k = p.r + 1;
    (0..k)
        .flat_map(move |i| (i + 1..k).map(move |j| (i, j)))
        .filter(move |&(i, j)| !(j < p.m && i % 2 == 0 && j == i + 1))
        .map(move |(i, j)| (i + offset, j + offset))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalGraph {
    pub graph: Graph,
    /// The `m` added vertices.
    pub hubs: VertexSet,
    /// Vertex sets of the `r` copies of `J(r, m)`.
    pub blocks: Vec<VertexSet>,
}

/// `r` disjoint copies of `J(r, m)` plus `m` hubs; hub `j` is joined to the
/// `j`-th deficient vertex (local id `j`) of every block.
///
/// Block `i` occupies ids `i(r+1) .. (i+1)(r+1)`; hubs are the last `m` ids.
pub fn extremal_construction(p: ExtremalParams) -> ExtremalGraph {
    let (r, m) = (p.r, p.m);
    let k = r + 1;
    let n = r * k + m;
    let mut edges: Vec<Edge> = (0..r).flat_map(|b| j_block_edges(p, b * k)).collect();
    for j in 0..m {
        let hub = r * k + j;
        edges.extend((0..r).map(|b| (b * k + j, hub)));
    }
    ExtremalGraph {
        graph: build(n, edges),
        hubs: VertexSet::from_sorted((r * k..n).collect()),
        blocks: (0..r).map(|b| VertexSet::from_sorted((b * k..(b + 1) * k).collect())).collect(),
    }
}

/// Non-isomorphic connected graphs on `1..=max_n` vertices, smallest order
/// first, stopping after `limit` graphs.
///
/// Graphs on `n + 1` vertices are grown from those on `n` by attaching a new
/// vertex to a nonempty neighbor set; every connected graph arises this way
/// since deleting a leaf of a spanning tree keeps it connected. Isomorphs are
/// removed by a canonical adjacency code (minimum over all relabelings), so
/// this is meant for `max_n <= 7`.
pub fn connected_graphs_up_to(max_n: usize, limit: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    if max_n == 0 || limit == 0 {
        return out;
    }
    let mut layer: Vec<Vec<Edge>> = vec![Vec::new()];
    out.push(build(1, []));
    for n in 1..max_n {
        let perms = permutations(n + 1);
        let mut seen = std::collections::HashSet::new();
        let mut next = Vec::new();
        for edges in &layer {
            for mask in 1u32..(1 << n) {
                let mut grown = edges.clone();
                grown.extend((0..n).filter(|&u| mask >> u & 1 == 1).map(|u| (u, n)));
                if seen.insert(canonical_code(n + 1, &grown, &perms)) {
                    out.push(build(n + 1, grown.iter().copied()));
                    if out.len() == limit {
                        return out;
                    }
                    next.push(grown);
                }
            }
        }
        layer = next;
    }
    out.truncate(limit);
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut all = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    heap_permute(n, &mut p, &mut all);
    all
}

fn heap_permute(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(p.clone());
        return;
    }
    for i in 0..k {
        heap_permute(k - 1, p, out);
        if k % 2 == 0 {
            p.swap(i, k - 1);
        } else {
            p.swap(0, k - 1);
        }
    }
}

fn canonical_code(n: usize, edges: &[Edge], perms: &[Vec<usize>]) -> u64 {
    let bit = |u: usize, v: usize| {
        let (a, b) = (u.min(v), u.max(v));
        // Index of pair (a, b) in the upper triangle, row by row.
        a * (2 * n - a - 1) / 2 + (b - a - 1)
    };
    perms.iter().map(|p| edges.iter().fold(0u64, |acc, &(u, v)| acc | 1 << bit(p[u], p[v]))).min().unwrap_or(0)
}

/// Deterministic stream of instance seeds derived from a base seed.
pub fn seed_stream(base: u64) -> impl Iterator<Item = u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    std::iter::repeat_with(move || rng.gen())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures() {
        let k5 = complete_graph(5).unwrap();
        assert_eq!(k5.size(), 10);
        assert_eq!(k5.regularity(), Some(4));
        let c6 = cycle(6).unwrap();
        assert_eq!((c6.size(), c6.regularity()), (6, Some(2)));
        let p = petersen();
        assert_eq!((p.order(), p.size(), p.regularity()), (10, 15, Some(3)));
        assert!(cycle(2).is_err());
        assert!(complete_graph(0).is_err());
    }

    #[test]
    fn random_regular_contract() {
        let g = random_regular(10, 3, 1, DEFAULT_MAX_ATTEMPTS).unwrap();
        assert_eq!(g.regularity(), Some(3));
        assert_eq!(g, random_regular(10, 3, 1, DEFAULT_MAX_ATTEMPTS).unwrap());
        assert_eq!(random_regular(5, 3, 0, 10), Err(GeneratorError::ParityViolation { n: 5, r: 3 }));
        assert_eq!(random_regular(4, 4, 0, 10), Err(GeneratorError::DegreeTooLarge { n: 4, r: 4 }));
        assert_eq!(random_regular(4, 3, 7, DEFAULT_MAX_ATTEMPTS).unwrap(), complete_graph(4).unwrap());
        for (n, r) in [(30, 8), (20, 6), (9, 8), (12, 0)] {
            assert_eq!(random_regular(n, r, 42, DEFAULT_MAX_ATTEMPTS).unwrap().degrees(), vec![r; n]);
        }
    }

    #[test]
    fn j_blocks() {
        let j = j_block(6, 2).unwrap();
        assert_eq!(j.degrees(), vec![5, 5, 6, 6, 6, 6, 6]);
        assert!(!j.has_edge(0, 1));
        assert_eq!(j_block(4, 2).unwrap().size(), 9);
        assert_eq!(j_block(8, 4).unwrap().degrees(), vec![7, 7, 7, 7, 8, 8, 8, 8, 8]);
        assert!(j_block(4, 4).is_err());
        assert!(j_block(5, 2).is_err());
        assert!(j_block(6, 3).is_err());
        assert!(j_block(6, 6).is_err());
        assert!(j_block(2, 0).is_err());
    }

    #[test]
    fn extremal_shape() {
        let x = extremal_construction(ExtremalParams::new(6, 2).unwrap());
        assert_eq!(x.graph.order(), 44);
        assert_eq!(x.graph.size(), 132);
        assert_eq!(x.graph.regularity(), Some(6));
        assert_eq!(x.hubs.members(), &[42, 43]);
        for block in &x.blocks {
            assert_eq!(x.graph.edges_between(&x.hubs, block), Ok(2));
        }
        let x = extremal_construction(ExtremalParams::new(8, 4).unwrap());
        assert_eq!(x.graph.regularity(), Some(8));
        for &hub in x.hubs.members() {
            for block in &x.blocks {
                let to_block = x.graph.neighbors(hub).iter().filter(|&&w| block.contains(w)).count();
                assert_eq!(to_block, 1);
            }
        }
    }

    #[test]
    fn small_graph_counts() {
        // Connected graphs up to isomorphism: 1, 1, 2, 6, 21, 112 on 1..=6 vertices.
        let all = connected_graphs_up_to(6, usize::MAX);
        let mut per_order = [0usize; 7];
        for g in &all {
            assert!(g.is_connected());
            per_order[g.order()] += 1;
        }
        assert_eq!(per_order, [0, 1, 1, 2, 6, 21, 112]);
        assert_eq!(connected_graphs_up_to(7, 500).len(), 500);
    }
}
