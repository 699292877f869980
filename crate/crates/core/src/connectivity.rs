//! Global edge-connectivity with a canonical minimum cut.
//!
//! `lambda` is the minimum over `t != 0` of the max-flow value between vertex 0
//! and `t`. The reported cut side is the lexicographically smallest (as a sorted
//! id list) among all minimum cuts. It is found greedily: every candidate prefix
//! is tested for extendability with one max-flow between the forced-in and
//! forced-out vertex groups.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::{Graph, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConnectivityError {
    #[error("edge connectivity needs at least 2 vertices, got {n}")]
    TooSmall { n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutCertificate {
    pub cut_side: VertexSet,
    pub cut_size: usize,
}

impl CutCertificate {
    /// Recounts the crossing edges and checks properness.
    pub fn is_consistent(&self, g: &Graph) -> bool {
        let n = g.order();
        if self.cut_side.is_empty() || self.cut_side.len() >= n {
            return false;
        }
        let other = self.cut_side.complement(n);
        g.edges_between(&self.cut_side, &other) == Ok(self.cut_size)
    }
}

pub fn edge_connectivity(g: &Graph) -> Result<(usize, CutCertificate), ConnectivityError> {
    let n = g.order();
    if n < 2 {
        return Err(ConnectivityError::TooSmall { n });
    }
    let mut net = UnitFlow::new(g);
    let mut lambda = g.min_degree();
    for t in 1..n {
        lambda = lambda.min(net.max_flow(&[0], &[t], lambda));
        if lambda == 0 {
            break;
        }
    }
    let cut_side = lexicographic_min_cut(g, &mut net, lambda);
    Ok((lambda, CutCertificate { cut_side, cut_size: lambda }))
}

pub fn is_k_edge_connected(g: &Graph, k: usize) -> bool {
    if k == 0 {
        return g.order() >= 1;
    }
    if g.order() < 2 || g.min_degree() < k {
        return false;
    }
    let mut net = UnitFlow::new(g);
    (1..g.order()).all(|t| net.max_flow(&[0], &[t], k) >= k)
}

fn lexicographic_min_cut(g: &Graph, net: &mut UnitFlow, lambda: usize) -> VertexSet {
    let n = g.order();
    let mut inside = vec![0usize];
    let mut outside: Vec<usize> = Vec::new();
    let mut in_mask = vec![false; n];
    in_mask[0] = true;
    for k in 1..n {
        // The prefix alone is the smallest possible continuation.
        if crossing(g, &in_mask) == lambda {
            break;
        }
        inside.push(k);
        if extendable(net, &inside, &outside, lambda, n) {
            in_mask[k] = true;
        } else {
            inside.pop();
            outside.push(k);
        }
    }
    debug_assert_eq!(crossing(g, &in_mask), lambda);
    VertexSet::from_sorted(inside)
}

/// Is there a proper side containing `inside`, avoiding `outside`, with `lambda` crossing edges?
fn extendable(net: &mut UnitFlow, inside: &[usize], outside: &[usize], lambda: usize, n: usize) -> bool {
    if !outside.is_empty() {
        return net.max_flow(inside, outside, lambda + 1) == lambda;
    }
    let mut mask = vec![false; n];
    for &v in inside {
        mask[v] = true;
    }
    (0..n).filter(|&t| !mask[t]).any(|t| net.max_flow(inside, &[t], lambda + 1) == lambda)
}

fn crossing(g: &Graph, side: &[bool]) -> usize {
    g.edges().iter().filter(|&&(u, v)| side[u] != side[v]).count()
}

/// Unit-capacity undirected flow network over the edges of a graph.
struct UnitFlow<'g> {
    g: &'g Graph,
    /// Net flow along each edge in its stored `u -> v` direction: -1, 0 or 1.
    flow: Vec<i8>,
    /// Edge id per adjacency slot, aligned with `g.neighbors(v)`.
    slot_edge: Vec<Vec<usize>>,
}

impl<'g> UnitFlow<'g> {
    fn new(g: &'g Graph) -> Self {
        let slot_edge = (0..g.order())
            .map(|v| {
                g.neighbors(v).iter().map(|&w| g.edge_index(v, w).expect("adjacency and edge list agree")).collect()
            })
            .collect();
        UnitFlow { g, flow: vec![0; g.size()], slot_edge }
    }

    fn residual(&self, e: usize, from: usize) -> bool {
        let forward = self.g.edges()[e].0 == from;
        if forward {
            self.flow[e] < 1
        } else {
            self.flow[e] > -1
        }
    }

    fn push(&mut self, e: usize, from: usize) {
        if self.g.edges()[e].0 == from {
            self.flow[e] += 1;
        } else {
            self.flow[e] -= 1;
        }
    }

    /// Max flow from the `sources` group to the `sinks` group, stopping once `limit` is reached.
    fn max_flow(&mut self, sources: &[usize], sinks: &[usize], limit: usize) -> usize {
        self.flow.iter_mut().for_each(|f| *f = 0);
        let n = self.g.order();
        let mut is_sink = vec![false; n];
        for &t in sinks {
            is_sink[t] = true;
        }
        let mut value = 0;
        let mut pred: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        while value < limit {
            seen.iter_mut().for_each(|s| *s = false);
            queue.clear();
            for &s in sources {
                seen[s] = true;
                pred[s] = None;
                queue.push_back(s);
            }
            let mut reached = None;
            'bfs: while let Some(u) = queue.pop_front() {
                for (slot, &w) in self.g.neighbors(u).iter().enumerate() {
                    let e = self.slot_edge[u][slot];
                    if seen[w] || !self.residual(e, u) {
                        continue;
                    }
                    seen[w] = true;
                    pred[w] = Some((u, e));
                    if is_sink[w] {
                        reached = Some(w);
                        break 'bfs;
                    }
                    queue.push_back(w);
                }
            }
            let Some(mut v) = reached else { break };
            while let Some((u, e)) = pred[v] {
                self.push(e, u);
                v = u;
            }
            value += 1;
        }
        value
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn complete(n: usize) -> Graph {
        Graph::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
    }

    #[test]
    fn cycles_and_cliques() {
        let (l, cert) = edge_connectivity(&cycle(6)).unwrap();
        assert_eq!(l, 2);
        assert_eq!(cert.cut_side.members(), &[0]);
        assert!(cert.is_consistent(&cycle(6)));
        assert_eq!(edge_connectivity(&complete(5)).unwrap().0, 4);
        assert!(!is_k_edge_connected(&cycle(6), 3));
        assert!(is_k_edge_connected(&cycle(6), 2));
        assert!(is_k_edge_connected(&cycle(6), 0));
    }

    #[test]
    fn disconnected_has_zero() {
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        let (l, cert) = edge_connectivity(&g).unwrap();
        assert_eq!(l, 0);
        assert_eq!(cert.cut_side.members(), &[0, 1]);
    }

    #[test]
    fn tie_break_prefers_short_prefix() {
        // Path 0-1-2: cuts {0} and {0,1} both have size 1.
        let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(edge_connectivity(&g).unwrap().1.cut_side.members(), &[0]);
        // Path 1-0-2: {0} has 2 crossing edges; {0,1} wins over {0,2}.
        let g = Graph::new(3, [(0, 1), (0, 2)]).unwrap();
        assert_eq!(edge_connectivity(&g).unwrap().1.cut_side.members(), &[0, 1]);
    }

    #[test]
    fn too_small() {
        assert_eq!(edge_connectivity(&Graph::new(1, []).unwrap()), Err(ConnectivityError::TooSmall { n: 1 }));
    }
}
