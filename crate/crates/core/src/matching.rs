//! Maximum cardinality matching in general graphs (Edmonds' blossom algorithm)
//! and the Gallai–Edmonds decomposition derived from a maximum matching.

use std::collections::VecDeque;

use crate::graph::{Edge, Graph, VertexSet};

const NONE: usize = usize::MAX;

/// A set of vertex-disjoint edges, stored as a mate table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    mate: Vec<usize>,
}

impl Matching {
    pub fn empty(n: usize) -> Self {
        Matching { mate: vec![NONE; n] }
    }

    /// Builds a matching from pairs; `None` if some vertex is out of range or used twice.
    pub fn from_pairs(n: usize, pairs: &[Edge]) -> Option<Self> {
        let mut mate = vec![NONE; n];
        for &(u, v) in pairs {
            if u >= n || v >= n || u == v || mate[u] != NONE || mate[v] != NONE {
                return None;
            }
            mate[u] = v;
            mate[v] = u;
        }
        Some(Matching { mate })
    }

    pub fn mate(&self, v: usize) -> Option<usize> {
        (self.mate[v] != NONE).then_some(self.mate[v])
    }

    /// Matched pairs `(u, v)` with `u < v`, ascending.
    pub fn pairs(&self) -> Vec<Edge> {
        (0..self.mate.len()).filter(|&u| self.mate[u] != NONE && u < self.mate[u]).map(|u| (u, self.mate[u])).collect()
    }

    pub fn size(&self) -> usize {
        self.mate.iter().filter(|&&m| m != NONE).count() / 2
    }

    pub fn is_perfect(&self) -> bool {
        self.mate.iter().all(|&m| m != NONE)
    }

    /// Every pair is an edge of `g` and the mate table is symmetric.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        self.mate.len() == g.order()
            && (0..g.order()).all(|u| match self.mate[u] {
                NONE => true,
                v => v < g.order() && self.mate[v] == u && g.has_edge(u, v),
            })
    }
}

/// Maximum cardinality matching. Deterministic: greedy start and root scan by ascending id.
pub fn max_matching(g: &Graph) -> Matching {
    let n = g.order();
    let mut mate = vec![NONE; n];
    for v in 0..n {
        if mate[v] == NONE {
            if let Some(&w) = g.neighbors(v).iter().find(|&&w| mate[w] == NONE) {
                mate[v] = w;
                mate[w] = v;
            }
        }
    }
    let mut search = Search::new(g);
    for root in 0..n {
        if mate[root] == NONE {
            if let Some(end) = search.augmenting_path(&mate, &[root]) {
                search.augment(&mut mate, end);
            }
        }
    }
    Matching { mate }
}

pub fn has_perfect_matching(g: &Graph) -> bool {
    g.order() % 2 == 0 && max_matching(g).is_perfect()
}

/// Gallai–Edmonds partition of the vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GallaiEdmonds {
    /// Vertices left exposed by at least one maximum matching.
    pub d: VertexSet,
    /// Neighbors of `d` outside `d`.
    pub a: VertexSet,
    /// Everything else.
    pub c: VertexSet,
}

/// Requires `m` to be a maximum matching of `g`.
pub fn gallai_edmonds(g: &Graph, m: &Matching) -> GallaiEdmonds {
    let n = g.order();
    let roots: Vec<usize> = (0..n).filter(|&v| m.mate[v] == NONE).collect();
    let mut search = Search::new(g);
    let augmented = search.augmenting_path(&m.mate, &roots);
    assert!(augmented.is_none(), "gallai_edmonds requires a maximum matching");
    let in_d = search.outer;
    let mut in_a = vec![false; n];
    for v in (0..n).filter(|&v| in_d[v]) {
        for &w in g.neighbors(v) {
            if !in_d[w] {
                in_a[w] = true;
            }
        }
    }
    let pick = |f: &dyn Fn(usize) -> bool| VertexSet::from_sorted((0..n).filter(|&v| f(v)).collect());
    GallaiEdmonds { d: pick(&|v| in_d[v]), a: pick(&|v| in_a[v]), c: pick(&|v| !in_d[v] && !in_a[v]) }
}

/// Alternating-forest search state, reused across roots.
struct Search<'g> {
    g: &'g Graph,
    parent: Vec<usize>,
    base: Vec<usize>,
    outer: Vec<bool>,
    in_blossom: Vec<bool>,
    seen: Vec<bool>,
    queue: VecDeque<usize>,
}

impl<'g> Search<'g> {
    fn new(g: &'g Graph) -> Self {
        let n = g.order();
        Search {
            g,
            parent: vec![NONE; n],
            base: (0..n).collect(),
            outer: vec![false; n],
            in_blossom: vec![false; n],
            seen: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    /// Grows an alternating forest from `roots` (all exposed). Returns the exposed
    /// endpoint of an augmenting path from a single root, or `None` when the
    /// forest is stuck. With several roots the search is only used on maximum
    /// matchings, where two trees can never touch.
    fn augmenting_path(&mut self, mate: &[usize], roots: &[usize]) -> Option<usize> {
        let n = self.g.order();
        self.parent.iter_mut().for_each(|p| *p = NONE);
        self.outer.iter_mut().for_each(|o| *o = false);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.queue.clear();
        for &r in roots {
            self.outer[r] = true;
            self.queue.push_back(r);
        }
        while let Some(v) = self.queue.pop_front() {
            for &to in self.g.neighbors(v) {
                if self.base[v] == self.base[to] || mate[v] == to {
                    continue;
                }
                let to_is_outer =
                    mate[to] == NONE && self.outer[to] || mate[to] != NONE && self.parent[mate[to]] != NONE;
                if to_is_outer {
                    let b = self.lowest_common_base(mate, v, to);
                    self.in_blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(mate, v, b, to);
                    self.mark_path(mate, to, b, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = b;
                            if !self.outer[i] {
                                self.outer[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if mate[to] == NONE {
                        return Some(to);
                    }
                    let next = mate[to];
                    self.outer[next] = true;
                    self.queue.push_back(next);
                }
            }
        }
        None
    }

    fn lowest_common_base(&mut self, mate: &[usize], a: usize, b: usize) -> usize {
        self.seen.iter_mut().for_each(|s| *s = false);
        let mut a = a;
        loop {
            a = self.base[a];
            self.seen[a] = true;
            if mate[a] == NONE {
                break;
            }
            a = self.parent[mate[a]];
        }
        let mut b = b;
        loop {
            b = self.base[b];
            if self.seen[b] {
                return b;
            }
            assert!(mate[b] != NONE, "alternating trees met: matching was not maximum");
            b = self.parent[mate[b]];
        }
    }

    fn mark_path(&mut self, mate: &[usize], mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[mate[v]]] = true;
            self.parent[v] = child;
            child = mate[v];
            v = self.parent[mate[v]];
        }
    }

    fn augment(&self, mate: &mut [usize], end: usize) {
        let mut v = end;
        while v != NONE {
            let pv = self.parent[v];
            let next = mate[pv];
            mate[v] = pv;
            mate[pv] = v;
            v = next;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Graph {
        Graph::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn small_cases() {
        assert_eq!(max_matching(&complete(4)).size(), 2);
        assert_eq!(max_matching(&cycle(5)).size(), 2);
        assert!(has_perfect_matching(&complete(2)));
        assert!(!has_perfect_matching(&complete(3)));
        assert_eq!(max_matching(&Graph::new(3, []).unwrap()).size(), 0);
    }

    #[test]
    fn needs_blossom_contraction() {
        // Triangle 0-1-2 with pendant paths; greedy picks (0,1) and the
        // augmenting path to 3..5 has to pass through the odd cycle.
        let g = Graph::new(6, [(0, 1), (1, 2), (0, 2), (2, 3), (0, 4), (4, 5)]).unwrap();
        let m = max_matching(&g);
        assert!(m.is_valid_for(&g));
        assert_eq!(m.size(), 3);
    }

    #[test]
    fn gallai_edmonds_on_star() {
        // Star K_{1,3}: leaves are in D, the center in A.
        let g = Graph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let ge = gallai_edmonds(&g, &max_matching(&g));
        assert_eq!(ge.d.members(), &[1, 2, 3]);
        assert_eq!(ge.a.members(), &[0]);
        assert!(ge.c.is_empty());
    }

    #[test]
    fn gallai_edmonds_on_perfectly_matchable() {
        let g = cycle(6);
        let ge = gallai_edmonds(&g, &max_matching(&g));
        assert!(ge.d.is_empty() && ge.a.is_empty());
        assert_eq!(ge.c.len(), 6);
    }
}
