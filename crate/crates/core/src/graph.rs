//! Simple undirected graphs on dense vertex ids `0..n`.

use std::collections::VecDeque;
use std::fmt::{self, Write as _};

use thiserror::Error;

/// An undirected edge stored with `u < v`.
pub type Edge = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("loop edge at vertex {vertex}")]
    LoopEdge { vertex: usize },
    #[error("duplicate edge {{{u},{v}}}")]
    DuplicateEdge { u: usize, v: usize },
    #[error("vertex {vertex} out of range for graph of order {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("vertex sets are not disjoint (both contain {vertex})")]
    SetsNotDisjoint { vertex: usize },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<GraphError>,
    },
}

/// Sorted, duplicate-free list of vertex ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn empty() -> Self {
        VertexSet(Vec::new())
    }

    /// Builds a set of vertices of a graph of order `n`. Input order and repeats are irrelevant.
    pub fn new(n: usize, members: impl IntoIterator<Item = usize>) -> Result<Self, GraphError> {
        let mut v: Vec<usize> = members.into_iter().collect();
        if let Some(&bad) = v.iter().find(|&&x| x >= n) {
            return Err(GraphError::VertexOutOfRange { vertex: bad, n });
        }
        v.sort_unstable();
        v.dedup();
        Ok(VertexSet(v))
    }

    /// Caller guarantees the members are sorted and unique.
    pub(crate) fn from_sorted(members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        VertexSet(members)
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    /// Membership mask over `0..n`.
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &v in &self.0 {
            m[v] = true;
        }
        m
    }

    /// Vertices of `0..n` not in this set.
    pub fn complement(&self, n: usize) -> VertexSet {
        let mask = self.mask(n);
        VertexSet((0..n).filter(|&v| !mask[v]).collect())
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    /// First common member, if any.
    pub fn common_member(&self, other: &VertexSet) -> Option<usize> {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return Some(self.0[i]),
            }
        }
        None
    }

    fn check_bounds(&self, n: usize) -> Result<(), GraphError> {
        match self.0.last() {
            Some(&v) if v >= n => Err(GraphError::VertexOutOfRange { vertex: v, n }),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for VertexSet {
    /// Space-separated ascending ids.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_char(' ')?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// A simple undirected graph. Immutable once built.
///
/// Edges are kept in lexicographic order with `u < v` inside each pair, so an
/// edge's position in [`Graph::edges`] is a stable edge id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph, rejecting loops, repeated pairs and out-of-range endpoints.
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut edges = Vec::new();
        for (u, v) in pairs {
            edges.push(canonical_pair(n, u, v)?);
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge { u: w[0].0, v: w[0].1 });
        }
        Ok(Self::from_sorted_edges(n, edges))
    }

    fn from_sorted_edges(n: usize, edges: Vec<Edge>) -> Self {
        let mut adj = vec![Vec::new(); n];
        // Pushing in lexicographic edge order leaves every list sorted.
        for &(u, v) in &edges {
            adj[u].push(v);
        }
        for &(u, v) in &edges {
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbors of `v`, ascending.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Position of edge `{u,v}` in [`Graph::edges`].
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edges.binary_search(&key).ok()
    }

    /// `Some(r)` when every vertex has degree `r`. The empty graph is not regular.
    pub fn regularity(&self) -> Option<usize> {
        let r = self.adj.first()?.len();
        self.adj.iter().all(|a| a.len() == r).then_some(r)
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || component_labels(self, &vec![false; self.n]).1 == 1
    }

    /// Number of edges with one end in `s` and the other in `t`.
    pub fn edges_between(&self, s: &VertexSet, t: &VertexSet) -> Result<usize, GraphError> {
        s.check_bounds(self.n)?;
        t.check_bounds(self.n)?;
        if let Some(vertex) = s.common_member(t) {
            return Err(GraphError::SetsNotDisjoint { vertex });
        }
        let in_t = t.mask(self.n);
        Ok(s.iter().map(|u| self.adj[u].iter().filter(|&&w| in_t[w]).count()).sum())
    }

    /// Connected components of `G - removed`, ordered by smallest member.
    pub fn components_after_removal(&self, removed: &VertexSet) -> Result<Vec<Component>, GraphError> {
        removed.check_bounds(self.n)?;
        let (labels, count) = component_labels(self, &removed.mask(self.n));
        Ok(group_by_label(&labels, count)
            .into_iter()
            .map(|members| self.induced(VertexSet::from_sorted(members)))
            .collect())
    }

    fn induced(&self, vertices: VertexSet) -> Component {
        let mut local = vec![usize::MAX; self.n];
        for (i, v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        for &(u, v) in &self.edges {
            if local[u] != usize::MAX && local[v] != usize::MAX {
                edges.push((local[u], local[v]));
            }
        }
        // Local ids preserve the original order, so the edge list stays sorted.
        let graph = Graph::from_sorted_edges(vertices.len(), edges);
        Component { vertices, graph }
    }

    /// Canonical text form: header line, then edges ascending.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(8 * (self.edges.len() + 1));
        let _ = writeln!(out, "{} {}", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Parses the `n m` / `u v` edge-list format. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut lines =
            text.lines().enumerate().map(|(i, l)| (i + 1, strip_comment(l).trim())).filter(|(_, l)| !l.is_empty());

        let (header_line, header) =
            lines.next().ok_or(GraphError::Syntax { line: 1, message: "missing header \"n m\"".into() })?;
        let (n, m) = parse_pair(header_line, header)?;

        let mut edges = Vec::with_capacity(m);
        let mut seen = std::collections::HashMap::with_capacity(m);
        for (line, body) in lines {
            if edges.len() == m {
                return Err(GraphError::Syntax { line, message: format!("more than the declared {m} edges") });
            }
            let (u, v) = parse_pair(line, body)?;
            let e = canonical_pair(n, u, v).map_err(|e| at_line(line, e))?;
            if seen.insert(e, line).is_some() {
                return Err(at_line(line, GraphError::DuplicateEdge { u: e.0, v: e.1 }));
            }
            edges.push(e);
        }
        if edges.len() != m {
            return Err(GraphError::Syntax {
                line: text.lines().count().max(1),
                message: format!("expected {m} edges, found {}", edges.len()),
            });
        }
        edges.sort_unstable();
        Ok(Self::from_sorted_edges(n, edges))
    }
}

/// A connected component with the map back to the ambient graph's ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    /// Original ids; local vertex `i` is `vertices.members()[i]`.
    pub vertices: VertexSet,
    /// Induced subgraph on local ids.
    pub graph: Graph,
}

impl Component {
    pub fn original(&self, local: usize) -> usize {
        self.vertices.members()[local]
    }

    pub fn order(&self) -> usize {
        self.vertices.len()
    }
}

fn canonical_pair(n: usize, u: usize, v: usize) -> Result<Edge, GraphError> {
    for x in [u, v] {
        if x >= n {
            return Err(GraphError::VertexOutOfRange { vertex: x, n });
        }
    }
    match u.cmp(&v) {
        std::cmp::Ordering::Equal => Err(GraphError::LoopEdge { vertex: u }),
        std::cmp::Ordering::Less => Ok((u, v)),
        std::cmp::Ordering::Greater => Ok((v, u)),
    }
}

fn at_line(line: usize, e: GraphError) -> GraphError {
    GraphError::AtLine { line, source: Box::new(e) }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn parse_pair(line: usize, body: &str) -> Result<(usize, usize), GraphError> {
    let mut it = body.split_whitespace();
    let mut next = |what: &str| -> Result<usize, GraphError> {
        let tok = it.next().ok_or_else(|| GraphError::Syntax { line, message: format!("missing {what}") })?;
        tok.parse().map_err(|_| GraphError::Syntax { line, message: format!("invalid {what} {tok:?}") })
    };
    let a = next("first integer")?;
    let b = next("second integer")?;
    if let Some(extra) = it.next() {
        return Err(GraphError::Syntax { line, message: format!("unexpected token {extra:?}") });
    }
    Ok((a, b))
}

/// Labels the vertices of `G - removed` by component. Removed vertices get
/// `usize::MAX`. Labels are assigned in order of each component's smallest vertex.
pub(crate) fn component_labels(g: &Graph, removed: &[bool]) -> (Vec<usize>, usize) {
    let mut label = vec![usize::MAX; g.n];
    let mut count = 0;
    let mut queue = VecDeque::new();
    for start in 0..g.n {
        if removed[start] || label[start] != usize::MAX {
            continue;
        }
        label[start] = count;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for &w in &g.adj[u] {
                if !removed[w] && label[w] == usize::MAX {
                    label[w] = count;
                    queue.push_back(w);
                }
            }
        }
        count += 1;
    }
    (label, count)
}

pub(crate) fn group_by_label(labels: &[usize], count: usize) -> Vec<Vec<usize>> {
    let mut groups = vec![Vec::new(); count];
    for (v, &l) in labels.iter().enumerate() {
        if l != usize::MAX {
            groups[l].push(v);
        }
    }
    groups
}
