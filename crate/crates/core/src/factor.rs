//! Constructing (g,f)-parity factors.
//!
//! The solver reduces the problem to perfect matching. For each vertex `v`
//! with degree `d`, lower bound `g` and effective upper bound `f'` it creates
//!
//! * `d` outer nodes, one per incident edge,
//! * `d - g` core nodes, joined to every outer node of `v`,
//! * `(f' - g) / 2` slack edges pairing consecutive core nodes,
//!
//! and every edge `uv` of the input becomes an edge between the outer node of
//! `u` for `uv` and the outer node of `v` for `uv`. An edge belongs to the
//! factor iff that outer–outer link is matched. The outer nodes not on chosen
//! links eat `d - d_F(v)` core nodes; the remaining `d_F(v) - g` cores must
//! pair up along slack edges, which forces `g <= d_F(v) <= f'` with the right
//! parity.

use std::fmt::Write as _;

use thiserror::Error;

use crate::deficiency::{
    decide_by_enumeration, deficiency, delta_for_classes, witness_from_classes, Decision, DeficiencyWitness,
};
use crate::graph::{Edge, Graph, GraphError, VertexSet};
use crate::matching::{gallai_edmonds, max_matching};
use crate::parity::{ParitySpec, SpecError};

/// Default bound on `|E|` for [`brute_force_factor`].
pub const DEFAULT_EDGE_LIMIT: usize = 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("vertex {vertex}: lower bound {lower} exceeds degree {degree}")]
    LowerBoundExceedsDegree { vertex: usize, lower: usize, degree: usize },
    #[error("graph has {m} edges, brute force is capped at {limit}")]
    TooManyEdges { m: usize, limit: usize },
}

/// A spanning subgraph given by its edge set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    edges: Vec<Edge>,
    degrees: Vec<usize>,
}

impl Factor {
    /// Edges are canonicalized and sorted. Membership in a host graph is not checked here.
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self, GraphError> {
        // Reuse the simple-graph validation for loops, repeats and bounds.
        let as_graph = Graph::new(n, edges)?;
        Ok(Factor { edges: as_graph.edges().to_vec(), degrees: as_graph.degrees() })
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }

    /// `factor <k>` followed by the edges, ascending.
    pub fn to_text(&self) -> String {
        let mut out = format!("factor {}\n", self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn parse(text: &str, n: usize) -> Result<Self, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line, header) =
            lines.next().ok_or(GraphError::Syntax { line: 1, message: "missing \"factor <k>\" header".into() })?;
        let k: usize = header
            .strip_prefix("factor")
            .and_then(|rest| rest.trim().parse().ok())
            .ok_or_else(|| GraphError::Syntax { line, message: format!("bad header {header:?}") })?;
        // Same body layout as a graph with k edges.
        let mut body = format!("{n} {k}\n");
        let mut line_of = Vec::new();
        for (line, l) in lines {
            body.push_str(l);
            body.push('\n');
            line_of.push(line);
        }
        Graph::parse(&body).map(|g| Factor { edges: g.edges().to_vec(), degrees: g.degrees() }).map_err(|e| match e {
            // Body line l sits after the synthetic header, so it came from line_of[l - 2].
            GraphError::AtLine { line: l, source } => {
                GraphError::AtLine { line: line_of.get(l.wrapping_sub(2)).copied().unwrap_or(l), source }
            }
            GraphError::Syntax { line: l, message } => {
                GraphError::Syntax { line: line_of.get(l.wrapping_sub(2)).copied().unwrap_or(l), message }
            }
            other => other,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Found(Factor),
    Infeasible,
}

impl Solution {
    pub fn is_found(&self) -> bool {
        matches!(self, Solution::Found(_))
    }

    pub fn factor(&self) -> Option<&Factor> {
        match self {
            Solution::Found(f) => Some(f),
            Solution::Infeasible => None,
        }
    }
}

/// The matching instance built from a graph and a parity spec.
#[derive(Debug, Clone)]
pub struct GadgetMap {
    pub graph: Graph,
    /// Per original edge (by edge id): the outer node at its smaller endpoint, then at its larger.
    pub edge_links: Vec<Edge>,
    /// Per original vertex: outer nodes, in the order of its neighbors.
    pub outer: Vec<Vec<usize>>,
    pub core: Vec<Vec<usize>>,
    pub slack_pairs: Vec<Vec<Edge>>,
    /// Upper bounds after clamping to the degree, parity preserved.
    pub effective_upper: Vec<usize>,
}

/// `g + 2 * floor((min(f, d) - g) / 2)`.
pub fn effective_upper(lower: usize, upper: usize, degree: usize) -> usize {
    lower + 2 * ((upper.min(degree) - lower) / 2)
}

pub fn build_parity_gadget(g: &Graph, spec: &ParitySpec) -> Result<GadgetMap, SolverError> {
    spec.check_order(g.order())?;
    let n = g.order();
    let mut next = 0usize;
    let mut outer = Vec::with_capacity(n);
    let mut core = Vec::with_capacity(n);
    let mut slack_pairs = Vec::with_capacity(n);
    let mut effective = Vec::with_capacity(n);
    let mut h_edges = Vec::new();
    for v in 0..n {
        let d = g.degree(v);
        let lo = spec.lower(v);
        if lo > d {
            return Err(SolverError::LowerBoundExceedsDegree { vertex: v, lower: lo, degree: d });
        }
        let hi = effective_upper(lo, spec.upper(v), d);
        let o: Vec<usize> = (next..next + d).collect();
        next += d;
        let c: Vec<usize> = (next..next + d - lo).collect();
        next += d - lo;
        for &x in &o {
            for &y in &c {
                h_edges.push((x, y));
            }
        }
        let pairs: Vec<Edge> = (0..(hi - lo) / 2).map(|i| (c[2 * i], c[2 * i + 1])).collect();
        h_edges.extend_from_slice(&pairs);
        outer.push(o);
        core.push(c);
        slack_pairs.push(pairs);
        effective.push(hi);
    }
    let mut edge_links = Vec::with_capacity(g.size());
    for &(u, v) in g.edges() {
        let at_u = outer[u][g.neighbors(u).binary_search(&v).expect("edge in adjacency")];
        let at_v = outer[v][g.neighbors(v).binary_search(&u).expect("edge in adjacency")];
        h_edges.push((at_u, at_v));
        edge_links.push((at_u, at_v));
    }
    let graph = Graph::new(next, h_edges)?;
    Ok(GadgetMap { graph, edge_links, outer, core, slack_pairs, effective_upper: effective })
}

/// Finds a parity factor in polynomial time, or reports that none exists.
pub fn find_parity_factor(g: &Graph, spec: &ParitySpec) -> Result<Solution, SolverError> {
    spec.check_order(g.order())?;
    if (0..g.order()).any(|v| spec.lower(v) > g.degree(v)) {
        return Ok(Solution::Infeasible);
    }
    let gadget = build_parity_gadget(g, spec)?;
    if gadget.graph.order() % 2 == 1 {
        return Ok(Solution::Infeasible);
    }
    let m = max_matching(&gadget.graph);
    if !m.is_perfect() {
        return Ok(Solution::Infeasible);
    }
    let chosen = g.edges().iter().zip(&gadget.edge_links).filter(|(_, &(x, y))| m.mate(x) == Some(y)).map(|(&e, _)| e);
    let factor = Factor::new(g.order(), chosen)?;
    debug_assert!(verify_factor(g, spec, &factor).is_ok());
    Ok(Solution::Found(factor))
}

/// Direct search over edge subsets, visited in binary reflected Gray code order.
///
/// Step `i` looks at the subset whose bit `j` is bit `j` of `i ^ (i >> 1)`
/// (bit `j` = edge id `j`); the lowest step that satisfies the definition wins.
pub fn brute_force_factor(g: &Graph, spec: &ParitySpec, edge_limit: usize) -> Result<Solution, SolverError> {
    spec.check_order(g.order())?;
    let m = g.size();
    if m > edge_limit || m >= 63 {
        return Err(SolverError::TooManyEdges { m, limit: edge_limit });
    }
    let n = g.order();
    let ok = |v: usize, d: usize| spec.lower(v) <= d && d <= spec.upper(v) && (spec.upper(v) - d) % 2 == 0;
    let mut deg = vec![0usize; n];
    let mut bad = (0..n).filter(|&v| !ok(v, 0)).count();
    let mut subset = 0u64;
    let mut step = 0u64;
    loop {
        if bad == 0 {
            let chosen = (0..m).filter(|&j| subset >> j & 1 == 1).map(|j| g.edges()[j]);
            return Ok(Solution::Found(Factor::new(n, chosen)?));
        }
        step += 1;
        if step == 1u64 << m {
            return Ok(Solution::Infeasible);
        }
        let j = step.trailing_zeros() as usize;
        subset ^= 1 << j;
        let adding = subset >> j & 1 == 1;
        let (u, v) = g.edges()[j];
        for x in [u, v] {
            let before = ok(x, deg[x]);
            if adding {
                deg[x] += 1;
            } else {
                deg[x] -= 1;
            }
            match (before, ok(x, deg[x])) {
                (true, false) => bad += 1,
                (false, true) => bad -= 1,
                _ => {}
            }
        }
    }
}

/// First violation found by [`verify_factor`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{reason}")]
pub struct FactorViolation {
    pub vertex: Option<usize>,
    pub reason: String,
}

/// Checks edge membership, then degree parity and bounds vertex by vertex.
pub fn verify_factor(g: &Graph, spec: &ParitySpec, factor: &Factor) -> Result<(), FactorViolation> {
    let n = g.order();
    if spec.len() != n || factor.degrees.len() != n {
        return Err(FactorViolation {
            vertex: None,
            reason: format!("order mismatch: graph {n}, spec {}, factor {}", spec.len(), factor.degrees.len()),
        });
    }
    if let Some(&(u, v)) = factor.edges.iter().find(|&&(u, v)| !g.has_edge(u, v)) {
        return Err(FactorViolation { vertex: Some(u), reason: format!("edge {u} {v} is not in the graph") });
    }
    for v in 0..n {
        let d = factor.degrees[v];
        let (lo, hi) = (spec.lower(v), spec.upper(v));
        let reason = if d % 2 != hi % 2 {
            format!("degree parity violation: degree {d}, required parity of {hi}")
        } else if d < lo {
            format!("degree {d} below lower bound {lo}")
        } else if d > hi {
            format!("degree {d} above upper bound {hi}")
        } else {
            continue;
        };
        return Err(FactorViolation { vertex: Some(v), reason: format!("vertex {v}: {reason}") });
    }
    Ok(())
}

/// Searches for a pair `(S, T)` with negative deficiency.
///
/// Candidates come from the Gallai–Edmonds decomposition of the gadget's
/// maximum matching, each refined by single-vertex moves. When that fails and
/// `n <= enumeration_limit`, the exhaustive sweep decides. Every returned
/// witness has been recomputed from scratch.
pub fn find_infeasibility_witness(
    g: &Graph,
    spec: &ParitySpec,
    enumeration_limit: usize,
) -> Result<Option<DeficiencyWitness>, SolverError> {
    spec.check_order(g.order())?;
    let n = g.order();
    if let Some(v) = (0..n).find(|&v| spec.lower(v) > g.degree(v)) {
        let t = VertexSet::from_sorted(vec![v]);
        let w = deficiency(g, spec, &VertexSet::empty(), &t).expect("valid sets");
        return Ok(Some(w));
    }

    let mut best: Option<(i64, Vec<u8>)> = None;
    for start in gadget_candidates(g, spec)? {
        let refined = improve_locally(g, spec, start);
        let delta = delta_for_classes(g, spec, &refined);
        if best.as_ref().is_none_or(|(d, c)| (delta, &refined) < (*d, c)) {
            best = Some((delta, refined));
        }
    }
    if let Some((delta, classes)) = best {
        if delta < 0 {
            return Ok(Some(witness_from_classes(g, spec, &classes)));
        }
    }
    if n <= enumeration_limit {
        if let Ok(Decision::Infeasible(w)) = decide_by_enumeration(g, spec, enumeration_limit) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Starting assignments: the empty pair, all-S, all-T, and classes read off
/// the barrier of the gadget graph (also with S and T exchanged).
fn gadget_candidates(g: &Graph, spec: &ParitySpec) -> Result<Vec<Vec<u8>>, SolverError> {
    let n = g.order();
    let mut out = vec![vec![0u8; n]];
    let gadget = build_parity_gadget(g, spec)?;
    let m = max_matching(&gadget.graph);
    let ge = gallai_edmonds(&gadget.graph, &m);
    let in_a = ge.a.mask(gadget.graph.order());

    let count = |nodes: &[usize]| nodes.iter().filter(|&&x| in_a[x]).count();
    let mut by_outer_all = vec![0u8; n];
    let mut by_core_any = vec![0u8; n];
    let mut by_majority = vec![0u8; n];
    for v in 0..n {
        let (o, c) = (&gadget.outer[v], &gadget.core[v]);
        let (oa, ca) = (count(o), count(c));
        by_outer_all[v] = if !o.is_empty() && oa == o.len() {
            1
        } else if ca > 0 {
            2
        } else {
            0
        };
        by_core_any[v] = if ca > 0 {
            2
        } else if oa > 0 {
            1
        } else {
            0
        };
        // Compare the fractions oa/|o| and ca/|c| without division.
        by_majority[v] = match (oa, ca) {
            (0, 0) => 0,
            _ if oa * c.len().max(1) >= ca * o.len().max(1) => 1,
            _ => 2,
        };
    }
    for classes in [by_outer_all, by_core_any, by_majority] {
        let swapped = classes.iter().map(|&c| [0, 2, 1][c as usize]).collect();
        out.push(classes);
        out.push(swapped);
    }
    out.push(vec![1u8; n]);
    out.push(vec![2u8; n]);
    Ok(out)
}

/// Above this order the pair-move phase is skipped.
const PAIR_MOVE_LIMIT: usize = 64;

/// First-improvement descent over single-vertex class changes, then over
/// changes of two vertices at once when single moves stall.
fn improve_locally(g: &Graph, spec: &ParitySpec, mut classes: Vec<u8>) -> Vec<u8> {
    let n = g.order();
    let mut current = delta_for_classes(g, spec, &classes);
    loop {
        let mut improved = false;
        for v in 0..n {
            for candidate in 0..3u8 {
                if candidate == classes[v] {
                    continue;
                }
                let kept = classes[v];
                classes[v] = candidate;
                let d = delta_for_classes(g, spec, &classes);
                if d < current {
                    current = d;
                    improved = true;
                } else {
                    classes[v] = kept;
                }
            }
        }
        if improved {
            continue;
        }
        if n > PAIR_MOVE_LIMIT || !improve_pair(g, spec, &mut classes, &mut current) {
            return classes;
        }
    }
}

fn improve_pair(g: &Graph, spec: &ParitySpec, classes: &mut [u8], current: &mut i64) -> bool {
    let n = g.order();
    for v in 0..n {
        for w in v + 1..n {
            let kept = (classes[v], classes[w]);
            for cv in (0..3u8).filter(|&c| c != kept.0) {
                for cw in (0..3u8).filter(|&c| c != kept.1) {
                    classes[v] = cv;
                    classes[w] = cw;
                    let d = delta_for_classes(g, spec, classes);
                    if d < *current {
                        *current = d;
                        return true;
                    }
                }
            }
            classes[v] = kept.0;
            classes[w] = kept.1;
        }
    }
    false
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
    fn gadget_sizes() {
        let c4 = cycle(4);
        let gadget = build_parity_gadget(&c4, &ParitySpec::constant(2, 2, 4).unwrap()).unwrap();
        assert_eq!(gadget.graph.order(), 8);
        assert!(gadget.core.iter().all(Vec::is_empty));
        // No cores: H is just the four links.
        assert_eq!(gadget.graph.size(), 4);

        let k4 = complete(4);
        let gadget = build_parity_gadget(&k4, &ParitySpec::constant(1, 3, 4).unwrap()).unwrap();
        assert_eq!(gadget.outer[0].len(), 3);
        assert_eq!(gadget.core[0].len(), 2);
        assert_eq!(gadget.slack_pairs[0].len(), 1);
        assert_eq!(gadget.graph.order(), 4 * k4.size() - 4);
    }

    #[test]
    fn lower_bound_above_degree() {
        let spec = ParitySpec::constant(3, 3, 4).unwrap();
        assert_eq!(
            build_parity_gadget(&cycle(4), &spec).unwrap_err(),
            SolverError::LowerBoundExceedsDegree { vertex: 0, lower: 3, degree: 2 }
        );
        assert_eq!(find_parity_factor(&cycle(4), &spec).unwrap(), Solution::Infeasible);
        let w = find_infeasibility_witness(&cycle(4), &spec, 0).unwrap().unwrap();
        assert!(w.delta < 0);
        assert_eq!(w.t.members(), &[0]);
    }

    #[test]
    fn effective_upper_clamps_with_parity() {
        assert_eq!(effective_upper(1, 7, 4), 3);
        assert_eq!(effective_upper(2, 6, 5), 4);
        assert_eq!(effective_upper(1, 1, 6), 1);
        assert_eq!(effective_upper(0, 2, 0), 0);
    }

    #[test]
    fn solves_small_cases() {
        let c4 = cycle(4);
        let spec = ParitySpec::constant(2, 2, 4).unwrap();
        let f = find_parity_factor(&c4, &spec).unwrap();
        assert_eq!(f.factor().unwrap().edges(), c4.edges());

        let k4 = complete(4);
        let spec = ParitySpec::constant(1, 3, 4).unwrap();
        let f = find_parity_factor(&k4, &spec).unwrap();
        assert!(verify_factor(&k4, &spec, f.factor().unwrap()).is_ok());

        let k3 = complete(3);
        let spec = ParitySpec::constant(1, 1, 3).unwrap();
        assert_eq!(find_parity_factor(&k3, &spec).unwrap(), Solution::Infeasible);
    }

    #[test]
    fn brute_force_small_cases() {
        let k2 = complete(2);
        let spec = ParitySpec::constant(1, 1, 2).unwrap();
        assert_eq!(brute_force_factor(&k2, &spec, 22).unwrap().factor().unwrap().edges(), &[(0, 1)]);
        let spec = ParitySpec::constant(1, 1, 3).unwrap();
        assert_eq!(brute_force_factor(&complete(3), &spec, 22).unwrap(), Solution::Infeasible);
        let spec = ParitySpec::constant(2, 2, 5).unwrap();
        let c5 = cycle(5);
        assert_eq!(brute_force_factor(&c5, &spec, 22).unwrap().factor().unwrap().size(), 5);
        assert_eq!(
            brute_force_factor(&complete(8), &ParitySpec::constant(1, 1, 8).unwrap(), 22),
            Err(SolverError::TooManyEdges { m: 28, limit: 22 })
        );
    }

    #[test]
    fn verify_factor_reports_first_violation() {
        let c4 = cycle(4);
        let spec = ParitySpec::constant(2, 2, 4).unwrap();
        let all = Factor::new(4, c4.edges().iter().copied()).unwrap();
        assert!(verify_factor(&c4, &spec, &all).is_ok());
        let three = Factor::new(4, c4.edges()[..3].iter().copied()).unwrap();
        let err = verify_factor(&c4, &spec, &three).unwrap_err();
        assert!(err.reason.contains("parity"), "{}", err.reason);
        let foreign = Factor::new(4, [(0, 2)]).unwrap();
        assert!(verify_factor(&c4, &spec, &foreign).unwrap_err().reason.contains("not in the graph"));
    }

    #[test]
    fn factor_text_round_trip() {
        let f = Factor::new(5, [(3, 1), (0, 4)]).unwrap();
        assert_eq!(f.to_text(), "factor 2\n0 4\n1 3\n");
        assert_eq!(Factor::parse(&f.to_text(), 5).unwrap(), f);
        assert!(Factor::parse("factor 1\n0 9\n", 5).is_err());
        assert!(Factor::parse("factor 2\n0 1\n", 5).is_err());
    }
}
