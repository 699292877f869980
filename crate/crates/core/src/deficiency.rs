//! Lovász deficiency for (g,f)-parity factors.
//!
//! For disjoint `S`, `T`:
//!
//! ```text
//! δ(S,T) = f(S) + Σ_{x∈T} d_G(x) − g(T) − e_G(S,T) − τ(S,T)
//! ```
//!
//! where `τ` counts the f-odd components `C` of `G − (S ∪ T)`, those with
//! `e_G(C,T) + f(C)` odd. A parity factor exists iff `δ(S,T) >= 0` for every
//! pair, and `δ(S,T) ≡ f(V) (mod 2)` always. All arithmetic is on integers.

use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{component_labels, Graph, GraphError, VertexSet};
use crate::parity::{ParitySpec, SpecError};

/// Default bound on `n` for the `3^n` sweep.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 15;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("graph has {n} vertices, enumeration is capped at {limit}")]
    GraphTooLargeForEnumeration { n: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeficiencyWitness {
    pub s: VertexSet,
    pub t: VertexSet,
    pub delta: i64,
    pub tau: usize,
    /// The f-odd components counted by `tau`. Empty when parsed from text.
    pub odd_components: Vec<VertexSet>,
}

impl DeficiencyWitness {
    /// `S: ..`, `T: ..`, `delta: ..`, `tau: ..`, one per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "S:{}", prefixed(&self.s));
        let _ = writeln!(out, "T:{}", prefixed(&self.t));
        let _ = writeln!(out, "delta: {}", self.delta);
        let _ = writeln!(out, "tau: {}", self.tau);
        out
    }

    pub fn parse(text: &str, n: usize) -> Result<Self, GraphError> {
        let mut s = None;
        let mut t = None;
        let mut delta = None;
        let mut tau = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let syntax = |message: String| GraphError::Syntax { line, message };
            let (key, value) =
                body.split_once(':').ok_or_else(|| syntax(format!("expected \"key: value\", got {body:?}")))?;
            let value = value.trim();
            match key.trim() {
                "S" | "T" => {
                    let ids: Result<Vec<usize>, _> = value.split_whitespace().map(str::parse).collect();
                    let ids = ids.map_err(|_| syntax(format!("invalid vertex list {value:?}")))?;
                    let set = VertexSet::new(n, ids).map_err(|e| GraphError::AtLine { line, source: Box::new(e) })?;
                    if key.trim() == "S" {
                        s = Some(set);
                    } else {
                        t = Some(set);
                    }
                }
                "delta" => delta = Some(value.parse().map_err(|_| syntax(format!("invalid delta {value:?}")))?),
                "tau" => tau = Some(value.parse().map_err(|_| syntax(format!("invalid tau {value:?}")))?),
                other => return Err(syntax(format!("unknown key {other:?}"))),
            }
        }
        let missing = |what: &str| GraphError::Syntax {
            line: text.lines().count().max(1),
            message: format!("witness lacks {what}"),
        };
        Ok(DeficiencyWitness {
            s: s.ok_or_else(|| missing("S"))?,
            t: t.ok_or_else(|| missing("T"))?,
            delta: delta.ok_or_else(|| missing("delta"))?,
            tau: tau.ok_or_else(|| missing("tau"))?,
            odd_components: Vec::new(),
        })
    }
}

fn prefixed(set: &VertexSet) -> String {
    set.iter().map(|v| format!(" {v}")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Feasible,
    Infeasible(DeficiencyWitness),
}

fn check_inputs(g: &Graph, spec: &ParitySpec, s: &VertexSet, t: &VertexSet) -> Result<(), OracleError> {
    spec.check_order(g.order())?;
    // Bounds and disjointness.
    g.edges_between(s, t)?;
    Ok(())
}

/// The f-odd components of `G − (S ∪ T)` and their number `τ`.
pub fn f_odd_components(
    g: &Graph,
    spec: &ParitySpec,
    s: &VertexSet,
    t: &VertexSet,
) -> Result<(usize, Vec<VertexSet>), OracleError> {
    check_inputs(g, spec, s, t)?;
    let components = g.components_after_removal(&s.union(t))?;
    let odd: Vec<VertexSet> = components
        .into_iter()
        .map(|c| c.vertices)
        .filter(|c| (g.edges_between(c, t).expect("component avoids T") + spec.upper_sum(c.iter())) % 2 == 1)
        .collect();
    Ok((odd.len(), odd))
}

pub fn deficiency(
    g: &Graph,
    spec: &ParitySpec,
    s: &VertexSet,
    t: &VertexSet,
) -> Result<DeficiencyWitness, OracleError> {
    check_inputs(g, spec, s, t)?;
    let (tau, odd_components) = f_odd_components(g, spec, s, t)?;
    let f_s = spec.upper_sum(s.iter()) as i64;
    let deg_t: i64 = t.iter().map(|x| g.degree(x) as i64).sum();
    let g_t = spec.lower_sum(t.iter()) as i64;
    let e_st = g.edges_between(s, t)? as i64;
    let delta = f_s + deg_t - g_t - e_st - tau as i64;
    debug_assert_eq!((delta - spec.upper_sum(0..g.order()) as i64).rem_euclid(2), 0, "deficiency parity");
    Ok(DeficiencyWitness { s: s.clone(), t: t.clone(), delta, tau, odd_components })
}

/// Exhaustive check of every disjoint `(S, T)`.
///
/// Assignments are coded in base 3 with vertex 0 as the most significant digit
/// (0 = neither, 1 = in S, 2 = in T), so comparing codes compares assignments
/// lexicographically. The reported witness minimizes `(δ, code)`.
pub fn decide_by_enumeration(g: &Graph, spec: &ParitySpec, limit: usize) -> Result<Decision, OracleError> {
    let n = g.order();
    spec.check_order(n)?;
    if n > limit || n > 39 {
        return Err(OracleError::GraphTooLargeForEnumeration { n, limit });
    }
    let total = 3u64.pow(n as u32);
    let best = (0..total)
        .into_par_iter()
        .map_init(|| Scratch::new(n), |scratch, code| (scratch.delta_for_code(g, spec, code), code))
        .min()
        .expect("at least the empty assignment");
    if best.0 >= 0 {
        return Ok(Decision::Feasible);
    }
    let (s, t) = decode(n, best.1);
    let w = deficiency(g, spec, &s, &t)?;
    debug_assert_eq!(w.delta, best.0);
    Ok(Decision::Infeasible(w))
}

fn decode(n: usize, mut code: u64) -> (VertexSet, VertexSet) {
    let mut s = Vec::new();
    let mut t = Vec::new();
    for v in (0..n).rev() {
        match code % 3 {
            1 => s.push(v),
            2 => t.push(v),
            _ => {}
        }
        code /= 3;
    }
    s.reverse();
    t.reverse();
    (VertexSet::from_sorted(s), VertexSet::from_sorted(t))
}

/// Per-thread buffers for the enumeration sweep.
struct Scratch {
    class: Vec<u8>,
    removed: Vec<bool>,
    parity: Vec<usize>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Scratch { class: vec![0; n], removed: vec![false; n], parity: Vec::new() }
    }

    fn delta_for_code(&mut self, g: &Graph, spec: &ParitySpec, mut code: u64) -> i64 {
        for v in (0..g.order()).rev() {
            self.class[v] = (code % 3) as u8;
            code /= 3;
        }
        self.delta(g, spec)
    }

    fn delta(&mut self, g: &Graph, spec: &ParitySpec) -> i64 {
        let n = g.order();
        let class = &self.class;
        let to_t = |v: usize| g.neighbors(v).iter().filter(|&&w| class[w] == 2).count();
        let mut delta: i64 = 0;
        for v in 0..n {
            self.removed[v] = class[v] != 0;
            match class[v] {
                1 => delta += spec.upper(v) as i64 - to_t(v) as i64,
                2 => delta += g.degree(v) as i64 - spec.lower(v) as i64,
                _ => {}
            }
        }
        let (labels, count) = component_labels(g, &self.removed);
        self.parity.clear();
        self.parity.resize(count, 0);
        for v in 0..n {
            if labels[v] != usize::MAX {
                self.parity[labels[v]] += spec.upper(v) + to_t(v);
            }
        }
        delta - self.parity.iter().filter(|&&p| p % 2 == 1).count() as i64
    }
}

/// Why a witness fails to prove infeasibility.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{reason}")]
pub struct WitnessRejection {
    pub reason: String,
}

fn reject(reason: impl Into<String>) -> WitnessRejection {
    WitnessRejection { reason: reason.into() }
}

/// Recomputes `δ(S,T)`; accepts iff it matches the record and is negative.
pub fn verify_witness(g: &Graph, spec: &ParitySpec, w: &DeficiencyWitness) -> Result<(), WitnessRejection> {
    let fresh = deficiency(g, spec, &w.s, &w.t).map_err(|e| reject(format!("malformed witness: {e}")))?;
    if fresh.delta != w.delta {
        return Err(reject(format!("delta mismatch: recorded {}, recomputed {}", w.delta, fresh.delta)));
    }
    if fresh.tau != w.tau {
        return Err(reject(format!("tau mismatch: recorded {}, recomputed {}", w.tau, fresh.tau)));
    }
    if !w.odd_components.is_empty() && w.odd_components != fresh.odd_components {
        return Err(reject("odd component list mismatch"));
    }
    if w.delta >= 0 {
        return Err(reject(format!("delta = {} is not negative, not an infeasibility proof", w.delta)));
    }
    Ok(())
}

/// Builds a witness from assignment classes (0 = neither, 1 = S, 2 = T).
pub(crate) fn witness_from_classes(g: &Graph, spec: &ParitySpec, class: &[u8]) -> DeficiencyWitness {
    let pick = |c: u8| VertexSet::from_sorted((0..class.len()).filter(|&v| class[v] == c).collect());
    deficiency(g, spec, &pick(1), &pick(2)).expect("classes give disjoint in-range sets")
}

/// `δ` for an assignment, without building component lists.
pub(crate) fn delta_for_classes(g: &Graph, spec: &ParitySpec, class: &[u8]) -> i64 {
    let mut scratch = Scratch::new(g.order());
    scratch.class.copy_from_slice(class);
    scratch.delta(g, spec)
}
