//! Sufficient conditions for parity factors in edge-connected regular graphs.
//!
//! Every threshold comparison is cross-multiplied so it runs on integers:
//! `r/m <= b` becomes `r <= b*m` and `a <= r(1 - 1/m)` becomes `a*m <= r(m-1)`.
//!
//! | case      | parity of r, a, b (k)   | extra                                   |
//! |-----------|-------------------------|-----------------------------------------|
//! | Main-i    | r even, a b odd, n even | r <= b m, a m <= r (m-1)                |
//! | Main-ii   | r odd, a b even         | a m* <= r (m*-1)                        |
//! | Main-iii  | r a b odd               | r <= b m*                               |
//! | Gallai-i  | r even, k odd, n even   | r <= k m, k m <= r (m-1)                |
//! | Gallai-ii | r odd, k even           | 2 <= k, k m <= r (m-1)                  |
//! | Gallai-iii| r k odd                 | r <= k m                                |
//! | BSW-i     | r odd, k even           | 2 <= k, k m* <= r (m*-1)                |
//! | BSW-ii    | r k odd                 | r <= k m*                               |
//! | Petersen  | r even, k even          | (no connectivity needed)                |
//!
//! `m*` is the odd member of `{m, m+1}`. The k-factor cases apply to an
//! `(a, b)` request only when `a = b = k`.

use std::fmt;

use num_rational::Ratio;
use thiserror::Error;

use crate::deficiency::OracleError;
use crate::graph::{Graph, VertexSet};
use crate::parity::ParitySpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConditionError {
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("graph is not regular")]
    NotRegular,
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Case {
    MainI,
    MainII,
    MainIII,
    GallaiI,
    GallaiII,
    GallaiIII,
    BswI,
    BswII,
    Petersen,
}

impl Case {
    pub const ALL: [Case; 9] = [
        Case::MainI,
        Case::MainII,
        Case::MainIII,
        Case::GallaiI,
        Case::GallaiII,
        Case::GallaiIII,
        Case::BswI,
        Case::BswII,
        Case::Petersen,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Case::MainI => "Main-i",
            Case::MainII => "Main-ii",
            Case::MainIII => "Main-iii",
            Case::GallaiI => "Gallai-i",
            Case::GallaiII => "Gallai-ii",
            Case::GallaiIII => "Gallai-iii",
            Case::BswI => "BSW-i",
            Case::BswII => "BSW-ii",
            Case::Petersen => "Petersen",
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub fn m_star(m: usize) -> usize {
    if m % 2 == 1 {
        m
    } else {
        m + 1
    }
}

fn odd(x: usize) -> bool {
    x % 2 == 1
}

/// `r / m <= k`.
fn ratio_at_most(r: usize, m: usize, k: usize) -> bool {
    r <= k * m
}

/// `k <= r (1 - 1/m)`.
fn below_complement(k: usize, r: usize, m: usize) -> bool {
    k * m <= r * (m - 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    pub r: usize,
    pub m: usize,
    pub a: usize,
    pub b: usize,
    pub n_even: bool,
    pub m_star: usize,
    pub theta1: Ratio<i64>,
    pub theta2: Ratio<i64>,
    pub satisfied: Vec<Case>,
}

impl ConditionReport {
    pub fn holds(&self, case: Case) -> bool {
        self.satisfied.contains(&case)
    }

    pub fn any(&self) -> bool {
        !self.satisfied.is_empty()
    }

    /// Cases joined with `+`, or `-` when none holds.
    pub fn case_label(&self) -> String {
        if self.satisfied.is_empty() {
            "-".into()
        } else {
            self.satisfied.iter().map(|c| c.label()).collect::<Vec<_>>().join("+")
        }
    }
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "r={} m={} a={} b={} n_even={} m*={} theta1={} theta2={}",
            self.r, self.m, self.a, self.b, self.n_even, self.m_star, self.theta1, self.theta2
        )?;
        for case in Case::ALL {
            let applicable = !matches!(
                case,
                Case::GallaiI | Case::GallaiII | Case::GallaiIII | Case::BswI | Case::BswII | Case::Petersen
            ) || self.a == self.b;
            let status = if !applicable {
                "not applicable (a != b)"
            } else if self.holds(case) {
                "satisfied"
            } else {
                "not satisfied"
            };
            writeln!(f, "{case}: {status}")?;
        }
        Ok(())
    }
}

/// Evaluates every case for an `(a, b)` request on an `m`-edge-connected
/// `r`-regular graph. Requires `1 <= a <= b < r`, `a ≡ b (mod 2)`, `m >= 1`.
pub fn check_main_conditions(
    r: usize,
    m: usize,
    a: usize,
    b: usize,
    n_even: bool,
) -> Result<ConditionReport, ConditionError> {
    if a < 1 || a > b {
        return Err(ConditionError::HypothesisViolation(format!("need 1 <= a <= b, got a={a} b={b}")));
    }
    if (b - a) % 2 != 0 {
        return Err(ConditionError::HypothesisViolation(format!("a={a} and b={b} differ in parity")));
    }
    if b >= r {
        return Err(ConditionError::HypothesisViolation(format!("need b < r, got b={b} r={r}")));
    }
    if m < 1 {
        return Err(ConditionError::HypothesisViolation("need m >= 1".into()));
    }
    let ms = m_star(m);
    let mut satisfied = Vec::new();
    if !odd(r) && odd(a) && n_even && ratio_at_most(r, m, b) && below_complement(a, r, m) {
        satisfied.push(Case::MainI);
    }
    if odd(r) && !odd(a) && below_complement(a, r, ms) {
        satisfied.push(Case::MainII);
    }
    if odd(r) && odd(a) && ratio_at_most(r, ms, b) {
        satisfied.push(Case::MainIII);
    }
    if a == b {
        satisfied.extend(check_gallai_conditions(r, m, a, n_even)?);
        satisfied.extend(check_bsw_conditions(r, m, a)?);
        if !odd(r) && !odd(a) {
            satisfied.push(Case::Petersen);
        }
    }
    let as_ratio = |x: usize| Ratio::new(x as i64, r as i64);
    Ok(ConditionReport { r, m, a, b, n_even, m_star: ms, theta1: as_ratio(a), theta2: as_ratio(b), satisfied })
}

fn check_k(r: usize, m: usize, k: usize) -> Result<(), ConditionError> {
    if k < 1 || k >= r {
        return Err(ConditionError::HypothesisViolation(format!("need 1 <= k < r, got k={k} r={r}")));
    }
    if m < 1 {
        return Err(ConditionError::HypothesisViolation("need m >= 1".into()));
    }
    Ok(())
}

/// k-factor cases for an `m`-edge-connected `r`-regular graph.
pub fn check_gallai_conditions(r: usize, m: usize, k: usize, n_even: bool) -> Result<Vec<Case>, ConditionError> {
    check_k(r, m, k)?;
    let mut out = Vec::new();
    if !odd(r) && odd(k) && n_even && ratio_at_most(r, m, k) && below_complement(k, r, m) {
        out.push(Case::GallaiI);
    }
    if odd(r) && !odd(k) && k >= 2 && below_complement(k, r, m) {
        out.push(Case::GallaiII);
    }
    if odd(r) && odd(k) && ratio_at_most(r, m, k) {
        out.push(Case::GallaiIII);
    }
    Ok(out)
}

/// Gallai's odd-`r` cases with `m` replaced by `m*`.
pub fn check_bsw_conditions(r: usize, m: usize, k: usize) -> Result<Vec<Case>, ConditionError> {
    check_k(r, m, k)?;
    let ms = m_star(m);
    let mut out = Vec::new();
    if odd(r) && !odd(k) && k >= 2 && below_complement(k, r, ms) {
        out.push(Case::BswI);
    }
    if odd(r) && odd(k) && ratio_at_most(r, ms, k) {
        out.push(Case::BswII);
    }
    Ok(out)
}

/// Per-component quantities behind the sufficiency argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentInequality {
    pub component: VertexSet,
    pub edges_to_s: usize,
    pub edges_to_t: usize,
    /// `θ₂ e(S,C) + (1 − θ₁) e(T,C)`.
    pub weight: Ratio<i64>,
    /// `weight >= 1`.
    pub weight_at_least_one: bool,
    /// `a|C| + e(T,C)` is odd.
    pub a_odd_congruence: bool,
    /// `r|C| ≡ e(S ∪ T, C) (mod 2)`.
    pub regularity_congruence: bool,
}

/// Evaluates the component inequality and both congruences on each a-odd
/// component of `G − (S ∪ T)` under the constant spec `(a, b)`.
pub fn component_inequality_check(
    g: &Graph,
    a: usize,
    b: usize,
    s: &VertexSet,
    t: &VertexSet,
) -> Result<Vec<ComponentInequality>, ConditionError> {
    let r = g.regularity().filter(|&r| r > 0).ok_or(ConditionError::NotRegular)?;
    let spec = ParitySpec::constant(a, b, g.order()).map_err(OracleError::from)?;
    let (_, odd_components) = crate::deficiency::f_odd_components(g, &spec, s, t)?;
    let theta1 = Ratio::new(a as i64, r as i64);
    let theta2 = Ratio::new(b as i64, r as i64);
    let s_or_t = s.union(t);
    Ok(odd_components
        .into_iter()
        .map(|c| {
            let e_s = g.edges_between(s, &c).expect("disjoint");
            let e_t = g.edges_between(t, &c).expect("disjoint");
            let e_st = g.edges_between(&s_or_t, &c).expect("disjoint");
            let weight = theta2 * e_s as i64 + (Ratio::from_integer(1) - theta1) * e_t as i64;
            ComponentInequality {
                weight_at_least_one: weight >= Ratio::from_integer(1),
                a_odd_congruence: (a * c.len() + e_t) % 2 == 1,
                regularity_congruence: (r * c.len()) % 2 == e_st % 2,
                component: c,
                edges_to_s: e_s,
                edges_to_t: e_t,
                weight,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m_star_values() {
        assert_eq!(m_star(2), 3);
        assert_eq!(m_star(3), 3);
        assert_eq!(m_star(4), 5);
        assert_eq!(m_star(1), 1);
    }

    #[test]
    fn main_conditions() {
        let rep = check_main_conditions(4, 4, 1, 3, true).unwrap();
        assert!(rep.holds(Case::MainI));
        assert_eq!(rep.theta1, Ratio::new(1, 4));
        assert_eq!(rep.theta2, Ratio::new(3, 4));
        assert!(rep.to_string().contains("Main-i: satisfied"));

        let rep = check_main_conditions(6, 2, 1, 1, true).unwrap();
        assert!(!rep.holds(Case::MainI));

        let rep = check_main_conditions(3, 3, 1, 1, true).unwrap();
        assert_eq!(rep.m_star, 3);
        assert!(rep.holds(Case::MainIII));

        // Main-i needs |G| even.
        assert!(!check_main_conditions(4, 4, 1, 3, false).unwrap().holds(Case::MainI));
    }

    #[test]
    fn hypothesis_violations() {
        for (r, m, a, b) in [(4, 2, 3, 1), (4, 2, 1, 2), (4, 2, 1, 5), (4, 2, 3, 5), (4, 0, 1, 1), (4, 2, 0, 2)] {
            assert!(
                matches!(check_main_conditions(r, m, a, b, true), Err(ConditionError::HypothesisViolation(_))),
                "{r} {m} {a} {b}"
            );
        }
        assert!(check_gallai_conditions(3, 1, 3, true).is_err());
        assert!(check_bsw_conditions(3, 0, 1).is_err());
    }

    #[test]
    fn gallai_and_bsw() {
        assert!(check_gallai_conditions(4, 2, 3, true).unwrap().is_empty());
        assert_eq!(check_gallai_conditions(3, 3, 2, false).unwrap(), vec![Case::GallaiII]);
        assert!(check_gallai_conditions(3, 1, 1, true).unwrap().is_empty());
        assert_eq!(check_bsw_conditions(3, 2, 2).unwrap(), vec![Case::BswI]);
        assert!(check_bsw_conditions(5, 2, 1).unwrap().is_empty());
        assert_eq!(check_bsw_conditions(3, 3, 1).unwrap(), vec![Case::BswII]);
    }

    #[test]
    fn theta_bounds() {
        for r in 2..10 {
            for a in 1..r {
                for b in (a..r).step_by(2) {
                    let rep = check_main_conditions(r, 2, a, b, true).unwrap();
                    assert!(Ratio::from_integer(0) < rep.theta1);
                    assert!(rep.theta1 <= rep.theta2);
                    assert!(rep.theta2 < Ratio::from_integer(1));
                }
            }
        }
    }
}
