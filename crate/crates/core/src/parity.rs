//! Per-vertex parity bounds `g(v) <= f(v)`, `g(v) ≡ f(v) (mod 2)`.

use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("vertex {vertex}: lower bound {lower} exceeds upper bound {upper}")]
    BoundsInverted { vertex: usize, lower: usize, upper: usize },
    #[error("vertex {vertex}: bounds {lower} and {upper} differ in parity")]
    ParityMismatch { vertex: usize, lower: usize, upper: usize },
    #[error("spec covers {found} vertices but the graph has {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParitySpec {
    lower: Vec<usize>,
    upper: Vec<usize>,
}

impl ParitySpec {
    pub fn new(lower: Vec<usize>, upper: Vec<usize>) -> Result<Self, SpecError> {
        if lower.len() != upper.len() {
            return Err(SpecError::LengthMismatch { expected: lower.len(), found: upper.len() });
        }
        for (vertex, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if lo > hi {
                return Err(SpecError::BoundsInverted { vertex, lower: lo, upper: hi });
            }
            if (hi - lo) % 2 != 0 {
                return Err(SpecError::ParityMismatch { vertex, lower: lo, upper: hi });
            }
        }
        Ok(ParitySpec { lower, upper })
    }

    /// `g ≡ a`, `f ≡ b` on `n` vertices: the (a,b)-parity factor problem.
    pub fn constant(a: usize, b: usize, n: usize) -> Result<Self, SpecError> {
        Self::new(vec![a; n], vec![b; n])
    }

    /// Exactly-`k` degrees.
    pub fn k_factor(k: usize, n: usize) -> Self {
        ParitySpec { lower: vec![k; n], upper: vec![k; n] }
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    pub fn lower(&self, v: usize) -> usize {
        self.lower[v]
    }

    pub fn upper(&self, v: usize) -> usize {
        self.upper[v]
    }

    pub fn lower_sum(&self, vs: impl IntoIterator<Item = usize>) -> usize {
        vs.into_iter().map(|v| self.lower[v]).sum()
    }

    pub fn upper_sum(&self, vs: impl IntoIterator<Item = usize>) -> usize {
        vs.into_iter().map(|v| self.upper[v]).sum()
    }

    /// `(a, b)` when every vertex carries the same bounds.
    pub fn as_constant(&self) -> Option<(usize, usize)> {
        let (&a, &b) = (self.lower.first()?, self.upper.first()?);
        (self.lower.iter().all(|&x| x == a) && self.upper.iter().all(|&x| x == b)).then_some((a, b))
    }

    pub fn check_order(&self, n: usize) -> Result<(), SpecError> {
        if self.len() == n {
            Ok(())
        } else {
            Err(SpecError::LengthMismatch { expected: n, found: self.len() })
        }
    }

    /// One `g f` line per vertex, `#` comments allowed.
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        let mut lower = Vec::new();
        let mut upper = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let nums: Result<Vec<usize>, _> = body.split_whitespace().map(str::parse).collect();
            match nums.as_deref() {
                Ok([lo, hi]) => {
                    lower.push(*lo);
                    upper.push(*hi);
                }
                _ => return Err(SpecError::Syntax { line: i + 1, message: format!("expected \"g f\", got {body:?}") }),
            }
        }
        Self::new(lower, upper)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (lo, hi) in self.lower.iter().zip(&self.upper) {
            let _ = writeln!(out, "{lo} {hi}");
        }
        out
    }
}
