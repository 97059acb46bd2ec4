use super::Measure;
use crate::error::{Error, Result};
use crate::logprob::LogProb;
use crate::seq::Alphabet;
use crate::weights::WeightScheme;

/// Finite tail mass tolerated when a countable scheme is truncated.
pub const TAIL_TOLERANCE: f64 = 1e-12;

/// `Σ_k w_k μ_k` over a finite component list.
#[derive(Debug, Clone)]
pub struct Mixture {
    pub(crate) alphabet: Alphabet,
    pub(crate) components: Vec<Measure>,
    pub(crate) weights: Vec<f64>,
    pub(crate) log_weights: Vec<f64>,
}

impl Mixture {
    /// Mixture with weights `w_1..w_K` taken from `scheme`.
    ///
    /// Countable schemes are truncated at `K`; the dropped tail `Σ_{k>K} w_k`
    /// must stay below [`TAIL_TOLERANCE`], otherwise use [`Mixture::with_tail`].
    pub fn new(components: Vec<Measure>, scheme: &WeightScheme) -> Result<Self> {
        let k = components.len();
        if k == 0 {
            return Err(Error::Empty("mixture needs at least one component".into()));
        }
        if let Some(len) = scheme.len() {
            if len != k {
                return Err(Error::Validation(format!("{k} components but {len} weights")));
            }
        } else {
            let tail = scheme.tail(k + 1);
            if tail > TAIL_TOLERANCE {
                return Err(Error::TailBound { bound: tail, mass: 1.0 });
            }
        }
        let weights = (1..=k).map(|i| scheme.weight(i)).collect();
        Self::from_weights(components, weights)
    }

    /// `Σ_{k<=K} w_k μ_k + (Σ_{k>K} w_k) · tail`, an exact probability measure
    /// for any countable scheme.
    pub fn with_tail(components: Vec<Measure>, scheme: &WeightScheme, tail: Measure) -> Result<Self> {
        let k = components.len();
        let mut weights: Vec<f64> = (1..=k).map(|i| scheme.weight(i)).collect();
        let rest = scheme.tail(k + 1);
        let mut comps = components;
        if rest > 0.0 {
            comps.push(tail);
            weights.push(rest);
        }
        Self::from_weights(comps, weights)
    }

    /// Raw positive weights; their sum must not exceed one.
    pub fn from_weights(components: Vec<Measure>, weights: Vec<f64>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::Empty("mixture needs at least one component".into()));
        };
        let alphabet = first.alphabet();
        if components.iter().any(|c| c.alphabet() != alphabet) {
            return Err(Error::Validation("mixture components disagree on alphabet".into()));
        }
        if weights.len() != components.len() {
            return Err(Error::Validation("weights and components differ in length".into()));
        }
        if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(Error::Domain("mixture weights must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        if total > 1.0 + 1e-9 {
            return Err(Error::Validation(format!("mixture weights sum to {total} > 1")));
        }
        let log_weights = weights.iter().map(|w| w.log2()).collect();
        Ok(Mixture { alphabet, components, weights, log_weights })
    }

    pub fn components(&self) -> &[Measure] {
        &self.components
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Members of a countable family with a closed-form mixture.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    /// `ν_k`, `k >= 1`: `k` zeros followed by ones forever.
    ZerosThenOnes,
}

/// `Σ_{k>=1} w_k ν_k` evaluated exactly via the scheme's analytic tails.
#[derive(Debug, Clone, PartialEq)]
pub struct CountableFamily {
    pub(crate) kind: FamilyKind,
    pub(crate) scheme: WeightScheme,
}

impl CountableFamily {
    pub fn new(kind: FamilyKind, scheme: WeightScheme) -> Result<Self> {
        if scheme.len().is_some() {
            return Err(Error::Unsupported("countable family needs a countable weight scheme".into()));
        }
        Ok(CountableFamily { kind, scheme })
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn scheme(&self) -> &WeightScheme {
        &self.scheme
    }

    /// The `k`-th member (1-based).
    pub fn member(&self, k: usize) -> Measure {
        match self.kind {
            FamilyKind::ZerosThenOnes => Measure::zeros_then_ones(k),
        }
    }

    /// Mixture mass of a prefix summarized by its leading zero run.
    pub(crate) fn log_prob_of(&self, len: usize, zeros: usize, broken: bool) -> LogProb {
        if broken {
            return LogProb::ZERO;
        }
        if zeros == len {
            // all zeros so far: every ν_k with k >= len agrees
            LogProb(self.scheme.log_tail(len.max(1)))
        } else if zeros == 0 {
            LogProb::ZERO
        } else {
            LogProb(self.scheme.log_weight(zeros))
        }
    }
}
