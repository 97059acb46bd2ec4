use crate::error::{Error, Result};
use crate::seq::{Alphabet, Symbol};

/// How an i.i.d. measure was specified; kept so descriptors round-trip.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IidKind {
    Bernoulli,
    Uniform,
    General,
}

/// Independent draws from a fixed distribution over the alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct Iid {
    pub(crate) kind: IidKind,
    pub(crate) probs: Vec<f64>,
    pub(crate) log_probs: Vec<f64>,
}

impl Iid {
    pub fn new(probs: Vec<f64>, kind: IidKind) -> Result<Self> {
        Alphabet::new(probs.len())?;
        if probs.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::Domain(format!("probabilities must lie in [0,1]: {probs:?}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Validation(format!("i.i.d. distribution sums to {total}")));
        }
        let log_probs = probs.iter().map(|p| p.log2()).collect();
        Ok(Iid { kind, probs, log_probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn kind(&self) -> IidKind {
        self.kind
    }
}

/// Laplace's add-one rule: `P(a | x) = (#a in x + 1) / (|x| + |X|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Laplace {
    pub(crate) alphabet: Alphabet,
}

impl Laplace {
    pub fn next_prob(&self, counts: &[u32], a: Symbol) -> f64 {
        let n: u32 = counts.iter().sum();
        (counts[a] as f64 + 1.0) / (n as f64 + self.alphabet.size() as f64)
    }
}

/// Independent binary draws with `P(x_t = 0) = 1 / (t + shift)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Harmonic {
    pub(crate) shift: u32,
}

impl Harmonic {
    /// Probability of `a` at 1-based time `t`.
    pub fn prob_at(&self, t: usize, a: Symbol) -> f64 {
        let zero = 1.0 / (t as f64 + self.shift as f64);
        if a == 0 {
            zero
        } else {
            1.0 - zero
        }
    }
}
