//! Finite-alphabet process measures exposed through prefix probabilities.
//!
//! A [`Measure`] assigns `log2 μ(x_{1..n})` to every finite prefix. All
//! families are consistent, `Σ_a μ(x·a) = μ(x)`, so conditionals
//! `μ(a | x) = μ(x·a) / μ(x)` are well defined wherever `μ(x) > 0`.
//!
//! Evaluation is incremental: [`Measure::start`] yields a [`Cursor`] for the
//! empty prefix and [`Measure::advance`] extends it by one symbol, so walking
//! the prefix tree of `X^n` costs one step per node.

mod deterministic;
pub mod descriptor;
pub mod enumerate;
mod horizon;
mod iid;
mod markov;
mod mixture;

pub use deterministic::{Deterministic, Generator};
pub use enumerate::{check_consistency, distribution, log_distribution, sample, walk_leaves, ConsistencyReport};
pub use horizon::FiniteHorizon;
pub use iid::{Harmonic, Iid, IidKind, Laplace};
pub use markov::Markov;
pub use mixture::{CountableFamily, FamilyKind, Mixture, TAIL_TOLERANCE};

use crate::error::{Error, Result};
use crate::logprob::{log_sum_exp2, LogProb};
use crate::seq::{Alphabet, Seq, Symbol};
use crate::weights::WeightScheme;
use std::sync::Arc;

/// A stochastic process on `X^∞`, given by its finite-prefix probabilities.
///
/// Cloning is cheap: large tables and mixtures sit behind `Arc`.
#[derive(Debug, Clone)]
pub enum Measure {
    Iid(Arc<Iid>),
    Markov(Arc<Markov>),
    Deterministic(Arc<Deterministic>),
    Laplace(Laplace),
    Harmonic(Harmonic),
    Horizon(Arc<FiniteHorizon>),
    Mixture(Arc<Mixture>),
    Family(Arc<CountableFamily>),
}

/// Evaluation state after reading a prefix.
#[derive(Debug, Clone)]
pub struct Cursor {
    len: usize,
    log_prob: LogProb,
    state: State,
}

#[derive(Debug, Clone)]
enum State {
    Empty,
    Index(usize),
    Counts(Vec<u32>),
    Zeros { zeros: usize, broken: bool },
    Mixture(Vec<Cursor>),
}

impl Cursor {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `log2` probability of the prefix read so far.
    pub fn log_prob(&self) -> LogProb {
        self.log_prob
    }
}

impl Measure {
    /// Binary i.i.d. with `P(0) = p`.
    pub fn bernoulli(p: f64) -> Result<Measure> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("Bernoulli parameter {p} outside [0,1]")));
        }
        Ok(Measure::Iid(Arc::new(Iid::new(vec![p, 1.0 - p], IidKind::Bernoulli)?)))
    }

    pub fn uniform_iid(alphabet: Alphabet) -> Measure {
        let q = alphabet.size();
        Measure::Iid(Arc::new(Iid::new(vec![1.0 / q as f64; q], IidKind::Uniform).expect("uniform is valid")))
    }

    pub fn iid(probs: Vec<f64>) -> Result<Measure> {
        Ok(Measure::Iid(Arc::new(Iid::new(probs, IidKind::General)?)))
    }

    /// Order-`k` Markov measure; `table` has `|X|^k` rows, `initial` is a law on `X^k`.
    pub fn markov(alphabet: Alphabet, order: usize, table: Vec<Vec<f64>>, initial: Vec<f64>) -> Result<Measure> {
        Ok(Measure::Markov(Arc::new(Markov::new(alphabet, order, table, initial)?)))
    }

    /// Order-`k` Markov measure started from its stationary law.
    pub fn stationary_markov(alphabet: Alphabet, order: usize, table: Vec<Vec<f64>>) -> Result<Measure> {
        Ok(Measure::Markov(Arc::new(Markov::stationary(alphabet, order, table)?)))
    }

    pub fn deterministic(alphabet: Alphabet, generator: Generator) -> Result<Measure> {
        if let Some(m) = generator.max_symbol() {
            if m >= alphabet.size() {
                return Err(Error::Domain(format!("generator emits symbol {m} outside alphabet")));
            }
        }
        if let Generator::Periodic(p) = &generator {
            if p.is_empty() {
                return Err(Error::Empty("periodic pattern".into()));
            }
        }
        Ok(Measure::Deterministic(Arc::new(Deterministic { alphabet, generator })))
    }

    /// The binary measure emitting only `s`.
    pub fn constant(s: Symbol) -> Measure {
        Measure::deterministic(Alphabet::BINARY, Generator::Constant(s)).expect("binary constant")
    }

    /// `ν_k`: `k` zeros, then ones.
    pub fn zeros_then_ones(k: usize) -> Measure {
        Measure::deterministic(Alphabet::BINARY, Generator::Run { head: 0, count: k, tail: 1 }).expect("binary run")
    }

    pub fn laplace(alphabet: Alphabet) -> Measure {
        Measure::Laplace(Laplace { alphabet })
    }

    /// Binary measure with independent `P(x_t = 0) = 1/(t + shift)`.
    pub fn harmonic(shift: u32) -> Measure {
        Measure::Harmonic(Harmonic { shift })
    }

    pub fn finite_horizon(alphabet: Alphabet, horizon: usize, table: Vec<f64>, padding: Symbol) -> Result<Measure> {
        Ok(Measure::Horizon(Arc::new(FiniteHorizon::new(alphabet, horizon, table, padding)?)))
    }

    /// Restrict `self` to `X^k` and continue with the padding symbol.
    pub fn extend_from(&self, horizon: usize, padding: Symbol) -> Result<Measure> {
        let table = distribution(self, horizon)?;
        Measure::finite_horizon(self.alphabet(), horizon, table, padding)
    }

    /// `Σ_k w_k μ_k`.
    pub fn mix(components: Vec<Measure>, weights: &WeightScheme) -> Result<Measure> {
        Ok(Measure::Mixture(Arc::new(Mixture::new(components, weights)?)))
    }

    pub fn mixture(mixture: Mixture) -> Measure {
        Measure::Mixture(Arc::new(mixture))
    }

    pub fn family(kind: FamilyKind, scheme: WeightScheme) -> Result<Measure> {
        Ok(Measure::Family(Arc::new(CountableFamily::new(kind, scheme)?)))
    }

    pub fn alphabet(&self) -> Alphabet {
        match self {
            Measure::Iid(m) => Alphabet::new(m.probs.len()).expect("validated"),
            Measure::Markov(m) => m.alphabet,
            Measure::Deterministic(m) => m.alphabet,
            Measure::Laplace(m) => m.alphabet,
            Measure::Harmonic(_) | Measure::Family(_) => Alphabet::BINARY,
            Measure::Horizon(m) => m.alphabet,
            Measure::Mixture(m) => m.alphabet,
        }
    }

    /// Cursor at the empty prefix.
    pub fn start(&self) -> Cursor {
        let (log_prob, state) = match self {
            Measure::Iid(_) | Measure::Harmonic(_) | Measure::Deterministic(_) => (LogProb::ONE, State::Empty),
            Measure::Markov(_) => (LogProb::ONE, State::Index(0)),
            Measure::Laplace(m) => (LogProb::ONE, State::Counts(vec![0; m.alphabet.size()])),
            Measure::Horizon(h) => (LogProb::from_prob(h.mass()), State::Index(0)),
            Measure::Mixture(m) => {
                let cs: Vec<Cursor> = m.components.iter().map(|c| c.start()).collect();
                (mixture_log_prob(m, &cs), State::Mixture(cs))
            }
            Measure::Family(f) => (f.log_prob_of(0, 0, false), State::Zeros { zeros: 0, broken: false }),
        };
        Cursor { len: 0, log_prob, state }
    }

    /// Extend `cursor` by the symbol `a`.
    pub fn advance(&self, cursor: &Cursor, a: Symbol) -> Cursor {
        let len = cursor.len + 1;
        let lp = cursor.log_prob;
        let (log_prob, state) = match (self, &cursor.state) {
            (Measure::Iid(m), _) => (lp * LogProb(m.log_probs[a]), State::Empty),
            (Measure::Markov(m), State::Index(ctx)) => {
                if cursor.len < m.order {
                    let idx = ctx * m.alphabet.size() + a;
                    (LogProb::from_prob(m.initial_levels[len][idx]), State::Index(idx))
                } else {
                    (lp * LogProb(m.log_table[*ctx][a]), State::Index(m.shift(*ctx, a)))
                }
            }
            (Measure::Deterministic(d), _) => {
                let lp = if d.generator.at(len) == a { lp } else { LogProb::ZERO };
                (lp, State::Empty)
            }
            (Measure::Laplace(l), State::Counts(counts)) => {
                let p = l.next_prob(counts, a);
                let mut counts = counts.clone();
                counts[a] += 1;
                (lp * LogProb::from_prob(p), State::Counts(counts))
            }
            (Measure::Harmonic(h), _) => (lp * LogProb::from_prob(h.prob_at(len, a)), State::Empty),
            (Measure::Horizon(h), State::Index(idx)) => {
                if cursor.len < h.horizon {
                    let idx = idx * h.alphabet.size() + a;
                    (LogProb::from_prob(h.levels[len][idx]), State::Index(idx))
                } else {
                    let lp = if a == h.padding { lp } else { LogProb::ZERO };
                    (lp, State::Index(*idx))
                }
            }
            (Measure::Mixture(m), State::Mixture(cs)) => {
                let next: Vec<Cursor> = m.components.iter().zip(cs).map(|(c, cur)| c.advance(cur, a)).collect();
                (mixture_log_prob(m, &next), State::Mixture(next))
            }
            (Measure::Family(f), State::Zeros { zeros, broken }) => {
                let all_zero = *zeros == cursor.len;
                let (zeros, broken) = match (all_zero, a) {
                    (true, 0) => (zeros + 1, *broken),
                    (true, _) => (*zeros, *broken || a != 1),
                    (false, _) => (*zeros, *broken || a != 1),
                };
                (f.log_prob_of(len, zeros, broken), State::Zeros { zeros, broken })
            }
            _ => unreachable!("cursor does not belong to this measure"),
        };
        Cursor { len, log_prob, state }
    }

    pub fn cursor_at(&self, x: &[Symbol]) -> Cursor {
        x.iter().fold(self.start(), |c, &a| self.advance(&c, a))
    }

    /// `log2 μ(x)`.
    pub fn log_prob(&self, x: &[Symbol]) -> LogProb {
        self.cursor_at(x).log_prob
    }

    pub fn prob(&self, x: &[Symbol]) -> f64 {
        self.log_prob(x).prob()
    }

    /// Joint log-probabilities of `x·a` for every symbol `a`.
    pub fn children(&self, cursor: &Cursor) -> Vec<Cursor> {
        self.alphabet().symbols().map(|a| self.advance(cursor, a)).collect()
    }

    /// Conditional law of the next symbol at `cursor`.
    pub fn next_distribution(&self, cursor: &Cursor) -> Option<Vec<f64>> {
        if cursor.log_prob.is_zero() {
            return None;
        }
        Some(self.children(cursor).iter().map(|c| (c.log_prob - cursor.log_prob).exp2()).collect())
    }

    /// `μ(· | prefix)`.
    pub fn conditional(&self, prefix: &Seq) -> Result<Vec<f64>> {
        let cursor = self.cursor_at(prefix.symbols());
        self.next_distribution(&cursor)
            .ok_or_else(|| Error::Conditioning { prefix: prefix.symbols().to_vec() })
    }

    /// Component list and weights when this is a finite mixture.
    pub fn as_mixture(&self) -> Option<&Mixture> {
        match self {
            Measure::Mixture(m) => Some(m),
            _ => None,
        }
    }
}

fn mixture_log_prob(m: &Mixture, cursors: &[Cursor]) -> LogProb {
    let terms: Vec<f64> = m
        .log_weights
        .iter()
        .zip(cursors)
        .map(|(lw, c)| if c.log_prob.is_zero() { f64::NEG_INFINITY } else { lw + c.log_prob.log2() })
        .collect();
    LogProb(log_sum_exp2(&terms))
}
