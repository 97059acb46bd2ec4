use super::markov::marginal_levels;
use crate::error::{Error, Result};
use crate::seq::{Alphabet, Symbol};

/// A (sub-)probability table over `X^k` continued past `k` by emitting the
/// padding symbol with probability one.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteHorizon {
    pub(crate) alphabet: Alphabet,
    pub(crate) horizon: usize,
    pub(crate) padding: Symbol,
    /// `levels[m]` holds prefix masses over `X^m`, `m = 0..=horizon`.
    pub(crate) levels: Vec<Vec<f64>>,
}

impl FiniteHorizon {
    /// `table` is indexed lexicographically over `X^horizon` and may have total
    /// mass below one.
    pub fn new(alphabet: Alphabet, horizon: usize, table: Vec<f64>, padding: Symbol) -> Result<Self> {
        let atoms = alphabet.check_budget(horizon)?;
        if table.len() != atoms {
            return Err(Error::Validation(format!(
                "horizon-{horizon} table needs {atoms} entries, got {}",
                table.len()
            )));
        }
        if padding >= alphabet.size() {
            return Err(Error::Domain(format!("padding symbol {padding} outside alphabet")));
        }
        if table.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
            return Err(Error::Validation("table entries must be finite and non-negative".into()));
        }
        let total: f64 = table.iter().sum();
        if total > 1.0 + 1e-9 {
            return Err(Error::Validation(format!("table mass {total} exceeds 1")));
        }
        let levels = marginal_levels(&table, alphabet.size(), horizon);
        Ok(FiniteHorizon { alphabet, horizon, padding, levels })
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn padding(&self) -> Symbol {
        self.padding
    }

    /// The base table over `X^horizon`.
    pub fn table(&self) -> &[f64] {
        &self.levels[self.horizon]
    }

    pub fn mass(&self) -> f64 {
        self.levels[0][0]
    }
}
