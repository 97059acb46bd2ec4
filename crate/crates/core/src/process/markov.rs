use crate::error::{Error, Result};
use crate::seq::{Alphabet, Symbol};
use nalgebra::{DMatrix, DVector};

const ROW_TOL: f64 = 1e-9;

/// Order-`k` Markov measure: an initial law over the first `k` symbols and a
/// conditional table indexed by the previous `k` symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct Markov {
    pub(crate) alphabet: Alphabet,
    pub(crate) order: usize,
    /// `table[ctx][a]`, contexts encoded lexicographically (oldest symbol most significant).
    pub(crate) table: Vec<Vec<f64>>,
    pub(crate) log_table: Vec<Vec<f64>>,
    pub(crate) initial: Vec<f64>,
    /// `initial_levels[m][i]`: marginal of the initial law on the first `m` symbols.
    pub(crate) initial_levels: Vec<Vec<f64>>,
    contexts: usize,
}

impl Markov {
    pub fn new(alphabet: Alphabet, order: usize, table: Vec<Vec<f64>>, initial: Vec<f64>) -> Result<Self> {
        let contexts = alphabet
            .atoms(order)
            .filter(|&c| c <= crate::seq::ATOM_BUDGET)
            .ok_or(Error::Budget { alphabet: alphabet.size(), horizon: order })?;
        if table.len() != contexts {
            return Err(Error::Validation(format!(
                "order-{order} table needs {contexts} rows, got {}",
                table.len()
            )));
        }
        for (c, row) in table.iter().enumerate() {
            validate_distribution(row, alphabet.size(), &format!("table row {c}"))?;
        }
        validate_distribution(&initial, contexts, "initial distribution")?;
        let log_table = table.iter().map(|r| r.iter().map(|p| p.log2()).collect()).collect();
        let initial_levels = marginal_levels(&initial, alphabet.size(), order);
        Ok(Markov { alphabet, order, table, log_table, initial, initial_levels, contexts })
    }

    /// Build with the stationary law of the context chain as initial distribution.
    pub fn stationary(alphabet: Alphabet, order: usize, table: Vec<Vec<f64>>) -> Result<Self> {
        let probe = Markov::new(alphabet, order, table, uniform(alphabet.atoms(order).unwrap_or(1)))?;
        let pi = probe.stationary_distribution()?;
        Markov::new(alphabet, order, probe.table, pi)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn table(&self) -> &[Vec<f64>] {
        &self.table
    }

    pub fn initial(&self) -> &[f64] {
        &self.initial
    }

    /// Context index after appending `a` to context `ctx`.
    #[inline]
    pub(crate) fn shift(&self, ctx: usize, a: Symbol) -> usize {
        if self.order == 0 {
            0
        } else {
            (ctx * self.alphabet.size() + a) % self.contexts
        }
    }

    /// Transition matrix of the context chain on `X^k`.
    fn context_transitions(&self) -> DMatrix<f64> {
        let m = self.contexts;
        let mut p = DMatrix::zeros(m, m);
        for ctx in 0..m {
            for a in self.alphabet.symbols() {
                p[(ctx, self.shift(ctx, a))] += self.table[ctx][a];
            }
        }
        p
    }

    /// Unique stationary law of the context chain.
    pub fn stationary_distribution(&self) -> Result<Vec<f64>> {
        let m = self.contexts;
        if m == 1 {
            return Ok(vec![1.0]);
        }
        // (Pᵀ - I) π = 0 with the last equation replaced by Σπ = 1.
        let mut a = self.context_transitions().transpose() - DMatrix::identity(m, m);
        for j in 0..m {
            a[(m - 1, j)] = 1.0;
        }
        let mut b = DVector::zeros(m);
        b[m - 1] = 1.0;
        let lu = a.lu();
        let pi = lu
            .solve(&b)
            .filter(|v| v.iter().all(|x| x.is_finite() && *x > -1e-12))
            .ok_or_else(|| Error::Validation("context chain has no unique stationary law".into()))?;
        let pi: Vec<f64> = pi.iter().map(|x| x.max(0.0)).collect();
        let total: f64 = pi.iter().sum();
        Ok(pi.into_iter().map(|x| x / total).collect())
    }

    /// Whether the initial law is invariant under one step of the chain.
    pub fn is_stationary(&self, tol: f64) -> bool {
        if self.order == 0 {
            return true;
        }
        let p = self.context_transitions();
        (0..self.contexts).all(|j| {
            let next: f64 = (0..self.contexts).map(|i| self.initial[i] * p[(i, j)]).sum();
            (next - self.initial[j]).abs() <= tol
        })
    }
}

pub(crate) fn uniform(n: usize) -> Vec<f64> {
    vec![1.0 / n as f64; n]
}

pub(crate) fn validate_distribution(row: &[f64], len: usize, what: &str) -> Result<()> {
    if row.len() != len {
        return Err(Error::Validation(format!("{what}: expected {len} entries, got {}", row.len())));
    }
    if row.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(Error::Validation(format!("{what}: entries must lie in [0,1]")));
    }
    let s: f64 = row.iter().sum();
    if (s - 1.0).abs() > ROW_TOL {
        return Err(Error::Validation(format!("{what}: sums to {s}, expected 1")));
    }
    Ok(())
}

/// Marginals of a table over `X^k` on each prefix length `0..=k`.
pub(crate) fn marginal_levels(table: &[f64], q: usize, k: usize) -> Vec<Vec<f64>> {
    let mut levels = vec![table.to_vec()];
    for _ in 0..k {
        let prev = levels.last().unwrap();
        let next: Vec<f64> = prev.chunks(q).map(|c| c.iter().sum()).collect();
        levels.push(next);
    }
    levels.reverse();
    levels
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_rows() {
        let err = Markov::new(Alphabet::BINARY, 1, vec![vec![0.6, 0.5], vec![0.5, 0.5]], vec![0.5, 0.5]);
        assert!(matches!(err, Err(Error::Validation(_))));
        let err = Markov::new(Alphabet::BINARY, 1, vec![vec![0.5, 0.5]], vec![0.5, 0.5]);
        assert!(err.is_err());
    }

    #[test]
    fn stationary_law_of_two_state_chain() {
        // P(0|0)=3/4, P(0|1)=1/4 is doubly stochastic: π = (1/2, 1/2)
        let m = Markov::stationary(Alphabet::BINARY, 1, vec![vec![0.75, 0.25], vec![0.25, 0.75]]).unwrap();
        assert!((m.initial()[0] - 0.5).abs() < 1e-12);
        // P(0|0)=0.9, P(0|1)=0.3: π0 = 0.3 / (0.1 + 0.3) = 0.75
        let m = Markov::stationary(Alphabet::BINARY, 1, vec![vec![0.9, 0.1], vec![0.3, 0.7]]).unwrap();
        assert!((m.initial()[0] - 0.75).abs() < 1e-12);
        assert!(m.is_stationary(1e-12));
    }

    #[test]
    fn reducible_chain_has_no_unique_law() {
        let r = Markov::stationary(Alphabet::BINARY, 1, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert!(r.is_err());
    }

    #[test]
    fn levels_are_marginals() {
        let lv = marginal_levels(&[0.1, 0.2, 0.3, 0.4], 2, 2);
        assert_eq!(lv[0], vec![1.0]);
        assert!((lv[1][0] - 0.3).abs() < 1e-15 && (lv[1][1] - 0.7).abs() < 1e-15);
        assert_eq!(lv[2].len(), 4);
    }
}
