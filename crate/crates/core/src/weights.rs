//! Positive weight sequences `w_1, w_2, ...` summing to one.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// `6 / π²`, the normalizer of `Σ k^{-2}`.
pub const QUADRATIC_NORMALIZER: f64 = 6.0 / (PI * PI);

#[derive(Debug, Clone, PartialEq)]
pub enum WeightScheme {
    /// `w_k = (6/π²) k^{-2}`, `k >= 1`.
    Quadratic,
    /// `w_k = 2^{-k}`, `k >= 1`.
    Geometric,
    /// A finite list `w_1..w_K`.
    Explicit(Vec<f64>),
}

impl WeightScheme {
    pub fn explicit(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Empty("weight list".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
            return Err(Error::Domain(format!("weights must be positive and finite, got {w}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Validation(format!("weights sum to {total}, expected 1")));
        }
        Ok(WeightScheme::Explicit(weights))
    }

    /// Normalize an arbitrary positive list.
    pub fn normalized(weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::Domain("weights must have positive total".into()));
        }
        Self::explicit(weights.into_iter().map(|w| w / total).collect())
    }

    /// Number of weights, `None` for the countable schemes.
    pub fn len(&self) -> Option<usize> {
        match self {
            WeightScheme::Explicit(w) => Some(w.len()),
            _ => None,
        }
    }

    /// `w_k` for `k >= 1`; zero past the end of an explicit list.
    pub fn weight(&self, k: usize) -> f64 {
        assert!(k >= 1, "weights are indexed from 1");
        match self {
            WeightScheme::Quadratic => QUADRATIC_NORMALIZER / (k as f64 * k as f64),
            WeightScheme::Geometric => (-(k as f64)).exp2(),
            WeightScheme::Explicit(w) => w.get(k - 1).copied().unwrap_or(0.0),
        }
    }

    /// `log2 w_k`.
    pub fn log_weight(&self, k: usize) -> f64 {
        match self {
            WeightScheme::Geometric => -(k as f64),
            _ => self.weight(k).log2(),
        }
    }

    /// Tail mass `Σ_{j >= k} w_j`, closed form for the countable schemes.
    pub fn tail(&self, k: usize) -> f64 {
        self.log_tail(k).exp2()
    }

    /// `log2 Σ_{j >= k} w_j`.
    pub fn log_tail(&self, k: usize) -> f64 {
        let k = k.max(1);
        match self {
            WeightScheme::Quadratic => QUADRATIC_NORMALIZER.log2() + trigamma(k as f64).log2(),
            WeightScheme::Geometric => -(k as f64) + 1.0,
            WeightScheme::Explicit(w) => w.iter().skip(k - 1).sum::<f64>().log2(),
        }
    }

    /// `Σ_{j <= k} w_j`.
    pub fn head(&self, k: usize) -> f64 {
        match self {
            WeightScheme::Explicit(w) => w.iter().take(k).sum(),
            _ => 1.0 - self.tail(k + 1),
        }
    }
}

/// `ψ₁(x) = Σ_{j>=0} (x+j)^{-2}` for `x >= 1`.
///
/// Upward recurrence to `x >= 16`, then the asymptotic Bernoulli series.
pub fn trigamma(mut x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut acc = 0.0;
    while x < 16.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // 1/x + 1/(2x²) + 1/(6x³) - 1/(30x⁵) + 1/(42x⁷) - 1/(30x⁹) + 5/(66x¹¹)
    let series = inv
        + 0.5 * inv2
        + inv * inv2 * (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 * (1.0 / 42.0 - inv2 * (1.0 / 30.0 - inv2 * 5.0 / 66.0))));
    acc + series
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_tail(k: usize) -> f64 {
        // Σ_{j=k}^{M} j^{-2} + ∫_M^∞ tail correction
        let m = 2_000_000usize;
        let s: f64 = (k..m).rev().map(|j| 1.0 / (j as f64 * j as f64)).sum();
        s + 1.0 / m as f64 + 0.5 / (m as f64 * m as f64)
    }

    #[test]
    fn trigamma_matches_brute_sum() {
        for k in [1usize, 2, 3, 7, 15, 16, 17, 100, 5000] {
            let exact = brute_tail(k);
            assert!((trigamma(k as f64) - exact).abs() / exact < 1e-12, "k={k}");
        }
        assert!((trigamma(1.0) - PI * PI / 6.0).abs() < 1e-15);
    }

    #[test]
    fn countable_schemes_sum_to_one() {
        assert!((WeightScheme::Quadratic.tail(1) - 1.0).abs() < 1e-14);
        assert!((WeightScheme::Geometric.tail(1) - 1.0).abs() < 1e-15);
        let head: f64 = (1..=50).map(|k| WeightScheme::Quadratic.weight(k)).sum();
        assert!((head + WeightScheme::Quadratic.tail(51) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn geometric_tail_is_exact() {
        // Σ_{k>=n} 2^{-k} = 2^{-n+1}
        for n in 1..40 {
            assert_eq!(WeightScheme::Geometric.log_tail(n), -(n as f64) + 1.0);
        }
    }

    #[test]
    fn explicit_validation() {
        assert!(WeightScheme::explicit(vec![0.5, 0.5]).is_ok());
        assert!(WeightScheme::explicit(vec![0.5, 0.6]).is_err());
        assert!(WeightScheme::explicit(vec![1.0, 0.0]).is_err());
        assert!(WeightScheme::explicit(vec![]).is_err());
        let w = WeightScheme::normalized(vec![1.0, 3.0]).unwrap();
        assert_eq!(w.weight(2), 0.75);
        assert_eq!(w.weight(3), 0.0);
    }
}
