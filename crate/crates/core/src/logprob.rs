//! Base-2 log-domain probability arithmetic.
//!
//! Every probability in the crate is carried as `log2 p`. Probability zero is
//! `-inf` and is a regular value: products add, sums go through a stable
//! log-sum-exp.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Sub};

/// `log2` of a probability (or of a sub-probability mass).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct LogProb(pub f64);

impl LogProb {
    pub const ZERO: LogProb = LogProb(f64::NEG_INFINITY);
    pub const ONE: LogProb = LogProb(0.0);

    pub fn from_prob(p: f64) -> Self {
        LogProb(p.log2())
    }

    #[inline]
    pub fn log2(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn prob(self) -> f64 {
        self.0.exp2()
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    /// Log of `p + q`.
    pub fn ln_add(self, other: LogProb) -> LogProb {
        let (hi, lo) = if self.0 >= other.0 { (self.0, other.0) } else { (other.0, self.0) };
        if hi == f64::NEG_INFINITY {
            return LogProb::ZERO;
        }
        LogProb(hi + (lo - hi).exp2().ln_1p() / std::f64::consts::LN_2)
    }

    pub fn total_cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl Mul for LogProb {
    type Output = LogProb;
    fn mul(self, rhs: LogProb) -> LogProb {
        if self.is_zero() || rhs.is_zero() {
            LogProb::ZERO
        } else {
            LogProb(self.0 + rhs.0)
        }
    }
}

impl Add for LogProb {
    type Output = LogProb;
    fn add(self, rhs: LogProb) -> LogProb {
        self.ln_add(rhs)
    }
}

/// Division `p / q`; `0 / q = 0` for any `q`, `p / 0 = +inf` for `p > 0`.
impl Sub for LogProb {
    type Output = f64;
    fn sub(self, rhs: LogProb) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else if rhs.is_zero() {
            f64::INFINITY
        } else {
            self.0 - rhs.0
        }
    }
}

impl fmt::Display for LogProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Stable `log2 Σ 2^{x_i}` over a slice of base-2 logs.
pub fn log_sum_exp2(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    let s: f64 = values.iter().map(|&v| (v - max).exp2()).sum();
    max + s.log2()
}

/// `p log2(p / q)` with `0 log 0 = 0` and `p log(p/0) = +inf`.
pub fn plogpq(p: f64, q: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else if q <= 0.0 {
        f64::INFINITY
    } else {
        p * (p / q).log2()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_is_absorbing() {
        assert!((LogProb::ZERO * LogProb::ONE).is_zero());
        assert_eq!(LogProb::ZERO + LogProb(-3.0), LogProb(-3.0));
        assert!((LogProb::ZERO + LogProb::ZERO).is_zero());
    }

    #[test]
    fn division_conventions() {
        assert_eq!(LogProb::ZERO - LogProb::ZERO, f64::NEG_INFINITY);
        assert_eq!(LogProb(-1.0) - LogProb::ZERO, f64::INFINITY);
        assert_eq!(plogpq(0.0, 0.0), 0.0);
        assert_eq!(plogpq(0.5, 0.0), f64::INFINITY);
    }

    #[test]
    fn halves_sum_to_one() {
        let h = LogProb::from_prob(0.5);
        assert!((h + h).log2().abs() < 1e-15);
        assert!(log_sum_exp2(&[-1.0, -2.0, -2.0]).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn ln_add_matches_linear(a in 1e-300f64..1.0, b in 1e-300f64..1.0) {
            let s = (LogProb::from_prob(a) + LogProb::from_prob(b)).prob();
            prop_assert!(((s - (a + b)) / (a + b)).abs() < 1e-12);
        }
    }
}
