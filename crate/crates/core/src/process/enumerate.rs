//! Exhaustive walks over `X^n`, consistency checking and path sampling.

use super::{Cursor, Measure};
use crate::error::{Error, Result};
use crate::logprob::LogProb;
use crate::seq::{Seq, Symbol};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Depth-first walk over every `x ∈ X^n` in lexicographic order.
///
/// With `prune_zero`, subtrees of probability zero are skipped.
pub fn walk_leaves<F>(measure: &Measure, n: usize, prune_zero: bool, mut visit: F) -> Result<()>
where
    F: FnMut(&[Symbol], &Cursor),
{
    measure.alphabet().check_budget(n)?;
    let mut path = Vec::with_capacity(n);
    walk(measure, &measure.start(), n, prune_zero, &mut path, &mut visit);
    Ok(())
}

fn walk<F>(measure: &Measure, cursor: &Cursor, n: usize, prune: bool, path: &mut Vec<Symbol>, visit: &mut F)
where
    F: FnMut(&[Symbol], &Cursor),
{
    if prune && cursor.log_prob().is_zero() {
        return;
    }
    if path.len() == n {
        visit(path, cursor);
        return;
    }
    for a in measure.alphabet().symbols() {
        let next = measure.advance(cursor, a);
        path.push(a);
        walk(measure, &next, n, prune, path, visit);
        path.pop();
    }
}

/// `log2 μ(x)` for every `x ∈ X^n`, indexed lexicographically.
pub fn log_distribution(measure: &Measure, n: usize) -> Result<Vec<LogProb>> {
    let alphabet = measure.alphabet();
    let atoms = alphabet.check_budget(n)?;
    let mut out = vec![LogProb::ZERO; atoms];
    walk_leaves(measure, n, true, |x, c| out[alphabet.encode(x)] = c.log_prob())?;
    Ok(out)
}

/// The restriction of `measure` to `X^n` as plain probabilities.
pub fn distribution(measure: &Measure, n: usize) -> Result<Vec<f64>> {
    Ok(log_distribution(measure, n)?.into_iter().map(LogProb::prob).collect())
}

/// Result of an exhaustive consistency sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyReport {
    pub horizon: usize,
    /// Largest `|Σ_a μ(x·a) - μ(x)| / μ(x)` over positive prefixes.
    pub max_violation: f64,
    /// Largest `μ(x·a) - μ(x)` relative excess (monotonicity).
    pub max_monotone_excess: f64,
    pub prefixes_checked: usize,
    pub root_mass: f64,
}

impl ConsistencyReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.max_violation < tol && self.max_monotone_excess < tol
    }
}

/// Check `Σ_a μ(x·a) = μ(x)` for every prefix of length `< n`.
pub fn check_consistency(measure: &Measure, n: usize) -> Result<ConsistencyReport> {
    measure.alphabet().check_budget(n)?;
    let mut report = ConsistencyReport {
        horizon: n,
        max_violation: 0.0,
        max_monotone_excess: 0.0,
        prefixes_checked: 0,
        root_mass: measure.start().log_prob().prob(),
    };
    sweep(measure, &measure.start(), n, &mut report);
    Ok(report)
}

fn sweep(measure: &Measure, cursor: &Cursor, depth: usize, report: &mut ConsistencyReport) {
    if depth == 0 {
        return;
    }
    let parent = cursor.log_prob();
    let children = measure.children(cursor);
    report.prefixes_checked += 1;
    if parent.is_zero() {
        let stray: f64 = children.iter().map(|c| c.log_prob().prob()).sum();
        report.max_violation = report.max_violation.max(stray);
        return;
    }
    // Work relative to the parent so deep prefixes do not underflow.
    let rel: Vec<f64> = children.iter().map(|c| (c.log_prob() - parent).exp2()).collect();
    let total: f64 = rel.iter().sum();
    report.max_violation = report.max_violation.max((total - 1.0).abs());
    let excess = rel.iter().copied().fold(0.0f64, f64::max) - 1.0;
    report.max_monotone_excess = report.max_monotone_excess.max(excess);
    for child in &children {
        sweep(measure, child, depth - 1, report);
    }
}

/// Draw `x_{1..n}` by iterated conditional sampling.
pub fn sample(measure: &Measure, n: usize, seed: u64) -> Result<Seq> {
    if n == 0 {
        return Err(Error::Domain("sample horizon must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (x, _) = sample_path(measure, n, &mut rng)?;
    Seq::new(x, measure.alphabet())
}

/// One path and its final cursor.
pub(crate) fn sample_path<R: Rng>(measure: &Measure, n: usize, rng: &mut R) -> Result<(Vec<Symbol>, Cursor)> {
    let mut cursor = measure.start();
    if cursor.log_prob().is_zero() {
        return Err(Error::Conditioning { prefix: vec![] });
    }
    let mut x = Vec::with_capacity(n);
    for _ in 0..n {
        let children = measure.children(&cursor);
        let parent = cursor.log_prob();
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        let mut pick = None;
        for (a, c) in children.iter().enumerate() {
            let p = (c.log_prob() - parent).exp2();
            if p > 0.0 {
                acc += p;
                pick = Some(a);
                if u < acc {
                    break;
                }
            }
        }
        let a = pick.ok_or_else(|| Error::Conditioning { prefix: x.clone() })?;
        x.push(a);
        cursor = children.into_iter().nth(a).expect("symbol in range");
    }
    Ok((x, cursor))
}
