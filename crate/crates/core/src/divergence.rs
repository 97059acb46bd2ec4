//! Divergences between process measures on the first `n` symbols.
//!
//! `d_n(μ, ρ)` is computed two ways: as the μ-expected sum of per-step
//! conditional KL divergences ([`dn_stepwise`]) and as the block KL between
//! the restrictions to `X^n` ([`dn_block`]). Both walk only μ-positive paths.
//! A ρ-zero on a μ-positive path makes the divergence `+inf`; the report then
//! carries the witnessing path.

use crate::error::{Error, Result};
use crate::logprob::plogpq;
use crate::process::enumerate::sample_path;
use crate::process::{distribution, Cursor, Measure};
use crate::seq::Symbol;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::fmt;

/// Tolerated negative rounding before Gibbs' inequality is declared violated.
const GIBBS_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum Method {
    Exact,
    MonteCarlo { samples: usize, std_error: f64 },
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Exact => write!(f, "exact"),
            Method::MonteCarlo { samples, .. } => write!(f, "monte-carlo({samples})"),
        }
    }
}

/// `d_n` in bits together with how it was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceReport {
    pub horizon: usize,
    pub dn: f64,
    pub method: Method,
    /// A μ-positive path on which ρ vanishes, when `dn` is infinite.
    pub witness: Option<Vec<Symbol>>,
}

impl DivergenceReport {
    /// `d_n / n`.
    pub fn average(&self) -> f64 {
        self.dn / self.horizon as f64
    }

    pub fn is_infinite(&self) -> bool {
        self.dn == f64::INFINITY
    }

    pub const CSV_HEADER: &'static str = "scenario,n,method,d_n,d_n_over_n,stderr";

    pub fn csv_row(&self, scenario: &str) -> String {
        use crate::process::descriptor::fmt_real;
        let stderr = match &self.method {
            Method::Exact => String::new(),
            Method::MonteCarlo { std_error, .. } => fmt_real(*std_error),
        };
        format!(
            "{scenario},{},{},{},{},{stderr}",
            self.horizon,
            self.method,
            fmt_real(self.dn),
            fmt_real(self.average())
        )
    }

    fn checked(self) -> Result<Self> {
        if self.dn < -GIBBS_SLACK || self.dn.is_nan() {
            return Err(Error::Check(format!("d_{} = {} violates Gibbs' inequality", self.horizon, self.dn)));
        }
        Ok(self)
    }
}

fn same_alphabet(mu: &Measure, rho: &Measure) -> Result<()> {
    if mu.alphabet() != rho.alphabet() {
        return Err(Error::Validation("measures live on different alphabets".into()));
    }
    Ok(())
}

/// `Σ_{t<=n} E_μ KL(μ(·|x_{<t}) ‖ ρ(·|x_{<t}))`.
pub fn dn_stepwise(mu: &Measure, rho: &Measure, n: usize) -> Result<DivergenceReport> {
    same_alphabet(mu, rho)?;
    mu.alphabet().check_budget(n)?;
    let mut acc = StepAcc { total: 0.0, witness: None, path: Vec::with_capacity(n) };
    stepwise(mu, rho, &mu.start(), &rho.start(), n, &mut acc);
    let dn = if acc.witness.is_some() { f64::INFINITY } else { acc.total };
    DivergenceReport { horizon: n, dn, method: Method::Exact, witness: acc.witness }.checked()
}

struct StepAcc {
    total: f64,
    witness: Option<Vec<Symbol>>,
    path: Vec<Symbol>,
}

fn stepwise(mu: &Measure, rho: &Measure, mc: &Cursor, rc: &Cursor, depth: usize, acc: &mut StepAcc) {
    if depth == 0 || acc.witness.is_some() || mc.log_prob().is_zero() {
        return;
    }
    let mu_children = mu.children(mc);
    let rho_children = rho.children(rc);
    let weight = mc.log_prob().prob();
    let mut kl = 0.0;
    for (a, (m, r)) in mu_children.iter().zip(&rho_children).enumerate() {
        let p = (m.log_prob() - mc.log_prob()).exp2();
        let q = if rc.log_prob().is_zero() { 0.0 } else { (r.log_prob() - rc.log_prob()).exp2() };
        if p > 0.0 && q == 0.0 {
            let mut w = acc.path.clone();
            w.push(a);
            acc.witness = Some(w);
            return;
        }
        kl += plogpq(p, q);
    }
    acc.total += weight * kl;
    for (a, (m, r)) in mu_children.iter().zip(&rho_children).enumerate() {
        acc.path.push(a);
        stepwise(mu, rho, m, r, depth - 1, acc);
        acc.path.pop();
    }
}

/// `Σ_{x ∈ X^n} μ(x) log2(μ(x) / ρ(x))`.
pub fn dn_block(mu: &Measure, rho: &Measure, n: usize) -> Result<DivergenceReport> {
    same_alphabet(mu, rho)?;
    mu.alphabet().check_budget(n)?;
    let mut total = 0.0;
    let mut witness = None;
    let mut path = Vec::with_capacity(n);
    block(mu, rho, &mu.start(), &rho.start(), n, &mut path, &mut total, &mut witness);
    let dn = if witness.is_some() { f64::INFINITY } else { total };
    DivergenceReport { horizon: n, dn, method: Method::Exact, witness }.checked()
}

#[allow(clippy::too_many_arguments)]
fn block(
    mu: &Measure,
    rho: &Measure,
    mc: &Cursor,
    rc: &Cursor,
    depth: usize,
    path: &mut Vec<Symbol>,
    total: &mut f64,
    witness: &mut Option<Vec<Symbol>>,
) {
    if witness.is_some() || mc.log_prob().is_zero() {
        return;
    }
    if depth == 0 {
        if rc.log_prob().is_zero() {
            *witness = Some(path.clone());
        } else {
            *total += mc.log_prob().prob() * (mc.log_prob() - rc.log_prob());
        }
        return;
    }
    for a in mu.alphabet().symbols() {
        let m = mu.advance(mc, a);
        let r = rho.advance(rc, a);
        path.push(a);
        block(mu, rho, &m, &r, depth - 1, path, total, witness);
        path.pop();
    }
}

/// Monte-Carlo estimate of `d_n` from paths drawn from μ.
pub fn dn_monte_carlo(mu: &Measure, rho: &Measure, n: usize, samples: usize, seed: u64) -> Result<DivergenceReport> {
    same_alphabet(mu, rho)?;
    if samples == 0 {
        return Err(Error::Domain("Monte-Carlo needs at least one sample".into()));
    }
    if n == 0 {
        return Ok(DivergenceReport { horizon: 0, dn: 0.0, method: Method::MonteCarlo { samples, std_error: 0.0 }, witness: None });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(samples);
    for _ in 0..samples {
        let (x, mc) = sample_path(mu, n, &mut rng)?;
        let rc = rho.cursor_at(&x);
        if rc.log_prob().is_zero() {
            return Ok(DivergenceReport {
                horizon: n,
                dn: f64::INFINITY,
                method: Method::MonteCarlo { samples, std_error: f64::NAN },
                witness: Some(x),
            });
        }
        values.push(mc.log_prob() - rc.log_prob());
    }
    let mean = values.iter().sum::<f64>() / samples as f64;
    let std_error = if samples > 1 {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (samples - 1) as f64;
        (var / samples as f64).sqrt()
    } else {
        0.0
    };
    Ok(DivergenceReport { horizon: n, dn: mean, method: Method::MonteCarlo { samples, std_error }, witness: None })
}

/// `d_t(μ, ρ) = -log2 ρ(x_{1..t})` for `t = 1..=n`, where `x` is the path of
/// a deterministic `μ`. Linear in `n`, so no enumeration budget applies.
pub fn dn_deterministic_series(mu: &Measure, rho: &Measure, n: usize) -> Result<Vec<f64>> {
    let Measure::Deterministic(det) = mu else {
        return Err(Error::Unsupported("path divergence needs a deterministic measure".into()));
    };
    same_alphabet(mu, rho)?;
    let mut cursor = rho.start();
    let mut out = Vec::with_capacity(n);
    for t in 1..=n {
        cursor = rho.advance(&cursor, det.generator().at(t));
        out.push(-cursor.log_prob().log2());
    }
    Ok(out)
}

/// `(1/2) Σ_{x ∈ X^m} |μ(x) - ρ(x)|`.
pub fn tv_horizon(mu: &Measure, rho: &Measure, m: usize) -> Result<f64> {
    same_alphabet(mu, rho)?;
    let p = distribution(mu, m)?;
    let q = distribution(rho, m)?;
    Ok((0.5 * p.iter().zip(&q).map(|(a, b)| (a - b).abs()).sum::<f64>()).min(1.0))
}

/// Binary divergence `h(p, q) = p log2(p/q) + (1-p) log2((1-p)/(1-q))`.
///
/// Arguments must lie in `[0, 1]`; the result is `+inf` on a support mismatch.
pub fn binary_h(p: f64, q: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&p) && (0.0..=1.0).contains(&q));
    plogpq(p, q) + plogpq(1.0 - p, 1.0 - q)
}

/// Signed conditional entropies `h_k = E_μ log2 μ(x_{k+1} | x_{1..k})`.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyProfile {
    /// `h[k]` for `k = 0..=K`.
    pub h: Vec<f64>,
    /// Best available value of `h_∞`: exact once `k` reaches the chain order.
    pub h_inf_estimate: f64,
    /// `h_K`; by monotonicity `h_∞ >= h_K`.
    pub h_inf_lower_bound: f64,
}

impl EntropyProfile {
    pub fn is_monotone(&self, tol: f64) -> bool {
        self.h.windows(2).all(|w| w[1] >= w[0] - tol)
    }
}

/// Entropy profile of a stationary Markov (or i.i.d.) measure.
pub fn entropy_profile(mu: &Measure, max_k: usize) -> Result<EntropyProfile> {
    let order = match mu {
        Measure::Iid(_) => 0,
        Measure::Markov(m) if m.is_stationary(1e-9) => m.order(),
        Measure::Markov(_) => {
            return Err(Error::Validation("entropy profile needs a stationary initial distribution".into()))
        }
        _ => return Err(Error::Unsupported("entropy profile needs a stationary Markov measure".into())),
    };
    mu.alphabet().check_budget(max_k + 1)?;
    let h: Vec<f64> = (0..=max_k).map(|k| conditional_entropy(mu, k)).collect();
    let last = *h.last().unwrap();
    let h_inf_estimate = if order <= max_k {
        last
    } else if mu.alphabet().check_budget(order + 1).is_ok() {
        conditional_entropy(mu, order)
    } else {
        last
    };
    Ok(EntropyProfile { h, h_inf_estimate, h_inf_lower_bound: last })
}

fn conditional_entropy(mu: &Measure, k: usize) -> f64 {
    let mut total = 0.0;
    walk_nodes(mu, &mu.start(), k, &mut |c| {
        let parent = c.log_prob();
        let mass = parent.prob();
        let inner: f64 = mu
            .children(c)
            .iter()
            .map(|ch| {
                let p = (ch.log_prob() - parent).exp2();
                if p > 0.0 {
                    p * p.log2()
                } else {
                    0.0
                }
            })
            .sum();
        total += mass * inner;
    });
    total
}

fn walk_nodes<F: FnMut(&Cursor)>(mu: &Measure, c: &Cursor, depth: usize, f: &mut F) {
    if c.log_prob().is_zero() {
        return;
    }
    if depth == 0 {
        f(c);
        return;
    }
    for a in mu.alphabet().symbols() {
        walk_nodes(mu, &mu.advance(c, a), depth - 1, f);
    }
}

/// Both sides of `Σ_{x∈A} μ(x) log(μ(x)/ρ(x)) >= μ(A) log(μ(A)/ρ(A))`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialKl {
    pub lhs: f64,
    pub rhs: f64,
    pub mu_mass: f64,
    pub rho_mass: f64,
}

impl PartialKl {
    pub fn holds(&self, slack: f64) -> bool {
        self.lhs >= self.rhs - slack || self.lhs == f64::INFINITY
    }
}

/// Evaluate the log-sum inequality on an explicit event `A ⊆ X^n`.
pub fn partial_kl_lower_bound(mu: &Measure, rho: &Measure, event: &[Vec<Symbol>]) -> Result<PartialKl> {
    same_alphabet(mu, rho)?;
    let set: BTreeSet<&Vec<Symbol>> = event.iter().collect();
    let (mut lhs, mut mu_mass, mut rho_mass) = (0.0, 0.0, 0.0);
    for x in set {
        let p = mu.prob(x);
        let q = rho.prob(x);
        lhs += plogpq(p, q);
        mu_mass += p;
        rho_mass += q;
    }
    Ok(PartialKl { lhs, rhs: plogpq(mu_mass, rho_mass), mu_mass, rho_mass })
}
