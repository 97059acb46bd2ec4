//! Channel capacity of finite sets of distributions over `X^n`.
//!
//! `C(A) = sup_P Σ_μ P(μ) D(μ ‖ Σ_ν P(ν) ν)` is computed by Blahut–Arimoto
//! alternating maximization with the usual certified bracket. A separate
//! interior-point solver for `R(A) = inf_ρ max_μ D(μ ‖ ρ)` serves as an
//! independent cross-check, since the two values coincide.

use crate::error::{Error, Result};
use crate::logprob::plogpq;
use crate::nml::ParametricClass;
use crate::process::descriptor::fmt_real;
use crate::process::{distribution, Generator, Measure, Mixture};
use crate::seq::Alphabet;
use crate::weights::WeightScheme;
use nalgebra::{DMatrix, DVector};
use std::collections::HashMap;

/// Default number of Blahut–Arimoto iterations before giving up.
pub const DEFAULT_MAX_ITER: usize = 2_000_000;

/// Largest instance the minimax oracle accepts.
pub const MINIMAX_MAX_ATOMS: usize = 16;
pub const MINIMAX_MAX_MEMBERS: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityResult {
    /// Midpoint of the final bracket, in bits.
    pub capacity: f64,
    /// Optimal prior over the input members.
    pub prior: Vec<f64>,
    /// `Σ_i P_i μ_i` over `X^n`.
    pub barycenter: Vec<f64>,
    pub iterations: usize,
    /// Width of the certified bracket `[lower, upper]`.
    pub gap: f64,
    pub converged: bool,
}

impl CapacityResult {
    /// Members carrying prior mass above `threshold`.
    pub fn support(&self, threshold: f64) -> Vec<usize> {
        (0..self.prior.len()).filter(|&i| self.prior[i] > threshold).collect()
    }

    pub fn lower(&self) -> f64 {
        self.capacity - self.gap / 2.0
    }

    pub fn upper(&self) -> f64 {
        self.capacity + self.gap / 2.0
    }
}

fn validate(members: &[Vec<f64>]) -> Result<usize> {
    let atoms = members.first().map(Vec::len).ok_or_else(|| Error::Empty("no members".into()))?;
    for (i, row) in members.iter().enumerate() {
        if row.len() != atoms {
            return Err(Error::Validation(format!("member {i} has {} atoms, expected {atoms}", row.len())));
        }
        if row.iter().any(|&p| !(p >= 0.0 && p.is_finite())) {
            return Err(Error::Validation(format!("member {i} has a negative or non-finite entry")));
        }
        let total: f64 = row.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Validation(format!("member {i} sums to {total}")));
        }
    }
    Ok(atoms)
}

/// Merge atoms on which every member agrees; the capacity is unchanged.
fn lump(members: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let atoms = members[0].len();
    let mut groups: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut out: Vec<Vec<f64>> = vec![Vec::new(); members.len()];
    for x in 0..atoms {
        let column: Vec<u64> = members.iter().map(|r| r[x].to_bits()).collect();
        if column.iter().all(|&b| f64::from_bits(b) == 0.0) {
            continue;
        }
        match groups.get(&column) {
            Some(&g) => {
                for (row, src) in out.iter_mut().zip(members) {
                    row[g] += src[x];
                }
            }
            None => {
                groups.insert(column, out[0].len());
                for (row, src) in out.iter_mut().zip(members) {
                    row.push(src[x]);
                }
            }
        }
    }
    out
}

fn divergences(rows: &[Vec<f64>], q: &[f64], out: &mut [f64]) {
    for (d, row) in out.iter_mut().zip(rows) {
        *d = row.iter().zip(q).map(|(&p, &r)| if p > 0.0 { p * (p / r).log2() } else { 0.0 }).sum();
    }
}

fn mix(rows: &[Vec<f64>], prior: &[f64], out: &mut [f64]) {
    out.iter_mut().for_each(|v| *v = 0.0);
    for (row, &w) in rows.iter().zip(prior) {
        for (o, &p) in out.iter_mut().zip(row) {
            *o += w * p;
        }
    }
}

/// Blahut–Arimoto iteration on the rows `members` (each a law on `X^n`).
///
/// Stops once `max_i D_i - log2 Σ_i P_i 2^{D_i}` drops below `tol`.
pub fn blahut_arimoto(members: &[Vec<f64>], tol: f64, max_iter: usize) -> Result<CapacityResult> {
    validate(members)?;
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let rows = lump(members);
    let m = rows.len();
    let mut prior = vec![1.0 / m as f64; m];
    let mut q = vec![0.0; rows[0].len()];
    let mut d = vec![0.0; m];
    let mut iterations = 0;
    let (lower, upper) = loop {
        mix(&rows, &prior, &mut q);
        divergences(&rows, &q, &mut d);
        let top = d.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        // log2 Σ P_i 2^{D_i}, shifted by the max for stability
        let scaled: Vec<f64> = prior.iter().zip(&d).map(|(&p, &di)| p * (di - top).exp2()).collect();
        let z: f64 = scaled.iter().sum();
        let lower = top + z.log2();
        let upper = top;
        if upper - lower < tol || iterations >= max_iter {
            break (lower.max(0.0), upper.max(0.0));
        }
        prior = scaled.iter().map(|s| s / z).collect();
        iterations += 1;
    };
    let total: f64 = prior.iter().sum();
    prior.iter_mut().for_each(|p| *p /= total);
    let mut barycenter = vec![0.0; members[0].len()];
    mix(members, &prior, &mut barycenter);
    Ok(CapacityResult {
        capacity: (lower + upper) / 2.0,
        prior,
        barycenter,
        iterations,
        gap: upper - lower,
        converged: upper - lower < tol,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimaxResult {
    /// `max_i D(μ_i ‖ ρ*)` in bits.
    pub value: f64,
    pub witness: Vec<f64>,
    pub divergences: Vec<f64>,
}

/// `inf_ρ max_i D(μ_i ‖ ρ)` by a log-barrier interior-point method.
///
/// Solves `min t` subject to `D_i(ρ) <= t`, `ρ > 0`, `Σ ρ = 1` over the atoms
/// charged by some member. Refuses instances above 16 atoms or 6 members.
pub fn minimax_oracle(members: &[Vec<f64>]) -> Result<MinimaxResult> {
    let atoms = validate(members)?;
    if atoms > MINIMAX_MAX_ATOMS || members.len() > MINIMAX_MAX_MEMBERS {
        return Err(Error::Budget { alphabet: atoms, horizon: members.len() });
    }
    let support: Vec<usize> = (0..atoms).filter(|&x| members.iter().any(|r| r[x] > 0.0)).collect();
    let k = support.len();
    let mu: Vec<Vec<f64>> = members.iter().map(|r| support.iter().map(|&x| r[x]).collect()).collect();
    // divergence in nats on the restricted atoms
    let div = |rho: &[f64], i: usize| -> f64 {
        mu[i].iter().zip(rho).map(|(&p, &r)| if p > 0.0 { p * (p / r).ln() } else { 0.0 }).sum()
    };
    let m = members.len();
    let mut rho: Vec<f64> = (0..k).map(|j| 0.5 * mu.iter().map(|r| r[j]).sum::<f64>() / m as f64 + 0.5 / k as f64).collect();
    let mut t = (0..m).map(|i| div(&rho, i)).fold(0.0, f64::max) + 1.0;
    let constraints = (m + k) as f64;
    let mut tau = 1.0;
    let barrier = |rho: &[f64], t: f64, tau: f64| -> f64 {
        if rho.iter().any(|&r| r <= 0.0) {
            return f64::INFINITY;
        }
        let mut f = tau * t - rho.iter().map(|r| r.ln()).sum::<f64>();
        for i in 0..m {
            let s = t - div(rho, i);
            if s <= 0.0 {
                return f64::INFINITY;
            }
            f -= s.ln();
        }
        f
    };
    while constraints / tau > 1e-11 {
        for _ in 0..200 {
            let dim = k + 1;
            let mut g = DVector::<f64>::zeros(dim);
            let mut h = DMatrix::<f64>::zeros(dim, dim);
            g[k] = tau;
            for j in 0..k {
                g[j] -= 1.0 / rho[j];
                h[(j, j)] += 1.0 / (rho[j] * rho[j]);
            }
            for i in 0..m {
                let s = t - div(&rho, i);
                // ∇s = (μ_i / ρ, 1)
                let mut grad_s = DVector::<f64>::zeros(dim);
                for j in 0..k {
                    grad_s[j] = mu[i][j] / rho[j];
                    h[(j, j)] += mu[i][j] / (rho[j] * rho[j]) / s;
                }
                grad_s[k] = 1.0;
                g -= &grad_s / s;
                h += &grad_s * grad_s.transpose() / (s * s);
            }
            // equality-constrained Newton step: Σ Δρ = 0
            let mut kkt = DMatrix::<f64>::zeros(dim + 1, dim + 1);
            kkt.view_mut((0, 0), (dim, dim)).copy_from(&h);
            for j in 0..k {
                kkt[(dim, j)] = 1.0;
                kkt[(j, dim)] = 1.0;
            }
            let mut rhs = DVector::<f64>::zeros(dim + 1);
            rhs.rows_mut(0, dim).copy_from(&(-&g));
            let Some(sol) = kkt.lu().solve(&rhs) else {
                return Err(Error::Check("singular Newton system in minimax oracle".into()));
            };
            let step = sol.rows(0, dim).into_owned();
            let decrement = -g.dot(&step);
            if decrement / 2.0 < 1e-13 {
                break;
            }
            let f0 = barrier(&rho, t, tau);
            let mut alpha = 1.0;
            loop {
                let cand: Vec<f64> = (0..k).map(|j| rho[j] + alpha * step[j]).collect();
                let ct = t + alpha * step[k];
                let f1 = barrier(&cand, ct, tau);
                if f1 <= f0 - 0.25 * alpha * decrement {
                    rho = cand;
                    t = ct;
                    break;
                }
                alpha *= 0.5;
                if alpha < 1e-20 {
                    break;
                }
            }
            if alpha < 1e-20 {
                break;
            }
        }
        tau *= 8.0;
    }
    let total: f64 = rho.iter().sum();
    let mut witness = vec![0.0; atoms];
    for (j, &x) in support.iter().enumerate() {
        witness[x] = rho[j] / total;
    }
    let divergences: Vec<f64> = members
        .iter()
        .map(|r| r.iter().zip(&witness).map(|(&p, &q)| plogpq(p, q)).sum())
        .collect();
    let value = divergences.iter().cloned().fold(0.0, f64::max);
    Ok(MinimaxResult { value, witness, divergences })
}

/// Members of `class` restricted to `X^n`, one law per row.
///
/// `grid` gives the number of uniform Bernoulli parameters used in place of
/// the full Bernoulli class; finite classes are restricted exactly.
pub fn truncate_class(class: &ParametricClass, n: usize, grid: Option<usize>) -> Result<Vec<Vec<f64>>> {
    let alphabet = class.alphabet();
    alphabet.check_budget(n)?;
    match class {
        ParametricClass::FiniteList(ms) => {
            if ms.is_empty() {
                return Err(Error::Empty("class has no members".into()));
            }
            ms.iter().map(|m| restrict(m, n)).collect()
        }
        ParametricClass::BernoulliGrid(_) => class.members().unwrap().iter().map(|m| restrict(m, n)).collect(),
        ParametricClass::BernoulliFull => match grid {
            Some(points) => truncate_class(&ParametricClass::bernoulli_grid(points)?, n, None),
            None => Err(Error::Unsupported("the full Bernoulli class needs a parameter grid".into())),
        },
        ParametricClass::AllDeterministic(a) => {
            let atoms = a.check_budget(n)?;
            Ok((0..atoms)
                .map(|i| {
                    let mut row = vec![0.0; atoms];
                    row[i] = 1.0;
                    row
                })
                .collect())
        }
        ParametricClass::MarkovFull { .. } | ParametricClass::Custom(_) => {
            Err(Error::Unsupported(format!("cannot materialize {class:?} over X^{n}")))
        }
    }
}

/// Law of `measure` on `X^n`; i.i.d. measures use symbol counts so that
/// sequences of equal type get bit-identical probabilities.
fn restrict(measure: &Measure, n: usize) -> Result<Vec<f64>> {
    match measure {
        Measure::Iid(iid) => {
            let alphabet = measure.alphabet();
            let atoms = alphabet.check_budget(n)?;
            Ok((0..atoms)
                .map(|i| {
                    let mut counts = vec![0usize; alphabet.size()];
                    for s in alphabet.decode(i, n) {
                        counts[s] += 1;
                    }
                    let log: f64 = counts
                        .iter()
                        .zip(&iid.log_probs)
                        .filter(|(&c, _)| c > 0)
                        .map(|(&c, &l)| c as f64 * l)
                        .sum();
                    log.exp2()
                })
                .collect())
        }
        _ => distribution(measure, n),
    }
}

/// The capacity predictor `ρ_C = Σ_{n<=N} w_n ρ_n⁺ + (Σ_{n>N} w_n) δ_0`, where
/// `ρ_n⁺` is the horizon-`n` barycenter continued by the symbol `0`.
#[derive(Debug, Clone)]
pub struct CapacityPredictor {
    pub predictor: Measure,
    /// Capacity result per horizon `1..=N`.
    pub results: Vec<CapacityResult>,
}

impl CapacityPredictor {
    pub fn converged(&self) -> bool {
        self.results.iter().all(|r| r.converged)
    }

    pub fn result(&self, n: usize) -> Option<&CapacityResult> {
        self.results.get(n.checked_sub(1)?)
    }
}

pub fn build_rho_capacity(
    class: &ParametricClass,
    max_horizon: usize,
    tol: f64,
    grid: Option<usize>,
) -> Result<CapacityPredictor> {
    if max_horizon == 0 {
        return Err(Error::Domain("maximum horizon must be >= 1".into()));
    }
    let alphabet: Alphabet = class.alphabet();
    let results: Vec<CapacityResult> = (1..=max_horizon)
        .map(|n| blahut_arimoto(&truncate_class(class, n, grid)?, tol, DEFAULT_MAX_ITER))
        .collect::<Result<_>>()?;
    let components = results
        .iter()
        .enumerate()
        .map(|(i, r)| Measure::finite_horizon(alphabet, i + 1, r.barycenter.clone(), 0))
        .collect::<Result<Vec<_>>>()?;
    let padding = Measure::deterministic(alphabet, Generator::Constant(0))?;
    let predictor = Measure::mixture(Mixture::with_tail(components, &WeightScheme::Quadratic, padding)?);
    Ok(CapacityPredictor { predictor, results })
}

/// `C(C^n)` for each requested horizon.
pub fn capacity_growth_series(
    class: &ParametricClass,
    horizons: &[usize],
    tol: f64,
    grid: Option<usize>,
) -> Result<Vec<(usize, CapacityResult)>> {
    horizons
        .iter()
        .map(|&n| Ok((n, blahut_arimoto(&truncate_class(class, n, grid)?, tol, DEFAULT_MAX_ITER)?)))
        .collect()
}

pub const SERIES_CSV_HEADER: &str = "scenario,n,capacity,gap,iterations,converged";
pub const PRIOR_CSV_HEADER: &str = "scenario,n,member,prior";

pub fn series_csv_rows(scenario: &str, series: &[(usize, CapacityResult)]) -> Vec<String> {
    series
        .iter()
        .map(|(n, r)| format!("{scenario},{n},{},{},{},{}", fmt_real(r.capacity), fmt_real(r.gap), r.iterations, r.converged))
        .collect()
}

pub fn prior_csv_rows(scenario: &str, n: usize, result: &CapacityResult) -> Vec<String> {
    result.prior.iter().enumerate().map(|(i, p)| format!("{scenario},{n},{i},{}", fmt_real(*p))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divergence::dn_block;
    use crate::nml::build_nml_table;
    use crate::process::check_consistency;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_rows(seed: u64, members: usize, atoms: usize) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..members)
            .map(|_| {
                let mut row: Vec<f64> = (0..atoms).map(|_| if rng.gen_bool(0.2) { 0.0 } else { rng.gen::<f64>() }).collect();
                if row.iter().all(|&p| p == 0.0) {
                    row[0] = 1.0;
                }
                let s: f64 = row.iter().sum();
                row.iter_mut().for_each(|p| *p /= s);
                row
            })
            .collect()
    }

    /// Mutual information of a prior, computed directly: Σ_i P_i Σ_x μ_i(x) log2(μ_i(x)/q(x)).
    fn mutual_information(rows: &[Vec<f64>], prior: &[f64]) -> f64 {
        let atoms = rows[0].len();
        let q: Vec<f64> = (0..atoms).map(|x| rows.iter().zip(prior).map(|(r, p)| p * r[x]).sum()).collect();
        rows.iter()
            .zip(prior)
            .map(|(r, &p)| p * (0..atoms).filter(|&x| r[x] > 0.0).map(|x| r[x] * (r[x] / q[x]).log2()).sum::<f64>())
            .sum()
    }

    #[test]
    fn ba_examples() {
        let r = blahut_arimoto(&[vec![1.0, 0.0], vec![0.0, 1.0]], 1e-12, 1000).unwrap();
        assert!((r.capacity - 1.0).abs() < 1e-12);
        assert_eq!(r.prior, vec![0.5, 0.5]);
        let points = truncate_class(&ParametricClass::AllDeterministic(Alphabet::BINARY), 2, None).unwrap();
        let r = blahut_arimoto(&points, 1e-9, 1000).unwrap();
        assert!((r.capacity - 2.0).abs() < 1e-9);
        let mu = vec![0.3, 0.2, 0.5];
        let r = blahut_arimoto(&[mu.clone(), mu], 1e-12, 10).unwrap();
        assert_eq!(r.capacity, 0.0);
        assert!(r.converged);
        assert!(matches!(blahut_arimoto(&[vec![0.5, 0.6]], 1e-9, 10), Err(Error::Validation(_))));
        assert!(matches!(blahut_arimoto(&[], 1e-9, 10), Err(Error::Empty(_))));
    }

    #[test]
    fn ba_flags_iteration_cap() {
        let rows = random_rows(3, 4, 8);
        let r = blahut_arimoto(&rows, 1e-15, 2).unwrap();
        assert_eq!(r.iterations, 2);
        assert!(!r.converged);
        assert!(r.gap > 0.0);
    }

    #[test]
    fn ba_bracket_contains_prior_information() {
        for seed in 0..20 {
            let rows = random_rows(seed, 4, 8);
            let r = blahut_arimoto(&rows, 1e-10, DEFAULT_MAX_ITER).unwrap();
            let info = mutual_information(&rows, &r.prior);
            assert!(info <= r.upper() + 1e-12 && info >= r.lower() - 1e-9, "seed {seed}");
            assert!((r.prior.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn minimax_examples() {
        let r = minimax_oracle(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!((r.value - 1.0).abs() < 1e-8);
        assert!((r.witness[0] - 0.5).abs() < 1e-8);
        let mu = vec![0.1, 0.2, 0.3, 0.4];
        let r = minimax_oracle(&[mu.clone()]).unwrap();
        assert!(r.value < 1e-9);
        for (a, b) in r.witness.iter().zip(&mu) {
            assert!((a - b).abs() < 1e-6);
        }
        assert!(matches!(minimax_oracle(&vec![vec![1.0 / 32.0; 32]]), Err(Error::Budget { .. })));
    }

    #[test]
    fn minimax_agrees_with_ba() {
        for seed in 0..20 {
            let rng_members = 2 + (seed as usize % 3);
            let rows = random_rows(100 + seed, rng_members, 8);
            let ba = blahut_arimoto(&rows, 1e-10, DEFAULT_MAX_ITER).unwrap();
            let mm = minimax_oracle(&rows).unwrap();
            assert!((ba.capacity - mm.value).abs() < 1e-5, "seed {seed}: {} vs {}", ba.capacity, mm.value);
            let top = mm.divergences.iter().cloned().fold(0.0, f64::max);
            assert_eq!(top, mm.value);
        }
    }

    #[test]
    fn truncation_examples() {
        let rows = truncate_class(&ParametricClass::BernoulliGrid(vec![0.0, 0.5, 1.0]), 1, None).unwrap();
        // p is the probability of symbol 0
        assert_eq!(rows, vec![vec![0.0, 1.0], vec![0.5, 0.5], vec![1.0, 0.0]]);
        let rows = truncate_class(&ParametricClass::bernoulli_grid(21).unwrap(), 8, None).unwrap();
        assert_eq!(rows.len(), 21);
        for r in &rows {
            assert_eq!(r.len(), 256);
            assert!((r.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        let mu = Measure::stationary_markov(Alphabet::BINARY, 1, vec![vec![0.6, 0.4], vec![0.1, 0.9]]).unwrap();
        let rows = truncate_class(&ParametricClass::FiniteList(vec![mu.clone()]), 5, None).unwrap();
        assert_eq!(rows[0], distribution(&mu, 5).unwrap());
        assert!(truncate_class(&ParametricClass::BernoulliFull, 3, None).is_err());
        assert_eq!(truncate_class(&ParametricClass::BernoulliFull, 3, Some(5)).unwrap().len(), 5);
    }

    #[test]
    fn deterministic_capacity_is_maximal() {
        let series = capacity_growth_series(&ParametricClass::AllDeterministic(Alphabet::BINARY), &[1, 2, 3], 1e-9, None).unwrap();
        for (n, r) in series {
            assert!((r.capacity - n as f64).abs() < 1e-6);
        }
    }

    #[test]
    fn bernoulli_grid_sandwich_and_sublinearity() {
        let grid = ParametricClass::bernoulli_grid(21).unwrap();
        let series = capacity_growth_series(&grid, &[2, 4, 8, 12], 1e-9, None).unwrap();
        let mut last = f64::INFINITY;
        for (n, r) in &series {
            let nml = build_nml_table(&ParametricClass::BernoulliFull, *n).unwrap().log_cn;
            assert!(r.capacity <= nml + 1e-6, "n={n}");
            let per = r.capacity / *n as f64;
            assert!(per < last);
            last = per;
        }
    }

    #[test]
    fn rho_capacity_bounds() {
        let grid = ParametricClass::bernoulli_grid(5).unwrap();
        let pred = build_rho_capacity(&grid, 6, 1e-6, None).unwrap();
        assert!(pred.converged());
        assert!(check_consistency(&pred.predictor, 8).unwrap().passed(1e-9));
        for m in grid.members().unwrap() {
            for n in 1..=6 {
                let d = dn_block(&m, &pred.predictor, n).unwrap().dn;
                let c = pred.result(n).unwrap().capacity;
                let bound = c + 1.0 + 2.0 * (n as f64).log2() + (std::f64::consts::PI.powi(2) / 6.0).log2();
                assert!(d <= bound + 1e-9);
            }
        }
        let mu = Measure::bernoulli(0.3).unwrap();
        let single = build_rho_capacity(&ParametricClass::FiniteList(vec![mu.clone()]), 5, 1e-9, None).unwrap();
        for n in 1..=5 {
            assert_eq!(single.result(n).unwrap().barycenter, restrict(&mu, n).unwrap());
            let d = dn_block(&mu, &single.predictor, n).unwrap().dn;
            assert!(d <= 2.0 * (n as f64).log2() + (std::f64::consts::PI.powi(2) / 6.0).log2() + 1e-9);
        }
        let det = build_rho_capacity(&ParametricClass::AllDeterministic(Alphabet::BINARY), 3, 1e-9, None).unwrap();
        assert!((det.result(3).unwrap().capacity - 3.0).abs() < 1e-9);
    }

    #[test]
    fn csv_rows() {
        let r = blahut_arimoto(&[vec![1.0, 0.0], vec![0.0, 1.0]], 1e-12, 10).unwrap();
        let rows = series_csv_rows("cap", &[(1, r.clone())]);
        assert_eq!(rows[0], "cap,1,1.0000000000000000e0,0.0000000000000000e0,0,true");
        assert_eq!(prior_csv_rows("cap", 1, &r)[1], "cap,1,1,5.0000000000000000e-1");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn capacity_symmetries(seed in 0u64..10_000, members in 1usize..5, atoms in 2usize..9) {
            let rows = random_rows(seed, members, atoms);
            let base = blahut_arimoto(&rows, 1e-10, DEFAULT_MAX_ITER).unwrap();
            prop_assert!(base.capacity >= 0.0 && base.lower() <= (atoms as f64).log2() + 1e-12);
            prop_assert!(base.capacity <= (atoms as f64).log2() + base.gap);
            prop_assert!(base.gap >= 0.0);
            let mut doubled = rows.clone();
            doubled.push(rows[0].clone());
            let dup = blahut_arimoto(&doubled, 1e-10, DEFAULT_MAX_ITER).unwrap();
            prop_assert!((dup.capacity - base.capacity).abs() < 1e-8);
            let perm: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().rev().cloned().collect()).collect();
            let flipped = blahut_arimoto(&perm, 1e-10, DEFAULT_MAX_ITER).unwrap();
            prop_assert!((flipped.capacity - base.capacity).abs() < 1e-8);
        }
    }
}
