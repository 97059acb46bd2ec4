//! Greedy covers of `X^n` by a finite class, and the predictors built on them.
//!
//! Against a reference `ρ`, each member `μ` owns `T_μ^n = {x : μ(x) >= ρ(x)/n}`.
//! At each horizon the cover picks members by largest uncovered `ρ`-mass;
//! `ν_n = Σ_k w_k μ_k` then satisfies `ν_n(x) >= w_k ρ(x)/n` on the first `k`
//! sets, and `ν = γ/2 + Σ_n w_n ν_n / 2` combines the horizons.

use crate::error::{Error, Result};
use crate::logprob::LogProb;
use crate::nml::ParametricClass;
use crate::process::descriptor::fmt_real;
use crate::process::{distribution, log_distribution, Generator, Measure, Mixture};
use crate::seq::Alphabet;
use crate::weights::WeightScheme;

/// Membership mask of `T_μ^n` over `X^n` in lexicographic order.
pub fn t_set(mu: &Measure, rho: &Measure, n: usize) -> Result<Vec<bool>> {
    if n == 0 {
        return Err(Error::Domain("horizon must be >= 1".into()));
    }
    Ok(t_mask(&log_distribution(mu, n)?, &log_distribution(rho, n)?, n))
}

fn t_mask(mu: &[LogProb], rho: &[LogProb], n: usize) -> Vec<bool> {
    let shift = (n as f64).log2();
    mu.iter().zip(rho).map(|(m, r)| m.log2() >= r.log2() - shift).collect()
}

/// `μ(X^n \ T_μ^n)`, at most `1/n` by Markov's inequality.
pub fn complement_mass(mu: &Measure, rho: &Measure, n: usize) -> Result<f64> {
    let mask = t_set(mu, rho, n)?;
    let law = distribution(mu, n)?;
    Ok(mask.iter().zip(&law).filter(|(&inside, _)| !inside).map(|(_, p)| p).sum())
}

/// Greedy cover of `X^n` at one horizon.
#[derive(Debug, Clone)]
pub struct CoverState {
    pub alphabet: Alphabet,
    pub horizon: usize,
    /// `ρ` on `X^n`.
    pub rho: Vec<f64>,
    /// Class indices of the chosen members, in selection order.
    pub chosen: Vec<usize>,
    /// `μ_k` on `X^n` for each chosen member.
    pub laws: Vec<Vec<f64>>,
    /// Gains `m_k = ρ(T_{μ_k} \ T_{k-1})`.
    pub gains: Vec<f64>,
    /// Step (1-based) at which each atom entered the cover.
    pub entered: Vec<Option<usize>>,
}

impl CoverState {
    /// Number of positive gains.
    pub fn len(&self) -> usize {
        self.chosen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chosen.is_empty()
    }

    /// Whether atom `x` lies in the cumulative set `T_k`.
    pub fn covered(&self, x: usize, k: usize) -> bool {
        self.entered[x].is_some_and(|step| step <= k)
    }

    /// `|T_k|`.
    pub fn cover_size(&self, k: usize) -> usize {
        (0..self.entered.len()).filter(|&x| self.covered(x, k)).count()
    }

    pub const CSV_HEADER: &'static str = "scenario,n,k,member,gain,cover_size";

    pub fn csv_rows(&self, scenario: &str) -> Vec<String> {
        (1..=self.len())
            .map(|k| {
                format!(
                    "{scenario},{},{k},{},{},{}",
                    self.horizon,
                    self.chosen[k - 1],
                    fmt_real(self.gains[k - 1]),
                    self.cover_size(k)
                )
            })
            .collect()
    }
}

/// Greedy selection by uncovered `ρ`-mass; ties go to the lowest class index.
pub fn greedy_cover(class: &[Measure], rho: &Measure, n: usize) -> Result<CoverState> {
    if class.is_empty() {
        return Err(Error::Empty("cannot cover with an empty class".into()));
    }
    if n == 0 {
        return Err(Error::Domain("horizon must be >= 1".into()));
    }
    let rho_log = log_distribution(rho, n)?;
    let rho_law: Vec<f64> = rho_log.iter().map(|l| l.prob()).collect();
    let member_logs: Vec<Vec<LogProb>> = class.iter().map(|m| log_distribution(m, n)).collect::<Result<_>>()?;
    let masks: Vec<Vec<bool>> = member_logs.iter().map(|l| t_mask(l, &rho_log, n)).collect();
    let mut entered: Vec<Option<usize>> = vec![None; rho_law.len()];
    let (mut chosen, mut laws, mut gains) = (Vec::new(), Vec::new(), Vec::new());
    loop {
        let mut best: Option<(usize, f64)> = None;
        for (i, mask) in masks.iter().enumerate() {
            let gain: f64 = mask
                .iter()
                .zip(&entered)
                .zip(&rho_law)
                .filter(|((&inside, e), _)| inside && e.is_none())
                .map(|(_, p)| p)
                .sum();
            if gain > best.map_or(0.0, |(_, g)| g) {
                best = Some((i, gain));
            }
        }
        let Some((i, gain)) = best else { break };
        let step = chosen.len() + 1;
        for (e, &inside) in entered.iter_mut().zip(&masks[i]) {
            if inside && e.is_none() {
                *e = Some(step);
            }
        }
        chosen.push(i);
        laws.push(member_logs[i].iter().map(|l| l.prob()).collect());
        gains.push(gain);
    }
    Ok(CoverState { alphabet: rho.alphabet(), horizon: n, rho: rho_law, chosen, laws, gains, entered })
}

/// `ν_n = Σ_k w_k μ_k` on `X^n`; a sub-probability, left unnormalized.
pub fn nu_n(cover: &CoverState) -> Vec<f64> {
    let mut out = vec![0.0; cover.rho.len()];
    for (k, law) in cover.laws.iter().enumerate() {
        let w = WeightScheme::Quadratic.weight(k + 1);
        for (o, p) in out.iter_mut().zip(law) {
            *o += w * p;
        }
    }
    out
}

/// Largest violation of `ν_n(x) >= w_k ρ(x)/n` over `k` and `x ∈ T_k`
/// (non-positive when the bound holds).
pub fn ext_violation(cover: &CoverState) -> f64 {
    let nu = nu_n(cover);
    let n = cover.horizon as f64;
    let mut worst = f64::NEG_INFINITY;
    for (x, entered) in cover.entered.iter().enumerate() {
        // the tightest k is the step the atom entered; larger k only weaken w_k
        if let Some(k) = entered {
            let need = WeightScheme::Quadratic.weight(*k) * cover.rho[x] / n;
            worst = worst.max(need - nu[x]);
        }
    }
    worst
}

/// `ν = γ/2 + (Σ_{n<=N} w_n ν_n⁺ + (Σ_{n>N} w_n) δ_0) / 2`, with `ν_n⁺` the
/// zero-padded extension of `ν_n`. `covers[i]` must have horizon `i + 1`.
pub fn assemble_nu(covers: &[CoverState], gamma: Measure) -> Result<Measure> {
    let Some(first) = covers.first() else {
        return Err(Error::Empty("no covers to assemble".into()));
    };
    let alphabet = first.alphabet;
    let mut components = Vec::with_capacity(covers.len());
    for (i, cover) in covers.iter().enumerate() {
        if cover.horizon != i + 1 {
            return Err(Error::Validation(format!("cover {i} has horizon {}, expected {}", cover.horizon, i + 1)));
        }
        components.push(Measure::finite_horizon(alphabet, cover.horizon, nu_n(cover), 0)?);
    }
    let padding = Measure::deterministic(alphabet, Generator::Constant(0))?;
    let covered = Measure::mixture(Mixture::with_tail(components, &WeightScheme::Quadratic, padding)?);
    Ok(Measure::mixture(Mixture::from_weights(vec![gamma, covered], vec![0.5, 0.5])?))
}

/// The regularizer `γ′ = Σ_{n<=N} w_n γ′_n⁺ + (Σ_{n>N} w_n) δ_0`, where `γ′_n`
/// averages the argmax measures `μ_x` over all `x` charged by the class.
pub fn gamma_prime(class: &ParametricClass, max_horizon: usize) -> Result<Measure> {
    if max_horizon == 0 {
        return Err(Error::Domain("maximum horizon must be >= 1".into()));
    }
    let alphabet = class.alphabet();
    let mut components = Vec::with_capacity(max_horizon);
    for n in 1..=max_horizon {
        components.push(Measure::finite_horizon(alphabet, n, gamma_prime_n(class, n)?, 0)?);
    }
    let padding = Measure::deterministic(alphabet, Generator::Constant(0))?;
    Ok(Measure::mixture(Mixture::with_tail(components, &WeightScheme::Quadratic, padding)?))
}

/// `γ′_n` on `X^n`.
pub fn gamma_prime_n(class: &ParametricClass, n: usize) -> Result<Vec<f64>> {
    let alphabet = class.alphabet();
    let atoms = alphabet.check_budget(n)?;
    let mut out = vec![0.0; atoms];
    let mut charged = 0usize;
    for i in 0..atoms {
        let x = alphabet.decode(i, n);
        if class.sup_log_prob(&x)?.is_zero() {
            continue;
        }
        let law = distribution(&class.argmax_measure(&x)?, n)?;
        for (o, p) in out.iter_mut().zip(law) {
            *o += p;
        }
        charged += 1;
    }
    if charged == 0 {
        return Err(Error::Empty(format!("no member charges X^{n}")));
    }
    out.iter_mut().for_each(|p| *p /= charged as f64);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divergence::dn_block;
    use crate::process::check_consistency;
    use crate::weights::QUADRATIC_NORMALIZER;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_chain(rng: &mut ChaCha8Rng) -> Measure {
        let row = |rng: &mut ChaCha8Rng| {
            let p: f64 = rng.gen_range(0.02..0.98);
            vec![p, 1.0 - p]
        };
        let table = vec![row(rng), row(rng)];
        let initial = row(rng);
        Measure::markov(Alphabet::BINARY, 1, table, initial).unwrap()
    }

    fn random_class(seed: u64, size: usize) -> Vec<Measure> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..size).map(|_| random_chain(&mut rng)).collect()
    }

    #[test]
    fn t_set_examples() {
        let u = Measure::uniform_iid(Alphabet::BINARY);
        for n in 1..=6 {
            assert!(t_set(&u, &u, n).unwrap().iter().all(|&b| b));
        }
        let zeros = Measure::constant(0);
        let mask = t_set(&zeros, &u, 4).unwrap();
        assert!(mask[0]);
        assert!(mask[1..].iter().all(|&b| !b));
    }

    #[test]
    fn markov_inequality_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let mu = random_chain(&mut rng);
            let rho = random_chain(&mut rng);
            let n = rng.gen_range(1..=12);
            assert!(complement_mass(&mu, &rho, n).unwrap() <= 1.0 / n as f64 + 1e-12);
        }
    }

    #[test]
    fn cover_examples() {
        let u = Measure::uniform_iid(Alphabet::BINARY);
        let mu = Measure::bernoulli(0.3).unwrap();
        let single = greedy_cover(std::slice::from_ref(&mu), &u, 5).unwrap();
        assert_eq!(single.len(), 1);
        let mask = t_set(&mu, &u, 5).unwrap();
        for (x, inside) in mask.iter().enumerate() {
            assert_eq!(single.covered(x, 1), *inside);
        }
        let pair = greedy_cover(&[Measure::constant(0), Measure::constant(1)], &u, 3).unwrap();
        assert_eq!(pair.chosen, vec![0, 1]);
        assert_eq!(pair.gains, vec![0.125, 0.125]);
        assert_eq!(pair.cover_size(1), 1);
        assert_eq!(pair.cover_size(2), 2);
        assert!(greedy_cover(&[], &u, 3).is_err());
        let rows = pair.csv_rows("cover");
        assert_eq!(rows[1], "cover,3,2,1,1.2500000000000000e-1,2");
    }

    #[test]
    fn singleton_nu_n_structure() {
        let mu = Measure::bernoulli(0.3).unwrap();
        let cover = greedy_cover(std::slice::from_ref(&mu), &Measure::uniform_iid(Alphabet::BINARY), 4).unwrap();
        let nu = nu_n(&cover);
        let law = distribution(&mu, 4).unwrap();
        for (a, b) in nu.iter().zip(&law) {
            assert!((a - QUADRATIC_NORMALIZER * b).abs() < 1e-15);
        }
    }

    #[test]
    fn covers_of_random_classes() {
        for seed in 0..10 {
            let class = random_class(seed, 10);
            let rho = Measure::mixture(Mixture::new(class.clone(), &WeightScheme::Explicit(vec![0.1; 10])).unwrap());
            for n in 1..=8 {
                let cover = greedy_cover(&class, &rho, n).unwrap();
                assert!(cover.gains.windows(2).all(|g| g[0] >= g[1]));
                assert!(cover.gains.iter().all(|&g| g > 0.0));
                assert!(ext_violation(&cover) <= 0.0);
                assert!(nu_n(&cover).iter().sum::<f64>() <= 1.0 + 1e-12);
                for k in 1..cover.len() {
                    assert!((0..cover.rho.len()).all(|x| !cover.covered(x, k) || cover.covered(x, k + 1)));
                }
            }
        }
    }

    #[test]
    fn assembled_nu_bounds() {
        let class = random_class(42, 6);
        let rho = Measure::laplace(Alphabet::BINARY);
        let covers: Vec<CoverState> = (1..=8).map(|n| greedy_cover(&class, &rho, n).unwrap()).collect();
        let nu = assemble_nu(&covers, Measure::uniform_iid(Alphabet::BINARY)).unwrap();
        assert!(check_consistency(&nu, 9).unwrap().passed(1e-9));
        for cover in &covers {
            let n = cover.horizon;
            let wn = WeightScheme::Quadratic.weight(n);
            for x in 0..cover.rho.len() {
                let seq = Alphabet::BINARY.decode(x, n);
                let p = nu.prob(&seq);
                assert!(p >= 0.5 * (0.5f64).powi(n as i32) * (1.0 - 1e-12));
                if let Some(k) = cover.entered[x] {
                    let wk = WeightScheme::Quadratic.weight(k);
                    assert!(p >= 0.5 * wn * wk * cover.rho[x] / n as f64 * (1.0 - 1e-12));
                }
            }
        }
    }

    #[test]
    fn singleton_nu_redundancy_decays() {
        let mu = Measure::bernoulli(0.3).unwrap();
        let rho = Measure::uniform_iid(Alphabet::BINARY);
        let covers: Vec<CoverState> =
            (1..=12).map(|n| greedy_cover(std::slice::from_ref(&mu), &rho, n).unwrap()).collect();
        let nu = assemble_nu(&covers, rho).unwrap();
        let series: Vec<f64> = (1..=12).map(|n| dn_block(&mu, &nu, n).unwrap().dn / n as f64).collect();
        assert!(series.windows(2).all(|w| w[1] < w[0]), "{series:?}");
    }

    #[test]
    fn gamma_prime_lower_bound() {
        let class_members = random_class(3, 4);
        let class = ParametricClass::FiniteList(class_members.clone());
        let gp = gamma_prime(&class, 8).unwrap();
        for n in 1..=8 {
            let wn = WeightScheme::Quadratic.weight(n);
            for i in 0..(1 << n) {
                let x = Alphabet::BINARY.decode(i, n);
                let lhs = gp.prob(&x);
                for m in &class_members {
                    assert!(lhs >= 0.5 * wn * (0.5f64).powi(n as i32) * m.prob(&x) * (1.0 - 1e-12));
                }
            }
        }
        let mu = Measure::bernoulli(0.3).unwrap();
        let single = gamma_prime_n(&ParametricClass::FiniteList(vec![mu.clone()]), 5).unwrap();
        for (a, b) in single.iter().zip(distribution(&mu, 5).unwrap()) {
            assert!((a - b).abs() < 1e-15);
        }
        let none = ParametricClass::MarkovFull { alphabet: Alphabet::BINARY, order: 1 };
        assert!(gamma_prime(&none, 3).is_ok());
    }

    #[test]
    fn gamma_prime_bernoulli_averages_empirical_measures() {
        let n = 6;
        let gp = gamma_prime_n(&ParametricClass::BernoulliFull, n).unwrap();
        // oracle: average over x of Bernoulli(k(x)/n), grouped by zero count k
        let mut expect = vec![0.0; 1 << n];
        let mut binom = 1.0;
        for k in 0..=n {
            if k > 0 {
                binom *= (n - k + 1) as f64 / k as f64;
            }
            let law = distribution(&Measure::bernoulli(k as f64 / n as f64).unwrap(), n).unwrap();
            for (e, p) in expect.iter_mut().zip(law) {
                *e += binom * p / 64.0;
            }
        }
        for (a, b) in gp.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-15);
        }
        struct NoArgmax;
        impl crate::nml::ClassOracle for NoArgmax {
            fn alphabet(&self) -> Alphabet {
                Alphabet::BINARY
            }
            fn sup_log_prob(&self, _x: &[crate::seq::Symbol]) -> LogProb {
                LogProb::ONE
            }
        }
        let custom = ParametricClass::Custom(std::sync::Arc::new(NoArgmax));
        assert!(matches!(gamma_prime(&custom, 2), Err(Error::NoArgmaxOracle)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn cover_invariants(seed in 0u64..100_000, size in 1usize..8, n in 1usize..8) {
            let class = random_class(seed, size);
            let rho = Measure::laplace(Alphabet::BINARY);
            let cover = greedy_cover(&class, &rho, n).unwrap();
            prop_assert!(cover.gains.windows(2).all(|g| g[0] >= g[1]));
            prop_assert!(ext_violation(&cover) <= 0.0);
            // each gain equals the ρ-mass of atoms entering at that step
            for (k, &g) in cover.gains.iter().enumerate() {
                let fresh: f64 = (0..cover.rho.len()).filter(|&x| cover.entered[x] == Some(k + 1)).map(|x| cover.rho[x]).sum();
                prop_assert!((fresh - g).abs() <= 1e-12);
            }
            for m in &class {
                prop_assert!(complement_mass(m, &rho, n).unwrap() <= 1.0 / n as f64 + 1e-12);
            }
        }
    }
}
