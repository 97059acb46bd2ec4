use super::{random_markov1, random_member_set, Params, Table};
use crate::capacity::{blahut_arimoto, build_rho_capacity, capacity_growth_series, minimax_oracle, truncate_class, DEFAULT_MAX_ITER};
use crate::cover::{assemble_nu, complement_mass, ext_violation, gamma_prime, greedy_cover, CoverState};
use crate::divergence::{binary_h, dn_block, dn_deterministic_series, dn_stepwise, entropy_profile};
use crate::error::{Error, Result};
use crate::nml::{build_rho_c, cn_series, ml_bound, negative_dn_demo, ParametricClass};
use crate::process::{FamilyKind, Generator, Measure, Mixture};
use crate::seq::{Alphabet, Symbol};
use crate::weights::{WeightScheme, QUADRATIC_NORMALIZER};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn p_label(p: f64) -> String {
    format!("p={p}")
}

fn log2_zeta2() -> f64 {
    -QUADRATIC_NORMALIZER.log2()
}

pub(super) fn kl_identity(params: &Params) -> Result<Table> {
    let n_max = params.max_n(10, 16)?;
    let tol = params.tol(1e-9)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed());
    let mut t = Table::new("kl-identity");
    for pair in 0..100 {
        let mu = random_markov1(&mut rng);
        let rho = random_markov1(&mut rng);
        for n in 1..=n_max {
            let step = dn_stepwise(&mu, &rho, n)?.dn;
            let block = dn_block(&mu, &rho, n)?.dn;
            t.exact("stepwise-vs-block", &format!("pair={pair}"), n, step, block, tol);
        }
    }
    Ok(t)
}

pub(super) fn laplace(params: &Params) -> Result<Table> {
    let n_max = params.max_n(16, 20)?;
    let points = params.grid(11, 2)?;
    let tol = params.tol(1e-9)?;
    let lap = Measure::laplace(Alphabet::BINARY);
    let mut t = Table::new("laplace");
    let next0 = |x: &[Symbol]| lap.next_distribution(&lap.cursor_at(x)).map_or(f64::NAN, |d| d[0]);
    t.exact("next-prob-0", "prefix=", 0, next0(&[]), 0.5, 1e-15);
    t.exact("next-prob-0", "prefix=00", 2, next0(&[0, 0]), 0.75, 1e-15);
    for i in 0..points {
        let p = i as f64 / (points - 1) as f64;
        let mu = Measure::bernoulli(p)?;
        for n in 1..=n_max {
            let d = dn_block(&mu, &lap, n)?.dn / n as f64;
            let bound = 2.0 * ((n + 1) as f64).log2() / n as f64;
            t.bounded("d_n/n", &p_label(p), n, d, bound, tol);
        }
    }
    Ok(t)
}

/// `Σ_i w_{i+1} Bernoulli(i/d)` plus the remaining weight on the fair coin.
fn rational_grid_mixture(denominator: usize) -> Result<(Measure, Vec<f64>, Vec<f64>)> {
    let qs: Vec<f64> = (0..=denominator).map(|i| i as f64 / denominator as f64).collect();
    let comps = qs.iter().map(|&q| Measure::bernoulli(q)).collect::<Result<Vec<_>>>()?;
    let mix = Mixture::with_tail(comps, &WeightScheme::Quadratic, Measure::uniform_iid(Alphabet::BINARY))?;
    let weights = (1..=qs.len()).map(|k| WeightScheme::Quadratic.weight(k)).collect();
    Ok((Measure::mixture(mix), qs, weights))
}

fn grid_bound(p: f64, n: usize, qs: &[f64], weights: &[f64]) -> f64 {
    qs.iter()
        .zip(weights)
        .map(|(&q, &w)| -w.log2() / n as f64 + binary_h(p, q))
        .fold(f64::INFINITY, f64::min)
}

pub(super) fn bernoulli_mixture(params: &Params) -> Result<Table> {
    let n_max = params.max_n(16, 20)?;
    let denominator = params.grid(16, 1)?;
    let tol = params.tol(1e-9)?;
    let (rho, qs, weights) = rational_grid_mixture(denominator)?;
    let mut t = Table::new("bernoulli-mixture");
    for p in [1.0 / 3.0, 0.5, 0.8, 0.95] {
        let mu = Measure::bernoulli(p)?;
        for n in 1..=n_max {
            let d = dn_block(&mu, &rho, n)?.dn / n as f64;
            t.bounded("d_n/n", &p_label(p), n, d, grid_bound(p, n, &qs, &weights), tol);
        }
    }
    // the bound is analytic, so it can be taken far beyond enumeration range
    let far = 1usize << 20;
    let mut last = f64::INFINITY;
    for d in [2usize, 4, 8, 16, 32, 64, 128] {
        let (_, qs, weights) = rational_grid_mixture(d)?;
        let b = grid_bound(1.0 / 3.0, far, &qs, &weights);
        t.value("bound-refinement", &format!("p=1/3;denominator={d}"), far, b);
        t.holds(&format!("bound did not shrink at denominator {d}"), b < last);
        last = b;
    }
    Ok(t)
}

pub(super) fn weights_matter(params: &Params) -> Result<Table> {
    let n_max = params.max_n(1 << 14, 1 << 14)?;
    let tol = params.tol(1e-9)?;
    let mu = Measure::constant(0);
    let nu = Measure::family(FamilyKind::ZerosThenOnes, WeightScheme::Quadratic)?;
    let nu_geo = Measure::family(FamilyKind::ZerosThenOnes, WeightScheme::Geometric)?;
    let quad = dn_deterministic_series(&mu, &nu, n_max)?;
    let geo = dn_deterministic_series(&mu, &nu_geo, n_max)?;
    let mut t = Table::new("weights-matter");
    for n in 1..=n_max {
        let shown = n <= 64 || n.is_power_of_two();
        let closed = -WeightScheme::Quadratic.log_tail(n);
        if shown {
            t.exact("d_n(mu,nu')", "geometric", n, geo[n - 1], (n - 1) as f64, tol);
            t.exact("d_n(mu,nu)", "quadratic", n, quad[n - 1], closed, tol);
        } else {
            t.check_close("d_n(mu,nu')", "geometric", n, geo[n - 1], (n - 1) as f64, tol);
            t.check_close("d_n(mu,nu)", "quadratic", n, quad[n - 1], closed, tol);
        }
        if n >= 2 {
            t.check_le("d_n(mu,nu)<=2log2(n)+2", "quadratic", n, quad[n - 1], 2.0 * (n as f64).log2() + 2.0, tol);
        }
    }
    Ok(t)
}

/// First horizon of the doubling-decay check on `d_n / n`.
pub const DECAY_FROM: usize = 64;

/// A binary path whose zero count stays below `√t` at every prefix `t`;
/// a zero is placed with probability 1/2 whenever the constraint allows it.
pub fn sparse_sequence<R: Rng>(rng: &mut R, n: usize) -> Vec<Symbol> {
    let mut zeros = 0usize;
    (1..=n)
        .map(|t| {
            if (zeros + 1) * (zeros + 1) < t && rng.gen_bool(0.5) {
                zeros += 1;
                0
            } else {
                1
            }
        })
        .collect()
}

/// Reject paths with at least `√t` zeros among the first `t` symbols.
pub fn validate_sparse(path: &[Symbol]) -> Result<()> {
    let mut zeros = 0usize;
    for (i, &s) in path.iter().enumerate() {
        zeros += usize::from(s == 0);
        if zeros * zeros > i {
            return Err(Error::Validation(format!("{zeros} zeros among the first {} symbols", i + 1)));
        }
    }
    Ok(())
}

pub(super) fn sparse_deterministic(params: &Params) -> Result<Table> {
    let n_max = params.max_n(1 << 14, 1 << 16)?;
    let count = params.grid(50, 2)?;
    let tol = params.tol(1e-9)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed());
    let mut paths: Vec<Vec<Symbol>> = Vec::with_capacity(count);
    while paths.len() < count {
        let p = sparse_sequence(&mut rng, n_max);
        if !paths.contains(&p) {
            paths.push(p);
        }
    }
    let members: Vec<Measure> = paths
        .iter()
        .map(|p| {
            validate_sparse(p)?;
            Measure::deterministic(Alphabet::BINARY, Generator::Explicit { prefix: p.clone(), tail: 1 })
        })
        .collect::<Result<_>>()?;
    let nu = Measure::harmonic(1);
    let mut t = Table::new("sparse-deterministic");
    for (i, (mu, path)) in members.iter().zip(&paths).enumerate() {
        let label = format!("member={i}");
        let series = dn_deterministic_series(mu, &nu, n_max)?;
        let mut closed = 0.0;
        for n in 1..=n_max {
            let tf = n as f64;
            closed += if path[n - 1] == 0 { (tf + 1.0).log2() } else { ((tf + 1.0) / tf).log2() };
            let d = series[n - 1];
            t.check_close("d_n-closed-form", &label, n, d, closed, tol * closed.max(1.0));
            if n >= 4 {
                let bound = 2.0 * tf.sqrt() * (tf + 1.0).log2();
                if n.is_power_of_two() {
                    t.bounded("d_n", &label, n, d, bound, tol);
                } else {
                    t.check_le("d_n", &label, n, d, bound, tol);
                }
            }
        }
        // short prefixes can front-load zeros, so the doubling decay is
        // asserted only once the √n zero budget dominates
        let mut n = DECAY_FROM;
        while 2 * n <= n_max {
            t.holds(
                &format!("d_n/n not decreasing for {label} at n={n}"),
                series[2 * n - 1] / ((2 * n) as f64) < series[n - 1] / (n as f64),
            );
            n *= 2;
        }
        let j = (i + 1) % members.len();
        let first = (0..n_max).find(|&s| paths[i][s] != paths[j][s]).map(|s| s + 1);
        let cross = dn_deterministic_series(mu, &members[j], n_max)?;
        let expect = |n: usize| if first.is_some_and(|f| n >= f) { f64::INFINITY } else { 0.0 };
        t.holds(
            &format!("d_n(member {i}, member {j}) not infinite exactly from the first disagreement"),
            (1..=n_max).all(|n| cross[n - 1] == expect(n)),
        );
        t.value("first-disagreement", &format!("members={i}/{j}"), n_max, first.map_or(f64::INFINITY, |f| f as f64));
    }
    Ok(t)
}

/// Every binary Markov chain of order `0..=max_order` whose transition
/// probabilities lie on `{1/d, .., (d-1)/d}`, with its (order, index) weights.
fn stationary_grid(max_order: usize, denominator: usize) -> Result<Vec<(usize, Vec<f64>, Measure)>> {
    let grid: Vec<f64> = (1..denominator).map(|i| i as f64 / denominator as f64).collect();
    let mut out = Vec::new();
    for k in 0..=max_order {
        let rows = 1usize << k;
        let combos = grid.len().pow(rows as u32);
        for c in 0..combos {
            let mut rest = c;
            let params: Vec<f64> = (0..rows)
                .map(|_| {
                    let q = grid[rest % grid.len()];
                    rest /= grid.len();
                    q
                })
                .collect();
            let measure = if k == 0 {
                Measure::bernoulli(params[0])?
            } else {
                let table = params.iter().map(|&q| vec![q, 1.0 - q]).collect();
                Measure::stationary_markov(Alphabet::BINARY, k, table)?
            };
            out.push((k, params, measure));
        }
    }
    Ok(out)
}

pub(super) fn stationary_mixture(params: &Params) -> Result<Table> {
    const MAX_ORDER: usize = 2;
    let n_max = params.max_n(10, 14)?;
    let denominator = params.grid(4, 2)?;
    let tol = params.tol(1e-9)?;
    let members = stationary_grid(MAX_ORDER, denominator)?;
    let mut index_in_order = vec![0usize; MAX_ORDER + 1];
    let mut weights = Vec::with_capacity(members.len() + 1);
    for (k, _, _) in &members {
        index_in_order[*k] += 1;
        weights.push(WeightScheme::Quadratic.weight(k + 1) * WeightScheme::Quadratic.weight(index_in_order[*k]));
    }
    let rest = 1.0 - weights.iter().sum::<f64>();
    let mut comps: Vec<Measure> = members.iter().map(|(_, _, m)| m.clone()).collect();
    comps.push(Measure::uniform_iid(Alphabet::BINARY));
    weights.push(rest);
    let nu = Measure::mixture(Mixture::from_weights(comps, weights.clone())?);

    let grid: Vec<f64> = (1..denominator).map(|i| i as f64 / denominator as f64).collect();
    let (hi, mid) = (grid[grid.len() - 1], grid[grid.len() / 2]);
    let find = |k: usize, params: &[f64]| members.iter().position(|(kk, p, _)| *kk == k && p == params);
    let targets = [("order1-target", 1usize, vec![hi, mid]), ("iid-target", 0usize, vec![mid])];
    let mut t = Table::new("stationary-mixture");
    for (series, k, params_) in targets {
        let idx = find(k, &params_).ok_or_else(|| Error::Check("target missing from grid".into()))?;
        let target = &members[idx].2;
        let w = weights[idx];
        for n in 1..=n_max {
            let d = dn_block(target, &nu, n)?.dn / n as f64;
            t.bounded(series, &format!("q={params_:?}").replace(',', ";"), n, d, -w.log2() / n as f64, tol);
        }
    }
    let profile = entropy_profile(&members[find(1, &[hi, mid]).unwrap()].2, 6)?;
    for (k, h) in profile.h.iter().enumerate() {
        t.value("h_k", "order1-target", k, *h);
    }
    t.holds("h_k not monotone for the target chain", profile.is_monotone(1e-12));
    Ok(t)
}

pub(super) fn nml_negative(_params: &Params) -> Result<Table> {
    let r = negative_dn_demo()?;
    let mut t = Table::new("nml-negative");
    let third = 1.0 / 3.0;
    t.exact("lambda", "x=0", 1, r.lambda1[0], 0.5, 1e-15);
    t.exact("lambda", "x=1", 1, r.lambda1[1], 0.5, 1e-15);
    for (i, x, e) in [(0, "00", third), (1, "01", third), (2, "10", 0.0), (3, "11", third)] {
        t.exact("lambda", &format!("x={x}"), 2, r.lambda2[i], e, 1e-15);
    }
    t.exact("lambda-conditional", "x=0|0", 2, r.conditional[0], 2.0 / 3.0, 1e-15);
    t.exact("lambda-conditional", "x=1|0", 2, r.conditional[1], 2.0 / 3.0, 1e-15);
    t.exact("conditional-sum", "given=0", 2, r.conditional_sum, 4.0 / 3.0, 1e-15);
    t.exact("d_2(mu3|0,lambda|0)", "-", 2, r.divergence, 0.75f64.log2(), 1e-12);
    t.holds("NML conditionals unexpectedly normalized", !r.normalized);
    Ok(t)
}

fn bernoulli_cn_closed_form(n: usize) -> f64 {
    let mut binom = 1.0f64;
    let mut total = 0.0;
    for k in 0..=n {
        if k > 0 {
            binom *= (n - k + 1) as f64 / k as f64;
        }
        let p = k as f64 / n as f64;
        total += binom * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32);
    }
    total
}

pub(super) fn nml_normalizers(params: &Params) -> Result<Table> {
    let n_max = params.max_n(16, 20)?;
    let mut t = Table::new("nml-normalizers");
    for (n, lc) in cn_series(&ParametricClass::BernoulliFull, n_max)? {
        let cn = lc.exp2();
        t.bounded("c_n<=n+1", "bernoulli-full", n, cn, (n + 1) as f64, 1e-12);
        t.check_close("c_n-closed-form", "bernoulli-full", n, cn, bernoulli_cn_closed_form(n), 1e-12 * cn);
    }
    let markov = ParametricClass::MarkovFull { alphabet: Alphabet::BINARY, order: 1 };
    for (n, lc) in cn_series(&markov, n_max.min(16))? {
        t.value("log2 c_n", "markov-full-1", n, lc);
        if n >= 4 {
            t.bounded("log2 c_n/log2 n", "markov-full-1", n, lc / (n as f64).log2(), 3.0, 0.0);
        }
    }
    for (n, lc) in cn_series(&ParametricClass::AllDeterministic(Alphabet::BINARY), n_max.min(12))? {
        t.exact("log2 c_n", "all-deterministic", n, lc, n as f64, 0.0);
        t.holds(&format!("deterministic bound vanished at n={n}"), ml_bound(lc, n) >= 1.0);
    }
    if let Some(text) = params.class_text()? {
        let class = ParametricClass::parse(&text)?;
        for (n, lc) in cn_series(&class, n_max.min(12))? {
            t.value("log2 c_n", "class-file", n, lc);
            t.value("ml-bound", "class-file", n, ml_bound(lc, n));
        }
    }
    Ok(t)
}

pub(super) fn nml_bound(params: &Params) -> Result<Table> {
    let n_max = params.max_n(14, 16)?;
    let points = params.grid(21, 2)?;
    let tol = params.tol(1e-9)?;
    let pred = build_rho_c(&ParametricClass::BernoulliFull, n_max)?;
    let mut t = Table::new("nml-bound");
    for i in 0..points {
        let p = i as f64 / (points - 1) as f64;
        let mu = Measure::bernoulli(p)?;
        for n in 2..=n_max {
            let d = dn_block(&mu, &pred.predictor, n)?.dn / n as f64;
            let lc = pred.log_cn(n).expect("table built");
            t.bounded("d_n/n", &p_label(p), n, d, ml_bound(lc, n), tol);
        }
    }
    Ok(t)
}

pub(super) fn capacity(params: &Params) -> Result<Table> {
    let tol = params.tol(1e-9)?;
    let points = params.grid(21, 2)?;
    let n_max = params.max_n(12, 14)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed());
    let mut t = Table::new("capacity");
    for set in 0..20 {
        let members = rng.gen_range(1..=4);
        let atoms = rng.gen_range(2..=8);
        let rows = random_member_set(&mut rng, members, atoms);
        let ba = blahut_arimoto(&rows, tol, DEFAULT_MAX_ITER)?;
        let mm = minimax_oracle(&rows)?;
        t.exact("ba-vs-minimax", &format!("set={set};members={members};atoms={atoms}"), 0, ba.capacity, mm.value, 1e-5);
    }
    let det = ParametricClass::AllDeterministic(Alphabet::BINARY);
    for (n, r) in capacity_growth_series(&det, &[1, 2, 3], tol, None)? {
        t.exact("capacity", "all-deterministic", n, r.capacity, n as f64, 1e-6);
    }
    let grid = ParametricClass::bernoulli_grid(points)?;
    let horizons: Vec<usize> = [2, 4, 8, 12].into_iter().filter(|&n| n <= n_max).collect();
    let series = capacity_growth_series(&grid, &horizons, tol, None)?;
    let mut last = f64::INFINITY;
    for (n, r) in &series {
        let nml = cn_series(&ParametricClass::BernoulliFull, *n)?.last().unwrap().1;
        t.bounded("capacity<=log2 c_n", &format!("bernoulli-grid-{points}"), *n, r.capacity, nml, 1e-6);
        t.value("gap", &format!("bernoulli-grid-{points}"), *n, r.gap);
        let per = r.capacity / *n as f64;
        t.holds(&format!("C/n not strictly decreasing at n={n}"), per < last);
        t.holds(&format!("Blahut-Arimoto did not converge at n={n}"), r.converged);
        last = per;
    }
    if let Some((n, r)) = series.last() {
        for (i, p) in r.prior.iter().enumerate() {
            t.value("prior", &format!("member={i}"), *n, *p);
        }
    }
    if let Some(text) = params.class_text()? {
        let class = ParametricClass::parse(&text)?;
        let hs: Vec<usize> = (1..=n_max.min(8)).collect();
        for (n, r) in hs.iter().map(|&n| truncate_class(&class, n, Some(points)).and_then(|rows| {
            Ok((n, blahut_arimoto(&rows, tol, DEFAULT_MAX_ITER)?))
        })).collect::<Result<Vec<_>>>()? {
            t.value("capacity", "class-file", n, r.capacity);
        }
    }
    Ok(t)
}

pub(super) fn capacity_predictor(params: &Params) -> Result<Table> {
    let n_max = params.max_n(10, 12)?;
    let points = params.grid(21, 2)?;
    let tol = params.tol(1e-9)?;
    let grid = ParametricClass::bernoulli_grid(points)?;
    let pred = build_rho_capacity(&grid, n_max, 1e-6, None)?;
    let mut t = Table::new("capacity-predictor");
    t.holds("capacity predictor has a non-converged horizon", pred.converged());
    for (i, mu) in grid.members().expect("grid is finite").iter().enumerate() {
        let p = i as f64 / (points - 1) as f64;
        for n in 1..=n_max {
            let d = dn_block(mu, &pred.predictor, n)?.dn / n as f64;
            let c = pred.result(n).expect("built").capacity;
            let bound = (c + 1.0 + 2.0 * (n as f64).log2() + log2_zeta2()) / n as f64;
            t.bounded("d_n/n", &p_label(p), n, d, bound, tol);
        }
    }
    let det = build_rho_capacity(&ParametricClass::AllDeterministic(Alphabet::BINARY), 3, 1e-9, None)?;
    for n in 1..=3 {
        let c = det.result(n).expect("built").capacity;
        t.exact("capacity", "all-deterministic", n, c, n as f64, 1e-6);
        t.holds(&format!("deterministic per-symbol capacity below 1 at n={n}"), c / n as f64 >= 1.0 - 1e-6);
    }
    Ok(t)
}

fn check_cover(t: &mut Table, label: &str, cover: &CoverState, class: &[Measure], rho: &Measure) -> Result<()> {
    let n = cover.horizon;
    for (k, (&member, &gain)) in cover.chosen.iter().zip(&cover.gains).enumerate() {
        t.value("gain", &format!("{label};k={};member={member}", k + 1), n, gain);
    }
    t.holds(
        &format!("gains increase in {label} at n={n}"),
        cover.gains.windows(2).all(|g| g[0] >= g[1]) && cover.gains.iter().all(|&g| g > 0.0),
    );
    t.bounded("ext-violation", label, n, ext_violation(cover).max(0.0), 0.0, 0.0);
    for (i, mu) in class.iter().enumerate() {
        let mass = complement_mass(mu, rho, n)?;
        t.check_le("complement-mass<=1/n", &format!("{label};member={i}"), n, mass, 1.0 / n as f64, 1e-12);
    }
    Ok(())
}

pub(super) fn cover(params: &Params) -> Result<Table> {
    let n_max = params.max_n(8, 10)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed());
    let mut t = Table::new("cover");
    let uniform = Measure::uniform_iid(Alphabet::BINARY);
    let mut first_class = None;
    for c in 0..10 {
        let class: Vec<Measure> = (0..10).map(|_| random_markov1(&mut rng)).collect();
        let rho = Measure::mixture(Mixture::new(class.clone(), &WeightScheme::Explicit(vec![0.1; 10]))?);
        let mut covers = Vec::with_capacity(n_max);
        for n in 1..=n_max {
            let cover = greedy_cover(&class, &rho, n)?;
            check_cover(&mut t, &format!("class={c}"), &cover, &class, &rho)?;
            covers.push(cover);
        }
        if c == 0 {
            first_class = Some((class, covers));
        }
    }
    let (class, covers) = first_class.expect("ten classes built");
    let nu = assemble_nu(&covers, uniform.clone())?;
    for cover in &covers {
        let n = cover.horizon;
        let wn = WeightScheme::Quadratic.weight(n);
        let ok = (0..cover.rho.len()).all(|x| {
            let p = nu.prob(&Alphabet::BINARY.decode(x, n));
            let floor = cover.entered[x].map_or(0.0, |k| 0.5 * wn * WeightScheme::Quadratic.weight(k) * cover.rho[x] / n as f64);
            p >= floor.max(0.5 * 0.5f64.powi(n as i32)) * (1.0 - 1e-12)
        });
        t.holds(&format!("nu lower bound fails at n={n}"), ok);
    }
    for (i, mu) in class.iter().enumerate() {
        for n in 1..=n_max {
            t.value("d_n(mu,nu)/n", &format!("class=0;member={i}"), n, dn_block(mu, &nu, n)?.dn / n as f64);
        }
    }
    let gp_n = n_max.min(8);
    let gp = gamma_prime(&ParametricClass::FiniteList(class.clone()), gp_n)?;
    for n in 1..=gp_n {
        let wn = WeightScheme::Quadratic.weight(n);
        let worst = (0..1usize << n)
            .map(|x| {
                let seq = Alphabet::BINARY.decode(x, n);
                let lhs = gp.prob(&seq);
                class.iter().map(|m| 0.5 * wn * 0.5f64.powi(n as i32) * m.prob(&seq) - lhs).fold(f64::NEG_INFINITY, f64::max)
            })
            .fold(f64::NEG_INFINITY, f64::max);
        t.bounded("gamma-prime-violation", "class=0", n, worst.max(0.0), 0.0, 1e-15);
    }
    if let Some(text) = params.class_text()? {
        let ParametricClass::FiniteList(members) = ParametricClass::parse(&text)? else {
            return Err(Error::Unsupported("covers need a finite class file".into()));
        };
        let rho = Measure::laplace(members[0].alphabet());
        for n in 1..=n_max {
            let cover = greedy_cover(&members, &rho, n)?;
            check_cover(&mut t, "class-file", &cover, &members, &rho)?;
        }
    }
    Ok(t)
}
