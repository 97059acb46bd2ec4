//! Normalized maximum likelihood over a class of processes.
//!
//! For a class `C` and `x ∈ X^n` the coefficient `c_x = sup_{μ∈C} μ(x)` is
//! normalized by `c_n = Σ_x c_x` into `λ(x) = c_x / c_n`. The tables `λ_k`
//! are not consistent across horizons, so the predictor `ρ_c` mixes their
//! zero-padded extensions with weights `(6/π²) k^{-2}`.

use crate::error::{Error, Result};
use crate::logprob::{log_sum_exp2, LogProb};
use crate::process::descriptor::{fmt_real, Record};
use crate::process::{Cursor, Generator, Measure, Mixture};
use crate::seq::{show, Alphabet, Symbol};
use crate::weights::{WeightScheme, QUADRATIC_NORMALIZER};
use std::fmt;
use std::sync::Arc;

/// A supremum oracle supplied from outside the crate.
pub trait ClassOracle: Send + Sync {
    fn alphabet(&self) -> Alphabet;
    fn sup_log_prob(&self, x: &[Symbol]) -> LogProb;
    /// A member attaining at least half of the supremum on `x`.
    fn argmax_measure(&self, _x: &[Symbol]) -> Option<Measure> {
        None
    }
}

/// A class of process measures with a per-sequence supremum oracle.
#[derive(Clone)]
pub enum ParametricClass {
    FiniteList(Vec<Measure>),
    /// All binary Bernoulli i.i.d. measures, `p ∈ [0, 1]`.
    BernoulliFull,
    /// Bernoulli measures on an explicit parameter grid.
    BernoulliGrid(Vec<f64>),
    /// All order-`k` Markov measures (with any initial law).
    MarkovFull { alphabet: Alphabet, order: usize },
    /// All deterministic sequences.
    AllDeterministic(Alphabet),
    Custom(Arc<dyn ClassOracle>),
}

impl fmt::Debug for ParametricClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParametricClass::FiniteList(m) => write!(f, "FiniteList({} members)", m.len()),
            ParametricClass::BernoulliFull => write!(f, "BernoulliFull"),
            ParametricClass::BernoulliGrid(g) => write!(f, "BernoulliGrid({} points)", g.len()),
            ParametricClass::MarkovFull { alphabet, order } => {
                write!(f, "MarkovFull(|X|={}, k={order})", alphabet.size())
            }
            ParametricClass::AllDeterministic(a) => write!(f, "AllDeterministic(|X|={})", a.size()),
            ParametricClass::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl ParametricClass {
    /// Uniform grid `{0, 1/(m-1), .., 1}` of Bernoulli parameters.
    pub fn bernoulli_grid(points: usize) -> Result<Self> {
        if points < 2 {
            return Err(Error::Domain("a Bernoulli grid needs at least two points".into()));
        }
        Ok(ParametricClass::BernoulliGrid((0..points).map(|i| i as f64 / (points - 1) as f64).collect()))
    }

    pub fn alphabet(&self) -> Alphabet {
        match self {
            ParametricClass::FiniteList(m) => m.first().map(|m| m.alphabet()).unwrap_or(Alphabet::BINARY),
            ParametricClass::BernoulliFull | ParametricClass::BernoulliGrid(_) => Alphabet::BINARY,
            ParametricClass::MarkovFull { alphabet, .. } => *alphabet,
            ParametricClass::AllDeterministic(a) => *a,
            ParametricClass::Custom(o) => o.alphabet(),
        }
    }

    /// Explicit members, for the finite kinds.
    pub fn members(&self) -> Option<Vec<Measure>> {
        match self {
            ParametricClass::FiniteList(m) => Some(m.clone()),
            ParametricClass::BernoulliGrid(g) => g.iter().map(|&p| Measure::bernoulli(p).ok()).collect(),
            _ => None,
        }
    }

    /// `log2 sup_{μ∈C} μ(x)`.
    pub fn sup_log_prob(&self, x: &[Symbol]) -> Result<LogProb> {
        Ok(match self {
            ParametricClass::FiniteList(ms) => ms.iter().map(|m| m.log_prob(x)).fold(LogProb::ZERO, max_lp),
            ParametricClass::BernoulliGrid(g) => g
                .iter()
                .map(|&p| Measure::bernoulli(p).map(|m| m.log_prob(x)))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(LogProb::ZERO, max_lp),
            ParametricClass::BernoulliFull => {
                if x.iter().any(|&s| s > 1) {
                    return Err(Error::Domain("Bernoulli class is binary".into()));
                }
                let zeros = x.iter().filter(|&&s| s == 0).count();
                LogProb(ml_log(&[zeros, x.len() - zeros]))
            }
            ParametricClass::MarkovFull { alphabet, order } => LogProb(markov_ml_log(*alphabet, *order, x)),
            ParametricClass::AllDeterministic(_) => LogProb::ONE,
            ParametricClass::Custom(o) => o.sup_log_prob(x),
        })
    }

    /// A member attaining (at least half of) the supremum on `x`.
    pub fn argmax_measure(&self, x: &[Symbol]) -> Result<Measure> {
        match self {
            ParametricClass::FiniteList(_) | ParametricClass::BernoulliGrid(_) => {
                let members = self.members().ok_or(Error::NoArgmaxOracle)?;
                let mut best: Option<(LogProb, &Measure)> = None;
                for m in &members {
                    let lp = m.log_prob(x);
                    if best.is_none_or(|(b, _)| lp > b) {
                        best = Some((lp, m));
                    }
                }
                best.map(|(_, m)| m.clone()).ok_or_else(|| Error::Empty("class has no members".into()))
            }
            ParametricClass::BernoulliFull => {
                let zeros = x.iter().filter(|&&s| s == 0).count();
                let p = if x.is_empty() { 0.5 } else { zeros as f64 / x.len() as f64 };
                Measure::bernoulli(p)
            }
            ParametricClass::MarkovFull { alphabet, order } => markov_argmax(*alphabet, *order, x),
            ParametricClass::AllDeterministic(a) => {
                Measure::deterministic(*a, Generator::Explicit { prefix: x.to_vec(), tail: 0 })
            }
            ParametricClass::Custom(o) => o.argmax_measure(x).ok_or(Error::NoArgmaxOracle),
        }
    }

    /// Parse a class-specification file.
    ///
    /// The first record may be a `class kind=..` header with kind one of
    /// `finite`, `bernoulli-full`, `bernoulli-grid` (`points=..` or `size=..`),
    /// `markov-full` (`alphabet= order=`) or `all-deterministic` (`alphabet=`).
    /// Without a header every record is a member of a finite list.
    pub fn parse(text: &str) -> Result<Self> {
        let recs = crate::process::descriptor::records(text)?;
        let (header, body) = match recs.split_first() {
            Some((h, rest)) if h.tag == "class" => (Some(h), rest),
            _ => (None, &recs[..]),
        };
        let kind = header.map(class_kind).transpose()?.unwrap_or("finite");
        let finite = |body: &[Record]| -> Result<Vec<Measure>> {
            let mut it = body.iter();
            let mut out = Vec::new();
            while let Some(r) = it.next() {
                out.push(crate::process::descriptor::measure_from(r, &mut it)?);
            }
            Ok(out)
        };
        let h = header;
        let class = match kind {
            "finite" => {
                let ms = finite(body)?;
                if ms.is_empty() {
                    return Err(Error::Parse { line: 0, message: "finite class has no members".into() });
                }
                if ms.iter().any(|m| m.alphabet() != ms[0].alphabet()) {
                    return Err(Error::Parse { line: 0, message: "class members disagree on alphabet".into() });
                }
                ParametricClass::FiniteList(ms)
            }
            "bernoulli-full" => ParametricClass::BernoulliFull,
            "bernoulli-grid" => {
                let h = h.unwrap();
                if h.has("points") {
                    let pts = h.reals("points")?;
                    if pts.iter().any(|p| !(0.0..=1.0).contains(p)) || pts.is_empty() {
                        return Err(h.err("grid points must lie in [0,1]".into()));
                    }
                    ParametricClass::BernoulliGrid(pts)
                } else {
                    ParametricClass::bernoulli_grid(h.int("size")?).map_err(|e| h.err(e.to_string()))?
                }
            }
            "markov-full" => {
                let h = h.unwrap();
                ParametricClass::MarkovFull { alphabet: h.alphabet()?, order: h.int("order")? }
            }
            "all-deterministic" => ParametricClass::AllDeterministic(h.unwrap().alphabet()?),
            other => return Err(h.unwrap().err(format!("unknown class kind {other:?}"))),
        };
        if kind != "finite" && !body.is_empty() {
            return Err(body[0].err(format!("class {kind} takes no member records")));
        }
        Ok(class)
    }
}

fn class_kind(r: &Record) -> Result<&str> {
    r.fields
        .iter()
        .find(|(k, _)| k == "kind")
        .map(|(_, v)| v.as_str())
        .ok_or_else(|| r.err("class header needs kind=".into()))
}

fn max_lp(a: LogProb, b: LogProb) -> LogProb {
    if b > a {
        b
    } else {
        a
    }
}

/// `log2 Π_a (n_a / n)^{n_a}` with `0^0 = 1`.
fn ml_log(counts: &[usize]) -> f64 {
    let n: usize = counts.iter().sum();
    if n == 0 {
        return 0.0;
    }
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| c as f64 * (c as f64 / n as f64).log2())
        .sum()
}

fn transition_counts(alphabet: Alphabet, order: usize, x: &[Symbol]) -> Vec<Vec<usize>> {
    let q = alphabet.size();
    let contexts = alphabet.atoms(order).expect("order fits");
    let mut counts = vec![vec![0usize; q]; contexts];
    if x.len() > order {
        for t in order..x.len() {
            let ctx = alphabet.encode(&x[t - order..t]);
            counts[ctx][x[t]] += 1;
        }
    }
    counts
}

/// Maximum order-`k` Markov likelihood; the initial block gets probability one.
fn markov_ml_log(alphabet: Alphabet, order: usize, x: &[Symbol]) -> f64 {
    transition_counts(alphabet, order, x).iter().map(|row| ml_log(row)).sum()
}

fn markov_argmax(alphabet: Alphabet, order: usize, x: &[Symbol]) -> Result<Measure> {
    let q = alphabet.size();
    let table = transition_counts(alphabet, order, x)
        .into_iter()
        .map(|row| {
            let n: usize = row.iter().sum();
            if n == 0 {
                vec![1.0 / q as f64; q]
            } else {
                row.iter().map(|&c| c as f64 / n as f64).collect()
            }
        })
        .collect();
    let mut block: Vec<Symbol> = x.iter().copied().take(order).collect();
    block.resize(order, 0);
    let mut initial = vec![0.0; alphabet.atoms(order).expect("order fits")];
    initial[alphabet.encode(&block)] = 1.0;
    Measure::markov(alphabet, order, table, initial)
}

/// NML coefficients and distribution on `X^n`.
#[derive(Debug, Clone)]
pub struct NmlTable {
    pub alphabet: Alphabet,
    pub horizon: usize,
    /// `log2 c_x`, lexicographic over `X^n`.
    pub log_c: Vec<LogProb>,
    /// `log2 c_n`.
    pub log_cn: f64,
}

impl NmlTable {
    pub fn cn(&self) -> f64 {
        self.log_cn.exp2()
    }

    /// `λ(x)` for the lexicographic index `i`.
    pub fn lambda(&self, i: usize) -> f64 {
        if self.log_c[i].is_zero() {
            0.0
        } else {
            (self.log_c[i].log2() - self.log_cn).exp2()
        }
    }

    pub fn lambda_of(&self, x: &[Symbol]) -> f64 {
        self.lambda(self.alphabet.encode(x))
    }

    pub fn lambda_table(&self) -> Vec<f64> {
        (0..self.log_c.len()).map(|i| self.lambda(i)).collect()
    }

    /// `λ` continued by the padding symbol past the horizon.
    pub fn extend(&self, padding: Symbol) -> Result<Measure> {
        Measure::finite_horizon(self.alphabet, self.horizon, self.lambda_table(), padding)
    }

    pub const CSV_HEADER: &'static str = "scenario,sequence,c_x,lambda";

    pub fn csv_rows(&self, scenario: &str) -> Result<Vec<String>> {
        if self.horizon > 10 {
            return Err(Error::Domain("NML table dumps are limited to n <= 10".into()));
        }
        Ok((0..self.log_c.len())
            .map(|i| {
                let x = self.alphabet.decode(i, self.horizon);
                format!("{scenario},{},{},{}", show(&x), fmt_real(self.log_c[i].prob()), fmt_real(self.lambda(i)))
            })
            .collect())
    }
}

/// Exhaustive NML table on `X^n`.
pub fn build_nml_table(class: &ParametricClass, n: usize) -> Result<NmlTable> {
    let alphabet = class.alphabet();
    let atoms = alphabet.check_budget(n)?;
    let mut log_c = vec![LogProb::ZERO; atoms];
    match class {
        ParametricClass::FiniteList(ms) => {
            if ms.is_empty() {
                return Err(Error::Empty("c_n = 0: class has no members".into()));
            }
            let starts: Vec<Cursor> = ms.iter().map(|m| m.start()).collect();
            let mut path = Vec::with_capacity(n);
            finite_sup(ms, &starts, n, alphabet, &mut path, &mut log_c);
        }
        _ => {
            for (i, slot) in log_c.iter_mut().enumerate() {
                *slot = class.sup_log_prob(&alphabet.decode(i, n))?;
            }
        }
    }
    let log_cn = log_sum_exp2(&log_c.iter().map(|l| l.log2()).collect::<Vec<_>>());
    if log_cn == f64::NEG_INFINITY {
        return Err(Error::Empty("c_n = 0: no member gives mass to X^n".into()));
    }
    Ok(NmlTable { alphabet, horizon: n, log_c, log_cn })
}

fn finite_sup(
    ms: &[Measure],
    cursors: &[Cursor],
    depth: usize,
    alphabet: Alphabet,
    path: &mut Vec<Symbol>,
    out: &mut [LogProb],
) {
    if cursors.iter().all(|c| c.log_prob().is_zero()) {
        return;
    }
    if depth == 0 {
        out[alphabet.encode(path)] = cursors.iter().map(|c| c.log_prob()).fold(LogProb::ZERO, max_lp);
        return;
    }
    for a in alphabet.symbols() {
        let next: Vec<Cursor> = ms.iter().zip(cursors).map(|(m, c)| m.advance(c, a)).collect();
        path.push(a);
        finite_sup(ms, &next, depth - 1, alphabet, path, out);
        path.pop();
    }
}

/// `(n, log2 c_n)` for `n = 1..=max_n`.
pub fn cn_series(class: &ParametricClass, max_n: usize) -> Result<Vec<(usize, f64)>> {
    (1..=max_n).map(|n| Ok((n, build_nml_table(class, n)?.log_cn))).collect()
}

pub const CN_CSV_HEADER: &str = "scenario,n,log2_cn,bound";

/// One row per horizon: `log2 c_n` and the per-symbol redundancy bound.
pub fn cn_csv_rows(scenario: &str, series: &[(usize, f64)]) -> Vec<String> {
    series
        .iter()
        .map(|&(n, lc)| format!("{scenario},{n},{},{}", fmt_real(lc), fmt_real(ml_bound(lc, n))))
        .collect()
}

/// The NML predictor `ρ_c = Σ_{k<=N} w_k λ_k⁺ + (Σ_{k>N} w_k) δ_pad`, where
/// `λ_k⁺` is `λ_k` continued by the padding symbol `0`.
#[derive(Debug, Clone)]
pub struct NmlPredictor {
    pub predictor: Measure,
    pub tables: Vec<NmlTable>,
}

impl NmlPredictor {
    /// `log2 c_n` for `1 <= n <= N`.
    pub fn log_cn(&self, n: usize) -> Option<f64> {
        self.tables.get(n.checked_sub(1)?).map(|t| t.log_cn)
    }
}

pub fn build_rho_c(class: &ParametricClass, max_horizon: usize) -> Result<NmlPredictor> {
    if max_horizon == 0 {
        return Err(Error::Domain("maximum horizon must be >= 1".into()));
    }
    let alphabet = class.alphabet();
    alphabet.check_budget(max_horizon)?;
    let tables: Vec<NmlTable> = (1..=max_horizon).map(|k| build_nml_table(class, k)).collect::<Result<_>>()?;
    let components = tables.iter().map(|t| t.extend(0)).collect::<Result<Vec<_>>>()?;
    let padding = Measure::deterministic(alphabet, Generator::Constant(0))?;
    let predictor = Measure::mixture(Mixture::with_tail(components, &WeightScheme::Quadratic, padding)?);
    Ok(NmlPredictor { predictor, tables })
}

/// `(log2 c_n + 2 log2 n + log2(π²/6)) / n`.
pub fn ml_bound(log_cn: f64, n: usize) -> f64 {
    let n_f = n as f64;
    (log_cn + 2.0 * n_f.log2() - QUADRATIC_NORMALIZER.log2()) / n_f
}

/// Per-symbol redundancy bound of `ρ_c` at horizon `n`.
pub fn theorem_ml_bound(class: &ParametricClass, n: usize) -> Result<f64> {
    Ok(ml_bound(build_nml_table(class, n)?.log_cn, n))
}

/// The four two-step measures whose NML conditionals fail to normalize.
pub fn negative_dn_class() -> Vec<Measure> {
    let a = Alphabet::BINARY;
    let h = |t: [f64; 4]| Measure::finite_horizon(a, 2, t.to_vec(), 0).expect("valid table");
    vec![
        h([1.0, 0.0, 0.0, 0.0]), // μ1(00) = 1
        h([0.0, 1.0, 0.0, 0.0]), // μ2(01) = 1
        h([0.5, 0.5, 0.0, 0.0]), // μ3(00) = μ3(01) = 1/2
        h([0.0, 0.0, 0.0, 1.0]), // μ4(11) = 1
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct NegativeDnReport {
    /// `λ(0), λ(1)`.
    pub lambda1: [f64; 2],
    /// `λ(00), λ(01), λ(10), λ(11)`.
    pub lambda2: [f64; 4],
    /// `λ(0|0), λ(1|0)` computed as `λ(0x) / λ(0)`.
    pub conditional: [f64; 2],
    pub conditional_sum: f64,
    /// Whether the conditionals form a distribution (they do not).
    pub normalized: bool,
    /// `Σ_a μ3(a|0) log2(μ3(a|0) / λ(a|0))`.
    pub divergence: f64,
}

pub fn negative_dn_demo() -> Result<NegativeDnReport> {
    let members = negative_dn_class();
    let mu3 = members[2].clone();
    let class = ParametricClass::FiniteList(members);
    let t1 = build_nml_table(&class, 1)?;
    let t2 = build_nml_table(&class, 2)?;
    let lambda1 = [t1.lambda(0), t1.lambda(1)];
    let lambda2 = [t2.lambda(0), t2.lambda(1), t2.lambda(2), t2.lambda(3)];
    let conditional = [lambda2[0] / lambda1[0], lambda2[1] / lambda1[0]];
    let mu_cond = mu3.conditional(&crate::seq::Seq::new(vec![0], Alphabet::BINARY)?)?;
    let divergence = mu_cond
        .iter()
        .zip(&conditional)
        .map(|(&p, &q)| crate::logprob::plogpq(p, q))
        .sum();
    let conditional_sum = conditional.iter().sum::<f64>();
    Ok(NegativeDnReport {
        lambda1,
        lambda2,
        conditional,
        conditional_sum,
        normalized: (conditional_sum - 1.0).abs() < 1e-9,
        divergence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divergence::dn_block;
    use crate::process::check_consistency;
    use crate::seq::Seq;

    fn bits(s: &str) -> Vec<Symbol> {
        Seq::parse(s, Alphabet::BINARY).unwrap().symbols().to_vec()
    }

    /// Closed-form Shtarkov sum for the Bernoulli class: Σ_k C(n,k)(k/n)^k(1-k/n)^{n-k}.
    fn bernoulli_cn_oracle(n: usize) -> f64 {
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

    #[test]
    fn sup_prob_examples() {
        let b = ParametricClass::BernoulliFull;
        assert_eq!(b.sup_log_prob(&bits("0011")).unwrap().prob(), 1.0 / 16.0);
        assert_eq!(b.sup_log_prob(&bits("0000")).unwrap().prob(), 1.0);
        let four = ParametricClass::FiniteList(negative_dn_class());
        assert!(four.sup_log_prob(&bits("10")).unwrap().is_zero());
        assert_eq!(four.sup_log_prob(&bits("01")).unwrap().prob(), 1.0);
    }

    #[test]
    fn bernoulli_sup_matches_grid_maximum() {
        let grid: Vec<Measure> = (0..=1000).map(|i| Measure::bernoulli(i as f64 / 1000.0).unwrap()).collect();
        for i in 0..(1 << 10) {
            let x = Alphabet::BINARY.decode(i, 10);
            let sup = ParametricClass::BernoulliFull.sup_log_prob(&x).unwrap().prob();
            let best = grid.iter().map(|m| m.prob(&x)).fold(0.0, f64::max);
            // k/10 lies on the 1001-point grid
            assert!((sup - best).abs() <= 1e-6 * sup, "{x:?}");
        }
    }

    #[test]
    fn markov_sup_dominates_members() {
        let class = ParametricClass::MarkovFull { alphabet: Alphabet::BINARY, order: 1 };
        let member = Measure::markov(Alphabet::BINARY, 1, vec![vec![0.7, 0.3], vec![0.2, 0.8]], vec![0.4, 0.6]).unwrap();
        for i in 0..(1 << 8) {
            let x = Alphabet::BINARY.decode(i, 8);
            let sup = class.sup_log_prob(&x).unwrap();
            assert!(sup.log2() >= member.log_prob(&x).log2() - 1e-12);
            let arg = class.argmax_measure(&x).unwrap();
            assert!((arg.log_prob(&x).log2() - sup.log2()).abs() < 1e-12);
        }
        // "0101": transitions 0->1, 1->0, 0->1; all deterministic, sup = 1
        assert_eq!(class.sup_log_prob(&bits("0101")).unwrap().prob(), 1.0);
        // "0010": 0->0, 0->1, 1->0 gives (1/2)(1/2) = 1/4
        assert!((class.sup_log_prob(&bits("0010")).unwrap().prob() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn nml_table_examples() {
        let four = ParametricClass::FiniteList(negative_dn_class());
        let t1 = build_nml_table(&four, 1).unwrap();
        assert_eq!(t1.lambda_table(), vec![0.5, 0.5]);
        let t2 = build_nml_table(&four, 2).unwrap();
        let l = t2.lambda_table();
        for i in [0, 1, 3] {
            assert!((l[i] - 1.0 / 3.0).abs() < 1e-15);
        }
        assert_eq!(l[2], 0.0);
        let mu = Measure::stationary_markov(Alphabet::BINARY, 1, vec![vec![0.6, 0.4], vec![0.1, 0.9]]).unwrap();
        let single = build_nml_table(&ParametricClass::FiniteList(vec![mu.clone()]), 6).unwrap();
        assert!(single.log_cn.abs() < 1e-12);
        for i in 0..64 {
            assert!((single.lambda(i) - mu.prob(&Alphabet::BINARY.decode(i, 6))).abs() < 1e-15);
        }
        assert!(matches!(build_nml_table(&ParametricClass::FiniteList(vec![]), 2), Err(Error::Empty(_))));
    }

    #[test]
    fn lambda_tables_are_normalized() {
        for class in [
            ParametricClass::BernoulliFull,
            ParametricClass::MarkovFull { alphabet: Alphabet::BINARY, order: 1 },
            ParametricClass::AllDeterministic(Alphabet::new(3).unwrap()),
            ParametricClass::bernoulli_grid(5).unwrap(),
        ] {
            for n in 1..=8 {
                let s: f64 = build_nml_table(&class, n).unwrap().lambda_table().iter().sum();
                assert!((s - 1.0).abs() < 1e-9, "{class:?} n={n}");
            }
        }
    }

    #[test]
    fn bernoulli_normalizers() {
        let series = cn_series(&ParametricClass::BernoulliFull, 16).unwrap();
        assert!((series[0].1.exp2() - 2.0).abs() < 1e-12);
        assert!((series[1].1.exp2() - 2.5).abs() < 1e-12);
        for &(n, lc) in &series {
            assert!((lc.exp2() - bernoulli_cn_oracle(n)).abs() < 1e-9 * lc.exp2());
            assert!(lc.exp2() <= n as f64 + 1.0);
        }
    }

    #[test]
    fn deterministic_class_normalizer_is_two_to_the_n() {
        for n in 1..=10 {
            let t = build_nml_table(&ParametricClass::AllDeterministic(Alphabet::BINARY), n).unwrap();
            assert_eq!(t.log_cn, n as f64);
            assert!(theorem_ml_bound(&ParametricClass::AllDeterministic(Alphabet::BINARY), n).unwrap() >= 1.0);
        }
    }

    #[test]
    fn markov_normalizer_grows_polynomially() {
        let class = ParametricClass::MarkovFull { alphabet: Alphabet::BINARY, order: 1 };
        let series = cn_series(&class, 16).unwrap();
        let ratios: Vec<f64> = series[3..].iter().map(|&(n, lc)| lc / (n as f64).log2()).collect();
        // log2 c_n / log2 n stays bounded (two free parameters plus the initial symbol)
        assert!(ratios.iter().all(|&r| r > 0.0 && r < 3.0), "{ratios:?}");
    }

    #[test]
    fn rho_c_lower_bounds() {
        let fair = Measure::bernoulli(0.5).unwrap();
        let pred = build_rho_c(&ParametricClass::FiniteList(vec![fair]), 10).unwrap();
        for n in 1..=10 {
            let lhs = pred.predictor.log_prob(&vec![0; n]).log2();
            let w = WeightScheme::Quadratic.log_weight(n);
            assert!(lhs >= w - n as f64 - 1e-12);
        }
        let four = build_rho_c(&ParametricClass::FiniteList(negative_dn_class()), 4).unwrap();
        assert!(four.predictor.prob(&[0]) >= QUADRATIC_NORMALIZER * 0.5 - 1e-15);
        assert!(check_consistency(&four.predictor, 8).unwrap().passed(1e-9));
        assert!((four.predictor.start().log_prob().prob() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn singleton_bound_and_plug_in() {
        let mu = Measure::bernoulli(0.3).unwrap();
        for n in [2usize, 5, 9] {
            let b = theorem_ml_bound(&ParametricClass::FiniteList(vec![mu.clone()]), n).unwrap();
            let expect = (2.0 * (n as f64).log2() + (std::f64::consts::PI.powi(2) / 6.0).log2()) / n as f64;
            assert!((b - expect).abs() < 1e-12);
        }
        let c8 = bernoulli_cn_oracle(8);
        let b = theorem_ml_bound(&ParametricClass::BernoulliFull, 8).unwrap();
        assert!((b - (c8.log2() + 6.0 + (std::f64::consts::PI.powi(2) / 6.0).log2()) / 8.0).abs() < 1e-12);
    }

    #[test]
    fn redundancy_bound_on_small_grid() {
        let pred = build_rho_c(&ParametricClass::BernoulliFull, 8).unwrap();
        for p in [0.0, 0.3, 0.5, 1.0] {
            let mu = Measure::bernoulli(p).unwrap();
            for n in 2..=8 {
                let d = dn_block(&mu, &pred.predictor, n).unwrap().dn / n as f64;
                assert!(d <= ml_bound(pred.log_cn(n).unwrap(), n) + 1e-9);
            }
        }
    }

    #[test]
    fn negative_demo_values() {
        let r = negative_dn_demo().unwrap();
        assert_eq!(r.lambda1, [0.5, 0.5]);
        assert!((r.conditional[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((r.conditional[1] - 2.0 / 3.0).abs() < 1e-15);
        assert!((r.divergence - (0.75f64).log2()).abs() < 1e-12);
        assert!(r.divergence < 0.0);
        assert!(!r.normalized);
        assert!((r.conditional_sum - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn class_file_parsing() {
        let c = ParametricClass::parse("class kind=bernoulli-full\n").unwrap();
        assert!(matches!(c, ParametricClass::BernoulliFull));
        let c = ParametricClass::parse("class kind=markov-full alphabet=2 order=2").unwrap();
        assert!(matches!(c, ParametricClass::MarkovFull { order: 2, .. }));
        let c = ParametricClass::parse("class kind=bernoulli-grid size=21").unwrap();
        assert_eq!(c.members().unwrap().len(), 21);
        let c = ParametricClass::parse("bernoulli p=0.25\nbernoulli p=0.75\n").unwrap();
        assert_eq!(c.members().unwrap().len(), 2);
        assert!(ParametricClass::parse("class kind=finite\n").is_err());
        assert!(ParametricClass::parse("class kind=nonsense").is_err());
        assert!(ParametricClass::parse("class kind=bernoulli-full\nbernoulli p=0.5").is_err());
        assert!(ParametricClass::parse("bernoulli p=2").is_err());
    }

    #[test]
    fn nml_csv_dump() {
        let t = build_nml_table(&ParametricClass::BernoulliFull, 2).unwrap();
        let rows = t.csv_rows("nml").unwrap();
        let fields: Vec<&str> = rows[1].split(',').collect();
        assert_eq!(&fields[..3], &["nml", "01", "2.5000000000000000e-1"]);
        assert!((fields[3].parse::<f64>().unwrap() - 0.1).abs() < 1e-15);
        let cn = cn_csv_rows("cn", &[(1, 1.0)]);
        assert!(cn[0].starts_with("cn,1,1.0000000000000000e0,"));
        let big = build_nml_table(&ParametricClass::BernoulliFull, 11).unwrap();
        assert!(big.csv_rows("nml").is_err());
    }
}
