//! Line-oriented text descriptors for measures.
//!
//! One record per line: a family tag followed by `key=value` fields. Reals
//! are written with 17 significant digits so they round-trip exactly.
//!
//! ```text
//! # comment
//! bernoulli p=3.3333333333333331e-1
//! uniform alphabet=2
//! iid probs=2.5e-1,7.5e-1
//! markov alphabet=2 order=1 table=9e-1,1e-1;3e-1,7e-1 initial=7.5e-1,2.5e-1
//! deterministic alphabet=2 constant=0
//! deterministic alphabet=2 head=0 count=3 tail=1
//! deterministic alphabet=2 period=0,1
//! deterministic alphabet=2 prefix=1,1,0 tail=1
//! laplace alphabet=2
//! harmonic shift=1
//! horizon alphabet=2 k=1 pad=0 table=5e-1,5e-1
//! family kind=zeros-then-ones scheme=geometric
//! mixture weights=5e-1,5e-1
//!   bernoulli p=2.5e-1
//!   bernoulli p=7.5e-1
//! ```
//!
//! A `mixture` record is followed by one record per weight (its components).

use super::{FamilyKind, Generator, IidKind, Measure, Mixture};
use crate::error::{Error, Result};
use crate::seq::{Alphabet, Symbol};
use crate::weights::WeightScheme;
use std::fmt::Write;

/// Decimal with 17 significant digits.
pub fn fmt_real(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x:.16e}")
    }
}

fn fmt_list(xs: &[f64]) -> String {
    xs.iter().map(|&x| fmt_real(x)).collect::<Vec<_>>().join(",")
}

fn fmt_symbols(xs: &[Symbol]) -> String {
    xs.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")
}

/// Serialize a measure; mixtures span several lines.
pub fn to_descriptor(measure: &Measure) -> Result<String> {
    let mut out = String::new();
    write_record(measure, 0, &mut out)?;
    Ok(out)
}

fn write_record(measure: &Measure, depth: usize, out: &mut String) -> Result<()> {
    let indent = "  ".repeat(depth);
    let line = match measure {
        Measure::Iid(m) => match m.kind() {
            IidKind::Bernoulli => format!("bernoulli p={}", fmt_real(m.probs()[0])),
            IidKind::Uniform => format!("uniform alphabet={}", m.probs().len()),
            IidKind::General => format!("iid probs={}", fmt_list(m.probs())),
        },
        Measure::Markov(m) => format!(
            "markov alphabet={} order={} table={} initial={}",
            m.alphabet.size(),
            m.order(),
            m.table().iter().map(|r| fmt_list(r)).collect::<Vec<_>>().join(";"),
            fmt_list(m.initial())
        ),
        Measure::Deterministic(d) => {
            let q = d.alphabet.size();
            match d.generator() {
                Generator::Constant(s) => format!("deterministic alphabet={q} constant={s}"),
                Generator::Run { head, count, tail } => {
                    format!("deterministic alphabet={q} head={head} count={count} tail={tail}")
                }
                Generator::Periodic(p) => format!("deterministic alphabet={q} period={}", fmt_symbols(p)),
                Generator::Explicit { prefix, tail } => {
                    format!("deterministic alphabet={q} prefix={} tail={tail}", fmt_symbols(prefix))
                }
                Generator::Custom(_) => {
                    return Err(Error::Unsupported("custom generators have no text descriptor".into()))
                }
            }
        }
        Measure::Laplace(l) => format!("laplace alphabet={}", l.alphabet.size()),
        Measure::Harmonic(h) => format!("harmonic shift={}", h.shift),
        Measure::Horizon(h) => format!(
            "horizon alphabet={} k={} pad={} table={}",
            h.alphabet.size(),
            h.horizon(),
            h.padding(),
            fmt_list(h.table())
        ),
        Measure::Family(f) => {
            let scheme = match f.scheme() {
                WeightScheme::Quadratic => "quadratic",
                WeightScheme::Geometric => "geometric",
                WeightScheme::Explicit(_) => unreachable!("rejected at construction"),
            };
            let kind = match f.kind() {
                FamilyKind::ZerosThenOnes => "zeros-then-ones",
            };
            format!("family kind={kind} scheme={scheme}")
        }
        Measure::Mixture(m) => {
            writeln!(out, "{indent}mixture weights={}", fmt_list(m.weights())).unwrap();
            for c in m.components() {
                write_record(c, depth + 1, out)?;
            }
            return Ok(());
        }
    };
    writeln!(out, "{indent}{line}").unwrap();
    Ok(())
}

/// A tokenized line: tag plus `key=value` fields.
#[derive(Debug, Clone)]
pub struct Record {
    pub line: usize,
    pub tag: String,
    pub fields: Vec<(String, String)>,
}

impl Record {
    pub fn parse_line(line: usize, text: &str) -> Result<Option<Record>> {
        let text = text.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            return Ok(None);
        }
        let mut tokens = text.split_whitespace();
        let tag = tokens.next().unwrap().to_string();
        let fields = tokens
            .map(|t| {
                t.split_once('=')
                    .map(|(k, v)| (k.to_string(), v.to_string()))
                    .ok_or_else(|| Error::Parse { line, message: format!("expected key=value, got {t:?}") })
            })
            .collect::<Result<_>>()?;
        Ok(Some(Record { line, tag, fields }))
    }

    pub fn has(&self, key: &str) -> bool {
        self.fields.iter().any(|(k, _)| k == key)
    }

    pub fn raw(&self, key: &str) -> Result<&str> {
        self.fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| self.err(format!("{} record is missing {key}=", self.tag)))
    }

    pub fn err(&self, message: String) -> Error {
        Error::Parse { line: self.line, message }
    }

    pub fn real(&self, key: &str) -> Result<f64> {
        let v = self.raw(key)?;
        v.parse().map_err(|_| self.err(format!("{key}: bad number {v:?}")))
    }

    pub fn int(&self, key: &str) -> Result<usize> {
        let v = self.raw(key)?;
        v.parse().map_err(|_| self.err(format!("{key}: bad integer {v:?}")))
    }

    pub fn reals(&self, key: &str) -> Result<Vec<f64>> {
        let v = self.raw(key)?;
        v.split(',')
            .map(|s| s.parse().map_err(|_| self.err(format!("{key}: bad number {s:?}"))))
            .collect()
    }

    pub fn ints(&self, key: &str) -> Result<Vec<usize>> {
        let v = self.raw(key)?;
        if v.is_empty() {
            return Ok(vec![]);
        }
        v.split(',')
            .map(|s| s.parse().map_err(|_| self.err(format!("{key}: bad integer {s:?}"))))
            .collect()
    }

    pub fn alphabet(&self) -> Result<Alphabet> {
        Alphabet::new(self.int("alphabet")?).map_err(|e| self.err(e.to_string()))
    }
}

/// Tokenize every non-blank line.
pub fn records(text: &str) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if let Some(r) = Record::parse_line(i + 1, line)? {
            out.push(r);
        }
    }
    Ok(out)
}

/// Parse all top-level measure records in `text`.
pub fn parse_measures(text: &str) -> Result<Vec<Measure>> {
    let recs = records(text)?;
    let mut it = recs.iter();
    let mut out = Vec::new();
    while let Some(r) = it.next() {
        out.push(measure_from(r, &mut it)?);
    }
    Ok(out)
}

/// Parse exactly one measure.
pub fn parse_measure(text: &str) -> Result<Measure> {
    let mut ms = parse_measures(text)?;
    match ms.len() {
        1 => Ok(ms.pop().unwrap()),
        n => Err(Error::Parse { line: 0, message: format!("expected one measure, found {n}") }),
    }
}

/// Build a measure from `head`, pulling component records from `rest` for mixtures.
pub fn measure_from<'a, I>(head: &Record, rest: &mut I) -> Result<Measure>
where
    I: Iterator<Item = &'a Record>,
{
    let wrap = |e: Error| match e {
        Error::Parse { .. } => e,
        other => head.err(other.to_string()),
    };
    let m = match head.tag.as_str() {
        "bernoulli" => Measure::bernoulli(head.real("p")?),
        "uniform" => Ok(Measure::uniform_iid(head.alphabet()?)),
        "iid" => Measure::iid(head.reals("probs")?),
        "markov" => {
            let alphabet = head.alphabet()?;
            let table = head
                .raw("table")?
                .split(';')
                .map(|row| {
                    row.split(',')
                        .map(|s| s.parse().map_err(|_| head.err(format!("table: bad number {s:?}"))))
                        .collect::<Result<Vec<f64>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let order = head.int("order")?;
            if head.has("initial") {
                Measure::markov(alphabet, order, table, head.reals("initial")?)
            } else {
                Measure::stationary_markov(alphabet, order, table)
            }
        }
        "deterministic" => {
            let alphabet = head.alphabet()?;
            let generator = if head.has("constant") {
                Generator::Constant(head.int("constant")?)
            } else if head.has("period") {
                Generator::Periodic(head.ints("period")?)
            } else if head.has("prefix") {
                Generator::Explicit { prefix: head.ints("prefix")?, tail: head.int("tail")? }
            } else if head.has("count") {
                Generator::Run { head: head.int("head")?, count: head.int("count")?, tail: head.int("tail")? }
            } else {
                return Err(head.err("deterministic record needs constant=, period=, prefix= or count=".into()));
            };
            Measure::deterministic(alphabet, generator)
        }
        "laplace" => Ok(Measure::laplace(head.alphabet()?)),
        "harmonic" => {
            let shift = head.int("shift")?;
            let shift = u32::try_from(shift).map_err(|_| head.err("shift too large".into()))?;
            Ok(Measure::harmonic(shift))
        }
        "horizon" => Measure::finite_horizon(head.alphabet()?, head.int("k")?, head.reals("table")?, head.int("pad")?),
        "family" => {
            let kind = match head.raw("kind")? {
                "zeros-then-ones" => FamilyKind::ZerosThenOnes,
                other => return Err(head.err(format!("unknown family kind {other:?}"))),
            };
            let scheme = match head.raw("scheme")? {
                "quadratic" => WeightScheme::Quadratic,
                "geometric" => WeightScheme::Geometric,
                other => return Err(head.err(format!("unknown weight scheme {other:?}"))),
            };
            Measure::family(kind, scheme)
        }
        "mixture" => {
            let weights = head.reals("weights")?;
            let mut comps = Vec::with_capacity(weights.len());
            for i in 0..weights.len() {
                let r = rest
                    .next()
                    .ok_or_else(|| head.err(format!("mixture expects {} components, found {i}", weights.len())))?;
                comps.push(measure_from(r, rest)?);
            }
            Mixture::from_weights(comps, weights).map(Measure::mixture)
        }
        other => return Err(head.err(format!("unknown measure tag {other:?}"))),
    };
    m.map_err(wrap)
}
