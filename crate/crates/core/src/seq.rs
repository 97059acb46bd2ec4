use crate::error::{Error, Result};
use std::fmt;

/// A symbol is an index `0..|X|`.
pub type Symbol = usize;

/// Enumerations over X^n are refused beyond this many atoms.
pub const ATOM_BUDGET: usize = 1 << 20;

/// Finite alphabet `{0, .., size-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabet(usize);

impl Alphabet {
    pub const BINARY: Alphabet = Alphabet(2);

    pub fn new(size: usize) -> Result<Self> {
        if size < 2 {
            return Err(Error::Domain(format!("alphabet size must be >= 2, got {size}")));
        }
        Ok(Alphabet(size))
    }

    #[inline]
    pub fn size(self) -> usize {
        self.0
    }

    pub fn symbols(self) -> std::ops::Range<Symbol> {
        0..self.0
    }

    /// `|X|^n`, or `None` on overflow.
    pub fn atoms(self, n: usize) -> Option<usize> {
        self.0.checked_pow(u32::try_from(n).ok()?)
    }

    /// `|X|^n` if it fits the enumeration budget.
    pub fn check_budget(self, n: usize) -> Result<usize> {
        match self.atoms(n) {
            Some(a) if a <= ATOM_BUDGET => Ok(a),
            _ => Err(Error::Budget { alphabet: self.0, horizon: n }),
        }
    }

    /// Decode a lexicographic index (first symbol most significant) into a sequence.
    pub fn decode(self, mut index: usize, n: usize) -> Vec<Symbol> {
        let mut out = vec![0; n];
        for slot in out.iter_mut().rev() {
            *slot = index % self.0;
            index /= self.0;
        }
        out
    }

    pub fn encode(self, x: &[Symbol]) -> usize {
        x.iter().fold(0, |acc, &s| acc * self.0 + s)
    }
}

/// A finite sequence `x_{1..n}` over an alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Seq {
    symbols: Vec<Symbol>,
    alphabet: Alphabet,
}

impl Seq {
    pub fn new(symbols: Vec<Symbol>, alphabet: Alphabet) -> Result<Self> {
        if let Some(&bad) = symbols.iter().find(|&&s| s >= alphabet.size()) {
            return Err(Error::Domain(format!(
                "symbol {bad} outside alphabet of size {}",
                alphabet.size()
            )));
        }
        Ok(Seq { symbols, alphabet })
    }

    /// Parse a string of digits such as `"0110"`.
    pub fn parse(s: &str, alphabet: Alphabet) -> Result<Self> {
        let symbols = s
            .chars()
            .map(|c| {
                c.to_digit(36)
                    .map(|d| d as usize)
                    .ok_or_else(|| Error::Domain(format!("bad symbol character {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Seq::new(symbols, alphabet)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

impl fmt::Display for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.symbols {
            if self.alphabet.size() <= 10 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}.")?;
            }
        }
        Ok(())
    }
}

/// Render a raw symbol slice the way `Seq` displays.
pub fn show(x: &[Symbol]) -> String {
    x.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(if x.iter().any(|&s| s > 9) { "." } else { "" })
}
