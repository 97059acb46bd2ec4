use crate::seq::{show, Alphabet, Symbol};
use std::fmt;
use std::sync::Arc;

/// The infinite sequence a deterministic measure concentrates on.
#[derive(Clone)]
pub enum Generator {
    /// `s s s ...`
    Constant(Symbol),
    /// `count` copies of `head`, then `tail` forever.
    Run { head: Symbol, count: usize, tail: Symbol },
    /// `pattern` repeated.
    Periodic(Vec<Symbol>),
    /// `prefix` followed by `tail` forever.
    Explicit { prefix: Vec<Symbol>, tail: Symbol },
    /// Arbitrary position -> symbol map (1-based positions). Not serializable.
    Custom(Arc<dyn Fn(usize) -> Symbol + Send + Sync>),
}

impl Generator {
    /// Symbol at 1-based position `t`.
    pub fn at(&self, t: usize) -> Symbol {
        debug_assert!(t >= 1);
        match self {
            Generator::Constant(s) => *s,
            Generator::Run { head, count, tail } => {
                if t <= *count {
                    *head
                } else {
                    *tail
                }
            }
            Generator::Periodic(p) => p[(t - 1) % p.len()],
            Generator::Explicit { prefix, tail } => prefix.get(t - 1).copied().unwrap_or(*tail),
            Generator::Custom(f) => f(t),
        }
    }

    pub(crate) fn max_symbol(&self) -> Option<Symbol> {
        match self {
            Generator::Constant(s) => Some(*s),
            Generator::Run { head, tail, .. } => Some((*head).max(*tail)),
            Generator::Periodic(p) => p.iter().copied().max(),
            Generator::Explicit { prefix, tail } => Some(prefix.iter().copied().max().unwrap_or(0).max(*tail)),
            Generator::Custom(_) => None,
        }
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Constant(s) => write!(f, "Constant({s})"),
            Generator::Run { head, count, tail } => write!(f, "Run({head}x{count}, then {tail})"),
            Generator::Periodic(p) => write!(f, "Periodic({})", show(p)),
            Generator::Explicit { prefix, tail } => write!(f, "Explicit({}, then {tail})", show(prefix)),
            Generator::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Deterministic {
    pub(crate) alphabet: Alphabet,
    pub(crate) generator: Generator,
}

impl Deterministic {
    pub fn generator(&self) -> &Generator {
        &self.generator
    }
}
