use serde::Serialize;

use crate::error::{Error, Result};

/// An operation symbol together with its arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct OpSymbol {
    pub name: String,
    pub arity: usize,
}

/// A finite ranked signature: an ordered list of operation symbols with
/// pairwise distinct names. The order is the declaration order and is kept
/// stable so that serialized forms round-trip byte for byte.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Signature {
    symbols: Vec<OpSymbol>,
}

impl Signature {
    pub fn new<N: Into<String>>(symbols: impl IntoIterator<Item = (N, usize)>) -> Result<Self> {
        let symbols: Vec<OpSymbol> = symbols
            .into_iter()
            .map(|(name, arity)| OpSymbol {
                name: name.into(),
                arity,
            })
            .collect();
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].iter().any(|t| t.name == s.name) {
                return Err(Error::DuplicateSymbol(s.name.clone()));
            }
        }
        Ok(Signature { symbols })
    }

    pub fn empty() -> Self {
        Signature {
            symbols: Vec::new(),
        }
    }

    pub fn symbols(&self) -> &[OpSymbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub fn arity_of(&self, name: &str) -> Option<usize> {
        self.index_of(name).map(|i| self.symbols[i].arity)
    }

    /// Resolve a symbol name to its index, checking the argument count.
    pub fn resolve(&self, name: &str, args_given: usize) -> Result<usize> {
        let idx = self
            .index_of(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        let expected = self.symbols[idx].arity;
        if expected != args_given {
            return Err(Error::ArityMismatch {
                symbol: name.to_string(),
                expected,
                got: args_given,
            });
        }
        Ok(idx)
    }

    /// Indices of the symbols with the given arity, in declaration order.
    pub fn of_arity(&self, arity: usize) -> Vec<usize> {
        (0..self.symbols.len())
            .filter(|&i| self.symbols[i].arity == arity)
            .collect()
    }

    /// The largest arity occurring in the signature (0 for an empty one).
    pub fn max_arity(&self) -> usize {
        self.symbols.iter().map(|s| s.arity).max().unwrap_or(0)
    }
}
