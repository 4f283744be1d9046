//! Shared parameter alphabets.
//!
//! Every polynomial and rational function carries an `Arc<SymbolTable>`;
//! mixing values from different alphabets is a hard error surfaced by the
//! `checked_*` operations (the plain operators panic, treating it as a
//! programming bug).

use std::sync::Arc;

use crate::error::{Error, Result};

/// An ordered, immutable list of parameter names. The order fixes both the
/// exponent-vector layout of monomials and the canonical printing order.
#[derive(Debug, PartialEq, Eq)]
pub struct SymbolTable {
    names: Vec<String>,
}

fn valid_ident(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl SymbolTable {
    /// Builds a table from names in declaration order. Rejects the reserved
    /// variable `x`, duplicates, and anything that is not an identifier.
    pub fn new<I, S>(names: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, name) in names.iter().enumerate() {
            if !valid_ident(name) {
                return Err(Error::InvalidSymbol {
                    name: name.clone(),
                    msg: "not a valid identifier".into(),
                });
            }
            if name == "x" {
                return Err(Error::InvalidSymbol {
                    name: name.clone(),
                    msg: "`x` is reserved for the independent variable".into(),
                });
            }
            if names[..i].contains(name) {
                return Err(Error::InvalidSymbol {
                    name: name.clone(),
                    msg: "declared twice".into(),
                });
            }
        }
        Ok(Arc::new(SymbolTable { names }))
    }

    /// The empty alphabet (purely rational coefficients).
    pub fn empty() -> Arc<Self> {
        Arc::new(SymbolTable { names: Vec::new() })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    fn describe(&self) -> String {
        self.names.join(", ")
    }
}

/// Verifies two values live over the same alphabet (same names, same order).
pub fn ensure_same(a: &Arc<SymbolTable>, b: &Arc<SymbolTable>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::SymbolTableMismatch {
            left: a.describe(),
            right: b.describe(),
        })
    }
}

/// Panicking twin of [`ensure_same`] for the operator impls.
pub fn assert_same(a: &Arc<SymbolTable>, b: &Arc<SymbolTable>) {
    if let Err(e) = ensure_same(a, b) {
        panic!("{e}");
    }
}
