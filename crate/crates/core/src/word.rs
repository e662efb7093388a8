//! Finite words over small positive integers.
//!
//! Everything in the crate is written against the [`Symbol`] trait so the
//! same code runs on `u8` words (the exhaustive search keeps millions of
//! short words alive) and on the default `u32` [`Term`].

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::Deref;

use num_traits::{PrimInt, Unsigned};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Element type of a word: any unsigned primitive integer.
pub trait Symbol: PrimInt + Unsigned + Hash + Debug + Display + Send + Sync + 'static {
    /// Converts a count (a curling number or a level) into a symbol.
    ///
    /// Panics if the count does not fit; curling values stay tiny for any
    /// prefix that fits in memory, so this only fires on misuse such as
    /// storing a huge level in `u8`.
    fn from_count(k: usize) -> Self {
        Self::from(k).unwrap_or_else(|| panic!("value {k} does not fit in the symbol type"))
    }

    fn as_count(self) -> usize {
        self.to_usize().expect("symbol fits in usize")
    }
}

impl<T> Symbol for T where T: PrimInt + Unsigned + Hash + Debug + Display + Send + Sync + 'static {}

/// Default term width used by the public aliases and the CLI.
pub type Term = u32;

/// A finite word with every term at least 1.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FiniteWord<T> {
    terms: Vec<T>,
}

impl<T: Symbol> FiniteWord<T> {
    pub fn new(terms: Vec<T>) -> Result<Self> {
        if let Some(position) = terms.iter().position(|t| t.is_zero()) {
            return Err(Error::NonPositiveTerm { position: position + 1 });
        }
        Ok(Self { terms })
    }

    pub fn empty() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn as_slice(&self) -> &[T] {
        &self.terms
    }

    pub fn into_vec(self) -> Vec<T> {
        self.terms
    }

    /// 1-based access, matching the external indexing convention.
    pub fn term(&self, position: usize) -> Option<T> {
        position.checked_sub(1).and_then(|i| self.terms.get(i).copied())
    }

    pub fn is_prefix_of(&self, other: &[T]) -> bool {
        other.starts_with(&self.terms)
    }

    pub fn is_suffix_of(&self, other: &[T]) -> bool {
        other.ends_with(&self.terms)
    }
}

impl<T> Deref for FiniteWord<T> {
    type Target = [T];

    fn deref(&self) -> &[T] {
        &self.terms
    }
}

impl<T: Symbol> TryFrom<Vec<T>> for FiniteWord<T> {
    type Error = Error;

    fn try_from(terms: Vec<T>) -> Result<Self> {
        Self::new(terms)
    }
}

impl<T: Debug> Debug for FiniteWord<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.terms).finish()
    }
}

impl<T: Display> Display for FiniteWord<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.terms)
    }
}

pub(crate) fn write_terms<T: Display>(f: &mut impl fmt::Write, terms: &[T]) -> fmt::Result {
    for (i, t) in terms.iter().enumerate() {
        if i > 0 {
            f.write_char(' ')?;
        }
        write!(f, "{t}")?;
    }
    Ok(())
}

/// Converts a word between symbol widths.
pub fn convert<S: Symbol, T: Symbol>(word: &[S]) -> Vec<T> {
    word.iter().map(|&s| T::from_count(s.as_count())).collect()
}
