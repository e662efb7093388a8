pub mod analysis;
pub mod error;
pub mod hierarchy;
pub mod kernel;
pub mod occurrence;
pub mod search;
pub mod sequences;
pub mod word;

pub use error::{Error, Result};
pub use hierarchy::{AnnotatedTerm, BlockDecomposition};
pub use kernel::{curling_number, CurlingResult, IncrementalCurling, Observation};
pub use word::{FiniteWord, Symbol, Term};

/// Float type used by the growth diagnostics.
pub type Real = f64;
