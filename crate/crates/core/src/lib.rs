//! Constrained coding around window coverage: compression of tuple-avoiding
//! binary sequences, single-redundancy-bit encoding into sequences that
//! contain every `ell`-tuple as a window, de Bruijn sequence generation, and
//! exact counting oracles with matching closed-form bounds.

pub mod avoid;
pub mod counting;
pub mod covering;
pub mod debruijn;
pub mod error;
pub mod seq;

pub use avoid::AvoiderContext;
pub use counting::{BoundKind, BoundValue, CountResult, RateBounds};
pub use covering::LengthSchedule;
pub use debruijn::CoverageMap;
pub use error::{Error, Result};
pub use seq::{Params, SymbolSeq};
