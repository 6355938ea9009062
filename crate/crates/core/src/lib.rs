//! Free cubic implication algebras over finite Boolean algebras.

pub mod boolean;
pub mod counting;
pub mod cubic;
pub mod error;
pub mod export;
pub mod free;
pub mod generation;
pub mod packed;
pub mod signed;
pub mod suite;
pub mod table;

pub use boolean::{AtomSet, BoolAlg, Element, SignVector};
pub use cubic::Interval;
pub use error::{Error, Result};
pub use free::FreeInstance;
pub use table::{CubicTable, TableError};
