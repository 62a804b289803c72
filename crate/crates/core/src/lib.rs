//! Exact computations with finite-rank torsion-free abelian groups living inside
//! rational vector spaces, and the cellular-cover machinery built on top of them.
//!
//! A group is stored by its rational span, the canonical integer lattice of that
//! span, and a finite list of primes where the group differs from that lattice
//! (see [`groups::LocalizedGroup`]). Everything is exact; there is no floating point.

pub mod covers;
pub mod error;
pub mod exactlin;
pub mod format;
pub mod freekernel;
pub mod groups;
pub mod homs;
pub mod oracle;

pub use error::{Error, Result};
pub use exactlin::{Matrix, PrimeSet, Rational, RationalVector};


pub use groups::{Comparison, Generator, GeneratorScheme, LocalData, LocalizedGroup};
pub use homs::HomGroup;
