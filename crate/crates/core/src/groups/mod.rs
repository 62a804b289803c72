//! Finite-rank torsion-free abelian groups as subgroups of `Q^n`, stored prime by prime.

mod group;
mod local;
mod scheme;

pub use group::{Adjunction, Comparison, DivisibilityEntry, LocalizedGroup};
pub use local::LocalData;
pub use scheme::{Generator, GeneratorScheme};
