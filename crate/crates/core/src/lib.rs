//! Entropic additive and multiplicative energy for finitely supported
//! distributions over abelian groups and rings.
//!
//! Probabilities are exact rationals; entropies are reported in bits. On top
//! of the core functionals the crate carries a registry of entropy
//! inequalities that can be evaluated on concrete instances, and a set of
//! exploratory scans around sum-product questions.

pub mod algebra;
pub mod error;

pub use algebra::{Carrier, Dist, Element, GroupSpec, Joint, RingSpec, Word};
pub use error::{Error, Result};
pub mod energy;
pub mod entropy;
pub mod explorer;
pub mod laws;

pub use entropy::{Bits, LogBase, DEFAULT_TOL};
