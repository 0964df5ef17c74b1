//! Computing with finite p-algebras (pseudocomplemented bounded distributive
//! lattices).
//!
//! The crate covers the algebra side ([`algebra`], [`morphism`],
//! [`congruence`]), the finite poset duality ([`duality`]), three concrete
//! encodings into powers of the three-element chain ([`encodings`]), and a
//! brute-force first-order checker ([`fo`]). The [`format`] and [`suites`]
//! modules back the `palg` command-line tool.

pub mod algebra;
pub mod congruence;
pub mod duality;
pub mod encodings;
pub mod error;
pub mod fo;
pub mod format;
pub mod morphism;
pub mod poset;
pub mod report;
pub mod suites;

pub use algebra::{FinitePAlgebra, RawAlgebra, Violation};
pub use error::{Error, Result};
pub use morphism::Homomorphism;
pub use poset::FinitePoset;

/// Size caps for the operations whose cost grows quickly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest carrier built explicitly by products, upset algebras and encodings.
    pub max_size: usize,
    /// Largest carrier for which the whole congruence lattice is computed.
    pub max_congruence: usize,
    /// Largest carrier for the subdirect irreducibility test.
    pub max_si_size: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_size: 4096,
            max_congruence: 12,
            max_si_size: 64,
        }
    }
}
