//! Exact normal forms for iterated free products with central
//! amalgamation, `G = ⋃_n H_0 *_{B_0} H_1 *_{B_1} ... *_{B_{n-1}} H_n`.
//!
//! The crate provides
//!
//! * [`padic`]: exact arithmetic in `Z[1/p]`, the dense computable model of
//!   `Q_p` used by the headline instance;
//! * [`system`] and [`instances`]: the factor-system contract and three
//!   concrete instances (dense p-adic, Heisenberg, finite cyclic);
//! * [`amalgam`] and [`naive`]: canonical normal forms, the level function
//!   and an independent rewriting oracle;
//! * [`hom`]: the homomorphism out of `G` assembled from compatible
//!   factor maps, and its composition with the unipotent embedding;
//! * [`witness`] and [`certificate`]: replayable certificates that conjugates
//!   and iterated commutators escape every stage `G_k`;
//! * [`expr`]: the word-expression language used by the CLI and by
//!   certificates;
//! * [`suites`]: seeded randomized checks shared by the CLI and tests.

pub mod amalgam;
pub mod certificate;
pub mod error;
pub mod expr;
pub mod hom;
pub mod instances;
pub mod naive;
pub mod padic;
pub mod suites;
pub mod system;
pub mod witness;

pub use amalgam::{Amalgam, CanonicalForm, GroupElement, Letter, Syllable, Word};
pub use error::{Error, Result};
pub use system::FactorSystem;
