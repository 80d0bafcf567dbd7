//! Exact arithmetic on the additive semigroup of totally positive integers of
//! a real quadratic field `Q(sqrt D)`.
//!
//! The generators are the indecomposables `beta_j`, read off the continued
//! fraction of `sigma`. On top of them sit the canonical two-term form, the
//! presentation relations, the uniquely decomposable elements and their norm
//! bounds, and an opaque-handle oracle for reconstructing `D` from additive
//! structure alone.

pub mod cf;
pub mod error;
pub mod field;
pub mod norms;
pub mod oracle;
pub mod semigroup;
pub mod sweep;
pub mod unique_decomp;

pub use cf::{CfExpansion, Convergent, SurdTail};
pub use error::{Error, Result};
pub use field::{Embedding, FieldContext, OmegaCase, QuadInt};
pub use norms::{BoundReport, LowerCase, UdNormCap};
pub use oracle::{scrambled_oracle, OpaqueHandle, PlainHandle, PlainOracle, ScrambledOracle};
pub use semigroup::{Absorb, BetaCoords, CanonicalForm, Reduction, Relation, RelationStep};
pub use unique_decomp::{Decomposition, UdClass, UdWitness};
