//! Recovers `D` from nothing but the additive structure of the semigroup of
//! totally positive integers of `Q(sqrt D)`.
//!
//! The semigroup is reached only through [`SemigroupOracle`]. Indecomposable
//! and uniquely decomposable elements are intrinsic, and so is the chain built
//! from them. Its labels repeat the continued fraction period of `sigma`, and
//! the period determines `D`.

pub mod analysis;
pub mod chain;
pub mod error;
pub mod oracle;
pub mod period;

pub use analysis::{companions, find_a, is_indecomposable_abs, is_ud_abs, k_alpha, Analyzer};
pub use chain::{build_chain, ChainBuilder, ChainVertex, LabeledChain, Vertex};
pub use error::{ReconstructError, Result};
pub use oracle::{CountingOracle, DifferenceHandle, OracleCalls, SemigroupOracle, Stream};
pub use period::{period_to_d, recover_period, sigma_period};

/// Chain radius tried first.
const INITIAL_RADIUS: usize = 2;
/// Largest chain radius tried before giving up.
pub const MAX_RADIUS: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconstruction {
    pub d: u64,
    pub period: Vec<u64>,
    /// All chain labels, left to right, with the centre at `center`.
    pub labels: Vec<u64>,
    pub center: usize,
    /// `A`-vertices on each side when recovery succeeded.
    pub radius: usize,
}

/// Builds the chain, growing it until the label period is confirmed and
/// inverts to a field.
pub fn reconstruct<O: SemigroupOracle>(oracle: &mut O) -> Result<Reconstruction> {
    let mut builder = ChainBuilder::new(oracle)?;
    let mut radius = INITIAL_RADIUS;
    loop {
        builder.extend_to(radius)?;
        let chain = builder.chain();
        if !chain.is_palindrome() {
            return Err(ReconstructError::NotPalindrome);
        }
        let attempt = recover_period(&chain.outward_labels())
            .and_then(|period| period_to_d(&period).map(|d| (d, period)));
        match attempt {
            Ok((d, period)) => {
                return Ok(Reconstruction {
                    d,
                    period,
                    labels: chain.labels(),
                    center: chain.center,
                    radius,
                })
            }
            Err(e) if e.is_retriable() && radius < MAX_RADIUS => radius += radius.div_ceil(2),
            Err(e) if e.is_retriable() => {
                return Err(ReconstructError::EscalationExhausted(radius))
            }
            Err(e) => return Err(e),
        }
    }
}
