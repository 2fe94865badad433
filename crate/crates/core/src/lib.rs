//! Exact Koszul cohomology of Veronese embeddings.
//!
//! The crate computes the groups `K_{p,q}(n, b; d)` of the Veronese embedding
//! of `P^n` by `O(d)`, twisted by `O(b)`, from the Artinian reduction
//! `S/(z_0^d, ..., z_n^d)` of the coordinate ring. Around the engine sit
//! explicit monomial cocycles that certify non-vanishing independently of the
//! field, closed-form predictors for the known vanishing and non-vanishing
//! ranges, and the two-row Boij-Soderberg model with its random-table sampler.
//!
//! Module map:
//!
//! * [`ring`] bounded-exponent monomials and graded bases of the reduced ring.
//! * [`linalg`] exact sparse rank and image membership over `GF(p)` and `Q`.
//! * [`koszul`] Koszul strands, `k_{p,q}`, Betti tables and their checks.
//! * [`certificates`] monomial cocycles and their verification.
//! * [`predictors`] threshold and range formulas, support maps.
//! * [`boij_soderberg`] pure tables, decomposition, synthesis, sampling.
//! * [`acceptance`] the end-to-end acceptance checks, shared by the test
//!   suite and the `selftest` command.
//!
//! With the default `parallel` feature, independent blocks, cells and samples
//! are dispatched through rayon; without it the same loops run sequentially and
//! produce identical results.

pub mod acceptance;
pub mod binom;
pub mod boij_soderberg;
pub mod certificates;
pub mod error;
pub mod koszul;
pub mod linalg;
pub mod par;
pub mod predictors;
pub mod ring;

pub use error::{Error, Result};
pub use koszul::{BettiTable, FieldTag, Method};
pub use linalg::FieldChoice;
pub use ring::{Monomial, RingContext};

/// Bumped whenever a change could alter computed values; keys the result cache.
pub const ENGINE_VERSION: &str = concat!("syzlab-engine-", env!("CARGO_PKG_VERSION"), "-mg1");
