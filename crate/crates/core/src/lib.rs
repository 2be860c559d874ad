//! Exact verification and coding-theoretic analysis of power-Hadamard and
//! Butson-Hadamard matrices.
//!
//! * [`laurent`]: Laurent polynomials over `Q`, cyclotomic polynomials and
//!   cyclotomic integers.
//! * [`ph`]: power-Hadamard matrices `[x^a_ij]` modulo a Laurent polynomial,
//!   their verification and the transforms that preserve the property.
//! * [`bh`]: Butson-Hadamard matrices `[zeta_m^a_ij]`, verified exactly in
//!   `Z[x] / (phi_m)`.
//! * [`gray`]: the two generalized Gray maps on `Z_{p^k}` and their weights.
//! * [`codes`]: codes read off the rows of these matrices, distances and the
//!   Plotkin bound.
//! * [`fixtures`]: the bundled matrix corpus and its JSON schema.

pub mod bh;
pub mod codes;
pub mod fixtures;
pub mod gray;
pub mod laurent;
pub mod ph;

mod report;

pub use report::{Failure, VerificationReport};

/// Serializes any value to JSON with object keys sorted, so equal values
/// always produce identical bytes.
pub fn to_canonical_json<T: serde::Serialize>(value: &T) -> serde_json::Result<String> {
    let v = serde_json::to_value(value)?;
    serde_json::to_string_pretty(&v)
}
