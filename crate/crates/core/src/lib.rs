//! Exact computations around parabolic spectral curves.
//!
//! - [`parabolic`]: partitions, dual partitions, level functions, `Δ_P`.
//! - [`hitchin`]: degrees and dimensions of the parabolic Hitchin base, genus
//!   and BNR degree identities.
//! - [`resolution`]: successive blow-ups of the local spectral equation at a
//!   marked point, with a Newton-polygon cross-check.
//! - [`spectral`]: sampling spectral curves over `GF(q)` on the projective
//!   line, point counting, zeta functions and class numbers.
//! - [`stringy`]: stringy E-polynomials and (twisted) stringy point counts.
//! - [`config`], [`pipeline`]: JSON configuration and the report-producing
//!   drivers used by the `paraspec` binary.

pub mod arith;
pub mod config;
pub mod error;
pub mod hitchin;
pub mod par;
pub mod parabolic;
pub mod pipeline;
pub mod resolution;
pub mod spectral;
pub mod stringy;

pub use error::{Error, Result};
