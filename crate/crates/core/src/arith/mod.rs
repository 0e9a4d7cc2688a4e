//! Exact arithmetic: fields, polynomials, truncated series, factorization.

pub mod cyclotomic;
pub mod factor;
pub mod field;
pub mod gf;
pub mod poly;
pub mod series;
pub mod zassenhaus;

pub use cyclotomic::Cyclotomic;
pub use field::{Field, Rationals};
pub use gf::Gf;
pub use poly::Poly;
pub use series::TruncatedSeries;
