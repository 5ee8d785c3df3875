//! Exact computations in Jacobian rings of open hypersurface pairs.
//!
//! A pair is a hypersurface `X = {F = 0}` of degree `d` in `P^n` together with
//! the divisor cut out by a degree-`e` hypersurface `Y = {G = 0}`. The crate
//! computes the bigraded quotient pieces `B_q(l)`, their products and duality
//! pairing, checks the numerical criteria built on them, and verifies the
//! Fermat cubic threefold example end to end.

pub mod criteria;
pub mod error;
pub mod fermat;
pub mod field;
pub mod jacring;
pub mod linalg;
pub mod oracles;
pub mod polys;

pub use error::{Error, FieldError, Result};
pub use field::{Field, FieldKind, GaussRat, GaussianRationals, PrimeField, Rationals};
pub use jacring::{Class, GeneratorVariant, PairingReport, QuotientPiece, RingInstance, SliceKey};
pub use polys::{monomial_basis, Monomial, Poly};

/// Version stamp written into cache entries and reports.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
