//! Exact computer algebra for the free half shuffle algebra over a finite
//! alphabet.
//!
//! Elements of the algebra are finite linear combinations of words with exact
//! rational coefficients ([`FreeElement`]). On top of them the crate provides
//! the tensor, shuffle, half shuffle and area products, binary trees and their
//! evaluation under any of those products, Hall sets and the dual PBW basis
//! written as polynomials in Hall integrals, symbolic rewriting into iterated
//! areas, the elimination of the greatest letter, and a floating point path
//! signature module used to cross-check the algebra against integration.

pub mod areas;
pub mod elimination;
mod error;
pub mod hall;
pub mod identities;
pub mod json;
pub mod magma;
mod packed;
pub mod pbw;
pub mod products;
pub mod random;
pub mod rank;
pub mod signature;
pub mod words;

pub use error::{Error, Result};
pub use magma::{Product, Tree};
pub use words::{FreeElement, Letter, Rational, Word};
