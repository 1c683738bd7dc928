//! Hermite expansions on ℝⁿ, `(p, L, M)`-atoms for the harmonic oscillator `L = −Δ + |x|²`,
//! heat semigroups and maximal functions, and a driver that checks Hardy-type inequalities
//! for Hermite coefficients numerically.

pub mod atoms;
pub mod error;
pub mod function;
pub mod hermite;
pub mod multiindex;
pub mod poly;
pub mod quadrature;
pub mod semigroup;
pub mod spectral;
pub mod sum;
pub mod verifier;

pub use error::{Error, Result};
