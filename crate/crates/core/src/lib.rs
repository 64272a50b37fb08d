//! Exact list-decoding verification, random code constructions and
//! constructive pigeonhole attacks near the generalized Singleton bound.
//!
//! The modules build on each other bottom-up: [`model`] holds words, codes
//! and coordinate sets; [`center`] and [`verifier`] decide list
//! decodability exactly; [`constructions`] builds random, expurgated and
//! greedy codes and set families; [`attack`] turns the counting arguments
//! into searches that emit independently checkable certificates.

pub mod attack;
pub mod bounds;
pub mod center;
pub mod cli;
pub mod codefile;
pub mod constructions;
pub mod error;
pub mod fraction;
pub mod model;
pub mod verifier;

pub use error::{Error, Result};
pub use fraction::Fraction;
pub use model::{Code, CoordSet, Symbol, Word};
