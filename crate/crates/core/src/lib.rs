//! Monomial Burnside rings over finite groups, the composition of fibred
//! bisets, and the quotient algebras that index simple fibred biset functors.

pub mod error;
pub mod fibred;
pub mod goursat;
pub mod group;
pub mod hat;
pub mod json;
pub mod verify;

pub use error::{Error, Result};
