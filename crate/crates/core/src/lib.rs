//! Finite-field polynomial toolkit for building and attacking the Pesto
//! multivariate signature map.

pub mod bench;
pub mod gf;
pub mod groebner;
pub mod hole;
pub mod keyfile;
pub mod mpoly;
pub mod oracle;
pub mod scheme;
pub mod transcript;

pub use gf::{FieldElement, FieldError, FieldMatrix, PrimeField};
pub use mpoly::{AffineMap, Monomial, Polynomial, TermOrder, VarNames};
pub use scheme::{keygen, PestoParams, PublicKey, SchemeError, SecretKey};
