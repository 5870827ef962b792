//! Exact computation of algebras of constants of Weitzenböck derivations on
//! polynomial algebras and on relatively free metabelian algebras.

pub mod assoc;
pub mod commutative;
pub mod error;
pub mod graded;
pub mod grassmann;
pub mod linalg;
pub mod lie;
pub mod lincomb;
pub mod poisson;

pub use error::Error;
pub use linalg::{Scalar, SpanCertificate, SparseVector, Verdict};
