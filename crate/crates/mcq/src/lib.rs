//! Quadratic relations, matrix codes and Pfaffian systems for alternant and
//! Goppa codes, plus the key-recovery pipeline built on them.

pub mod error;
pub mod gf;
pub mod linalg;
pub mod par;
pub mod codes;
pub mod qrel;
pub mod instance;
pub mod pfaffian;
pub mod attack;
pub mod estimate;

pub use error::{Error, Result};
pub use gf::{Elt, FieldCtx, Poly};
pub use linalg::Matrix;
pub use par::Exec;
