//! A desk-scale laboratory for quantum group actions.

pub mod ega;
pub mod error;
pub mod games;
pub mod seed;
pub mod nrprfsg;
pub mod primitives;
pub mod qga;
pub mod simcore;

pub use error::{Error, Result};
