//! Construction, classification and counting of finite rings of
//! characteristic `p` built from a field, two bimodules and a tuple of
//! structural matrices.

pub mod classify;
pub mod construction_a;
pub mod counting;
pub mod error;
pub mod gf;
pub mod linalg;
pub mod matspace;
pub mod verify;

pub use error::{Error, Result};
