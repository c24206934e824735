//! Bridgeland stability conditions glued across semiorthogonal decompositions, specialised to
//! Z/2-equivariant derived categories of ramified double covers of curves.

pub mod doublecover;
pub mod error;
pub mod exact;
pub mod glue;
pub mod klattice;
pub mod local_stab;
pub mod par;
pub mod slicing;

pub use error::{Error, Result};
