//! Mod-2 cohomology of small 2-groups computed degreewise from minimal
//! resolutions, and a degree-bounded check that the essential ideal is free
//! over a polynomial subalgebra restricting to a system of parameters on the
//! largest central elementary abelian subgroup.

pub mod error;
pub mod essential;
pub mod group;
pub mod induced;
pub mod linalg;
pub mod poly;
pub mod report;
pub mod resolution;
pub mod ring;
pub mod verify;

pub use error::{Error, Result};
