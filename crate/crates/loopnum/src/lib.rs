//! Numerical cocycles on loop groups of SU(2) and on circle diffeomorphisms.

pub mod checks;
pub mod cocycles;
pub mod diffeo;
pub mod error;
pub mod expr;
pub mod family;
pub mod kac_moody;
pub mod quadrature;
pub mod su2;

pub use error::{LoopError, Result};
pub use family::{Domain, FamilySpec, Jet, MapFamily};
pub use su2::{Quat, Vec3};
