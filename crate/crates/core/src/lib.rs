//! Exact cohomology engine for finite groups with cyclic coefficients.

pub mod brute;
pub mod cochain;
pub mod cohomology;
pub mod error;
pub mod extension;
pub mod extension_data;
pub mod group;
pub mod linalg;
pub mod module;
pub mod seven_term;
pub mod spectral;

pub use cochain::{Cochain, CochainSpace};
pub use cohomology::{cohomology, cohomology_with, CohomologyGroup, CohomologyOptions};
pub use error::{Error, Result};
pub use extension_data::{corpus, ExtensionData};
pub use group::FiniteGroup;
pub use module::CyclicModule;
