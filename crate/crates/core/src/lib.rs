//! Volume rigidity of pure simplicial complexes: generic rigidity matrices,
//! exterior shifting, hypergraph sparsity and top-dimensional cycles.

pub mod complex;
pub mod cycles;
pub mod error;
pub mod io;
pub mod linalg;
pub mod rigidity;
pub mod shifting;
pub mod sparsity;
pub mod surfaces;

pub use complex::{Face, SimplicialComplex};
pub use error::{Error, Result};
pub use rigidity::{
    generic_rank, is_volume_rigid, target_rank, Genericity, Placement, RigidityReport,
};
