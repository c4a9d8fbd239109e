//! The DPW pipeline: integration, factorization, frames and surfaces.

mod birkhoff;
mod integrate;
mod iwasawa;
mod recover;
mod surface;

pub use birkhoff::{birkhoff_split, BirkhoffSplit};
pub use integrate::{integrate_potential, MeromorphicFrame, PolyMatrix, DEFAULT_CAP};
pub use iwasawa::{iwasawa_split, IwasawaSplit};
pub use recover::{recover_normalized_potential, RecoveredPotential};
pub use surface::{
    build_surface, project_to_sphere, BuildOptions, ExtendedFrameGrid, PointFailure, SurfaceGrid,
    ZLattice,
};
