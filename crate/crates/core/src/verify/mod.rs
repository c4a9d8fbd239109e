//! Closed-form oracles and geometric checks on frames and sampled surfaces.

pub mod align;
pub mod frames;
pub mod geometry;
pub mod oracles;
pub mod quadrature;
pub mod random;
pub mod report;

pub use align::{compare_with_alignment, fit_rotation, Comparison, ComparisonPath};
pub use frames::{group_inverse, loop_group_defect, maurer_cartan_grading_defect};
pub use geometry::{
    antipodal_pairs, canonical_lift, conformal_gauss_defect, principal_angle_sine, rp2_pointwise_symmetry,
    sphere_and_conformality_defect, symmetric_rp2_samples, ConformalityDefect, GaussDefect, LiftData, LiftPoint,
};
pub use oracles::{oracle_eval, OracleId, OracleValue};
pub use quadrature::{sphere_energy_and_area, willmore_energy_and_area, CompensatedSum, Integrals, SphereQuadrature};
pub use report::{Check, VerifyReport};
