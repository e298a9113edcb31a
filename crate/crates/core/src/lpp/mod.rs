//! Exponential last-passage percolation on the strip and related environments.

mod bkr;
mod coupling;
mod decompose;
mod env;
mod field;
mod geometry;
mod passage;
mod region;
mod semi;
mod shape;

pub use env::{site_unit, EnvironmentSpec, SampledEnv, WeightSource};
pub use field::{FieldOrigin, WeightField};
pub use passage::{geodesic, passage_times, paths_ordered, GrowthInterface, LatticePath, PassageField, Source};
pub use region::Region;
pub use bkr::{bkr_probe, disjoint_occurrence, max_path_weight, BkrEstimate, MAX_GRID_SITES};
pub use decompose::{decompose_path, PathClass};
pub use coupling::{check_label_identity, jump_cell, tasep_from_source, tasep_from_weights, weights_from_trajectory, TrajectoryWeights};
pub use geometry::{anti_diagonal, coalescence_check, rectangle, Rect};
pub use shape::{corner_time_samples, homogeneous_corner_time, SHAPE_STREAM};
pub use semi::{busemann, busemann_in, semi_infinite_geodesic, semi_infinite_geodesic_in, SemiInfinite, DEPTH_CAP};

/// Lattice site `(x1, x2)`.
pub type Site = (i64, i64);

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LppError {
    #[error("invalid environment parameters")]
    BadSpec,
    #[error("operation needs a strip environment")]
    NotStrip,
    #[error("site {0:?} is outside the region")]
    OutsideRegion(Site),
    #[error("site {0:?} is unreachable from the source")]
    Unreachable(Site),
    #[error("not a down-right interface starting at the origin")]
    BadInterface,
    #[error("not an up-right lattice path")]
    BadPath,
    #[error("operation needs an interface source")]
    NotInterfaceSource,
    #[error("region too small for the requested time or depth")]
    RegionTooSmall,
    #[error("anti-diagonal index {0} is below the strip width")]
    BelowStripWidth(i64),
    #[error("depth cap {0} reached before certification")]
    DepthCap(i64),
    #[error("grid of {0} sites is too large for path enumeration")]
    GridTooLarge(usize),
    #[error("trajectory does not match the weights")]
    Mismatch,
    #[error(transparent)]
    Tasep(#[from] crate::tasep::TasepError),
}
