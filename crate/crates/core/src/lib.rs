//! Young diagrams, their transition measures, and quantitative bounds for
//! transition measures of diagrams close to a given continual diagram.

pub mod approximation;
pub mod diagrams;
pub mod error;
pub mod experiments;
pub mod growth;
pub mod io;
pub mod metric;
pub mod scalar;
pub mod shift;
pub mod transition;

pub use approximation::{cdf_continual, inner_partition, CdfEstimate};

pub use diagrams::{
    partitions_of, profile_of_partition, staircase, triangle_diagram, AffineLine, Partition,
    PiecewiseLinearDiagram, Zigzag,
};
pub use error::{
    ApproximationError, DiagramError, ExperimentError, MetricError, ShiftError, TransitionError,
};
pub use metric::{distance, distance_components, hausdorff, ProjectionSet};
pub use scalar::{ratio, Rat, Scalar};
pub use shift::{
    lower_bound_cdf, shifted_diagram, steepest_reference, upper_bound_cdf, z_minus_min, z_plus_max,
    BoundReport, ShiftReport, Side,
};
pub use transition::{
    arcsine_cdf, arcsine_density, cauchy_transform, feller_measure, log_cauchy_piecewise,
    stieltjes_density, transition_measure, ArcsineLaw, AtomicMeasure, TransitionLaw,
};
