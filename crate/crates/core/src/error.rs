use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagramError {
    #[error("partition rows must be positive and weakly decreasing, got {0:?}")]
    InvalidPartition(Vec<usize>),
    #[error("corner sequences must strictly interlace x0 < y1 < x1 < ... < yL < xL")]
    NotInterlacing,
    #[error("{concave} concave corners require {expected} convex corners, got {convex}")]
    CornerCount {
        concave: usize,
        convex: usize,
        expected: usize,
    },
    #[error("zigzag is not centered: sum of concave corners {concave} != sum of convex corners {convex}")]
    NotCentered { concave: String, convex: String },
    #[error("a diagram needs at least one breakpoint")]
    NoBreakpoints,
    #[error("breakpoint abscissae must be strictly increasing (at index {0})")]
    UnorderedBreakpoints(usize),
    #[error("segment {0} has slope outside [-1, 1]")]
    SlopeOutOfRange(usize),
    #[error("breakpoint {0} lies below v = |u|")]
    BelowAbsoluteValue(usize),
    #[error("boundary breakpoint does not meet v = |u|")]
    Boundary,
    #[error("rescale factor must be positive")]
    NonPositiveScale,
    #[error("affine line intercept must be positive")]
    NonPositiveIntercept,
    #[error("diagram is not a zigzag (some slope differs from +-1)")]
    NotZigzag,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransitionError {
    #[error("Cauchy transform evaluated at the pole {0}")]
    Pole(String),
    #[error("evaluation point must be strictly off the real axis")]
    OnRealAxis,
    #[error("Stieltjes smoothing width must be positive")]
    NonPositiveWidth,
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ApproximationError {
    #[error("maximal resolution must be at least 4, got {0}")]
    ResolutionTooSmall(usize),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("projection sets must be nonempty")]
    Empty,
    #[error("projection intervals must be sorted, disjoint and closed")]
    Malformed,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ShiftError {
    #[error("the line does not meet the shifted envelope")]
    NoIntersection,
    #[error("the equation for the extreme root has no solution or an unbounded solution set")]
    NoExtremeRoot,
    #[error("epsilon must be positive")]
    NonPositiveEpsilon,
    #[error("degenerate reference point: omega(z0) = z0")]
    Degenerate,
    #[error("epsilon {epsilon} is smaller than the distance {distance} between the diagrams")]
    OutsideBall { epsilon: f64, distance: f64 },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExperimentError {
    #[error("interval [{0}, {1}] must lie inside (-sqrt 2, sqrt 2)")]
    IntervalOutsideSupport(f64, f64),
    #[error("grid needs at least 100 points, got {0}")]
    GridTooCoarse(usize),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("could not place a starting diagram inside the ball of radius {0}")]
    NoStartingDiagram(f64),
    #[error(transparent)]
    Shift(#[from] ShiftError),
}

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("a diagram file needs exactly one of \"breakpoints\" or \"partition\"")]
    Shape,
    #[error("invalid number list {0:?}")]
    NumberList(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}
