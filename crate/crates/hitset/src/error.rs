use thiserror::Error;

/// Errors surfaced by the geometry, tree, and solver layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate rectangle")]
    DegenerateRect,
    #[error("degenerate parallelogram")]
    DegenerateParallelogram,
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("empty point set")]
    EmptyPointSet,
    #[error("duplicate point at indices {0} and {1}")]
    DuplicatePoint(usize, usize),
    #[error("non-finite coordinate")]
    NonFiniteCoordinate,
    #[error("outside root cell")]
    OutsideRootCell,
    #[error("nothing to subdivide")]
    NothingToSubdivide,
    #[error("infeasible object{}", .0.map(|i| format!(" at index {i}")).unwrap_or_default())]
    InfeasibleObject(Option<usize>),
    #[error("optimum size is zero")]
    ZeroOpt,
    #[error("invalid split: {0}")]
    InvalidSplit(String),
    #[error("tree construction failed: {0}")]
    Construction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
