//! Certified piecewise-linear approximation of implicit real algebraic curves.
//!
//! The library meshes the zero set of a bivariate integer polynomial inside a
//! dyadic box, producing a straight-line graph that is isotopic to the curve.
//! Isolated singular points are supported: they are first isolated into tiny
//! rectangles by an interval "mountain pass" argument on F = f^2 + fx^2 + fy^2,
//! then the curve's local branching degree is recovered by running the
//! subdivision mesher on a surrounding annulus and counting crossing chains.
//!
//! Everything is computed in exact dyadic (binary rational) arithmetic: box
//! predicates use interval Horner evaluation, so every certificate ("the curve
//! does not meet this box", "the gradient does not vanish here") is a real
//! proof, never a floating-point guess. The only non-certified component is
//! the [`oracle`] module, a deliberately independent sampling reference used
//! by the test suite and the `oracle` CLI mode; the pipeline never calls it.
//!
//! Module map:
//! - [`numeric`]: dyadic numbers, intervals, axis-aligned squares.
//! - [`poly`]: bivariate integer polynomials, exact and interval evaluation,
//!   derivatives, gcd, square-free part.
//! - [`subdivision`]: quadtrees with region/complement/discarded leaf labels,
//!   neighbor queries, balancing.
//! - [`graph`]: straight-line graphs and their topology summaries.
//! - [`pv`]: the interior subdivision mesher (predicates, phases, graph).
//! - [`collar`]: boundary treatment via complementary boxes and gadgets.
//! - [`bounds`]: closed-form lower bounds on critical values and singularity
//!   separations.
//! - [`singular`]: singular point isolation.
//! - [`mesher`]: the end-to-end pipeline.
//! - [`oracle`]: independent sampling references (not certified).
//! - [`report`] and [`cli`]: JSON/SVG serialization and the command line.

pub mod bounds;
pub mod cli;
pub mod collar;
pub mod graph;
pub mod mesher;
pub mod numeric;
pub mod oracle;
pub mod poly;
pub mod pv;
pub mod report;
pub mod singular;
pub mod subdivision;

use numeric::CellCoords;

/// Errors shared by the whole pipeline.
///
/// Subdivision-driven stages convert `MaxDepthExceeded` into exit code 3 at
/// the CLI boundary; input problems (parsing, zero polynomial) map to exit 2.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("maximum subdivision depth {max_depth} exceeded during {stage}")]
    MaxDepthExceeded { stage: &'static str, max_depth: u32 },
    #[error("the zero polynomial does not define a curve")]
    ZeroPolynomial,
    #[error("box {cell:?} carries {count} boundary vertices; only 0, 2 or 4 are possible")]
    CardinalityViolation { cell: CellCoords, count: usize },
    #[error("alternating corner signs on {cell:?}; impossible while the gradient test holds")]
    AlternatingPattern { cell: CellCoords },
    #[error("F has a zero on the region boundary (still undecided at depth {max_depth})")]
    SingularOnBoundary { max_depth: u32 },
    #[error("complementary box of {cell:?} still interferes with the region at the depth cap")]
    CollarInterference { cell: CellCoords },
    #[error("closed loop inside the annulus around ({cx}, {cy})")]
    ClosedLoopInAnnulus { cx: String, cy: String },
    #[error("singularity neighborhoods overlap each other or leave the region")]
    OverlappingSingularityNeighborhoods,
    #[error("total degree {d} is below 2; the critical-value bound needs degree at least 2")]
    DegreeTooSmall { d: u32 },
    #[error("ambiguous sign pattern in sampling cell ({i}, {j}); refine the grid")]
    AmbiguousCell { i: u32, j: u32 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
