//! Planar rotation systems, regular hyperbolic tilings, turn-rule walks and
//! embedded trees, and Bernoulli site percolation on the matching graph.

pub mod error;
pub mod chandelier;
pub mod contour;
pub mod critical;
pub mod curvature;
pub mod exact;
pub mod faces;
pub mod graph;
pub mod io;
pub mod matching;
pub mod percolation;
pub mod rng;
pub mod scalar;
pub mod tiling;
pub mod tree;
pub mod walks;

pub use error::{Error, ErrorKind, Result};
pub use faces::{trace_faces, FaceRecord, Faces};
pub use graph::{HalfEdge, RotationGraph, Side, Vertex};
pub use scalar::{PiMultiple, Scalar};
pub use tiling::{build_ball, build_reference_tree, TilingSpec};

/// Small exact rational, used for angles and curvature.
pub type Rational = num_rational::Ratio<i64>;
/// Arbitrary precision rational, used for connection polynomials.
pub type Exact = num_rational::BigRational;
