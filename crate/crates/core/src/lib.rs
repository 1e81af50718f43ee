//! One-bend three-dimensional grid drawings of graphs whose vertices sit at
//! fixed points of Z³.
//!
//! * [`geometry`]: exact integer predicates (collinearity, segment
//!   intersection, lattice points on a segment).
//! * [`model`]: graphs, placements, drawings and their JSON files.
//! * [`drawer`]: routes each edge through one bend on a vertical anchor line.
//! * [`verifier`]: independent brute-force validity check.
//! * [`analysis`]: bounding-box volume, the upper bound, and cutwidth-based
//!   lower bounds for collinear placements.
//! * [`cli`]: the `gridbend` command line.

#![forbid(unsafe_code)]

pub mod analysis;
pub mod cli;
pub mod drawer;
pub mod geometry;
pub mod model;
pub mod verifier;

pub use drawer::{draw_graph, DrawOptions, EdgeOrder, ZStart};
pub use geometry::{GridPoint, IntersectionKind, Segment};
pub use model::{Drawing, Edge, Graph, Placement};
pub use verifier::{verify, VerificationReport, Violation};
