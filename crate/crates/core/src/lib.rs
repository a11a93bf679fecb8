//! Large-scale geometry of locally finite graphs.
//!
//! The toolkit works at vertex scale: proper geodesic spaces are modelled by
//! locally finite graph oracles with exact integer path metrics, and every
//! large-scale invariant is computed on a declared finite window. Verdicts
//! about infinite behaviour (ends, properness, coarse path components) are
//! window-relative evidence and every report carries the window it was
//! computed on.
//!
//! Modules:
//! - [`space`]: graph oracles, balls, complement components, DOT export.
//! - [`ray`]: sampled discrete rays and ray specs.
//! - [`coarsemaps`]: controlled/proper/close verification on finite traces,
//!   affine bounds, and geodesic interpolation of rays.
//! - [`ends`]: ends profiles, stabilization, and ray end-equivalence.
//! - [`homotopy`]: the triangular-lattice model of coarse 1-paths and its
//!   path algebra.
//! - [`trees`]: unique geodesics, rooted chains, the coarse path component
//!   decision procedure, and explicit homotopy witnesses.
//! - [`cones`]: metric cones over finite complexes and the ends/components
//!   comparison.
//! - [`obstruction`]: the staircase counterexample engine (crossing words,
//!   free reduction, stability, properness refutation).

pub mod coarsemaps;
pub mod cones;
pub mod ends;
pub mod error;
pub mod gen;
pub mod homotopy;
pub mod obstruction;
pub mod ray;
pub mod space;
pub mod trees;

pub use error::{Error, Result};
pub use ray::{parse_ray_spec, RaySpec, VertexRay};
pub use space::{build_space, Space, SpaceKind, SpaceSpec, StepProfile, VertexId};
