//! Finite truncations of a binary-subdivision tessellation of the plane and
//! the machinery to measure their Gromov hyperbolicity.
//!
//! * [`graph`] and [`distance`]: immutable weighted graphs and exact
//!   shortest-path distances.
//! * [`generators`]: the half-period, period, tessellation and
//!   triangulation truncations with exact dyadic coordinates.
//! * [`tiles`]: face extraction and per-tile geometry.
//! * [`hyperbolicity`]: Gromov products, fixed-base constants and growth
//!   curves.
//! * [`verification`]: executable checks for every distance estimate of the
//!   construction, with machine-readable reports.

pub mod distance;
pub mod dyadic;
pub mod emit;
pub mod error;
pub mod generators;
pub mod graph;
pub mod hyperbolicity;
pub mod serialize;
pub mod tiles;
pub mod verification;

pub use distance::{ball_subgraph, distance, single_source_distances, DistanceField};
pub use dyadic::Dyadic;
pub use error::{Error, Result};
pub use generators::{build_half_period, build_period, build_tessellation, GenConfig, Mode, Variant};
pub use graph::{EdgeRecord, Graph, VertexId, VertexKind, VertexLabel};
pub use hyperbolicity::{delta_at_base, gromov_product, CurvePoint, DeltaOptions, DeltaReport, Subset};
pub use tiles::{extract_tiles, Tile, TileSet};
pub use verification::LemmaReport;
