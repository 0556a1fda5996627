//! Piecewise-linear interval maps of prescribed Sharkovskii type `2^d p` and
//! topological entropy `log(lambda) / 2^d`, with exact certification of their
//! periodic structure, entropy and mixing.

pub mod analysis;
pub mod branch;
pub mod construct;
pub mod document;
pub mod error;
pub mod graph;
pub mod interval;
pub mod plmap;
pub mod poly;
pub mod scalar;
pub mod sharkovskii;

pub use analysis::{estimate_entropy, verify_mixing, verify_type, EntropyEstimate, MixingReport, TypeReport, Verdict};
pub use branch::{lap_growth, periodic_points, Branch, PeriodicPoint};
pub use construct::{build_map, build_typed, orbit_and_t, square_root, stefan_map, ConstructedMap, ConstructionParams, LambdaSpec, TypedMap};
pub use document::MapDocument;
pub use error::{Error, Result};
pub use graph::{build_covering_graph, CoveringGraph, Edge, EdgeKind};
pub use interval::{Interval, NamedInterval};
pub use plmap::PLMap;
pub use poly::{eval_chi, eval_p, lambda_p, IntPolynomial};
pub use scalar::Scalar;
pub use sharkovskii::{expected_period_set, sharkovskii_le, SharkovskiiValue};
